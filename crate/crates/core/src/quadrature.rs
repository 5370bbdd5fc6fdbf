//! Gauss-Legendre panels and geometrically graded meshes for integrands
//! with a power singularity at one end.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Gauss nodes per panel in the graded direction.
    pub panel_order: usize,
    /// Gauss nodes per smooth piece in the transverse direction.
    pub x_order: usize,
    /// Ratio between consecutive graded panel ends, in (0, 1).
    pub grading_ratio: f64,
    /// The graded mesh stops at this fraction of the finest structural scale
    /// and closes with a single panel down to the singular point.
    pub floor_factor: f64,
    /// Panels per octave band when integrating away from the singularity.
    pub band_panels: usize,
    /// Deepest staircase evaluated directly at large heights; deeper levels
    /// reuse it (the difference is of order `2^-depth`).
    pub max_direct_depth: u32,
    /// Use the exact self-similar rescaling of the strip energy below the
    /// first gap scale.
    pub self_similar: bool,
    /// Repeat with higher orders and report the difference.
    pub estimate_error: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panel_order: 8,
            x_order: 6,
            grading_ratio: 0.5,
            floor_factor: 1e-3,
            band_panels: 6,
            max_direct_depth: 10,
            self_similar: true,
            estimate_error: false,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.panel_order == 0 || self.x_order == 0 || self.band_panels == 0 {
            return invalid("quadrature orders must be positive");
        }
        if self.panel_order > 64 || self.x_order > 64 {
            return invalid("quadrature orders above 64 are not supported");
        }
        if !(self.grading_ratio > 0.0 && self.grading_ratio < 1.0) {
            return invalid("grading ratio must lie in (0, 1)");
        }
        if !(self.floor_factor > 0.0 && self.floor_factor < 1.0) {
            return invalid("floor factor must lie in (0, 1)");
        }
        Ok(())
    }

    /// The same spec with every order raised, used for error estimates.
    pub fn refined(&self) -> Self {
        Self {
            panel_order: self.panel_order + 4,
            x_order: self.x_order + 3,
            band_panels: self.band_panels + self.band_panels / 2,
            grading_ratio: self.grading_ratio.sqrt().max(self.grading_ratio),
            estimate_error: false,
            ..*self
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let order = NonZeroUsize::new(order.max(1)).expect("order is positive");
        let rule = GaussLegendre::new(order);
        let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Panels `[top q^(k+1), top q^k]` down to `floor`, closed by `[0, last]`.
/// Returned from the top down.
pub fn graded_panels(top: f64, ratio: f64, floor: f64) -> Vec<(f64, f64)> {
    assert!(top > 0.0 && ratio > 0.0 && ratio < 1.0 && floor > 0.0);
    let mut panels = Vec::new();
    let mut hi = top;
    while hi > floor {
        let lo = hi * ratio;
        panels.push((lo, hi));
        hi = lo;
    }
    panels.push((0.0, hi));
    panels
}

/// Nodes on `[a, b]` graded toward `a` (or `b` when `toward_hi`), for
/// integrands behaving like a power of the distance to that end.
pub fn graded_nodes(a: f64, b: f64, toward_hi: bool, rule: &GaussRule, ratio: f64, floor: f64) -> Vec<(f64, f64)> {
    let len = b - a;
    if !(len > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (lo, hi) in graded_panels(len, ratio, floor.min(len)) {
        for (t, w) in rule.mapped(lo, hi) {
            out.push((if toward_hi { b - t } else { a + t }, w));
        }
    }
    out
}

/// Nodes on `[a, b]` graded toward both ends.
pub fn doubly_graded_nodes(a: f64, b: f64, rule: &GaussRule, ratio: f64, floor: f64) -> Vec<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let mut out = graded_nodes(a, mid, false, rule, ratio, floor);
    out.extend(graded_nodes(mid, b, true, rule, ratio, floor));
    out
}

/// Equal panels on `[a, b]`.
pub fn uniform_nodes(a: f64, b: f64, panels: usize, rule: &GaussRule) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|i| {
            let lo = a + h * i as f64;
            rule.mapped(lo, lo + h).collect::<Vec<_>>()
        })
        .collect()
}
