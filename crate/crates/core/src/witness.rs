//! The explicit non-removability witness: the sliding average `v` of the
//! staircase over `[x - y, x + y]`, composed with the distance to the fat
//! set, and the Sobolev energy of the composition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::cantor::{FatCantor, FatCantorSpec};
use crate::geometry::estimators::dist_to_set;
use crate::geometry::interval::{Interval, IntervalSet};
use crate::measure::{geometric_scales, StaircaseMeasure};
use crate::params::ParamSet;
use crate::quadrature::{graded_nodes, graded_panels, uniform_nodes, GaussRule, QuadratureSpec};
use crate::regression::log_log_slope;
use crate::scalar::Scalar;

/// `v(x, y) = (1/2y) int_{x-y}^{x+y} f`.
pub fn extension_value(m: &StaircaseMeasure, x: f64, y: f64) -> f64 {
    let a = x - y;
    m.cdf(a) + m.excess_above(a, x + y) / (2.0 * y)
}

/// Closed-form gradient of `v`. Both components are assembled from
/// non-negative local integrals, so they keep full relative accuracy for
/// small `y`.
pub fn extension_gradient(m: &StaircaseMeasure, x: f64, y: f64) -> [f64; 2] {
    let (a, b) = (x - y, x + y);
    let below = m.excess_above(a, b);
    let above = m.deficit_below(a, b);
    let two_y = 2.0 * y;
    [m.mass_between(a, b) / two_y, (above - below) / (two_y * two_y)]
}

fn check_height(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("the extension needs y > 0, got {y}")))
    }
}

#[derive(Debug, Clone)]
pub struct WitnessField {
    measure: StaircaseMeasure,
    fat_spec: FatCantorSpec,
    fat: FatCantor,
    gaps: IntervalSet<f64>,
    fat_base: Interval<f64>,
    params: ParamSet,
    frostman: f64,
}

impl WitnessField {
    /// The Frostman constant is estimated from the measure; see
    /// [`default_frostman`].
    pub fn new(measure: StaircaseMeasure, fat_spec: &FatCantorSpec, params: ParamSet) -> Result<Self> {
        let fat = fat_spec.build()?;
        if fat.gaps.is_empty() {
            return invalid("F must be totally disconnected, but the gap schedule removes nothing");
        }
        let frostman = default_frostman(&measure, params.s);
        let gaps = fat.gaps.to_f64();
        Ok(Self {
            fat_base: fat_spec.base.to_f64(),
            measure,
            fat_spec: fat_spec.clone(),
            fat,
            gaps,
            params,
            frostman,
        })
    }

    pub fn with_frostman(mut self, c_hat: f64) -> Self {
        self.frostman = c_hat;
        self
    }

    pub fn with_params(mut self, params: ParamSet) -> Self {
        self.params = params;
        self
    }

    pub fn measure(&self) -> &StaircaseMeasure {
        &self.measure
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn fat_spec(&self) -> &FatCantorSpec {
        &self.fat_spec
    }

    pub fn fat(&self) -> &FatCantor {
        &self.fat
    }

    pub fn gaps(&self) -> &IntervalSet<f64> {
        &self.gaps
    }

    pub fn frostman(&self) -> f64 {
        self.frostman
    }

    pub fn eval_v(&self, x: f64, y: f64) -> Result<f64> {
        check_height(y)?;
        Ok(extension_value(&self.measure, x, y))
    }

    pub fn grad_v(&self, x: f64, y: f64) -> Result<[f64; 2]> {
        check_height(y)?;
        Ok(extension_gradient(&self.measure, x, y))
    }

    pub fn dist_f(&self, y: f64) -> f64 {
        dist_to_set(y, &self.gaps, &self.fat_base)
    }

    /// `u(x, y) = v(x, dist(y, F))`, and `f(x)` on the lines `y in F`.
    pub fn eval_u(&self, x: f64, y: f64) -> f64 {
        let d = self.dist_f(y);
        if d > 0.0 {
            extension_value(&self.measure, x, d)
        } else {
            self.measure.cdf(x)
        }
    }

    /// Gradient of `u` off the lines `y in F`.
    pub fn grad_u(&self, x: f64, y: f64) -> Option<[f64; 2]> {
        let d = self.dist_f(y);
        if d <= 0.0 {
            return None;
        }
        let [gx, gy] = extension_gradient(&self.measure, x, d);
        // d is 1-Lipschitz with slope +1 just above a lower gap end
        let slope = if self.slope_of_distance(y) >= 0.0 { 1.0 } else { -1.0 };
        Some([gx, gy * slope])
    }

    fn slope_of_distance(&self, y: f64) -> f64 {
        if y <= self.fat_base.lo {
            return -1.0;
        }
        if y >= self.fat_base.hi {
            return 1.0;
        }
        match self.gaps.locate(y) {
            Some(idx) => {
                let g = self.gaps.parts()[idx];
                if y - g.lo <= g.hi - y {
                    1.0
                } else {
                    -1.0
                }
            }
            None => 0.0,
        }
    }

    /// `2^(2 - p/2) c_F r^beta / beta` with `beta = 1 + (s - 1)(p - 1)`.
    pub fn strip_bound(&self, r: f64, p: f64) -> f64 {
        let beta = 1.0 + (self.params.s - 1.0) * (p - 1.0);
        if beta <= 0.0 {
            return f64::INFINITY;
        }
        2f64.powf(2.0 - 0.5 * p) * self.frostman * r.powf(beta) / beta
    }

    /// `c(p, s) c_F |I|^beta` with `c(p, s) = 2^(1 + p/2 - s(p - 1))`.
    pub fn gap_bound(&self, length: f64, p: f64) -> f64 {
        let s = self.params.s;
        let beta = 1.0 + (s - 1.0) * (p - 1.0);
        2f64.powf(1.0 + 0.5 * p - s * (p - 1.0)) * self.frostman * length.powf(beta)
    }

    /// `int_0^r int_{-R}^{R} |grad v|^p` at the field's exponent.
    pub fn strip_energy(&self, r: f64, quad: &QuadratureSpec) -> Result<StripEnergy> {
        Ok(self.strip_energies(r, &[self.params.p], quad)?[0])
    }

    /// Strip energies for several exponents sharing one set of gradient
    /// evaluations.
    pub fn strip_energies(&self, r: f64, ps: &[f64], quad: &QuadratureSpec) -> Result<Vec<StripEnergy>> {
        let mut engine = StripEngine::new(self, ps, quad)?;
        engine.energies(r)
    }

    pub fn strip_engine(&self, ps: &[f64], quad: &QuadratureSpec) -> Result<StripEngine<'_>> {
        StripEngine::new(self, ps, quad)
    }

    pub fn gap_energy(&self, gap: &Interval<f64>, quad: &QuadratureSpec) -> Result<GapEnergy> {
        let strip = self.strip_energy(0.5 * gap.len(), quad)?;
        Ok(GapEnergy::from_strip(self, gap.len(), self.params.p, strip))
    }

    /// `int_{y0}^{y1} int_{window} |grad v|^p dx dy`, graded toward `y0`
    /// when it is zero. No self-similar shortcut: the window is arbitrary.
    pub fn band_energy(&self, window: &Interval<f64>, y0: f64, y1: f64, ps: &[f64], quad: &QuadratureSpec) -> Vec<f64> {
        let rule_y = GaussRule::new(quad.panel_order);
        let rule_x = GaussRule::new(quad.x_order);
        let nodes = if y0 <= 0.0 {
            let floor = quad.floor_factor * self.measure.cylinder_length();
            graded_y_nodes(y1, quad.grading_ratio, floor, &rule_y)
        } else {
            uniform_nodes(y0, y1, quad.band_panels, &rule_y)
        };
        sum_over_heights(&self.measure, &nodes, window, &rule_x, ps)
    }

    /// `int_rect |grad u|^p` for several exponents. Heights inside a gap of
    /// `F` (or outside its base) are mapped to `d = dist(y, F)`; the lines
    /// `y in F` carry `|f'|^p`, which at finite depth is the cylinder slope
    /// to the power `p` on the level-`n` cylinders.
    pub fn energy_in(&self, x_range: &Interval<f64>, y_range: &Interval<f64>, ps: &[f64], quad: &QuadratureSpec) -> Vec<f64> {
        let rule_y = GaussRule::new(quad.panel_order);
        let rule_x = GaussRule::new(quad.x_order);
        let floor = quad.floor_factor * self.measure.cylinder_length();
        let mut total = vec![0.0; ps.len()];
        let mut add = |d0: f64, d1: f64| {
            if d1 > d0 {
                let nodes = graded_nodes(d0, d1, false, &rule_y, quad.grading_ratio, floor);
                let part = sum_over_heights(&self.measure, &nodes, x_range, &rule_x, ps);
                total.iter_mut().zip(part).for_each(|(t, v)| *t += v);
            }
        };
        let (lo, hi) = (self.fat_base.lo, self.fat_base.hi);
        if y_range.lo < lo {
            let top = y_range.hi.min(lo);
            add(lo - top, lo - y_range.lo);
        }
        if y_range.hi > hi {
            let bottom = y_range.lo.max(hi);
            add(bottom - hi, y_range.hi - hi);
        }
        for gap in self.gaps.parts_meeting(y_range) {
            let mid = gap.mid();
            let (z0, z1) = (y_range.lo.max(gap.lo), y_range.hi.min(gap.hi));
            if z0 < mid {
                add(z0 - gap.lo, z1.min(mid) - gap.lo);
            }
            if z1 > mid {
                add(gap.hi - z1, gap.hi - z0.max(mid));
            }
        }
        let in_base = Interval { lo: lo.max(y_range.lo), hi: hi.min(y_range.hi) };
        let f_length = if in_base.lo < in_base.hi {
            in_base.len() - self.gaps.clip(&in_base).total_length()
        } else {
            0.0
        };
        if f_length > 0.0 {
            let on_cylinders = self.measure.cylinders().clip(x_range).total_length();
            let slope = self.measure.cylinder_slope();
            for (t, &p) in total.iter_mut().zip(ps) {
                *t += f_length * on_cylinders * slope.powf(p);
            }
        }
        total
    }

    pub fn total_energy(&self, max_generation: u32, quad: &QuadratureSpec, margin: f64) -> Result<EnergyReport> {
        Ok(self
            .energy_scan(&[self.params.p], max_generation, quad, margin)?
            .remove(0))
    }

    /// Energy reports for several exponents; the quadrature is shared.
    pub fn energy_scan(&self, ps: &[f64], max_generation: u32, quad: &QuadratureSpec, margin: f64) -> Result<Vec<EnergyReport>> {
        let generations = max_generation.min(self.fat_spec.depth);
        if generations == 0 {
            return invalid("need at least one generation of gaps");
        }
        let mut engine = StripEngine::new(self, ps, quad)?;
        let lengths: Vec<f64> = (1..=generations).map(|k| self.fat_spec.gap(k).to_f64()).collect();
        let mut strips = Vec::with_capacity(lengths.len());
        for &len in &lengths {
            strips.push(if len > 0.0 { Some(engine.energies(0.5 * len)?) } else { None });
        }
        let mut reports = Vec::with_capacity(ps.len());
        for (pi, &p) in ps.iter().enumerate() {
            let params = self.params.with_p(p)?;
            let per_length: Vec<Option<GapEnergy>> = strips
                .iter()
                .zip(&lengths)
                .map(|(s, &len)| s.as_ref().map(|s| GapEnergy::from_strip(self, len, p, s[pi])))
                .collect();
            reports.push(EnergyReport::assemble(self, params, &per_length, generations, margin));
        }
        Ok(reports)
    }
}

/// Sup of `mu(B(x, r)) / r^s` over a dyadic grid of radii and 1024 centres
/// plus the structural pairs.
pub fn default_frostman(m: &StaircaseMeasure, s: f64) -> f64 {
    let scales = geometric_scales(m.base_len(), 0.5, 48);
    m.frostman_constant(s, &scales, 1024).c_hat
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripEnergy {
    pub value: f64,
    /// Difference against a refined rerun, when requested.
    pub error_estimate: Option<f64>,
    /// `(s - 1)(p - 1) <= -1`: the limiting integral diverges and `value`
    /// is only the finite-depth number.
    pub divergent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEnergy {
    pub length: f64,
    pub numeric: f64,
    pub bound: f64,
    pub error_estimate: Option<f64>,
    pub divergent: bool,
}

impl GapEnergy {
    fn from_strip(w: &WitnessField, length: f64, p: f64, strip: StripEnergy) -> Self {
        Self {
            length,
            numeric: 2.0 * strip.value,
            bound: w.gap_bound(length, p),
            error_estimate: strip.error_estimate.map(|e| 2.0 * e),
            divergent: strip.divergent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub generation: u32,
    pub gap_id: usize,
    pub gap_length: f64,
    pub numeric_energy: f64,
    pub analytic_bound: f64,
}

impl GapRow {
    pub fn ratio(&self) -> f64 {
        self.numeric_energy / self.analytic_bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub params: ParamSet,
    pub thin_depth: u32,
    pub frostman: f64,
    pub per_gap: Vec<GapRow>,
    /// Total energy of generation `k` at index `k - 1`.
    pub generation_sums: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Geometric mean of the last three generation-sum ratios.
    pub tail_ratio: Option<f64>,
    /// Log-log slope of per-gap energy against gap length from generation
    /// 2 on.
    pub exponent_fit: Option<f64>,
    pub verdict: Verdict,
    pub divergent_flag: bool,
}

impl EnergyReport {
    fn assemble(w: &WitnessField, params: ParamSet, per_length: &[Option<GapEnergy>], generations: u32, margin: f64) -> Self {
        let mut per_gap = Vec::new();
        for (gap_id, (gap, &generation)) in w.fat.gaps.parts().iter().zip(&w.fat.generations).enumerate() {
            if generation > generations {
                continue;
            }
            if let Some(e) = per_length[generation as usize - 1] {
                per_gap.push(GapRow {
                    generation,
                    gap_id,
                    gap_length: gap.len().to_f64(),
                    numeric_energy: e.numeric,
                    analytic_bound: e.bound,
                });
            }
        }
        per_gap.sort_by_key(|r| (r.generation, r.gap_id));

        let generation_sums: Vec<f64> = per_length
            .iter()
            .enumerate()
            .map(|(i, e)| e.map_or(0.0, |e| e.numeric * 2f64.powi(i as i32)))
            .collect();
        let partial_sums: Vec<f64> = generation_sums
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        let divergent_flag = per_length.iter().flatten().any(|e| e.divergent);

        let n = generation_sums.len();
        let tail_ratio = (n >= 4 && generation_sums[n - 4] > 0.0)
            .then(|| (generation_sums[n - 1] / generation_sums[n - 4]).powf(1.0 / 3.0));
        let verdict = if divergent_flag {
            Verdict::Divergent
        } else {
            match tail_ratio {
                Some(r) if r < 1.0 - margin => Verdict::Convergent,
                Some(r) if r > 1.0 + margin => Verdict::Divergent,
                _ => Verdict::Inconclusive,
            }
        };

        let fit_points: Vec<(f64, f64)> = per_length
            .iter()
            .skip(1)
            .flatten()
            .filter(|e| e.numeric > 0.0)
            .map(|e| (e.length, e.numeric))
            .collect();
        let exponent_fit = (fit_points.len() >= 2)
            .then(|| {
                let (xs, ys): (Vec<f64>, Vec<f64>) = fit_points.into_iter().unzip();
                log_log_slope(&xs, &ys).ok().map(|f| f.slope)
            })
            .flatten();

        Self {
            params,
            thin_depth: w.measure.depth(),
            frostman: w.frostman,
            per_gap,
            generation_sums,
            partial_sums,
            tail_ratio,
            exponent_fit,
            verdict,
            divergent_flag,
        }
    }

    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Graded Gauss nodes on `(0, top]`.
fn graded_y_nodes(top: f64, ratio: f64, floor: f64, rule: &GaussRule) -> Vec<(f64, f64)> {
    graded_panels(top, ratio, floor.min(top))
        .into_iter()
        .flat_map(|(a, b)| rule.mapped(a, b).collect::<Vec<_>>())
        .collect()
}

/// `sum_j w_j int_window |grad v(x, y_j)|^p dx` for every `p`.
fn sum_over_heights(m: &StaircaseMeasure, nodes: &[(f64, f64)], window: &Interval<f64>, rule_x: &GaussRule, ps: &[f64]) -> Vec<f64> {
    let slices: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(y, w)| {
            let mut acc = vec![0.0; ps.len()];
            x_slice(m, y, window, rule_x, ps, &mut acc);
            acc.iter_mut().for_each(|a| *a *= w);
            acc
        })
        .collect();
    let mut total = vec![0.0; ps.len()];
    for slice in slices {
        for (t, s) in total.iter_mut().zip(slice) {
            *t += s;
        }
    }
    total
}

const SHORT_PIECE: f64 = 0.02;

fn short_rule() -> &'static GaussRule {
    static RULE: std::sync::OnceLock<GaussRule> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(2))
}

/// Adds `int_window |grad v(x, y)|^p dx` to `acc`. The integrand is smooth
/// between the points `e +- y` for cylinder endpoints `e`, and vanishes on
/// pieces where the window `[x - y, x + y]` carries no mass.
pub(crate) fn x_slice(m: &StaircaseMeasure, y: f64, window: &Interval<f64>, rule: &GaussRule, ps: &[f64], acc: &mut [f64]) {
    let a = window.lo.max(m.base_lo() - y);
    let b = window.hi.min(m.base_hi() + y);
    if !(a < b) {
        return;
    }
    let ends = m.breakpoints();
    let range = |lo: f64, hi: f64| {
        let i = ends.partition_point(|&e| e <= lo);
        let j = ends.partition_point(|&e| e < hi);
        &ends[i..j.max(i)]
    };
    let shifted_down = range(a + y, b + y);
    let shifted_up = range(a - y, b - y);
    let mut cuts = Vec::with_capacity(shifted_down.len() + shifted_up.len() + 2);
    cuts.push(a);
    let (mut i, mut j) = (0, 0);
    while i < shifted_down.len() || j < shifted_up.len() {
        let d = shifted_down.get(i).map_or(f64::INFINITY, |e| e - y);
        let u = shifted_up.get(j).map_or(f64::INFINITY, |e| e + y);
        if d <= u {
            cuts.push(d);
            i += 1;
        } else {
            cuts.push(u);
            j += 1;
        }
    }
    cuts.push(b);
    let short = short_rule();
    for piece in cuts.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        if !(hi > lo) {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        if m.mass_between(mid - y, mid + y) <= 0.0 {
            continue;
        }
        // on a piece |grad v|^2 is a quartic in x; pieces much shorter than
        // y see almost no curvature and two nodes suffice
        let rule = if hi - lo < SHORT_PIECE * y { short } else { rule };
        for (x, w) in rule.mapped(lo, hi) {
            let [gx, gy] = extension_gradient(m, x, y);
            let g = gx.hypot(gy);
            if g > 0.0 {
                let lg = g.ln();
                for (slot, &p) in acc.iter_mut().zip(ps) {
                    *slot += w * (p * lg).exp();
                }
            }
        }
    }
}

/// Strip energies `E_n(r) = int_0^r H_n(y) dy` with
/// `H_n(y) = int_{-R}^{R} |grad v_n(x, y)|^p dx`.
///
/// Below `g = (1 - 2 rho) |base| / 2` no ball sees both first-level children,
/// and the rescaling `v_n(x, y) = v_{n-1}(x', y / rho) / 2` on each child
/// gives the exact relation `H_n(y) = (2 rho)^(1-p) H_{n-1}(y / rho)`, hence
/// `E_n(r) = lambda E_{n-1}(r / rho)` with `lambda = rho (2 rho)^(1-p)`.
/// Unrolling it leaves only bands `[g, g / rho]` at every depth, which carry
/// no singularity. The engine caches those band totals, so reuse it across
/// heights.
pub struct StripEngine<'a> {
    field: &'a WitnessField,
    quad: QuadratureSpec,
    ps: Vec<f64>,
    window: Interval<f64>,
    /// Measures at depths `0..=min(n, max_direct_depth)`.
    levels: Vec<StaircaseMeasure>,
    /// `E_m(g / rho)` per depth `m` and exponent.
    octave_totals: Option<Vec<Vec<f64>>>,
    rule_y: GaussRule,
    rule_x: GaussRule,
    refined: Option<Box<StripEngine<'a>>>,
}

impl<'a> StripEngine<'a> {
    pub fn new(field: &'a WitnessField, ps: &[f64], quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        if ps.is_empty() {
            return invalid("no exponents requested");
        }
        if ps.iter().any(|&p| !(p >= 1.0 && p.is_finite())) {
            return invalid("exponents must be finite and at least 1");
        }
        let m = &field.measure;
        let top = m.depth().min(quad.max_direct_depth).min(m.depth());
        let levels = (0..=top)
            .map(|d| StaircaseMeasure::new(&m.spec().with_depth(d)))
            .collect::<Result<Vec<_>>>()?;
        let radius = field.params.radius;
        Ok(Self {
            field,
            quad: *quad,
            ps: ps.to_vec(),
            window: Interval { lo: -radius, hi: radius },
            levels,
            octave_totals: None,
            rule_y: GaussRule::new(quad.panel_order),
            rule_x: GaussRule::new(quad.x_order),
            refined: None,
        })
    }

    fn level(&self, depth: u32) -> &StaircaseMeasure {
        let idx = (depth as usize).min(self.levels.len() - 1);
        &self.levels[idx]
    }

    fn first_gap_half(&self) -> f64 {
        let m = &self.field.measure;
        0.5 * (1.0 - 2.0 * m.ratio()) * m.base_len()
    }

    fn reduction_applies(&self) -> bool {
        let m = &self.field.measure;
        let top = self.first_gap_half() / m.ratio();
        self.quad.self_similar
            && m.depth() >= 1
            && self.window.lo <= m.base_lo() - top
            && self.window.hi >= m.base_hi() + top
    }

    fn lambda(&self, p: f64) -> f64 {
        let rho = self.field.measure.ratio();
        rho * (2.0 * rho).powf(1.0 - p)
    }

    fn band(&self, depth: u32, y0: f64, y1: f64) -> Vec<f64> {
        let nodes = uniform_nodes(y0, y1, self.quad.band_panels, &self.rule_y);
        sum_over_heights(self.level(depth), &nodes, &self.window, &self.rule_x, &self.ps)
    }

    fn graded_from_zero(&self, m: &StaircaseMeasure, top: f64) -> Vec<f64> {
        let floor = self.quad.floor_factor * m.cylinder_length();
        let nodes = graded_y_nodes(top, self.quad.grading_ratio, floor, &self.rule_y);
        sum_over_heights(m, &nodes, &self.window, &self.rule_x, &self.ps)
    }

    fn ensure_octave_totals(&mut self) {
        if self.octave_totals.is_some() {
            return;
        }
        let g = self.first_gap_half();
        let top = g / self.field.measure.ratio();
        let n = self.field.measure.depth();
        let mut totals = vec![self.graded_from_zero(self.level(0), top)];
        let mut cached_band: Option<Vec<f64>> = None;
        for d in 1..=n {
            let band = if d as usize >= self.levels.len() {
                cached_band
                    .get_or_insert_with(|| self.band(d, g, top))
                    .clone()
            } else {
                self.band(d, g, top)
            };
            let prev = &totals[d as usize - 1];
            let next: Vec<f64> = self
                .ps
                .iter()
                .enumerate()
                .map(|(i, &p)| self.lambda(p) * prev[i] + band[i])
                .collect();
            totals.push(next);
        }
        self.octave_totals = Some(totals);
    }

    fn raw(&mut self, r: f64) -> Vec<f64> {
        let m = &self.field.measure;
        if !self.reduction_applies() {
            return self.graded_from_zero(m, r);
        }
        self.ensure_octave_totals();
        let g = self.first_gap_half();
        let rho = m.ratio();
        let top = g / rho;
        let n = m.depth();
        let totals = self.octave_totals.as_ref().expect("computed above");
        if r > top {
            let extra = self.band(n, top, r);
            return totals[n as usize].iter().zip(extra).map(|(t, e)| t + e).collect();
        }
        let mut rr = r;
        let mut depth = n;
        let mut steps = 0i32;
        while rr <= g && depth >= 1 {
            rr /= rho;
            depth -= 1;
            steps += 1;
        }
        let inner = if depth == 0 {
            self.graded_from_zero(self.level(0), rr)
        } else {
            let partial = self.band(depth, g, rr);
            let prev = &totals[depth as usize - 1];
            self.ps
                .iter()
                .enumerate()
                .map(|(i, &p)| self.lambda(p) * prev[i] + partial[i])
                .collect()
        };
        self.ps
            .iter()
            .zip(inner)
            .map(|(&p, e)| self.lambda(p).powi(steps) * e)
            .collect()
    }

    /// Strip energies at height `r`, one per exponent.
    pub fn energies(&mut self, r: f64) -> Result<Vec<StripEnergy>> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("strip height must be positive, got {r}")));
        }
        let values = self.raw(r);
        let errors = if self.quad.estimate_error {
            if self.refined.is_none() {
                let refined = self.quad.refined();
                self.refined = Some(Box::new(StripEngine::new(self.field, &self.ps, &refined)?));
            }
            let better = self.refined.as_mut().expect("created above").raw(r);
            Some(values.iter().zip(better).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        } else {
            None
        };
        let s = self.field.params.s;
        Ok(self
            .ps
            .iter()
            .enumerate()
            .map(|(i, &p)| StripEnergy {
                value: values[i],
                error_estimate: errors.as_ref().map(|e| e[i]),
                divergent: (s - 1.0) * (p - 1.0) <= -1.0,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cantor::ThinCantorSpec;

    fn field(depth: u32, p: f64) -> WitnessField {
        let spec = ThinCantorSpec::middle_thirds(depth);
        let m = StaircaseMeasure::new(&spec).unwrap();
        let params = ParamSet::new(spec.dimension(), p, 2.0).unwrap();
        WitnessField::new(m, &FatCantorSpec::quarter_powers(6), params).unwrap()
    }

    #[test]
    fn worked_point() {
        let w = field(12, 2.0);
        assert!((w.eval_v(0.0, 1.0 / 3.0).unwrap() - 0.125).abs() < 1e-15);
        let [gx, gy] = w.grad_v(0.0, 1.0 / 3.0).unwrap();
        // 1/3 is not a double; the staircase slope at depth 12 amplifies that by 3^12 / 2^12
        assert!((gx - 0.75).abs() < 1e-13 && (gy - 0.375).abs() < 1e-13, "{gx} {gy}");
        assert!((w.eval_v(0.5, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flat_regions() {
        let w = field(8, 2.0);
        assert!((w.eval_v(0.5, 0.1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(w.grad_v(0.5, 0.1).unwrap(), [0.0, 0.0]);
        assert!(w.eval_v(0.5, 0.0).is_err());
        assert!(w.grad_v(0.5, -1.0).is_err());
    }

    #[test]
    fn witness_on_and_off_f() {
        let w = field(8, 2.0);
        // 0.03 survives the first six generations of gaps
        let y_in_f = 0.03;
        assert_eq!(w.dist_f(y_in_f), 0.0);
        assert_eq!(w.eval_u(0.3, y_in_f), w.measure().cdf(0.3));
        assert!(w.grad_u(0.3, y_in_f).is_none());
        assert!((w.eval_u(0.3, 0.5) - w.eval_v(0.3, 0.125).unwrap()).abs() < 1e-15);
        assert_eq!(w.eval_u(1.5, 0.5), 1.0);
    }

    #[test]
    fn empty_schedule_is_rejected() {
        let spec = ThinCantorSpec::middle_thirds(4);
        let m = StaircaseMeasure::new(&spec).unwrap();
        let params = ParamSet::new(spec.dimension(), 2.0, 2.0).unwrap();
        let mut fat = FatCantorSpec::quarter_powers(3);
        fat.schedule = crate::geometry::cantor::GapSchedule::Explicit(vec![]);
        assert!(matches!(WitnessField::new(m, &fat, params), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn self_similar_reduction_matches_direct_quadrature() {
        let w = field(6, 2.5);
        let fast = QuadratureSpec::default();
        let direct = QuadratureSpec {
            self_similar: false,
            ..Default::default()
        };
        for r in [0.4, 0.1, 0.01, 1e-3] {
            let a = w.strip_energy(r, &fast).unwrap().value;
            let b = w.strip_energy(r, &direct).unwrap().value;
            assert!((a / b - 1.0).abs() < 2e-3, "r = {r}: {a} vs {b}");
        }
    }

    #[test]
    fn divergence_is_flagged() {
        let w = field(4, 9.0);
        let e = w.strip_energy(0.1, &QuadratureSpec::default()).unwrap();
        assert!(e.divergent);
        assert!(!field(4, 2.0).strip_energy(0.1, &QuadratureSpec::default()).unwrap().divergent);
    }
}
