//! The curve condition `int_gamma dist(z, E)^(1/(1-p)) ds <= c |z1 - z2|^((p-2)/(p-1))`
//! for `E = C x F`: three-segment paths through porosity holes, their
//! integrals, random sweeps of the ratio, and the porosity-necessity probe.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::interval::{Interval, IntervalSet};
use crate::quadrature::{graded_nodes, GaussRule, QuadratureSpec};
use crate::regression::log_log_slope;

pub type Point = [f64; 2];

fn set_distance(set: &IntervalSet<f64>, w: f64) -> f64 {
    set.distance(w).unwrap_or(f64::INFINITY)
}

/// `E = C x F` through finite-depth approximations of both factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSet {
    pub c: IntervalSet<f64>,
    pub f: IntervalSet<f64>,
}

impl ProductSet {
    pub fn new(c: IntervalSet<f64>, f: IntervalSet<f64>) -> Self {
        Self { c, f }
    }

    pub fn dist_c(&self, x: f64) -> f64 {
        set_distance(&self.c, x)
    }

    pub fn dist_f(&self, y: f64) -> f64 {
        set_distance(&self.f, y)
    }

    /// `dist((x, y), C x F)^2 = dist(x, C)^2 + dist(y, F)^2`.
    pub fn dist(&self, z: Point) -> f64 {
        self.dist_c(z[0]).hypot(self.dist_f(z[1]))
    }

    pub fn contains(&self, z: Point) -> bool {
        self.c.contains(z[0]) && self.f.contains(z[1])
    }

    /// `y` itself when it avoids `F`, otherwise the midpoint of the nearest
    /// gap of `F` (ties go down). `None` when `F` has no gap.
    pub fn nudge_height(&self, y: f64) -> Option<f64> {
        if !self.f.contains(y) {
            return Some(y);
        }
        let parts = self.f.parts();
        let idx = self.f.locate(y)?;
        let part = parts[idx];
        let below = (idx > 0).then(|| 0.5 * (parts[idx - 1].hi + part.lo));
        let above = (idx + 1 < parts.len()).then(|| 0.5 * (part.hi + parts[idx + 1].lo));
        match (below, above) {
            (Some(b), Some(a)) => Some(if y - part.lo <= part.hi - y { b } else { a }),
            (b, a) => b.or(a),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            c: self.c.affine(lambda, 0.0),
            f: self.f.affine(lambda, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An axis-parallel polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPolyline {
    vertices: Vec<Point>,
}

impl PathPolyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("a path needs at least one vertex");
        }
        for w in vertices.windows(2) {
            if w[0][0] != w[1][0] && w[0][1] != w[1][1] {
                return invalid(format!("segment {:?} -> {:?} is not axis-parallel", w[0], w[1]));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    /// Segments with their orientation; degenerate ones count as horizontal.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point, Orientation)> + '_ {
        self.vertices.windows(2).map(|w| {
            let o = if w[0][0] == w[1][0] && w[0][1] != w[1][1] { Orientation::Vertical } else { Orientation::Horizontal };
            (w[0], w[1], o)
        })
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b, _)| (b[0] - a[0]).abs() + (b[1] - a[1]).abs()).sum()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.end() != other.start() {
            return invalid("paths do not join");
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Self::new(vertices)
    }

    /// Evenly spaced points along the path, `per_segment` on each segment.
    pub fn sample(&self, per_segment: usize) -> Vec<Point> {
        let mut out = vec![self.start()];
        for (a, b, _) in self.segments() {
            for k in 1..=per_segment {
                let t = k as f64 / per_segment as f64;
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        out
    }
}

/// A centre `x` within `r` of `x1` with `dist(x, C) >= alpha r`: `x1` itself
/// if possible, else inside the longest bounded gap of `C` that has room,
/// else beside `C`.
pub fn find_hole(c: &IntervalSet<f64>, x1: f64, r: f64, alpha: f64) -> Option<f64> {
    let need = alpha * r;
    if set_distance(c, x1) >= need {
        return Some(x1);
    }
    let ball = Interval { lo: x1 - r, hi: x1 + r };
    let mut best: Option<(f64, f64)> = None;
    for w in c.parts().windows(2) {
        let (g0, g1) = (w[0].hi, w[1].lo);
        let (lo, hi) = ((g0 + need).max(ball.lo), (g1 - need).min(ball.hi));
        if lo <= hi {
            let x = (0.5 * (g0 + g1)).clamp(lo, hi);
            if ball.contains_open(x) && best.is_none_or(|(len, _)| g1 - g0 > len) {
                best = Some((g1 - g0, x));
            }
        }
    }
    if let Some((_, x)) = best {
        return Some(x);
    }
    let hull = c.hull()?;
    let left = (hull.lo - need).min(x1);
    let right = (hull.hi + need).max(x1);
    [left, right]
        .into_iter()
        .filter(|&x| ball.contains_open(x) && set_distance(c, x) >= need)
        .min_by(|a, b| (a - x1).abs().total_cmp(&(b - x1).abs()))
}

/// `(x1, y1) -> (x, y1) -> (x, y2) -> (x2, y2)` with `x` the centre of a hole
/// of radius `alpha |z1 - z2|` in `C` within `|z1 - z2|` of `x1`.
pub fn build_three_segment_path(z1: Point, z2: Point, c: &IntervalSet<f64>, alpha: f64) -> Result<PathPolyline> {
    let r = (z1[0] - z2[0]).hypot(z1[1] - z2[1]);
    if r == 0.0 {
        return PathPolyline::new(vec![z1]);
    }
    let x = find_hole(c, z1[0], r, alpha).ok_or(Error::NoHole { x: z1[0], radius: r })?;
    PathPolyline::new(vec![z1, [x, z1[1]], [x, z2[1]], z2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveIntegral {
    pub value: f64,
    pub divergent: bool,
}

/// `int_a^b (dist(w, S)^2 + d^2)^(gamma/2) dw` along one coordinate.
fn axis_integral(a: f64, b: f64, set: &IntervalSet<f64>, d: f64, gamma: f64, rule: &GaussRule, ratio: f64) -> CurveIntegral {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let zero = CurveIntegral { value: 0.0, divergent: false };
    if b == a || set.is_empty() || d.is_infinite() {
        return zero;
    }
    let h = |t: f64| (t * t + d * d).powf(0.5 * gamma);
    // dist(w, S) = t on [t0, t1], graded toward t = 0
    let ramp = |t0: f64, t1: f64| -> f64 {
        if t1 <= t0 {
            return 0.0;
        }
        let floor = (1e-12 * (t1 - t0)).max(0.05 * d);
        graded_nodes(t0, t1, false, rule, ratio, floor).into_iter().map(|(t, w)| w * h(t)).sum()
    };
    let parts = set.parts();
    let start = parts.partition_point(|p| p.hi < a);
    let mut total = 0.0;
    let mut cursor = a;
    let mut left_end = if start > 0 { parts[start - 1].hi } else { f64::NEG_INFINITY };
    let gap_piece = |u0: f64, u1: f64, e0: f64, e1: f64, total: &mut f64| {
        if u1 <= u0 {
            return;
        }
        let mid = if e0.is_finite() && e1.is_finite() {
            0.5 * (e0 + e1)
        } else if e0.is_finite() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        if u0 < mid {
            *total += ramp(u0 - e0, u1.min(mid) - e0);
        }
        if u1 > mid {
            *total += ramp(e1 - u1, e1 - u0.max(mid));
        }
    };
    for part in &parts[start..] {
        if part.lo > b {
            gap_piece(cursor, b, left_end, part.lo, &mut total);
            return CurveIntegral { value: total, divergent: false };
        }
        let (o0, o1) = (part.lo.max(a), part.hi.min(b));
        gap_piece(cursor, o0, left_end, part.lo, &mut total);
        if o1 > o0 {
            if d == 0.0 {
                return CurveIntegral { value: f64::INFINITY, divergent: true };
            }
            total += (o1 - o0) * d.powf(gamma);
        }
        cursor = cursor.max(o1);
        left_end = part.hi;
    }
    gap_piece(cursor, b, left_end, f64::INFINITY, &mut total);
    CurveIntegral { value: total, divergent: false }
}

/// `int_path dist(z, E)^(1/(1-p)) ds`, segment by segment.
pub fn curve_integral(path: &PathPolyline, e: &ProductSet, p: f64, quad: &QuadratureSpec) -> Result<CurveIntegral> {
    if !(p > 2.0) {
        return Err(Error::Domain(format!("the curve integral needs p > 2, got {p}")));
    }
    let gamma = 1.0 / (1.0 - p);
    let rule = GaussRule::new(quad.panel_order);
    let mut total = CurveIntegral { value: 0.0, divergent: false };
    for (a, b, orientation) in path.segments() {
        let part = match orientation {
            Orientation::Horizontal => axis_integral(a[0], b[0], &e.c, e.dist_f(a[1]), gamma, &rule, quad.grading_ratio),
            Orientation::Vertical => axis_integral(a[1], b[1], &e.f, e.dist_c(a[0]), gamma, &rule, quad.grading_ratio),
        };
        total.value += part.value;
        total.divergent |= part.divergent;
    }
    Ok(total)
}

/// `2 (p-1)/(p-2) sum_i |J_i|^((p-2)/(p-1)) + |C ∩ [a, b]| d^(1/(1-p))` over the
/// components `J_i` of `(a, b) \ C`, bounding the horizontal integral at a
/// height with `dist(y, F) = d`.
pub fn gap_sum_bound(a: f64, b: f64, c: &IntervalSet<f64>, d: f64, p: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let window = Interval { lo: a, hi: b };
    let e = (p - 2.0) / (p - 1.0);
    let gaps: f64 = c.complement_within(&window).parts().iter().map(|j| j.len().powf(e)).sum();
    let on_c = c.clip(&window).total_length();
    let solid = if on_c > 0.0 { on_c * d.powf(1.0 / (1.0 - p)) } else { 0.0 };
    2.0 * (p - 1.0) / (p - 2.0) * gaps + solid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub z1: Point,
    pub z2: Point,
    pub scale: f64,
    pub integral: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSummary {
    pub scale: f64,
    pub max_ratio: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub p: f64,
    pub alpha: f64,
    pub rows: Vec<RatioRow>,
    pub per_scale: Vec<ScaleSummary>,
    /// Slope of `log max_ratio` against `log scale`.
    pub growth_exponent: Option<f64>,
    /// Pairs dropped because no hole was found.
    pub skipped: usize,
}

impl RatioReport {
    pub fn max_ratio(&self) -> f64 {
        self.per_scale.iter().map(|s| s.max_ratio).fold(0.0, f64::max)
    }

    /// Largest over smallest per-scale maximum.
    pub fn spread(&self) -> f64 {
        let min = self.per_scale.iter().map(|s| s.max_ratio).fold(f64::INFINITY, f64::min);
        self.max_ratio() / min
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub p: f64,
    pub alpha: f64,
    pub pairs: usize,
    pub seed: u64,
    pub quad: QuadratureSpec,
}

/// Both ends off `E`, then the three-segment path and its ratio.
pub fn pair_ratio(e: &ProductSet, z1: Point, z2: Point, opts: &SweepOptions) -> Result<RatioRow> {
    let nudge = |z: Point| -> Result<Point> {
        let y = e.nudge_height(z[1]).ok_or_else(|| Error::Domain("F has no gap to move into".into()))?;
        Ok([z[0], y])
    };
    let (z1, z2) = (nudge(z1)?, nudge(z2)?);
    let scale = (z1[0] - z2[0]).hypot(z1[1] - z2[1]);
    let mut alpha = opts.alpha;
    let path = loop {
        match build_three_segment_path(z1, z2, &e.c, alpha) {
            Ok(path) => break path,
            Err(err) if alpha < 1e-3 * opts.alpha => return Err(err),
            Err(_) => alpha *= 0.5,
        }
    };
    let integral = curve_integral(&path, e, opts.p, &opts.quad)?.value;
    let ratio = if scale > 0.0 { integral / scale.powf((opts.p - 2.0) / (opts.p - 1.0)) } else { 0.0 };
    Ok(RatioRow { z1, z2, scale, integral, ratio })
}

/// Random pairs at each nominal distance: `z1` uniform on the hull of `C`
/// times the hull of `F`, `z2` at the given distance in a uniform direction.
pub fn curve_condition_sweep(e: &ProductSet, scales: &[f64], opts: &SweepOptions) -> Result<RatioReport> {
    if !(opts.p > 2.0) {
        return Err(Error::Domain(format!("the curve condition needs p > 2, got {}", opts.p)));
    }
    let (Some(hc), Some(hf)) = (e.c.hull(), e.f.hull()) else {
        return invalid("both factors must be non-empty");
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut jobs = Vec::with_capacity(scales.len() * opts.pairs);
    for (k, &scale) in scales.iter().enumerate() {
        for _ in 0..opts.pairs {
            let z1 = [hc.lo + hc.len() * rng.random::<f64>(), hf.lo + hf.len() * rng.random::<f64>()];
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            let z2 = [z1[0] + scale * theta.cos(), z1[1] + scale * theta.sin()];
            jobs.push((k, z1, z2));
        }
    }
    let results: Vec<(usize, Option<RatioRow>)> = jobs
        .par_iter()
        .map(|&(k, z1, z2)| (k, pair_ratio(e, z1, z2, opts).ok()))
        .collect();
    let mut per_scale: Vec<ScaleSummary> = scales.iter().map(|&scale| ScaleSummary { scale, max_ratio: 0.0, pairs: 0 }).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for (k, row) in results {
        match row {
            Some(row) => {
                per_scale[k].max_ratio = per_scale[k].max_ratio.max(row.ratio);
                per_scale[k].pairs += 1;
                rows.push(row);
            }
            None => skipped += 1,
        }
    }
    let usable: Vec<&ScaleSummary> = per_scale.iter().filter(|s| s.max_ratio > 0.0).collect();
    let growth_exponent = log_log_slope(
        &usable.iter().map(|s| s.scale).collect::<Vec<_>>(),
        &usable.iter().map(|s| s.max_ratio).collect::<Vec<_>>(),
    )
    .ok()
    .map(|fit| fit.slope);
    Ok(RatioReport { p: opts.p, alpha: opts.alpha, rows, per_scale, growth_exponent, skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub d_measured: f64,
    /// `2^(3 - 2p) c^(1-p) r`, what the budget forces.
    pub d_required: f64,
    /// `2 c^(1-p) r`, the value quoted for the same chain.
    pub d_stated: f64,
    pub integral: f64,
    pub within_budget: bool,
    /// Why the pair was not examined, if it was not.
    pub skipped: Option<String>,
}

impl ProbeRow {
    pub fn holds(&self) -> bool {
        self.skipped.is_some() || !self.within_budget || self.d_measured >= self.d_required
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub p: f64,
    pub c_gamma: f64,
    pub alpha: f64,
    /// Points sampled per segment when measuring `d`.
    pub samples: usize,
    pub quad: QuadratureSpec,
}

/// For `x` in `C`, a density point `y` of `F` and `r` below the density
/// scale: join points near `(x -+ r/2, y)` by the three-segment path, and if
/// it meets the budget compare the largest distance to `E` it reaches inside
/// `A = [x - 7r/8, x + 7r/8] x [y - r/2, y + r/2]` with the forced lower bound.
pub fn porosity_necessity_probe(e: &ProductSet, centers: &[f64], density_points: &[f64], scales: &[f64], opts: &ProbeOptions) -> Result<Vec<ProbeRow>> {
    let p = opts.p;
    if !(p > 2.0) || !(opts.c_gamma > 0.0) {
        return Err(Error::Domain("the probe needs p > 2 and c_gamma > 0".into()));
    }
    let eps = 2f64.sqrt() * opts.c_gamma.powf(1.0 - p);
    let exponent = (p - 2.0) / (p - 1.0);
    let mut sorted = scales.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    for &y in density_points {
        // scales (from the bottom up) where H^1(B(y, r) \ F) < eps r
        let dense_up_to = sorted
            .iter()
            .take_while(|&&r| e.f.complement_within(&Interval { lo: y - r, hi: y + r }).total_length() < eps * r)
            .last()
            .copied();
        for &x in centers {
            for &r in scales {
                let mut row = ProbeRow {
                    x,
                    y,
                    r,
                    d_measured: 0.0,
                    d_required: 2f64.powf(3.0 - 2.0 * p) * opts.c_gamma.powf(1.0 - p) * r,
                    d_stated: 2.0 * opts.c_gamma.powf(1.0 - p) * r,
                    integral: 0.0,
                    within_budget: false,
                    skipped: None,
                };
                if dense_up_to.is_none_or(|top| r > top) {
                    row.skipped = Some("not a density scale".into());
                    rows.push(row);
                    continue;
                }
                let Some(y_off) = e.nudge_height(y).filter(|&v| (v - y).abs() < 0.25 * r) else {
                    row.skipped = Some("no gap of F within r/4".into());
                    rows.push(row);
                    continue;
                };
                let z1 = [x - 0.5 * r, y_off];
                let z2 = [x + 0.5 * r, y_off];
                let path = match build_three_segment_path(z1, z2, &e.c, opts.alpha) {
                    Ok(path) => path,
                    Err(_) => {
                        row.skipped = Some("no porosity hole".into());
                        rows.push(row);
                        continue;
                    }
                };
                let integral = curve_integral(&path, e, p, &opts.quad)?;
                row.integral = integral.value;
                row.within_budget = !integral.divergent && integral.value <= opts.c_gamma * r.powf(exponent);
                let in_a = |z: &Point| (z[0] - x).abs() <= 0.875 * r && (z[1] - y).abs() <= 0.5 * r;
                row.d_measured = path.sample(opts.samples).iter().filter(|z| in_a(z)).map(|&z| e.dist(z)).fold(0.0, f64::max);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cantor::ThinCantorSpec;

    fn thirds(depth: u32) -> IntervalSet<f64> {
        ThinCantorSpec::middle_thirds(depth).build().unwrap().to_f64()
    }

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval { lo, hi }
    }

    #[test]
    fn empty_c_keeps_x1() {
        let path = build_three_segment_path([0.3, 0.1], [0.5, 0.2], &IntervalSet::empty(), 0.2).unwrap();
        assert_eq!(path.vertices()[1], [0.3, 0.1]);
    }

    #[test]
    fn middle_gap_is_the_hole() {
        let path = build_three_segment_path([0.0, 0.5], [0.6, 1.3], &thirds(6), 0.1).unwrap();
        assert_eq!(path.vertices()[1][0], 0.5);
        assert_eq!(path.vertices().len(), 4);
    }

    #[test]
    fn coincident_points_give_zero() {
        let e = ProductSet::new(thirds(4), IntervalSet::single(iv(0.0, 1.0)));
        let path = build_three_segment_path([0.2, 0.5], [0.2, 0.5], &e.c, 0.1).unwrap();
        assert_eq!(path.length(), 0.0);
        let v = curve_integral(&path, &e, 3.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn rejects_diagonal_segments() {
        assert!(PathPolyline::new(vec![[0.0, 0.0], [1.0, 1.0]]).is_err());
    }

    #[test]
    fn single_gap_closed_form() {
        let c = IntervalSet::from_sorted(vec![iv(0.0, 0.0), iv(1.0, 1.0)]).unwrap();
        let e = ProductSet::new(c, IntervalSet::single(iv(0.0, 1.0)));
        let p = 4.0;
        let path = PathPolyline::new(vec![[0.0, 0.5], [1.0, 0.5]]).unwrap();
        let v = curve_integral(&path, &e, p, &QuadratureSpec::default()).unwrap();
        let exact = 2.0 * (p - 1.0) / (p - 2.0) * 0.5f64.powf((p - 2.0) / (p - 1.0));
        assert!((v.value - exact).abs() < 1e-8 * exact, "{} vs {exact}", v.value);
    }

    #[test]
    fn far_from_e_is_bounded_by_the_constant() {
        let e = ProductSet::new(IntervalSet::single(iv(0.0, 0.1)), IntervalSet::single(iv(0.0, 0.1)));
        let path = PathPolyline::new(vec![[0.5, 0.5], [0.9, 0.5], [0.9, 0.8]]).unwrap();
        let p = 3.0;
        let v = curve_integral(&path, &e, p, &QuadratureSpec::default()).unwrap().value;
        let d0 = (0.4f64).hypot(0.4);
        assert!(v <= path.length() * d0.powf(1.0 / (1.0 - p)));
    }

    #[test]
    fn running_along_e_diverges() {
        let e = ProductSet::new(IntervalSet::single(iv(0.0, 1.0)), IntervalSet::single(iv(0.0, 1.0)));
        let path = PathPolyline::new(vec![[-0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(curve_integral(&path, &e, 3.0, &QuadratureSpec::default()).unwrap().divergent);
    }

    #[test]
    fn nudge_moves_into_nearest_gap() {
        let f = IntervalSet::from_sorted(vec![iv(0.0, 0.4), iv(0.6, 0.7), iv(0.8, 1.0)]).unwrap();
        let e = ProductSet::new(IntervalSet::empty(), f);
        assert_eq!(e.nudge_height(0.62), Some(0.5));
        assert_eq!(e.nudge_height(0.69), Some(0.75));
        assert_eq!(e.nudge_height(0.1), Some(0.5));
        assert_eq!(e.nudge_height(0.55), Some(0.55));
    }

    #[test]
    fn no_hole_is_an_error() {
        let c = IntervalSet::single(iv(0.0, 1.0));
        let err = build_three_segment_path([0.5, 0.0], [0.5, 0.01], &c, 0.5).unwrap_err();
        assert!(matches!(err, Error::NoHole { .. }));
    }
}
