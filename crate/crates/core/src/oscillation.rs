//! Oscillation of traces on the line `y = y0`: small covers of the thin set,
//! the three-segment curve family through `(R \ C) x (R \ F)`, and the
//! telescoped bound of the trace oscillation by the `L^p` norm of the gradient.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::interval::{Interval, IntervalSet};
use crate::quadrature::{uniform_nodes, GaussRule, QuadratureSpec};
use crate::scalar::Scalar;
use crate::witness::WitnessField;

/// Open intervals `J_i` of length `< delta` covering a compact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub delta: f64,
    pub s: f64,
    pub intervals: Vec<Interval<f64>>,
    pub hausdorff_sum: f64,
}

impl Cover {
    /// Largest number of intervals sharing a point.
    pub fn multiplicity(&self) -> usize {
        let mut events: Vec<(f64, i32)> = self
            .intervals
            .iter()
            .flat_map(|j| [(j.lo, 1), (j.hi, -1)])
            .collect();
        // open intervals: a closing end and an opening end at the same
        // coordinate do not overlap
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut depth = 0i32;
        let mut most = 0i32;
        for (_, step) in events {
            depth += step;
            most = most.max(depth);
        }
        most as usize
    }

    /// Whether every point of `set` lies in some open `J_i`.
    pub fn covers(&self, set: &IntervalSet<f64>) -> bool {
        set.parts().iter().all(|part| {
            let mut reach = part.lo;
            let mut started = false;
            for j in &self.intervals {
                if j.lo < reach && j.hi > reach {
                    reach = j.hi;
                    started = true;
                }
                if started && reach > part.hi {
                    return true;
                }
            }
            false
        })
    }

    /// `Q_i = J_i x [y - |J_i|/2, y + |J_i|/2]`.
    pub fn squares(&self, y: f64) -> Vec<Rect> {
        self.intervals
            .iter()
            .map(|j| Rect {
                x: *j,
                y: Interval { lo: y - 0.5 * j.len(), hi: y + 0.5 * j.len() },
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: Interval<f64>,
    pub y: Interval<f64>,
}

/// Groups neighbouring parts of `c` while their hull stays shorter than
/// `delta`, then widens each group into an open interval still shorter than
/// `delta`. Parts longer than `delta / 2` are split first. Fails when
/// `sum |J_i|^s` exceeds twice `budget`.
pub fn build_cover<T: Scalar>(c: &IntervalSet<T>, s: f64, delta: f64, budget: f64) -> Result<Cover> {
    if !(delta > 0.0) || !(s >= 0.0) {
        return invalid("cover needs delta > 0 and s >= 0");
    }
    let mut groups: Vec<Interval<f64>> = Vec::new();
    let mut open_group = false;
    for part in c.to_f64().parts() {
        let len = part.len();
        if len > 0.5 * delta {
            let count = (2.0 * len / delta).ceil() as usize;
            let h = len / count as f64;
            for k in 0..count {
                let lo = part.lo + h * k as f64;
                let hi = if k + 1 == count { part.hi } else { part.lo + h * (k + 1) as f64 };
                groups.push(Interval { lo, hi });
            }
            open_group = false;
            continue;
        }
        match groups.last_mut() {
            Some(g) if open_group && part.hi - g.lo < delta => g.hi = part.hi,
            _ => {
                groups.push(*part);
                open_group = true;
            }
        }
    }
    let n = groups.len();
    let mut intervals = Vec::with_capacity(n);
    for (i, g) in groups.iter().enumerate() {
        let mut pad = 0.25 * (delta - g.len());
        // a third of the gap to a neighbour, or of the neighbour itself when
        // they touch; then no point sees three intervals
        let mut room = |neighbour: &Interval<f64>, gap: f64| {
            pad = pad.min(if gap > 0.0 { gap } else { neighbour.len() } / 3.0);
        };
        if i > 0 {
            room(&groups[i - 1], g.lo - groups[i - 1].hi);
        }
        if i + 1 < n {
            room(&groups[i + 1], groups[i + 1].lo - g.hi);
        }
        intervals.push(Interval { lo: g.lo - pad, hi: g.hi + pad });
    }
    let hausdorff_sum = intervals.iter().map(|j| j.len().powf(s)).sum();
    if hausdorff_sum > 2.0 * budget {
        return Err(Error::BudgetExceeded { sum: hausdorff_sum, budget });
    }
    Ok(Cover { delta, s, intervals, hausdorff_sum })
}

/// Generalised inverse of `t -> H^1(K ∩ (-inf, y]) / H^1(K)`.
#[derive(Debug, Clone)]
pub struct HeightMap {
    parts: Vec<Interval<f64>>,
    cumulative: Vec<f64>,
    total: f64,
}

impl HeightMap {
    pub fn new(k: &IntervalSet<f64>) -> Result<Self> {
        let parts: Vec<Interval<f64>> = k.parts().iter().copied().filter(|p| p.len() > 0.0).collect();
        let mut cumulative = Vec::with_capacity(parts.len());
        let mut total = 0.0;
        for p in &parts {
            cumulative.push(total);
            total += p.len();
        }
        if !(total > 0.0) {
            return Err(Error::Domain("the set of admissible heights has zero length".into()));
        }
        Ok(Self { parts, cumulative, total })
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `t = 0` gives `inf K`, `t = 1` gives `sup K`.
    pub fn height(&self, t: f64) -> f64 {
        let target = t.clamp(0.0, 1.0) * self.total;
        let idx = self.cumulative.partition_point(|&c| c < target).max(1) - 1;
        let part = self.parts[idx];
        (part.lo + (target - self.cumulative[idx])).min(part.hi)
    }
}

pub fn height_map(k: &IntervalSet<f64>, t: f64) -> Result<f64> {
    Ok(HeightMap::new(k)?.height(t))
}

/// Curves `gamma_t` from `(x1(t), y)` up or down to `y(t)`, across to
/// `x2(t)`, and back to `y`, with `x1` sweeping `J`, `x2` sweeping `I` and
/// `y(t)` pushing Lebesgue measure on `[0, 1]` to normalised length on `K`.
#[derive(Debug, Clone)]
pub struct CurveFamily {
    pub j: Interval<f64>,
    pub i: Interval<f64>,
    pub y: f64,
    pub k: IntervalSet<f64>,
    heights: HeightMap,
}

impl CurveFamily {
    /// `K = B(y, |I|) \ F`; needs `I ⊆ J` and `|J| = 2|I|`.
    pub fn new(j: Interval<f64>, i: Interval<f64>, y: f64, f_retained: &IntervalSet<f64>) -> Result<Self> {
        let tol = 1e-12 * j.len().max(f64::MIN_POSITIVE);
        if i.lo < j.lo - tol || i.hi > j.hi + tol || (j.len() - 2.0 * i.len()).abs() > tol {
            return invalid(format!("{i} must be a half-length subinterval of {j}"));
        }
        let ball = Interval { lo: y - i.len(), hi: y + i.len() };
        let k = f_retained.complement_within(&ball);
        let heights = HeightMap::new(&k)?;
        Ok(Self { j, i, y, k, heights })
    }

    pub fn k_length(&self) -> f64 {
        self.heights.total()
    }

    pub fn x1(&self, t: f64) -> f64 {
        self.j.lo + t * self.j.len()
    }

    pub fn x2(&self, t: f64) -> f64 {
        self.i.lo + t * self.i.len()
    }

    pub fn height(&self, t: f64) -> f64 {
        self.heights.height(t)
    }

    /// The four vertices of `gamma_t`.
    pub fn sample_curve(&self, t: f64) -> [[f64; 2]; 4] {
        let (x1, x2, yt) = (self.x1(t), self.x2(t), self.height(t));
        [[x1, self.y], [x1, yt], [x2, yt], [x2, self.y]]
    }

    /// Whether `gamma_t` meets `C x F`: the vertical legs start on `y in F`,
    /// the horizontal leg runs at height `y(t)`.
    pub fn meets(&self, t: f64, c: &IntervalSet<f64>, f_retained: &IntervalSet<f64>) -> bool {
        let (x1, x2, yt) = (self.x1(t), self.x2(t), self.height(t));
        let legs = |x: f64| {
            c.contains(x) && {
                let span = Interval { lo: yt.min(self.y), hi: yt.max(self.y) };
                !f_retained.parts_meeting(&span).is_empty()
            }
        };
        let across = f_retained.contains(yt) && !c.parts_meeting(&Interval { lo: x1.min(x2), hi: x1.max(x2) }).is_empty();
        legs(x1) || legs(x2) || across
    }

    /// Fraction of `t` on a uniform grid whose curve meets `C x F`.
    pub fn intersection_fraction(&self, c: &IntervalSet<f64>, f_retained: &IntervalSet<f64>, samples: usize) -> f64 {
        let hits = (0..samples)
            .filter(|&k| self.meets((k as f64 + 0.5) / samples as f64, c, f_retained))
            .count();
        hits as f64 / samples as f64
    }
}

/// A function on the plane whose trace on a horizontal line is examined.
pub trait ScalarField: Sync {
    fn value(&self, x: f64, y: f64) -> f64;

    /// `grad u`, or its one-sided value where `u` has a kink.
    fn gradient(&self, x: f64, y: f64) -> [f64; 2];

    /// `int_{x_range x y_range} |grad u|^p`.
    fn energy(&self, x_range: &Interval<f64>, y_range: &Interval<f64>, p: f64, quad: &QuadratureSpec) -> f64;

    /// Mean of `u(., y)` over `[a, b]`.
    fn trace_average(&self, a: f64, b: f64, y: f64) -> f64 {
        let rule = GaussRule::new(8);
        let sum: f64 = uniform_nodes(a, b, 64, &rule).into_iter().map(|(x, w)| w * self.value(x, y)).sum();
        sum / (b - a)
    }

    /// Points of `[a, b]` where `u(., y)` may peak, sampled besides the grid.
    fn trace_breakpoints(&self, _a: f64, _b: f64, _y: f64) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ScalarField for LinearField {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.a * x + self.b * y + self.c
    }

    fn gradient(&self, _x: f64, _y: f64) -> [f64; 2] {
        [self.a, self.b]
    }

    fn energy(&self, x_range: &Interval<f64>, y_range: &Interval<f64>, p: f64, _quad: &QuadratureSpec) -> f64 {
        self.a.hypot(self.b).powf(p) * x_range.len() * y_range.len()
    }

    fn trace_average(&self, a: f64, b: f64, y: f64) -> f64 {
        self.value(0.5 * (a + b), y)
    }
}

/// A smooth field given by closures; energies use tensor Gauss panels.
pub struct SmoothField<U, G> {
    pub u: U,
    pub grad: G,
    pub panels: usize,
}

impl<U, G> SmoothField<U, G>
where
    U: Fn(f64, f64) -> f64 + Sync,
    G: Fn(f64, f64) -> [f64; 2] + Sync,
{
    pub fn new(u: U, grad: G) -> Self {
        Self { u, grad, panels: 8 }
    }
}

impl<U, G> ScalarField for SmoothField<U, G>
where
    U: Fn(f64, f64) -> f64 + Sync,
    G: Fn(f64, f64) -> [f64; 2] + Sync,
{
    fn value(&self, x: f64, y: f64) -> f64 {
        (self.u)(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        (self.grad)(x, y)
    }

    fn energy(&self, x_range: &Interval<f64>, y_range: &Interval<f64>, p: f64, quad: &QuadratureSpec) -> f64 {
        let rule = GaussRule::new(quad.panel_order);
        let xs = uniform_nodes(x_range.lo, x_range.hi, self.panels, &rule);
        let ys = uniform_nodes(y_range.lo, y_range.hi, self.panels, &rule);
        let mut total = 0.0;
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                let [gx, gy] = (self.grad)(x, y);
                total += wx * wy * gx.hypot(gy).powf(p);
            }
        }
        total
    }
}

impl ScalarField for WitnessField {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.eval_u(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        self.grad_u(x, y).unwrap_or_else(|| {
            let m = self.measure();
            let on_cylinder = m.cylinders().contains(x);
            [if on_cylinder { m.cylinder_slope() } else { 0.0 }, 0.0]
        })
    }

    fn energy(&self, x_range: &Interval<f64>, y_range: &Interval<f64>, p: f64, quad: &QuadratureSpec) -> f64 {
        self.energy_in(x_range, y_range, &[p], quad)[0]
    }

    fn trace_average(&self, a: f64, b: f64, y: f64) -> f64 {
        if self.dist_f(y) > 0.0 {
            let rule = GaussRule::new(8);
            let sum: f64 = uniform_nodes(a, b, 64, &rule).into_iter().map(|(x, w)| w * self.eval_u(x, y)).sum();
            return sum / (b - a);
        }
        self.measure().integral(a, b) / (b - a)
    }

    fn trace_breakpoints(&self, a: f64, b: f64, _y: f64) -> Vec<f64> {
        let window = Interval { lo: a, hi: b };
        self.measure()
            .cylinders()
            .parts_meeting(&window)
            .iter()
            .flat_map(|c| [c.lo, c.hi])
            .filter(|&x| x >= a && x <= b)
            .collect()
    }
}

/// How `H^1(K)` enters the horizontal term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityBound {
    /// The exact length of `B(y, |I|) \ F`.
    Measured,
    /// The lower density bound `H^1(K) >= c_y |I|^alpha`.
    Uniform { c_y: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageDifference {
    pub lhs: f64,
    pub rhs: f64,
    pub vertical: f64,
    pub horizontal: f64,
    pub norm: f64,
    pub k_length: f64,
}

/// Terms of the one-scale bound
/// `|avg_I f - avg_J f| <= [(1 + 2^(1/p)) |J|^(2/q - 1) + |J|^(1/q) H^1(K)^(-1/p)] N`,
/// given `N = ||grad u||_{L^p}` on a region containing `J x B(y, |I|)`.
fn one_scale_factor(j_len: f64, k_len: f64, p: f64) -> (f64, f64) {
    let q = p / (p - 1.0);
    let vertical = (1.0 + 2f64.powf(1.0 / p)) * j_len.powf(2.0 / q - 1.0);
    let horizontal = j_len.powf(1.0 / q) * k_len.powf(-1.0 / p);
    (vertical, horizontal)
}

fn density_length(density: DensityBound, family_k: f64, i_len: f64) -> f64 {
    match density {
        DensityBound::Measured => family_k,
        DensityBound::Uniform { c_y, alpha } => c_y * i_len.powf(alpha),
    }
}

/// Both sides of the one-scale estimate for `family`, with the norm taken
/// over `region` (`J x B(y, |I|)` when `None`).
pub fn average_difference_bound(
    u: &dyn ScalarField,
    family: &CurveFamily,
    p: f64,
    density: DensityBound,
    region: Option<Rect>,
    quad: &QuadratureSpec,
) -> Result<AverageDifference> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("p = {p} must exceed 1")));
    }
    let region = region.unwrap_or(Rect {
        x: family.j,
        y: Interval { lo: family.y - family.i.len(), hi: family.y + family.i.len() },
    });
    let avg_i = u.trace_average(family.i.lo, family.i.hi, family.y);
    let avg_j = u.trace_average(family.j.lo, family.j.hi, family.y);
    let norm = u.energy(&region.x, &region.y, p, quad).powf(1.0 / p);
    let k_length = density_length(density, family.k_length(), family.i.len());
    let (v, h) = one_scale_factor(family.j.len(), k_length, p);
    Ok(AverageDifference {
        lhs: (avg_i - avg_j).abs(),
        rhs: (v + h) * norm,
        vertical: v * norm,
        horizontal: h * norm,
        norm,
        k_length,
    })
}

/// `I_1 = J`, `I_(k+1) ⊆ I_k` of half the length with `z ∈ I_(k+1)`.
pub fn dyadic_chain(j: Interval<f64>, z: f64, steps: usize) -> Vec<Interval<f64>> {
    let mut chain = Vec::with_capacity(steps);
    let mut current = j;
    chain.push(current);
    for _ in 1..steps {
        let h = 0.5 * current.len();
        let lo = z - 0.5 * h;
        current = if lo <= current.lo {
            Interval { lo: current.lo, hi: current.lo + h }
        } else if lo + h >= current.hi {
            Interval { lo: current.hi - h, hi: current.hi }
        } else {
            Interval { lo, hi: lo + h }
        };
        chain.push(current);
    }
    chain
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationOptions {
    pub p: f64,
    pub density: DensityBound,
    /// Grid points per interval when sampling the trace.
    pub samples: usize,
    /// Longest dyadic chain followed.
    pub max_chain: usize,
    pub quad: QuadratureSpec,
}

impl OscillationOptions {
    pub fn new(p: f64) -> Self {
        Self {
            p,
            density: DensityBound::Measured,
            samples: 4096,
            max_chain: 2000,
            quad: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationRow {
    pub interval: Interval<f64>,
    pub osc: f64,
    pub rhs: f64,
    pub norm: f64,
    /// `rhs / (|J_i|^(s/q) N_i)`.
    pub constant: f64,
    pub chain_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub delta: f64,
    pub y: f64,
    pub p: f64,
    pub rows: Vec<OscillationRow>,
    pub sum_osc: f64,
    /// `(sum |J_i|^s)^(1/q) (sum rhs_i^p / |J_i|^(sp/q))^(1/p)`, which bounds `sum osc_i`.
    pub holder_bound: f64,
    /// `(2 budget)^(1/q) max_i C_i (sum N_i^p)^(1/p)`.
    pub uniform_bound: f64,
}

impl OscillationReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.osc <= r.rhs) && self.sum_osc <= self.holder_bound
    }
}

/// Telescoped bound on `|f(z) - avg_J f|` along the dyadic chain at `z`,
/// each link using the norm `norm` and `H^1(B(y, |I_(k+1)|) \ F)`. Once the
/// radius is tiny and `K` has settled into a power law in the radius, the
/// rest of the series is summed as a geometric tail.
fn chain_bound(j: Interval<f64>, z: f64, y: f64, norm: f64, f_retained: &IntervalSet<f64>, opts: &OscillationOptions) -> Result<(f64, usize)> {
    let p = opts.p;
    let q = p / (p - 1.0);
    let alpha = match opts.density {
        DensityBound::Measured => 1.0,
        DensityBound::Uniform { alpha, .. } => alpha,
    };
    let decay = 2f64.powf(-(1.0 - 2.0 / p).min(1.0 / q - alpha / p));
    let mut total = 0.0;
    let mut current = j;
    for step in 1..=opts.max_chain {
        let h = 0.5 * current.len();
        let lo = (z - 0.5 * h).clamp(current.lo, current.hi - h);
        let next = Interval { lo, hi: lo + h };
        let ball = Interval { lo: y - h, hi: y + h };
        let measured = f_retained.complement_within(&ball).total_length();
        let k = density_length(opts.density, measured, h);
        if !(k > 0.0) {
            return Err(Error::Domain(format!("B({y}, {h}) lies inside F")));
        }
        let (v, hz) = one_scale_factor(current.len(), k, p);
        let term = (v + hz) * norm;
        total += term;
        current = next;
        let settled = match opts.density {
            DensityBound::Measured => measured >= (1.0 - 1e-9) * h,
            DensityBound::Uniform { .. } => true,
        };
        if term <= 1e-14 * total || (settled && h < 1e-9 * j.len()) {
            return Ok((total + term * decay / (1.0 - decay), step));
        }
        if h < 1e-6 * f64::EPSILON * y.abs().max(1.0) {
            return Err(Error::Domain(format!("no settled density at {y}")));
        }
    }
    Ok((total, opts.max_chain))
}

/// For every `J_i` of `cover`, the oscillation of `u(., y)` on `J_i`
/// against the telescoped bound, plus the Hölder-aggregated total. `y` must
/// lie in `F`; `p` must exceed 2 for the chains to converge.
pub fn oscillation_check(
    u: &dyn ScalarField,
    cover: &Cover,
    y: f64,
    f_retained: &IntervalSet<f64>,
    budget: f64,
    opts: &OscillationOptions,
) -> Result<OscillationReport> {
    let p = opts.p;
    if !(p > 2.0) {
        return Err(Error::Domain(format!("the dyadic chain needs p > 2, got {p}")));
    }
    if !f_retained.contains(y) {
        return Err(Error::Domain(format!("height {y} is not in F")));
    }
    let q = p / (p - 1.0);
    let s = cover.s;
    let mut rows = Vec::with_capacity(cover.intervals.len());
    for (j, square) in cover.intervals.iter().zip(cover.squares(y)) {
        let n = opts.samples.max(2);
        let mut xs: Vec<f64> = (0..n).map(|k| j.lo + j.len() * k as f64 / (n - 1) as f64).collect();
        xs.extend(u.trace_breakpoints(j.lo, j.hi, y));
        let (mut z_max, mut z_min) = (xs[0], xs[0]);
        let (mut f_max, mut f_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &x in &xs {
            let v = u.value(x, y);
            if v > f_max {
                f_max = v;
                z_max = x;
            }
            if v < f_min {
                f_min = v;
                z_min = x;
            }
        }
        let norm = u.energy(&square.x, &square.y, p, &opts.quad).powf(1.0 / p);
        let (b1, k1) = chain_bound(*j, z_max, y, norm, f_retained, opts)?;
        let (b2, k2) = chain_bound(*j, z_min, y, norm, f_retained, opts)?;
        let rhs = b1 + b2;
        let scale = j.len().powf(s / q) * norm;
        rows.push(OscillationRow {
            interval: *j,
            osc: f_max - f_min,
            rhs,
            norm,
            constant: if scale > 0.0 { rhs / scale } else { 0.0 },
            chain_steps: k1.max(k2),
        });
    }
    let sum_osc = rows.iter().map(|r| r.osc).sum();
    let weighted: f64 = rows.iter().map(|r| (r.rhs / r.interval.len().powf(s / q)).powf(p)).sum();
    let holder_bound = cover.hausdorff_sum.powf(1.0 / q) * weighted.powf(1.0 / p);
    let c_max = rows.iter().map(|r| r.constant).fold(0.0, f64::max);
    let norms: f64 = rows.iter().map(|r| r.norm.powf(p)).sum();
    let uniform_bound = (2.0 * budget).powf(1.0 / q) * c_max * norms.powf(1.0 / p);
    Ok(OscillationReport { delta: cover.delta, y, p, rows, sum_osc, holder_bound, uniform_bound })
}
