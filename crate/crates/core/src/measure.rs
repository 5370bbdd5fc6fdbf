//! The natural self-similar probability measure on a thin Cantor set and
//! its staircase distribution function.
//!
//! At depth `n` the measure is uniform on each of the `2^n` level-`n`
//! cylinders with mass `2^-n`, so the staircase is piecewise linear,
//! continuous, and constant on every gap. There are no atoms, hence open and
//! closed balls carry the same mass; [`StaircaseMeasure::ball_mass`] uses the
//! open-ball convention.

use serde::{Deserialize, Serialize};

use crate::geometry::cantor::ThinCantorSpec;
use crate::geometry::interval::IntervalSet;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct StaircaseMeasure {
    spec: ThinCantorSpec,
    lo: f64,
    len: f64,
    ratio: f64,
    depth: u32,
    /// Level-`depth` cylinders, in `f64`.
    cylinders: IntervalSet<f64>,
    /// Sorted endpoints of the cylinders: the kinks of the staircase.
    breakpoints: Vec<f64>,
}

impl StaircaseMeasure {
    pub fn new(spec: &ThinCantorSpec) -> crate::Result<Self> {
        spec.validate()?;
        let cylinders = spec.build_level(spec.depth).to_f64();
        let breakpoints = cylinders.endpoints();
        Ok(Self {
            spec: spec.clone(),
            lo: spec.base.lo.to_f64(),
            len: spec.base.len().to_f64(),
            ratio: spec.ratio_f64(),
            depth: spec.depth,
            cylinders,
            breakpoints,
        })
    }

    pub fn spec(&self) -> &ThinCantorSpec {
        &self.spec
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn base_lo(&self) -> f64 {
        self.lo
    }

    pub fn base_len(&self) -> f64 {
        self.len
    }

    pub fn base_hi(&self) -> f64 {
        self.lo + self.len
    }

    pub fn dimension(&self) -> f64 {
        self.spec.dimension()
    }

    pub fn cylinders(&self) -> &IntervalSet<f64> {
        &self.cylinders
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Length of a depth-level cylinder.
    pub fn cylinder_length(&self) -> f64 {
        self.len * self.ratio.powi(self.depth as i32)
    }

    /// Slope of the staircase on the interior of a cylinder.
    pub fn cylinder_slope(&self) -> f64 {
        0.5f64.powi(self.depth as i32) / self.cylinder_length()
    }

    pub fn breakpoint_distance(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b < x);
        let right = self.breakpoints.get(idx).map_or(f64::INFINITY, |b| b - x);
        let left = idx
            .checked_sub(1)
            .map_or(f64::INFINITY, |j| x - self.breakpoints[j]);
        left.min(right)
    }

    /// Derivative of the staircase (right derivative at kinks).
    pub fn density(&self, x: f64) -> f64 {
        let idx = self.cylinders.parts().partition_point(|p| p.hi <= x);
        match self.cylinders.parts().get(idx) {
            Some(p) if p.lo <= x => self.cylinder_slope(),
            _ => 0.0,
        }
    }

    fn unit(&self, x: f64) -> f64 {
        (x - self.lo) / self.len
    }

    /// Staircase `f(x) = mu([lo, x])`, decoded one branch per level.
    pub fn cdf(&self, x: f64) -> f64 {
        unit_cdf(self.ratio, self.depth, self.unit(x))
    }

    /// `int_{lo}^{x} f(t) dt`, zero left of the base.
    pub fn antiderivative(&self, x: f64) -> f64 {
        self.len * unit_phi(self.ratio, self.depth, self.unit(x))
    }

    /// `int_a^b (f(t) - f(a)) dt`, evaluated without cancellation.
    pub fn excess_above(&self, a: f64, b: f64) -> f64 {
        self.len * unit_excess(self.ratio, self.depth, self.unit(a), self.unit(b))
    }

    /// `int_a^b (f(b) - f(t)) dt`, by the reflection `f(1 - t) = 1 - f(t)`.
    pub fn deficit_below(&self, a: f64, b: f64) -> f64 {
        let (ta, tb) = (self.unit(a), self.unit(b));
        self.len * unit_excess(self.ratio, self.depth, 1.0 - tb, 1.0 - ta)
    }

    /// `f(b) - f(a)`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        self.cdf(b) - self.cdf(a)
    }

    /// Exact `int_a^b f`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        assert!(a <= b, "integral bounds reversed: {a} > {b}");
        self.cdf(a) * (b - a) + self.excess_above(a, b)
    }

    /// `mu(B(x, r))` for the open ball.
    pub fn ball_mass(&self, x: f64, r: f64) -> f64 {
        assert!(r > 0.0, "ball radius must be positive");
        self.cdf(x + r) - self.cdf(x - r)
    }

    /// Sup of `mu(B(x, r)) / r^s` over a sample of centres and radii.
    ///
    /// Centres: a uniform grid of `sample_points` over the base widened by
    /// half its length, plus cylinder left endpoints and gap midpoints of the
    /// first few levels. Radii: `scales` for every centre, plus the
    /// structural radii (cylinder length at a cylinder endpoint, half-gap
    /// plus both neighbouring cylinders at a gap midpoint).
    pub fn frostman_constant(&self, s: f64, scales: &[f64], sample_points: usize) -> FrostmanEstimate {
        let mut best = FrostmanEstimate {
            c_hat: 0.0,
            x: self.lo,
            r: self.len,
        };
        let mut consider = |x: f64, r: f64| {
            if r > 0.0 {
                let ratio = self.ball_mass(x, r) / r.powf(s);
                if ratio > best.c_hat {
                    best = FrostmanEstimate { c_hat: ratio, x, r };
                }
            }
        };

        let span_lo = self.lo - 0.5 * self.len;
        let span = 2.0 * self.len;
        for i in 0..sample_points {
            let x = span_lo + span * (i as f64 + 0.5) / sample_points as f64;
            for &r in scales {
                consider(x, r);
            }
        }

        let levels = (usize::BITS - sample_points.max(1).leading_zeros()).min(self.depth + 1);
        for level in 0..levels {
            let cyl = self.spec.build_level(level).to_f64();
            let child = self.len * self.ratio.powi(level as i32 + 1);
            let length = self.len * self.ratio.powi(level as i32);
            for part in cyl.parts() {
                consider(part.lo, length);
                consider(part.hi, length);
                for &r in scales {
                    consider(part.lo, r);
                }
                if level < self.depth {
                    let mid = part.mid();
                    let half_gap = 0.5 * (length - 2.0 * child);
                    consider(mid, half_gap + child);
                }
            }
        }
        best
    }
}

fn half<T: Scalar>() -> T {
    T::one() / T::two()
}

/// Staircase of the unit construction at `depth`.
fn unit_cdf<T: Scalar>(rho: T, depth: u32, mut t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    if t >= T::one() {
        return T::one();
    }
    let right_start = T::one() - rho;
    let mut value = T::zero();
    let mut mass = T::one();
    for _ in 0..depth {
        if t <= rho {
            t = t / rho;
        } else if t >= right_start {
            value = value + half::<T>() * mass;
            t = (t - right_start) / rho;
        } else {
            return value + half::<T>() * mass;
        }
        mass = mass * half();
    }
    value + mass * t.max_of(T::zero()).min_of(T::one())
}

/// `1 - F(t)`, accurate when it is small.
fn unit_co_cdf<T: Scalar>(rho: T, depth: u32, t: T) -> T {
    if t >= half() {
        unit_cdf(rho, depth, T::one() - t)
    } else {
        T::one() - unit_cdf(rho, depth, t)
    }
}

/// `int_0^t F`, continued with slope one past the right end.
fn unit_phi<T: Scalar>(rho: T, depth: u32, mut t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    if t >= T::one() {
        return half::<T>() + (t - T::one());
    }
    let right_start = T::one() - rho;
    // integrals of the unit staircase over [0, rho] and over [0, 1 - rho]
    let left_block = half::<T>() * half::<T>() * rho;
    let through_gap = left_block + half::<T>() * (T::one() - T::two() * rho);
    let mut acc = T::zero();
    let mut coef = T::one();
    for _ in 0..depth {
        if t <= rho {
            t = t / rho;
        } else if t >= right_start {
            acc = acc + coef * (through_gap + half::<T>() * (t - right_start));
            t = (t - right_start) / rho;
        } else {
            return acc + coef * (left_block + half::<T>() * (t - rho));
        }
        coef = coef * half::<T>() * rho;
    }
    let t = t.max_of(T::zero()).min_of(T::one());
    acc + coef * half::<T>() * t * t
}

/// `int_{ta}^{tb} (F(t) - F(ta)) dt` as a sum of non-negative terms, so the
/// relative accuracy does not degrade when `tb - ta` is tiny.
fn unit_excess<T: Scalar>(rho: T, mut depth: u32, mut ta: T, mut tb: T) -> T {
    let zero = T::zero();
    let one = T::one();
    let right_start = one - rho;
    let mut acc = zero;
    let mut scale = one;
    loop {
        if tb <= ta || tb <= zero || ta >= one {
            return acc;
        }
        if ta < zero {
            return acc + scale * unit_phi(rho, depth, tb);
        }
        if depth == 0 {
            let top = tb.min_of(one);
            let mut value = half::<T>() * (top - ta) * (top - ta);
            if tb > one {
                value = value + (one - ta) * (tb - one);
            }
            return acc + scale * value;
        }
        if ta <= rho {
            let ua = ta / rho;
            if tb > rho {
                let mut extra = half::<T>() * unit_co_cdf(rho, depth - 1, ua) * (tb - rho);
                if tb > right_start {
                    extra = extra + half::<T>() * rho * unit_phi(rho, depth - 1, (tb - right_start) / rho);
                }
                acc = acc + scale * extra;
                tb = one;
            } else {
                tb = tb / rho;
            }
            ta = ua;
        } else if ta < right_start {
            if tb <= right_start {
                return acc;
            }
            return acc + scale * half::<T>() * rho * unit_phi(rho, depth - 1, (tb - right_start) / rho);
        } else {
            ta = (ta - right_start) / rho;
            tb = (tb - right_start) / rho;
        }
        scale = scale * half::<T>() * rho;
        depth -= 1;
    }
}

/// Exact rational evaluation of the staircase and its local integrals, used
/// as an oracle for the floating-point path.
pub mod exact {
    use super::{unit_cdf, unit_excess};
    use crate::geometry::cantor::ThinCantorSpec;
    use crate::scalar::{Rational, Scalar};

    fn unit(spec: &ThinCantorSpec, x: Rational) -> Rational {
        (x - spec.base.lo) / spec.base.len()
    }

    pub fn cdf(spec: &ThinCantorSpec, x: Rational) -> Rational {
        unit_cdf(spec.ratio, spec.depth, unit(spec, x))
    }

    /// `int_a^b (f - f(a))`.
    pub fn excess_above(spec: &ThinCantorSpec, a: Rational, b: Rational) -> Rational {
        spec.base.len() * unit_excess(spec.ratio, spec.depth, unit(spec, a), unit(spec, b))
    }

    /// `int_a^b (f(b) - f)`.
    pub fn deficit_below(spec: &ThinCantorSpec, a: Rational, b: Rational) -> Rational {
        let one = Rational::from_integer(1);
        spec.base.len() * unit_excess(spec.ratio, spec.depth, one - unit(spec, b), one - unit(spec, a))
    }

    pub fn integral(spec: &ThinCantorSpec, a: Rational, b: Rational) -> Rational {
        cdf(spec, a) * (b - a) + excess_above(spec, a, b)
    }

    /// `v(x, y)` and its gradient.
    pub fn extension(spec: &ThinCantorSpec, x: Rational, y: Rational) -> (Rational, [Rational; 2]) {
        let (a, b) = (x - y, x + y);
        let two_y = Rational::two() * y;
        let below = excess_above(spec, a, b);
        let above = deficit_below(spec, a, b);
        let value = cdf(spec, a) + below / two_y;
        let grad = [(cdf(spec, b) - cdf(spec, a)) / two_y, (above - below) / (two_y * two_y)];
        (value, grad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrostmanEstimate {
    pub c_hat: f64,
    /// Sample attaining the maximum.
    pub x: f64,
    pub r: f64,
}

/// Geometric list of radii `top * factor^k`, `k = 0..count`.
pub fn geometric_scales(top: f64, factor: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| top * factor.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thirds(depth: u32) -> StaircaseMeasure {
        StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(depth)).unwrap()
    }

    #[test]
    fn staircase_endpoint_values() {
        let m = thirds(12);
        assert_eq!(m.cdf(0.0), 0.0);
        assert_eq!(m.cdf(1.0), 1.0);
        assert_eq!(m.cdf(-3.0), 0.0);
        assert_eq!(m.cdf(7.0), 1.0);
        assert_eq!(m.cdf(0.5), 0.5);
        assert!((m.cdf(1.0 / 3.0) - 0.5).abs() < 1e-13);
        assert!((m.cdf(2.0 / 3.0) - 0.5).abs() < 1e-13);
        assert!((m.cdf(0.25) + m.cdf(0.75) - 1.0).abs() < 1e-12);
        assert!((m.cdf(0.25) - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn constant_on_first_gap() {
        let m = thirds(10);
        for i in 1..100 {
            let x = 1.0 / 3.0 + (i as f64) / 300.0;
            assert_eq!(m.cdf(x), 0.5);
        }
    }

    #[test]
    fn integrals_of_the_staircase() {
        for depth in [1, 5, 12] {
            let m = thirds(depth);
            assert!((m.integral(0.0, 1.0) - 0.5).abs() < 1e-14);
            assert!((m.integral(0.0, 1.0 / 3.0) - 1.0 / 12.0).abs() < 1e-14);
            assert_eq!(m.integral(-2.0, 0.0), 0.0);
            assert!((m.integral(1.0, 1.5) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_masses() {
        let m = thirds(12);
        assert!((m.ball_mass(0.0, 1.0 / 3.0) - 0.5).abs() < 1e-14);
        assert_eq!(m.ball_mass(0.5, 1.0 / 6.0), 0.0);
        assert_eq!(m.ball_mass(0.5, 0.6), 1.0);
    }

    #[test]
    fn excess_and_deficit_split_the_box() {
        let m = thirds(9);
        for &(a, b) in &[(-0.3, 0.4), (0.1, 0.2), (0.3, 0.9), (0.33, 0.34), (0.5, 1.7), (0.2, 0.2 + 1e-9)] {
            let i = m.excess_above(a, b);
            let j = m.deficit_below(a, b);
            let box_area = (b - a) * m.mass_between(a, b);
            assert!((i + j - box_area).abs() <= 1e-15 + 1e-12 * box_area, "{a} {b}: {i} + {j} vs {box_area}");
            assert!(i >= 0.0 && j >= 0.0);
            let via_anti = m.antiderivative(b) - m.antiderivative(a);
            assert!((m.integral(a, b) - via_anti).abs() < 1e-14);
        }
    }

    #[test]
    fn excess_is_accurate_on_tiny_windows() {
        // on a deep cylinder the staircase is linear with known slope
        let m = thirds(6);
        let (a, h) = (0.0, 1e-9);
        let expected = 0.5 * m.cylinder_slope() * h * h;
        assert!((m.excess_above(a, a + h) / expected - 1.0).abs() < 1e-6);
        assert!((m.deficit_below(a, a + h) / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn exact_worked_values() {
        use crate::scalar::Rational;
        let spec = ThinCantorSpec::middle_thirds(12);
        let q = |n, d| Rational::new(n, d);
        assert_eq!(exact::cdf(&spec, q(1, 3)), q(1, 2));
        assert_eq!(exact::integral(&spec, q(0, 1), q(1, 3)), q(1, 12));
        assert_eq!(exact::integral(&spec, q(0, 1), q(1, 1)), q(1, 2));
        let (v, grad) = exact::extension(&spec, q(0, 1), q(1, 3));
        assert_eq!(v, q(1, 8));
        assert_eq!(grad, [q(3, 4), q(3, 8)]);
    }

    #[test]
    fn depth_zero_is_uniform() {
        let m = thirds(0);
        assert!((m.cdf(0.3) - 0.3).abs() < 1e-15);
        assert!((m.integral(0.0, 0.5) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn density_matches_cylinders() {
        let m = thirds(2);
        assert_eq!(m.density(0.05), 2.25);
        assert_eq!(m.density(0.5), 0.0);
        assert_eq!(m.density(0.15), 0.0);
    }

    #[test]
    fn frostman_cylinder_pairs_have_ratio_one() {
        let m = thirds(12);
        let s = m.dimension();
        let cyl = ThinCantorSpec::middle_thirds(5).build_level(5).to_f64();
        for part in cyl.parts() {
            let ratio = m.ball_mass(part.lo, part.len()) / part.len().powf(s);
            assert!((ratio - 1.0).abs() < 1e-9, "ratio {ratio} at {}", part.lo);
        }
    }

    #[test]
    fn frostman_constant_is_two_to_the_s() {
        let m = thirds(10);
        let s = m.dimension();
        let est = m.frostman_constant(s, &geometric_scales(1.0, 0.5, 20), 512);
        assert!((est.c_hat - 2f64.powf(s)).abs() < 1e-9, "{est:?}");
    }
}
