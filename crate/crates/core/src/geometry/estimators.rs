//! Set-level estimators: distance to `F`, gap census, porosity certificate,
//! Ahlfors-regularity constants, box dimension and the Salli neighbourhood
//! measure.

use serde::{Deserialize, Serialize};

use super::interval::{Interval, IntervalSet};
use crate::error::{Error, Result};
use crate::measure::StaircaseMeasure;
use crate::regression::log_log_slope;
use crate::scalar::Scalar;

/// `dist(y, F)` where `F = base \ gaps` and the gaps are open.
pub fn dist_to_set<T: Scalar>(y: T, gaps: &IntervalSet<T>, base: &Interval<T>) -> T {
    if y <= base.lo {
        return base.lo - y;
    }
    if y >= base.hi {
        return y - base.hi;
    }
    match gaps.locate(y) {
        Some(idx) => {
            let gap = gaps.parts()[idx];
            (y - gap.lo).min_of(gap.hi - y)
        }
        None => T::zero(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCensus {
    pub window: Interval<f64>,
    pub delta: f64,
    pub count: usize,
    /// `count * delta^s`.
    pub fitted_c_s: f64,
}

/// Counts components of `window \ C` strictly longer than `delta |window|`.
pub fn gap_census<T: Scalar>(c: &IntervalSet<T>, window: &Interval<T>, delta: T, s: f64) -> Result<GapCensus> {
    if window.is_degenerate() {
        return Err(Error::EmptyWindow);
    }
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1]")));
    }
    let threshold = delta * window.len();
    let count = c
        .complement_within(window)
        .parts()
        .iter()
        .filter(|g| g.len() > threshold)
        .count();
    let delta = delta.to_f64();
    Ok(GapCensus {
        window: window.to_f64(),
        delta,
        count,
        fitted_c_s: count as f64 * delta.powf(s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PorosityCertificate {
    /// Every sampled ball `B(x, r)` contains a ball of radius `alpha * r`
    /// missing `C`.
    pub alpha: f64,
    /// The pair attaining the minimum.
    pub worst_x: f64,
    pub worst_r: f64,
    pub pairs: usize,
}

/// Largest `a` such that `B(x, r)` contains some `B(y, a r)` disjoint from
/// `C`. The best hole is centred in the longest component of
/// `B(x, r) \ C`, so this is half that length over `r`.
pub fn hole_ratio(c: &IntervalSet<f64>, x: f64, r: f64) -> f64 {
    let ball = Interval { lo: x - r, hi: x + r };
    let longest = c
        .complement_within(&ball)
        .parts()
        .iter()
        .map(|g| g.len())
        .fold(0.0, f64::max);
    0.5 * longest / r
}

/// Porosity certificate over `sample_points` points of `C` (spread evenly
/// over the endpoints and midpoints of its parts) and every scale.
///
/// Scales below the length of the finite-depth parts probe the parts
/// themselves, which are intervals, and give a certificate near zero.
pub fn porosity_estimate<T: Scalar>(c: &IntervalSet<T>, scales: &[f64], sample_points: usize) -> Result<PorosityCertificate> {
    let c = c.to_f64();
    if c.is_empty() || scales.is_empty() || sample_points == 0 {
        return Err(Error::NoSamples("porosity needs points of C, scales and samples".into()));
    }
    if scales.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("porosity scales must be positive".into()));
    }
    let candidates: Vec<f64> = c.parts().iter().flat_map(|p| [p.lo, p.mid(), p.hi]).collect();
    let points = spread(&candidates, sample_points);
    let mut cert = PorosityCertificate {
        alpha: f64::INFINITY,
        worst_x: points[0],
        worst_r: scales[0],
        pairs: 0,
    };
    for &x in &points {
        for &r in scales {
            let a = hole_ratio(&c, x, r);
            cert.pairs += 1;
            if a < cert.alpha {
                cert.alpha = a;
                cert.worst_x = x;
                cert.worst_r = r;
            }
        }
    }
    Ok(cert)
}

/// Up to `n` elements picked evenly from `values`, always including both
/// ends.
fn spread(values: &[f64], n: usize) -> Vec<f64> {
    if values.len() <= n {
        return values.to_vec();
    }
    if n == 1 {
        return vec![values[0]];
    }
    (0..n).map(|i| values[i * (values.len() - 1) / (n - 1)]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityConstants {
    pub c_lower: f64,
    pub c_upper: f64,
    /// Some scale exceeded `diam(C)` and was clipped to it.
    pub clipped: bool,
}

/// Range of `mu(B(x, r)) / r^s` over cylinder endpoints `x` and `scales`.
pub fn regularity_constants<T: Scalar>(
    c: &IntervalSet<T>,
    mu: &StaircaseMeasure,
    s: f64,
    scales: &[f64],
) -> Result<RegularityConstants> {
    let c = c.to_f64();
    let hull = c
        .hull()
        .ok_or_else(|| Error::NoSamples("regularity of the empty set".into()))?;
    if scales.is_empty() {
        return Err(Error::NoSamples("no scales".into()));
    }
    let diam = hull.len();
    let mut clipped = false;
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    let points = spread(&c.endpoints(), 4096);
    for &r in scales {
        if !(r > 0.0) {
            return Err(Error::Domain("regularity scales must be positive".into()));
        }
        let r = if r > diam && diam > 0.0 {
            clipped = true;
            diam
        } else {
            r
        };
        for &x in &points {
            let ratio = mu.ball_mass(x, r) / r.powf(s);
            lower = lower.min(ratio);
            upper = upper.max(ratio);
        }
    }
    Ok(RegularityConstants {
        c_lower: lower,
        c_upper: upper,
        clipped,
    })
}

/// Number of grid cells `[k e, (k + 1) e)` meeting the set. Non-degenerate
/// parts are counted by the cells meeting their interior.
pub fn box_count<T: Scalar>(set: &IntervalSet<T>, scale: T) -> u64 {
    let mut count = 0u64;
    let mut last: Option<i64> = None;
    for part in set.parts() {
        let mut first = part.lo.floor_div(scale);
        let end = if part.is_degenerate() {
            first
        } else {
            part.hi.ceil_div(scale) - 1
        };
        if let Some(l) = last {
            first = first.max(l + 1);
        }
        if end >= first {
            count += (end - first + 1) as u64;
            last = Some(end);
        }
    }
    count
}

/// Least-squares slope of `log N(e)` against `log(1/e)`.
pub fn box_dimension_estimate<T: Scalar>(set: &IntervalSet<T>, scales: &[T]) -> Result<f64> {
    if scales.len() < 3 {
        return Err(Error::DegenerateRegression("box counting needs at least 3 scales".into()));
    }
    let as_f64: Vec<f64> = scales.iter().map(|e| e.to_f64()).collect();
    if as_f64.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("box scales must be positive".into()));
    }
    let (lo, hi) = as_f64
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::DegenerateRegression("box scales must span two decades".into()));
    }
    if set.is_empty() {
        return Err(Error::DegenerateRegression("empty set".into()));
    }
    let inverse: Vec<f64> = as_f64.iter().map(|e| 1.0 / e).collect();
    let counts: Vec<f64> = scales.iter().map(|&e| box_count(set, e) as f64).collect();
    Ok(log_log_slope(&inverse, &counts)?.slope)
}

/// Exponent `log 2 / log((2 - a) / (1 - a))` of the Salli bound for an
/// `a`-porous set.
pub fn salli_exponent(alpha: f64) -> f64 {
    2f64.ln() / ((2.0 - alpha) / (1.0 - alpha)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SalliCheck {
    /// Length of the `(delta/2)|window|`-neighbourhood of `C` inside the window.
    pub lhs: f64,
    /// `lhs / (|window| delta^(1 - s_salli))`.
    pub rhs_coeff: f64,
    pub s_salli: f64,
}

pub fn salli_check<T: Scalar>(c: &IntervalSet<T>, window: &Interval<T>, delta: T, alpha: f64) -> Result<SalliCheck> {
    if window.is_degenerate() {
        return Err(Error::EmptyWindow);
    }
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1]")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("porosity constant {alpha} must lie in (0, 1)")));
    }
    let radius = delta * window.len() / T::two();
    let lhs = c.dilate(radius).clip(window).total_length().to_f64();
    let s_salli = salli_exponent(alpha);
    Ok(SalliCheck {
        lhs,
        rhs_coeff: lhs / (window.len().to_f64() * delta.to_f64().powf(1.0 - s_salli)),
        s_salli,
    })
}
