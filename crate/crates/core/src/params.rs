use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Exponent bookkeeping for a dimension `s` and Sobolev exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub s: f64,
    pub p: f64,
    /// Conjugate exponent, `+inf` for `p = 1`.
    pub q: f64,
    /// Density exponent `(1 - s)(p - 1)`.
    pub alpha: f64,
    /// Half-width of the square `B(0, R)^2` carrying the witness.
    pub radius: f64,
}

impl ParamSet {
    pub const DEFAULT_RADIUS: f64 = 2.0;

    pub fn new(s: f64, p: f64, radius: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return invalid(format!("s = {s} must lie in (0, 1)"));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return invalid(format!("p = {p} must be a finite number >= 1"));
        }
        if !(radius > 1.0) {
            return invalid(format!("radius R = {radius} must exceed 1"));
        }
        let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
        Ok(Self {
            s,
            p,
            q,
            alpha: (1.0 - s) * (p - 1.0),
            radius,
        })
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.s, p, self.radius)
    }

    /// `(2 - s) / (1 - s)`.
    pub fn p_star(&self) -> f64 {
        critical_exponent(self.s)
    }

    /// Gap exponent `1 - (1 - s)(p - 1)`; equals `1 + (s - 1)(p - 1)`, the
    /// exponent of `r` in the strip bound.
    pub fn gap_exponent(&self) -> f64 {
        1.0 - self.alpha
    }

    /// `(p - 2) / (p - 1)`, the exponent of the curve condition.
    pub fn curve_exponent(&self) -> f64 {
        (self.p - 2.0) / (self.p - 1.0)
    }

    /// Strip energies are finite iff `(s - 1)(p - 1) > -1`.
    pub fn strip_integrable(&self) -> bool {
        self.gap_exponent() > 0.0
    }
}

pub fn critical_exponent(s: f64) -> f64 {
    (2.0 - s) / (1.0 - s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates_and_alpha() {
        let s = 2f64.ln() / 3f64.ln();
        let ps = ParamSet::new(s, 3.0, 2.0).unwrap();
        assert!((1.0 / ps.p + 1.0 / ps.q - 1.0).abs() < 1e-15);
        assert_eq!(ps.alpha, (1.0 - s) * 2.0);
        assert!((ps.p_star() - (2.0 - s) / (1.0 - s)).abs() < 1e-15);
        assert!((ps.gap_exponent() - (1.0 + (s - 1.0) * (ps.p - 1.0))).abs() < 1e-15);
    }

    #[test]
    fn integrability_switches_at_critical_exponent() {
        let s = 0.5;
        assert_eq!(critical_exponent(s), 3.0);
        assert!(ParamSet::new(s, 2.99, 2.0).unwrap().strip_integrable());
        assert!(!ParamSet::new(s, 3.0, 2.0).unwrap().strip_integrable());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ParamSet::new(1.0, 2.0, 2.0).is_err());
        assert!(ParamSet::new(0.5, 0.5, 2.0).is_err());
        assert!(ParamSet::new(0.5, 2.0, 1.0).is_err());
        assert!(ParamSet::new(0.5, 1.0, 2.0).unwrap().q.is_infinite());
    }
}
