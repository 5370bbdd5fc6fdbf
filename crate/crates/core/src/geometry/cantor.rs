//! Finite-depth Cantor constructions: the thin (measure-zero, self-similar)
//! set and the fat (positive-measure) set obtained by removing centred gaps.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{Interval, IntervalSet};
use crate::error::{invalid, Result};
use crate::scalar::{Rational, Scalar};

/// Two-branch self-similar Cantor set: each surviving interval keeps its
/// outer `ratio` fractions on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinCantorSpec {
    pub base: Interval<Rational>,
    pub ratio: Rational,
    pub depth: u32,
}

impl ThinCantorSpec {
    pub fn new(base: Interval<Rational>, ratio: Rational, depth: u32) -> Result<Self> {
        let spec = Self { base, ratio, depth };
        spec.validate()?;
        Ok(spec)
    }

    /// Middle-thirds set on `[0, 1]`.
    pub fn middle_thirds(depth: u32) -> Self {
        Self {
            base: Interval {
                lo: Rational::zero(),
                hi: Rational::one(),
            },
            ratio: Rational::new(1, 3),
            depth,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > Rational::zero() && self.ratio < Rational::new(1, 2)) {
            return invalid("ratio must lie in (0, 1/2)");
        }
        if !(self.base.lo < self.base.hi) {
            return invalid("base interval must have positive length");
        }
        if self.depth > 40 {
            return invalid("depth above 40 is not supported");
        }
        Ok(())
    }

    /// Similarity dimension `log 2 / log(1/ratio)`.
    pub fn dimension(&self) -> f64 {
        2f64.ln() / (1.0 / self.ratio.to_f64()).ln()
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio.to_f64()
    }

    /// Length of a level-`k` cylinder.
    pub fn level_length(&self, level: u32) -> Rational {
        self.base.len() * num_traits::pow(self.ratio, level as usize)
    }

    /// Natural covering value `2^k (ratio^k |base|)^s = |base|^s`, an upper
    /// bound for the s-dimensional Hausdorff measure.
    pub fn natural_hausdorff_bound(&self) -> f64 {
        self.base.len().to_f64().powf(self.dimension())
    }

    pub fn with_depth(&self, depth: u32) -> Self {
        Self {
            depth,
            ..self.clone()
        }
    }

    /// The `2^level` surviving closed intervals at `level`.
    pub fn build_level(&self, level: u32) -> IntervalSet<Rational> {
        let mut parts = vec![self.base];
        for _ in 0..level {
            let mut next = Vec::with_capacity(parts.len() * 2);
            for part in &parts {
                let child = part.len() * self.ratio;
                next.push(Interval {
                    lo: part.lo,
                    hi: part.lo + child,
                });
                next.push(Interval {
                    lo: part.hi - child,
                    hi: part.hi,
                });
            }
            parts = next;
        }
        IntervalSet::from_sorted(parts).expect("cantor cylinders are disjoint")
    }

    pub fn build(&self) -> Result<IntervalSet<Rational>> {
        self.validate()?;
        Ok(self.build_level(self.depth))
    }
}

/// Realises the spec at its own depth.
pub fn build_thin_cantor(spec: &ThinCantorSpec) -> Result<IntervalSet<Rational>> {
    spec.build()
}

/// Gap lengths `g_k`, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GapSchedule {
    /// `g_k = scale * factor^k`.
    Geometric { scale: Rational, factor: Rational },
    /// Explicit lengths; generations past the end have no gap.
    Explicit(Vec<Rational>),
}

impl GapSchedule {
    pub fn gap(&self, generation: u32) -> Rational {
        assert!(generation >= 1, "generations start at 1");
        match self {
            GapSchedule::Geometric { scale, factor } => {
                *scale * num_traits::pow(*factor, generation as usize)
            }
            GapSchedule::Explicit(lengths) => lengths
                .get(generation as usize - 1)
                .copied()
                .unwrap_or_else(Rational::zero),
        }
    }

    /// `sum_k 2^(k-1) g_k` over all generations, when it can be evaluated.
    pub fn removed_in_limit(&self) -> Option<Rational> {
        match self {
            GapSchedule::Geometric { scale, factor } => {
                let two_f = *factor * Rational::from_integer(2);
                (two_f < Rational::one()).then(|| *scale * *factor / (Rational::one() - two_f))
            }
            GapSchedule::Explicit(lengths) => Some(
                lengths
                    .iter()
                    .enumerate()
                    .map(|(k, g)| *g * Rational::from_integer(1i128 << k))
                    .sum(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatCantorSpec {
    pub base: Interval<Rational>,
    pub schedule: GapSchedule,
    pub depth: u32,
}

/// Output of [`build_fat_cantor`]: the retained closed set and the removed
/// open gaps, each gap tagged with its generation.
#[derive(Debug, Clone, PartialEq)]
pub struct FatCantor {
    pub retained: IntervalSet<Rational>,
    pub gaps: IntervalSet<Rational>,
    pub generations: Vec<u32>,
}

impl FatCantorSpec {
    /// `g_k = 4^-k` on `[0, 1]`.
    pub fn quarter_powers(depth: u32) -> Self {
        Self {
            base: Interval {
                lo: Rational::zero(),
                hi: Rational::one(),
            },
            schedule: GapSchedule::Geometric {
                scale: Rational::one(),
                factor: Rational::new(1, 4),
            },
            depth,
        }
    }

    pub fn gap(&self, generation: u32) -> Rational {
        self.schedule.gap(generation)
    }

    /// Length of each surviving interval after `generation` removals.
    pub fn survivor_length(&self, generation: u32) -> Rational {
        let two = Rational::from_integer(2);
        (1..=generation).fold(self.base.len(), |len, k| (len - self.gap(k)) / two)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base.lo < self.base.hi) {
            return invalid("base interval must have positive length");
        }
        if self.depth > 24 {
            return invalid("fat depth above 24 is not supported");
        }
        let mut survivor = self.base.len();
        let mut removed = Rational::zero();
        for k in 1..=self.depth {
            let g = self.gap(k);
            if g < Rational::zero() {
                return invalid(format!("gap length g_{k} is negative"));
            }
            if g >= survivor {
                return invalid(format!(
                    "gap schedule exhausts the base: g_{k} does not fit in its surviving interval"
                ));
            }
            removed += g * Rational::from_integer(1i128 << (k - 1));
            survivor = (survivor - g) / Rational::from_integer(2);
        }
        if removed >= self.base.len() {
            return invalid("gap schedule exhausts the base");
        }
        if let Some(total) = self.schedule.removed_in_limit() {
            if total >= self.base.len() {
                return invalid("gap schedule removes the whole base in the limit");
            }
        }
        Ok(())
    }

    pub fn with_depth(&self, depth: u32) -> Self {
        Self {
            depth,
            ..self.clone()
        }
    }

    /// Lebesgue measure of the limit set, when the schedule allows it.
    pub fn limit_measure(&self) -> Option<Rational> {
        Some(self.base.len() - self.schedule.removed_in_limit()?)
    }

    pub fn build(&self) -> Result<FatCantor> {
        self.validate()?;
        let mut survivors = vec![self.base];
        let mut gaps: Vec<(Interval<Rational>, u32)> = Vec::new();
        for k in 1..=self.depth {
            let g = self.gap(k);
            let mut next = Vec::with_capacity(survivors.len() * 2);
            for part in &survivors {
                let mid = part.mid();
                let half = g / Rational::from_integer(2);
                next.push(Interval {
                    lo: part.lo,
                    hi: mid - half,
                });
                next.push(Interval {
                    lo: mid + half,
                    hi: part.hi,
                });
                if g > Rational::zero() {
                    gaps.push((
                        Interval {
                            lo: mid - half,
                            hi: mid + half,
                        },
                        k,
                    ));
                }
            }
            survivors = next;
        }
        gaps.sort_by_key(|a| a.0.lo);
        let generations = gaps.iter().map(|(_, k)| *k).collect();
        Ok(FatCantor {
            retained: IntervalSet::from_unsorted(survivors),
            gaps: IntervalSet::from_sorted(gaps.into_iter().map(|(iv, _)| iv).collect())?,
            generations,
        })
    }
}

pub fn build_fat_cantor(spec: &FatCantorSpec) -> Result<FatCantor> {
    spec.build()
}
