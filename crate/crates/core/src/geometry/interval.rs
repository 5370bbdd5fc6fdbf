use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// A bounded interval `[lo, hi]` (or `(lo, hi)`, depending on the role it
/// plays). Degenerate intervals with `lo == hi` stand for single points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T = f64> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::Domain(format!("interval with lo {lo} > hi {hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: T) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) / T::two()
    }

    /// Closed membership.
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Open membership.
    pub fn contains_open(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max_of(other.lo);
        let hi = self.hi.min_of(other.hi);
        if lo < hi || (lo == hi && (self.is_degenerate() || other.is_degenerate())) {
            Some(Self { lo, hi })
        } else {
            None
        }
    }

    pub fn distance(&self, x: T) -> T {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            T::zero()
        }
    }

    pub fn to_f64(&self) -> Interval<f64> {
        Interval {
            lo: self.lo.to_f64(),
            hi: self.hi.to_f64(),
        }
    }

    /// Image under `x -> scale * x + shift` with `scale > 0`.
    pub fn affine(&self, scale: T, shift: T) -> Self {
        Self {
            lo: self.lo * scale + shift,
            hi: self.hi * scale + shift,
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sorted, pairwise-disjoint intervals.
///
/// Adjacent parts may touch (`parts[i].hi == parts[i + 1].lo`) so that
/// families of open gaps can be stored verbatim; set operations that produce
/// new sets merge touching parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet<T = f64> {
    parts: Vec<Interval<T>>,
}

impl<T: Scalar> Default for IntervalSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Scalar> IntervalSet<T> {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn single(interval: Interval<T>) -> Self {
        Self {
            parts: vec![interval],
        }
    }

    /// Wraps already sorted, disjoint parts, checking the invariant.
    pub fn from_sorted(parts: Vec<Interval<T>>) -> Result<Self> {
        for part in &parts {
            if !(part.lo <= part.hi) {
                return Err(Error::Domain(format!("reversed interval {part}")));
            }
        }
        for pair in parts.windows(2) {
            if !(pair[0].hi <= pair[1].lo) {
                return Err(Error::Domain(format!(
                    "parts {} and {} overlap or are out of order",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self { parts })
    }

    /// Sorts and merges overlapping or touching parts.
    pub fn from_unsorted(mut parts: Vec<Interval<T>>) -> Self {
        parts.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite endpoints"));
        let mut merged: Vec<Interval<T>> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(last) if part.lo <= last.hi => last.hi = last.hi.max_of(part.hi),
                _ => merged.push(part),
            }
        }
        Self { parts: merged }
    }

    pub fn parts(&self) -> &[Interval<T>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Interval<T>> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total_length(&self) -> T {
        self.parts.iter().fold(T::zero(), |acc, p| acc + p.len())
    }

    pub fn hull(&self) -> Option<Interval<T>> {
        Some(Interval {
            lo: self.parts.first()?.lo,
            hi: self.parts.last()?.hi,
        })
    }

    /// Index of the first part whose right endpoint is `>= x`.
    fn first_not_left_of(&self, x: T) -> usize {
        self.parts.partition_point(|p| p.hi < x)
    }

    /// Index of the part containing `x` (closed), if any.
    pub fn locate(&self, x: T) -> Option<usize> {
        let idx = self.first_not_left_of(x);
        (idx < self.parts.len() && self.parts[idx].contains(x)).then_some(idx)
    }

    pub fn contains(&self, x: T) -> bool {
        self.locate(x).is_some()
    }

    /// Membership in the union of the open parts.
    pub fn contains_open(&self, x: T) -> bool {
        let idx = self.first_not_left_of(x);
        self.parts.get(idx).is_some_and(|p| p.contains_open(x))
    }

    /// Distance from `x` to the closure of the set; `None` for the empty set.
    pub fn distance(&self, x: T) -> Option<T> {
        if self.parts.is_empty() {
            return None;
        }
        let idx = self.first_not_left_of(x);
        let mut best: Option<T> = None;
        for j in [idx.wrapping_sub(1), idx] {
            if let Some(part) = self.parts.get(j) {
                let d = part.distance(x);
                best = Some(best.map_or(d, |b| b.min_of(d)));
            }
        }
        best
    }

    /// Distance from `x` to the nearest endpoint of any part.
    pub fn endpoint_distance(&self, x: T) -> Option<T> {
        if self.parts.is_empty() {
            return None;
        }
        let idx = self.first_not_left_of(x);
        let lo = idx.saturating_sub(1);
        let hi = (idx + 1).min(self.parts.len() - 1);
        self.parts[lo..=hi]
            .iter()
            .flat_map(|p| [(x - p.lo).abs(), (x - p.hi).abs()])
            .reduce(|a, b| a.min_of(b))
    }

    /// Parts overlapping the closed window, in order.
    pub fn parts_meeting(&self, window: &Interval<T>) -> &[Interval<T>] {
        let start = self.first_not_left_of(window.lo);
        let end = self.parts.partition_point(|p| p.lo <= window.hi);
        if start >= end {
            &[]
        } else {
            &self.parts[start..end]
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.parts.clone();
        all.extend_from_slice(&other.parts);
        Self::from_unsorted(all)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            if let Some(common) = a.intersect(b) {
                out.push(common);
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_unsorted(out)
    }

    pub fn clip(&self, window: &Interval<T>) -> Self {
        self.intersection(&Self::single(*window))
    }

    /// Connected components of `window \ self`.
    pub fn complement_within(&self, window: &Interval<T>) -> Self {
        let mut out = Vec::new();
        let mut cursor = window.lo;
        for part in self.parts_meeting(window) {
            if part.lo > cursor {
                out.push(Interval {
                    lo: cursor,
                    hi: part.lo.min_of(window.hi),
                });
            }
            cursor = cursor.max_of(part.hi);
        }
        if cursor < window.hi {
            out.push(Interval {
                lo: cursor,
                hi: window.hi,
            });
        }
        Self { parts: out }
    }

    /// Minkowski sum with the ball of radius `radius`.
    pub fn dilate(&self, radius: T) -> Self {
        Self::from_unsorted(
            self.parts
                .iter()
                .map(|p| Interval {
                    lo: p.lo - radius,
                    hi: p.hi + radius,
                })
                .collect(),
        )
    }

    pub fn affine(&self, scale: T, shift: T) -> Self {
        assert!(scale > T::zero(), "affine maps must preserve orientation");
        Self {
            parts: self.parts.iter().map(|p| p.affine(scale, shift)).collect(),
        }
    }

    pub fn to_f64(&self) -> IntervalSet<f64> {
        IntervalSet {
            parts: self.parts.iter().map(Interval::to_f64).collect(),
        }
    }

    /// All part endpoints in increasing order (duplicates kept).
    pub fn endpoints(&self) -> Vec<T> {
        self.parts.iter().flat_map(|p| [p.lo, p.hi]).collect()
    }
}

impl IntervalSet<Rational> {
    /// Line-oriented `lo hi` text, rationals written as `p/q`.
    pub fn to_text(&self) -> String {
        self.parts
            .iter()
            .map(|p| format!("{} {}\n", format_rational(p.lo), format_rational(p.hi)))
            .collect()
    }
}

impl IntervalSet<f64> {
    pub fn to_text(&self) -> String {
        self.parts
            .iter()
            .map(|p| format!("{:e} {:e}\n", p.lo, p.hi))
            .collect()
    }
}

/// Parses the line-oriented text format. Blank lines and `#` comments are
/// skipped; each data line holds two decimal or `p/q` literals.
pub fn parse_interval_set(text: &str) -> Result<IntervalSet<Rational>> {
    let mut parts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let at_line = |e: Error| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: idx + 1,
                message,
            },
            other => other,
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `lo hi`, found {} fields", fields.len()),
            });
        }
        let lo = parse_rational(fields[0]).map_err(at_line)?;
        let hi = parse_rational(fields[1]).map_err(at_line)?;
        parts.push(Interval::new(lo, hi).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    IntervalSet::from_sorted(parts).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn set(parts: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_sorted(parts.iter().map(|&(a, b)| iv(a, b)).collect()).unwrap()
    }

    #[test]
    fn rejects_overlap_and_reversal() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(IntervalSet::from_sorted(vec![iv(0.0, 2.0), iv(1.0, 3.0)]).is_err());
        assert!(IntervalSet::from_sorted(vec![iv(0.0, 1.0), iv(1.0, 3.0)]).is_ok());
    }

    #[test]
    fn distance_and_membership() {
        let s = set(&[(0.0, 1.0), (2.0, 3.0), (5.0, 5.0)]);
        assert_eq!(s.distance(1.5), Some(0.5));
        assert_eq!(s.distance(-1.0), Some(1.0));
        assert_eq!(s.distance(4.5), Some(0.5));
        assert_eq!(s.distance(7.0), Some(2.0));
        assert_eq!(s.distance(2.5), Some(0.0));
        assert!(s.contains(5.0));
        assert!(!s.contains(4.0));
        assert!(s.contains_open(0.5));
        assert!(!s.contains_open(1.0));
        assert_eq!(IntervalSet::<f64>::empty().distance(0.0), None);
    }

    #[test]
    fn complement_of_middle_third() {
        let c = set(&[(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)]);
        let gaps = c.complement_within(&iv(-1.0, 2.0));
        assert_eq!(gaps.parts(), &[iv(-1.0, 0.0), iv(1.0 / 3.0, 2.0 / 3.0), iv(1.0, 2.0)]);
        let inner = c.complement_within(&iv(0.0, 1.0));
        assert_eq!(inner.len(), 1);
    }

    #[test]
    fn dilation_merges() {
        let c = set(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(c.dilate(0.25).total_length(), 3.0);
        assert_eq!(c.dilate(0.5).len(), 1);
        assert_eq!(c.dilate(0.5).total_length(), 4.0);
    }

    #[test]
    fn intersection_and_union() {
        let a = set(&[(0.0, 2.0), (3.0, 5.0)]);
        let b = set(&[(1.0, 4.0)]);
        assert_eq!(a.intersection(&b).parts(), &[iv(1.0, 2.0), iv(3.0, 4.0)]);
        assert_eq!(a.union(&b).parts(), &[iv(0.0, 5.0)]);
        let point = IntervalSet::single(Interval::point(0.0));
        assert_eq!(point.clip(&iv(-1.0, 1.0)).parts(), &[Interval::point(0.0)]);
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# middle thirds\n0 1/3\n2/3 1\n\n";
        let parsed = parse_interval_set(text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parse_interval_set(&parsed.to_text()).unwrap(), parsed);
        let decimal = parse_interval_set("0.25 0.5\n").unwrap();
        assert_eq!(decimal.parts()[0].lo, Rational::new(1, 4));
    }

    #[test]
    fn text_format_reports_line() {
        match parse_interval_set("0 1\n2 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_interval_set("0 1 2\n").is_err());
    }
}
