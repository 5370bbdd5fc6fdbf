//! Numerical machinery for Sobolev removability of product sets `C x F` in
//! the plane: Cantor constructions, the staircase measure, the explicit
//! non-removability witness, the oscillation/cover estimates and the curve
//! condition.

pub mod curves;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod oscillation;
pub mod params;
pub mod quadrature;
pub mod regression;
pub mod scalar;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::cantor::{build_fat_cantor, build_thin_cantor, FatCantor, FatCantorSpec, GapSchedule, ThinCantorSpec};
pub use geometry::interval::{parse_interval_set, Interval, IntervalSet};
pub use measure::StaircaseMeasure;
pub use params::{critical_exponent, ParamSet};
pub use scalar::{parse_rational, Rational, Scalar};
