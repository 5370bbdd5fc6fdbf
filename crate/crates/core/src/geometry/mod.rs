//! Interval sets, Cantor constructions and the set-level estimators.

pub mod cantor;
pub mod estimators;
pub mod interval;

pub use estimators::{
    box_dimension_estimate, dist_to_set, gap_census, porosity_estimate, regularity_constants, salli_check,
    salli_exponent, GapCensus, PorosityCertificate, RegularityConstants, SalliCheck,
};
