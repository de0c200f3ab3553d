//! Pairwise comparisons of product specifications and networks.

mod homophily;
mod specs;
mod ties;

pub use homophily::{homophily_sweep, HomophilyRun};
pub use specs::{
    compare_instances, compare_specs, contains_adopters, ComparisonReport, CrossingCase,
    Diagnostics, PeriodComparison, Side, Verdict,
};
pub use ties::{network_compare, tie_hypothesis, NetworkComparison, TieHypothesis};
