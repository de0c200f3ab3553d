//! Full runs, closed-form thresholds, stall fast-forward, long-run coverage
//! and adopter labels.

mod classify;
mod coverage;
mod simulate;
mod threshold;
mod trace;

pub use classify::{classify_adopters, AdopterCategory};
pub use coverage::{
    above_count, average_payoff_above, coverage_check, coverage_check_with, AboveReading,
    CoverageOptions, CoverageReport, CoverageRow, GapNumerator,
};
pub use simulate::{
    fast_forward_stall, periods_until_adoption, simulate, simulate_with, Simulation,
    SimulationOptions, StallOutcome, Switchback,
};
pub use threshold::{
    threshold_sequence, RelationSegment, Threshold, ThresholdPath, ThresholdSequence,
};
pub use trace::{AdoptionEvent, DiffusionTrace, Terminal, TraceRow};
