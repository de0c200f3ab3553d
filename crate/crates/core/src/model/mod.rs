//! Domain types, validation, similarity weights, case-based evaluation and
//! the one-period market transition.

mod instance;
mod network;
mod population;
mod product;
mod state;

pub use instance::Instance;
pub use network::{NetworkKind, NetworkSpec};
pub use population::{AspirationGroup, Population};
pub use product::ProductSpec;
pub use state::{GroupStats, MarketState, StepOptions, StepOutcome};

/// Which product a case or an evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Product {
    Incumbent,
    New,
}

/// Plain similarity-weighted sum, or the same sum normalised by the total
/// individual-similarity mass of the case set.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    #[default]
    Sum,
    Average,
}

impl std::str::FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(EvalMode::Sum),
            "average" => Ok(EvalMode::Average),
            other => Err(format!(
                "unknown evaluation mode `{other}` (expected sum|average)"
            )),
        }
    }
}
