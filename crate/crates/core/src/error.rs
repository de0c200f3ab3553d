use thiserror::Error;

/// Invariant violations caught while validating an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("population has no groups")]
    EmptyPopulation,
    #[error("group {group} is empty")]
    EmptyGroup { group: usize },
    #[error("aspirations not strictly decreasing (group {group} is not below group {previous})")]
    AspirationsNotDecreasing { group: usize, previous: usize },
    #[error("s_p out of (0,1): {value}")]
    ProductSimilarityOutOfRange { value: String },
    #[error("expected {expected} new-product payoffs, found {found}")]
    PayoffCount { expected: usize, found: usize },
    #[error("v_H of individual {individual} is below v_L")]
    NewPayoffBelowIncumbent { individual: usize },
    #[error("v_H of individual {individual} is below the top aspiration H_1")]
    NewPayoffBelowTopAspiration { individual: usize },
    #[error("v_L outside (H_2, H_1]: {value}")]
    IncumbentPayoffOutOfRange { value: String },
    #[error("network similarity {name} out of range: {value}")]
    NetworkSimilarityOutOfRange { name: String, value: String },
    #[error("homophily network requires equal group sizes")]
    HomophilyUnequalGroups,
    #[error("gamma out of (0, 1/s): {value}")]
    GammaOutOfRange { value: String },
    #[error("expected {expected} group ties, found {found}")]
    TieCount { expected: usize, found: usize },
    #[error("individual {individual} out of range (population {population})")]
    IndividualOutOfRange {
        individual: usize,
        population: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("thresholds undefined for group-tie networks with a non-monotone trace")]
    ThresholdsUndefined,
    #[error("state at period {period} is not stalled")]
    NotStalled { period: u64 },
    #[error("next adoption period does not fit in 64 bits")]
    PeriodOverflow,
    #[error("coverage check requires a uniform network")]
    NonUniformNetwork,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComparativeError {
    #[error("mismatched populations: {0}")]
    MismatchedPopulations(String),
    #[error("network hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
