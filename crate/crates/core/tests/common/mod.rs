//! Corpus builders and independent checks shared by the integration tests.
#![allow(dead_code)]

use casediff::dynamics::DiffusionTrace;
use casediff::generate::{generate, GeneratorSettings};
use casediff::model::NetworkKind;
use casediff::Instance;

/// Seeded instances with at most 6 groups of at most 8 individuals.
pub fn corpus(count: u64, networks: &[NetworkKind], salt: u64) -> Vec<Instance> {
    let settings = GeneratorSettings {
        networks: networks.to_vec(),
        ..GeneratorSettings::default()
    };
    (0..count)
        .map(|seed| generate(&settings, salt * 1_000_003 + seed))
        .collect()
}

pub fn all_networks() -> Vec<NetworkKind> {
    vec![
        NetworkKind::Uniform,
        NetworkKind::Homophily,
        NetworkKind::GroupTies,
    ]
}

/// Adoption periods agree for every individual up to `horizon`.
pub fn same_until(a: &DiffusionTrace, b: &DiffusionTrace, horizon: u64) -> bool {
    let clip = |p: &Option<u64>| p.filter(|&t| t <= horizon);
    a.adoption_periods().len() == b.adoption_periods().len()
        && a.adoption_periods()
            .iter()
            .zip(b.adoption_periods())
            .all(|(x, y)| clip(x) == clip(y))
}

/// Everyone who adopts under `lagging` by `horizon` adopts no later under `leading`.
pub fn contained(lagging: &DiffusionTrace, leading: &DiffusionTrace, horizon: u64) -> bool {
    lagging
        .adoption_periods()
        .iter()
        .zip(leading.adoption_periods())
        .all(|(lag, lead)| match (lag.filter(|&t| t <= horizon), lead) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => *y <= x,
        })
}
