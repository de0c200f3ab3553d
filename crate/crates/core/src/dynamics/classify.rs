use serde::Serialize;

use super::trace::DiffusionTrace;

/// Descriptive adopter category of a group, by the order of its adoption wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdopterCategory {
    Innovators,
    EarlyAdopters,
    EarlyMajority,
    LateMajority,
    Laggards,
    NeverAdopts,
    /// The run was not certified and the group had not adopted yet.
    NotAdoptedByHorizon,
}

const WAVE_CATEGORIES: [AdopterCategory; 5] = [
    AdopterCategory::Innovators,
    AdopterCategory::EarlyAdopters,
    AdopterCategory::EarlyMajority,
    AdopterCategory::LateMajority,
    AdopterCategory::Laggards,
];

/// One label per group. Distinct adoption periods form waves; wave `w` of
/// `W` maps to the nearest of five evenly spaced categories.
pub fn classify_adopters(trace: &DiffusionTrace) -> Vec<AdopterCategory> {
    let periods: Vec<Option<u64>> = (0..trace.group_count())
        .map(|k| trace.group_adoption_period(k))
        .collect();
    let mut waves: Vec<u64> = periods.iter().flatten().copied().collect();
    waves.sort_unstable();
    waves.dedup();
    let last = waves.len().saturating_sub(1);
    periods
        .iter()
        .map(|p| match p {
            Some(p) => {
                let w = waves.binary_search(p).expect("period is a wave");
                let idx = if last == 0 {
                    0
                } else {
                    (8 * w + last) / (2 * last)
                };
                WAVE_CATEGORIES[idx]
            }
            None if trace.terminal().certified => AdopterCategory::NeverAdopts,
            None => AdopterCategory::NotAdoptedByHorizon,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::simulate;
    use crate::fixtures;
    use crate::model::{AspirationGroup, Instance, NetworkSpec, Population, ProductSpec};
    use crate::rational::{int, ratio};
    use AdopterCategory::*;

    #[test]
    fn reference_instances() {
        let b = simulate(&fixtures::instance_b(), 10, true).unwrap();
        assert_eq!(classify_adopters(&b), vec![Innovators, Laggards]);
        let a = simulate(&fixtures::instance_a(), 10, true).unwrap();
        assert_eq!(classify_adopters(&a), vec![Innovators, NeverAdopts]);
    }

    #[test]
    fn single_wave_is_innovators() {
        let inst = Instance::validate(
            Population::new(vec![AspirationGroup::new(4, int(95))]),
            ProductSpec::constant(int(90), int(100), ratio(1, 2), 4),
            NetworkSpec::Uniform { s: ratio(1, 2) },
        )
        .unwrap();
        let trace = simulate(&inst, 5, true).unwrap();
        assert_eq!(classify_adopters(&trace), vec![Innovators]);
    }

    #[test]
    fn uncertified_non_adopters_are_marked() {
        let trace = simulate(&fixtures::instance_b(), 2, false).unwrap();
        assert_eq!(
            classify_adopters(&trace),
            vec![Innovators, NotAdoptedByHorizon]
        );
    }
}
