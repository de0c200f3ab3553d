use std::cmp::Ordering;

use crate::dynamics::{simulate, DiffusionTrace, ThresholdPath, ThresholdSequence};
use crate::error::ComparativeError;
use crate::model::{Instance, NetworkSpec};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct HomophilyRun {
    pub gamma: Rational,
    pub trace: DiffusionTrace,
    pub thresholds: ThresholdSequence,
    pub path: ThresholdPath,
}

/// One run per `gamma` (ascending), checking that stronger in-group ties
/// never speed diffusion: thresholds weakly rise and no group adopts earlier.
pub fn homophily_sweep(
    instance: &Instance,
    gammas: &[Rational],
    horizon: u64,
) -> Result<Vec<HomophilyRun>, ComparativeError> {
    let s = match instance.network() {
        NetworkSpec::Homophily { s, .. } | NetworkSpec::Uniform { s } => s.clone(),
        NetworkSpec::GroupTies { .. } => {
            return Err(ComparativeError::HypothesisViolated(
                "homophily sweep needs a homophily network".into(),
            ))
        }
    };
    if gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ComparativeError::HypothesisViolated(
            "gamma values must be strictly ascending".into(),
        ));
    }
    let mut runs: Vec<HomophilyRun> = Vec::with_capacity(gammas.len());
    for gamma in gammas {
        let inst = instance.with_network(NetworkSpec::Homophily {
            s: s.clone(),
            gamma: gamma.clone(),
        })?;
        let trace = simulate(&inst, horizon, true)?;
        let path = ThresholdPath::from_trace(&inst, &trace)?;
        let thresholds = path.sequence(horizon);
        if let Some(prev) = runs.last() {
            check_slower(prev, gamma, &trace, &path, inst.group_count())?;
        }
        runs.push(HomophilyRun {
            gamma: gamma.clone(),
            trace,
            thresholds,
            path,
        });
    }
    Ok(runs)
}

fn check_slower(
    prev: &HomophilyRun,
    gamma: &Rational,
    trace: &DiffusionTrace,
    path: &ThresholdPath,
    groups: usize,
) -> Result<(), ComparativeError> {
    let pair = format!(
        "gamma {} -> {}",
        rational::format(&prev.gamma),
        rational::format(gamma)
    );
    if let Some(seg) = prev
        .path
        .compare_from(path, 2)
        .iter()
        .find(|s| s.ordering == Ordering::Greater)
    {
        return Err(ComparativeError::ModelInconsistency(format!(
            "{pair}: threshold fell at t={}",
            seg.start
        )));
    }
    let horizon =
        (!(prev.trace.terminal().certified && trace.terminal().certified)).then(|| trace.horizon());
    let clip = |a: Option<u64>| a.filter(|&p| horizon.is_none_or(|h| p <= h));
    for k in 0..groups {
        let earlier = match (
            clip(prev.trace.group_adoption_period(k)),
            clip(trace.group_adoption_period(k)),
        ) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a,
            _ => false,
        };
        if earlier {
            return Err(ComparativeError::ModelInconsistency(format!(
                "{pair}: group {} adopts earlier",
                k + 1
            )));
        }
    }
    Ok(())
}
