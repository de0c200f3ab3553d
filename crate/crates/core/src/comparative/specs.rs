use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::{simulate, DiffusionTrace, RelationSegment, Threshold, ThresholdPath};
use crate::error::ComparativeError;
use crate::model::{Instance, NetworkSpec, Population, ProductSpec};
use crate::rational::{from_u64, Exact, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    ADominatesB,
    BDominatesA,
    /// `early_leader` covers a weakly larger market up to `t_tilde` and a
    /// strictly smaller one afterwards, while either threshold is finite.
    SingleCross {
        t_tilde: u64,
        early_leader: Side,
    },
    /// More than one reversal in the lead.
    MultipleCrossings,
    InconclusiveAtHorizon,
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Equal => "equal".into(),
            Verdict::ADominatesB => "A dominates B".into(),
            Verdict::BDominatesA => "B dominates A".into(),
            Verdict::SingleCross { t_tilde, .. } => format!("single-cross at t={t_tilde}"),
            Verdict::MultipleCrossings => "multiple crossings".into(),
            Verdict::InconclusiveAtHorizon => "inconclusive at horizon".into(),
        }
    }
}

/// Which case of the speed-versus-acceleration classification a
/// non-dominated pair falls in. "Unprimed" is the spec ahead at `t = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingCase {
    /// Unprimed has the higher `s_p` and stays strictly ahead from `t = 3`.
    Case1,
    /// Unprimed has the lower `s_p` and stays weakly ahead from `t = 3`.
    Case2a,
    /// Unprimed has the lower `s_p` and is overtaken after `t_tilde`.
    Case2b { t_tilde: u64 },
    /// The observed tails fit none of the cases.
    Violated { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodComparison {
    pub t: u64,
    pub dn_a: usize,
    pub dn_b: usize,
    pub h_a: Threshold,
    pub h_b: Threshold,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub h2_a: Option<Threshold>,
    pub h2_b: Option<Threshold>,
    /// Where the two `F` curves cross below `v_L`, if they do.
    pub f_crossing: Option<Rational>,
    /// The sufficient condition for the unprimed spec to lead at `t = 2`.
    pub lead_condition: Option<bool>,
    /// Spec treated as unprimed in the case analysis.
    pub unprimed: Option<Side>,
    pub crossing_case: Option<CrossingCase>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub verdict: Verdict,
    pub per_period: Vec<PeriodComparison>,
    pub diagnostics: Diagnostics,
    /// Order of `H̄_t(A)` against `H̄_t(B)` from `t = 2` on.
    pub relation: Vec<RelationSegment>,
    pub trace_a: DiffusionTrace,
    pub trace_b: DiffusionTrace,
}

impl ComparisonReport {
    pub fn t_tilde(&self) -> Option<u64> {
        match self.verdict {
            Verdict::SingleCross { t_tilde, .. } => Some(t_tilde),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let threshold = |h: &Threshold| serde_json::Value::String(h.to_string());
        let opt_threshold =
            |h: &Option<Threshold>| h.as_ref().map_or(serde_json::Value::Null, threshold);
        let d = &self.diagnostics;
        serde_json::json!({
            "verdict": self.verdict.label(),
            "t_tilde": self.t_tilde(),
            "per_period": self.per_period.iter().map(|row| serde_json::json!({
                "t": row.t,
                "dn_a": row.dn_a,
                "dn_b": row.dn_b,
                "h_a": threshold(&row.h_a),
                "h_b": threshold(&row.h_b),
            })).collect::<Vec<_>>(),
            "diagnostics": {
                "h2_a": opt_threshold(&d.h2_a),
                "h2_b": opt_threshold(&d.h2_b),
                "f_crossing": d.f_crossing.as_ref().map(|h| Exact(h.clone())),
                "lead_condition": d.lead_condition,
                "unprimed": d.unprimed,
                "crossing_case": d.crossing_case,
                "certified": self.trace_a.terminal().certified && self.trace_b.terminal().certified,
                "warnings": d.warnings,
            },
        })
    }
}

fn check_same_market(a: &Instance, b: &Instance) -> Result<(), ComparativeError> {
    if a.population() != b.population() {
        return Err(ComparativeError::MismatchedPopulations(
            "aspiration groups differ".into(),
        ));
    }
    if a.network() != b.network() {
        return Err(ComparativeError::MismatchedPopulations(
            "networks differ".into(),
        ));
    }
    Ok(())
}

/// `b` is componentwise at least `a`.
fn weakly_above(b: &ProductSpec, a: &ProductSpec) -> bool {
    b.s_p >= a.s_p && b.v_l == a.v_l && b.v_h.iter().zip(&a.v_h).all(|(x, y)| x >= y)
}

/// Every adopter under `lagging` adopts no later under `leading`.
pub fn contains_adopters(
    leading: &DiffusionTrace,
    lagging: &DiffusionTrace,
    horizon: Option<u64>,
) -> bool {
    let clip = |a: Option<u64>| a.filter(|&p| horizon.is_none_or(|h| p <= h));
    lagging
        .adoption_periods()
        .iter()
        .zip(leading.adoption_periods())
        .all(|(&lag, &lead)| match (clip(lag), clip(lead)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => y <= x,
        })
}

/// Drops the part of the relation where both thresholds are minus infinity.
fn while_finite(
    relation: Vec<RelationSegment>,
    a: &ThresholdPath,
    b: &ThresholdPath,
) -> Vec<RelationSegment> {
    let both_infinite = match (a.neg_infinity_from(), b.neg_infinity_from()) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    let Some(cut) = both_infinite else {
        return relation;
    };
    relation
        .into_iter()
        .filter(|s| s.start < cut)
        .map(|mut s| {
            if s.end.is_none_or(|e| e >= cut) {
                s.end = Some(cut - 1);
            }
            s
        })
        .collect()
}

fn strict_orderings(relation: &[RelationSegment]) -> Vec<&RelationSegment> {
    relation
        .iter()
        .filter(|s| s.ordering != Ordering::Equal)
        .collect()
}

/// Compares two product specifications on one population and network.
pub fn compare_specs(
    spec_a: &ProductSpec,
    spec_b: &ProductSpec,
    population: &Population,
    network: &NetworkSpec,
    horizon: u64,
) -> Result<ComparisonReport, ComparativeError> {
    let a = Instance::validate(population.clone(), spec_a.clone(), network.clone())?;
    let b = Instance::validate(population.clone(), spec_b.clone(), network.clone())?;
    compare_instances(&a, &b, horizon)
}

pub fn compare_instances(
    a: &Instance,
    b: &Instance,
    horizon: u64,
) -> Result<ComparisonReport, ComparativeError> {
    check_same_market(a, b)?;
    if matches!(a.network(), NetworkSpec::GroupTies { .. }) {
        return Err(ComparativeError::Dynamics(
            crate::error::DynamicsError::ThresholdsUndefined,
        ));
    }
    let (trace_a, trace_b) =
        rayon::join(|| simulate(a, horizon, true), || simulate(b, horizon, true));
    let (trace_a, trace_b) = (trace_a?, trace_b?);
    let path_a = ThresholdPath::from_trace(a, &trace_a)?;
    let path_b = ThresholdPath::from_trace(b, &trace_b)?;
    let certified = trace_a.terminal().certified && trace_b.terminal().certified;

    let relation = while_finite(path_a.compare_from(&path_b, 2), &path_a, &path_b);
    let strict = strict_orderings(&relation);
    let changes = strict
        .windows(2)
        .filter(|w| w[0].ordering != w[1].ordering)
        .count();

    let mut verdict = if a.product() == b.product() || strict.is_empty() {
        Verdict::Equal
    } else if changes == 0 {
        // Lower threshold means the larger market.
        if strict[0].ordering == Ordering::Less {
            Verdict::ADominatesB
        } else {
            Verdict::BDominatesA
        }
    } else if changes == 1 {
        let early_leader = if strict[0].ordering == Ordering::Less {
            Side::A
        } else {
            Side::B
        };
        let overtaken = strict
            .iter()
            .find(|s| s.ordering != strict[0].ordering)
            .expect("one change");
        Verdict::SingleCross {
            t_tilde: overtaken.start - 1,
            early_leader,
        }
    } else {
        Verdict::MultipleCrossings
    };

    let mut diagnostics = Diagnostics {
        h2_a: (horizon >= 2).then(|| path_a.value_at(2)),
        h2_b: (horizon >= 2).then(|| path_b.value_at(2)),
        ..Diagnostics::default()
    };

    let ranked_b = weakly_above(b.product(), a.product());
    let ranked_a = weakly_above(a.product(), b.product());
    if certified && a.product() != b.product() && (ranked_a || ranked_b) {
        let (leader, lagger, leading_trace, lagging_trace, expected) = if ranked_b {
            (Side::B, Side::A, &trace_b, &trace_a, Ordering::Greater)
        } else {
            (Side::A, Side::B, &trace_a, &trace_b, Ordering::Less)
        };
        let thresholds_ok = relation
            .iter()
            .all(|s| s.ordering == expected || s.ordering == Ordering::Equal);
        if !thresholds_ok || !contains_adopters(leading_trace, lagging_trace, None) {
            return Err(ComparativeError::ModelInconsistency(format!(
                "spec {leader:?} is ranked above spec {lagger:?} but does not cover a weakly larger market"
            )));
        }
        verdict = if ranked_b {
            Verdict::BDominatesA
        } else {
            Verdict::ADominatesB
        };
    }

    crossing_diagnostics(a, b, &path_a, &path_b, &relation, &mut diagnostics);
    if !certified {
        verdict = Verdict::InconclusiveAtHorizon;
        diagnostics
            .warnings
            .push("at least one run is not certified; tail not checked".into());
    } else if let Some(CrossingCase::Violated { reason }) = &diagnostics.crossing_case {
        let exact = a.product().payoff_spread().is_zero() && b.product().payoff_spread().is_zero();
        if exact {
            return Err(ComparativeError::ModelInconsistency(reason.clone()));
        }
        diagnostics
            .warnings
            .push(format!("payoffs vary across individuals: {reason}"));
    }

    let last = [trace_a.last_event_period(), trace_b.last_event_period()]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0);
    let rows_until = (last + 1).max(2).min(horizon);
    let per_period = (1..=rows_until)
        .map(|t| PeriodComparison {
            t,
            dn_a: trace_a.cumulative_at(t),
            dn_b: trace_b.cumulative_at(t),
            h_a: path_a.value_at(t),
            h_b: path_b.value_at(t),
        })
        .collect();

    Ok(ComparisonReport {
        verdict,
        per_period,
        diagnostics,
        relation,
        trace_a,
        trace_b,
    })
}

/// Fills in the `F`-curve crossing, the lead condition and the case label
/// when both specs have a single payoff and trade payoff against similarity.
fn crossing_diagnostics(
    a: &Instance,
    b: &Instance,
    path_a: &ThresholdPath,
    path_b: &ThresholdPath,
    relation: &[RelationSegment],
    diagnostics: &mut Diagnostics,
) {
    let spread = a.product().payoff_spread() + b.product().payoff_spread();
    let typical = |inst: &Instance| {
        let v = &inst.product().v_h;
        v.iter().fold(Rational::zero(), |acc, x| acc + x) / from_u64(v.len() as u64)
    };
    let (v_a, v_b) = (typical(a), typical(b));
    let (sp_a, sp_b) = (&a.product().s_p, &b.product().s_p);
    if (&v_b - &v_a) * (sp_b - sp_a) >= Rational::zero() {
        return;
    }
    if !spread.is_zero() {
        diagnostics
            .warnings
            .push("new-product payoffs are not constant; case analysis is indicative only".into());
    }
    let v_l = &a.product().v_l;
    let one = Rational::one();

    let h_star = ((&v_b * (&one - sp_a)) - (&v_a * (&one - sp_b))) / (sp_b - sp_a);
    diagnostics.f_crossing = (&h_star < v_l).then_some(h_star);

    // Unprimed: ahead at t = 2; on a tie, the one with the higher s_p.
    let (h2_a, h2_b) = (path_a.value_at(2), path_b.value_at(2));
    let unprimed = match h2_a.cmp(&h2_b) {
        Ordering::Less => Side::A,
        Ordering::Greater => Side::B,
        Ordering::Equal if sp_a > sp_b => Side::A,
        Ordering::Equal => Side::B,
    };
    diagnostics.unprimed = Some(unprimed);
    let (v_u, sp_u, h2_primed) = match unprimed {
        Side::A => (&v_a, sp_a, &h2_b),
        Side::B => (&v_b, sp_b, &h2_a),
    };
    if let (NetworkSpec::Uniform { s }, Threshold::Finite(h2p)) = (a.network(), h2_primed) {
        if !s.is_zero() && h2p < v_l {
            let n = from_u64(a.size() as u64);
            let n1 = from_u64(a.population().groups[0].size as u64);
            let lhs = (&v_u.clone() - h2p) / (v_l - h2p) / (&one - sp_u);
            let rhs = (s * (from_u64(2) * &n - &n1 - from_u64(2)) + from_u64(2)) / (s * &n1);
            diagnostics.lead_condition = Some(lhs > rhs);
        }
    }

    // Orient the relation as unprimed against primed.
    let oriented: Vec<RelationSegment> = relation
        .iter()
        .map(|s| RelationSegment {
            ordering: if unprimed == Side::A {
                s.ordering
            } else {
                s.ordering.reverse()
            },
            ..*s
        })
        .collect();
    let tied_at_two = h2_a == h2_b;
    let unprimed_higher_sp = match unprimed {
        Side::A => sp_a > sp_b,
        Side::B => sp_b > sp_a,
    };
    let from_three: Vec<&RelationSegment> = oriented
        .iter()
        .filter(|s| s.end.is_none_or(|e| e >= 3))
        .collect();
    let case = if unprimed_higher_sp {
        let bad = if tied_at_two {
            from_three.iter().find(|s| s.ordering == Ordering::Greater)
        } else {
            from_three.iter().find(|s| s.ordering != Ordering::Less)
        };
        match bad {
            None => CrossingCase::Case1,
            Some(s) => CrossingCase::Violated {
                reason: format!(
                    "higher-similarity spec {:?} ahead at t=2 loses its strict lead at t={}",
                    unprimed,
                    s.start.max(3)
                ),
            },
        }
    } else {
        let strict: Vec<&RelationSegment> = oriented
            .iter()
            .filter(|s| s.ordering != Ordering::Equal)
            .collect();
        let reversals = strict
            .windows(2)
            .filter(|w| w[0].ordering != w[1].ordering)
            .count();
        match (strict.first().map(|s| s.ordering), reversals) {
            (None, _) | (Some(Ordering::Less), 0) => CrossingCase::Case2a,
            (Some(Ordering::Less), 1) => {
                let overtaken = strict
                    .iter()
                    .find(|s| s.ordering == Ordering::Greater)
                    .expect("one reversal");
                CrossingCase::Case2b {
                    t_tilde: overtaken.start - 1,
                }
            }
            _ => CrossingCase::Violated {
                reason: format!("{} reversals in the lead of spec {:?}", reversals, unprimed),
            },
        }
    };
    diagnostics.crossing_case = Some(case);
}
