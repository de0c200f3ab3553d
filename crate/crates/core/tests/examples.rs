//! Worked examples, each checked against the brute-force oracle rather than
//! against numbers produced by the engine under test.

mod common;

use casediff::comparative::{compare_instances, homophily_sweep, network_compare, Verdict};
use casediff::dynamics::{
    coverage_check, fast_forward_stall, simulate, threshold_sequence, StallOutcome, Threshold,
};
use casediff::fixtures;
use casediff::model::{AspirationGroup, EvalMode, NetworkSpec, Population, Product, ProductSpec};
use casediff::oracle::{ledger_from_choices, oracle_evaluate, oracle_simulate};
use casediff::rational::{int, ratio};
use casediff::{Instance, MarketState};

use common::{contained, same_until};

fn two_groups(h2: i64, top: usize, bottom: usize, v_h: i64) -> Instance {
    let pop = Population::new(vec![
        AspirationGroup::new(top, int(95)),
        AspirationGroup::new(bottom, int(h2)),
    ]);
    let n = top + bottom;
    Instance::validate(
        pop,
        ProductSpec::constant(int(90), int(v_h), ratio(1, 2), n),
        NetworkSpec::Uniform { s: ratio(1, 2) },
    )
    .unwrap()
}

#[test]
fn instance_a_evaluations_by_literal_summation() {
    let a = fixtures::instance_a();
    let incumbent = vec![Product::Incumbent; 10];
    let ledger = ledger_from_choices(&a, std::slice::from_ref(&incumbent));
    assert_eq!(
        oracle_evaluate(0, Product::Incumbent, &ledger, &a, EvalMode::Sum),
        ratio(-55, 2)
    );
    assert_eq!(
        oracle_evaluate(0, Product::New, &ledger, &a, EvalMode::Sum),
        ratio(-55, 4)
    );

    let mut period_one = incumbent.clone();
    period_one[0] = Product::New;
    period_one[1] = Product::New;
    let ledger = ledger_from_choices(&a, &[incumbent, period_one]);
    assert_eq!(
        oracle_evaluate(5, Product::Incumbent, &ledger, &a, EvalMode::Sum),
        int(400)
    );
    assert_eq!(
        oracle_evaluate(5, Product::New, &ledger, &a, EvalMode::Sum),
        int(250)
    );
    // The engine's aggregated statistics give the same numbers.
    let state = a.step(&a.step(&MarketState::initial(&a)).0).0;
    assert_eq!(
        a.evaluate(&state, 5, Product::Incumbent, EvalMode::Sum),
        int(400)
    );
    assert_eq!(a.evaluate(&state, 5, Product::New, EvalMode::Sum), int(250));
}

#[test]
fn reference_traces_match_oracle() {
    for (inst, horizon) in [
        (fixtures::instance_a(), 100),
        (fixtures::instance_b(), 100),
        (fixtures::instance_c(), 10),
    ] {
        let engine = simulate(&inst, horizon, true).unwrap();
        let oracle = oracle_simulate(&inst, horizon);
        assert!(same_until(&engine, &oracle.trace, horizon));
    }
    let b = oracle_simulate(&fixtures::instance_b(), 100).trace;
    assert_eq!(
        [b.cumulative_at(1), b.cumulative_at(2), b.cumulative_at(3)],
        [2, 2, 10]
    );
    let a = simulate(&fixtures::instance_a(), 100, true).unwrap();
    assert_eq!(a.terminal().g_bar, Some(2));
    assert!((1..=100).all(|t| a.cumulative_at(t) == 2));
    assert_eq!(
        oracle_simulate(&fixtures::instance_c(), 10)
            .trace
            .cumulative_at(10),
        0
    );
}

#[test]
fn second_threshold_of_instance_a_is_87_5() {
    let a = fixtures::instance_a();
    let h = threshold_sequence(&simulate(&a, 5, true).unwrap(), &a).unwrap();
    assert_eq!(h.at(1), Some(&Threshold::Finite(int(90))));
    assert_eq!(h.at(2), Some(&Threshold::Finite(ratio(175, 2))));
    // A bottom group just above the cut adopts at t = 2, one just below does not.
    assert_eq!(
        oracle_simulate(&two_groups(88, 2, 8, 100), 2)
            .trace
            .group_adoption_period(1),
        Some(2)
    );
    assert_eq!(
        oracle_simulate(&two_groups(87, 2, 8, 100), 2)
            .trace
            .group_adoption_period(1),
        None
    );
}

fn state_at(instance: &Instance, period: u64) -> MarketState {
    let mut state = MarketState::initial(instance);
    while state.period() < period {
        state = instance.step(&state).0;
    }
    state
}

#[test]
fn fast_forward_of_instance_b_lands_on_oracle_period() {
    let b = fixtures::instance_b();
    // Period 2 decided with no new adopters: the market has stalled.
    let state = state_at(&b, 3);
    assert_eq!(
        fast_forward_stall(&b, &state),
        Ok(StallOutcome::Adoption {
            period: 3,
            groups: vec![1]
        })
    );
    assert_eq!(
        oracle_simulate(&b, 3).trace.group_adoption_period(1),
        Some(3)
    );
    let a = fixtures::instance_a();
    let state = state_at(&a, 3);
    assert_eq!(
        fast_forward_stall(&a, &state),
        Ok(StallOutcome::NoFurtherAdoption)
    );
}

#[test]
fn coverage_flip_between_80_and_86() {
    for (h2, full) in [(80, false), (86, true)] {
        let inst = two_groups(h2, 2, 8, 100);
        assert_eq!(coverage_check(&inst).unwrap().full_adoption, full);
        let run = oracle_simulate(&inst, 200).trace;
        assert_eq!(run.cumulative_at(200) == 10, full, "H_2 = {h2}");
    }
}

#[test]
fn raising_payoffs_by_ten_dominates() {
    let a = fixtures::instance_a();
    let mut up = a.product().clone();
    up.v_h.iter_mut().for_each(|v| *v += int(10));
    let b = a.with_product(up).unwrap();
    let report = compare_instances(&a, &b, 1000).unwrap();
    assert_eq!(report.verdict, Verdict::BDominatesA);
    let (oa, ob) = (
        oracle_simulate(&a, 200).trace,
        oracle_simulate(&b, 200).trace,
    );
    assert!(contained(&oa, &ob, 200));
    assert_eq!(
        compare_instances(&a, &a, 100).unwrap().verdict,
        Verdict::Equal
    );
}

#[test]
fn radical_against_incremental_crosses_once() {
    let population = Population::new(vec![
        AspirationGroup::new(1, int(105)),
        AspirationGroup::new(4, int(97)),
        AspirationGroup::new(6, int(61)),
        AspirationGroup::new(2, int(13)),
    ]);
    let network = NetworkSpec::Uniform { s: ratio(1, 4) };
    let radical = Instance::validate(
        population.clone(),
        ProductSpec::constant(int(101), int(200), ratio(1, 5), 13),
        network.clone(),
    )
    .unwrap();
    let incremental = Instance::validate(
        population,
        ProductSpec::constant(int(101), int(120), ratio(4, 5), 13),
        network,
    )
    .unwrap();
    let report = compare_instances(&radical, &incremental, 1000).unwrap();
    assert_eq!(report.diagnostics.lead_condition, Some(true));
    let Verdict::SingleCross { t_tilde, .. } = report.verdict else {
        panic!("expected a single crossing, got {:?}", report.verdict)
    };
    // The oracle runs show the radical spec weakly ahead through t_tilde and behind right after.
    let (r, i) = (
        oracle_simulate(&radical, 20).trace,
        oracle_simulate(&incremental, 20).trace,
    );
    assert!((2..=t_tilde).all(|t| r.cumulative_at(t) >= i.cumulative_at(t)));
    assert!(r.cumulative_at(t_tilde + 1) < i.cumulative_at(t_tilde + 1));
    assert_eq!(t_tilde, 4);
}

#[test]
fn homophily_examples() {
    let equal_b = Instance::validate(
        Population::new(vec![
            AspirationGroup::new(5, int(95)),
            AspirationGroup::new(5, int(50)),
        ]),
        ProductSpec::constant(int(90), int(100), ratio(1, 2), 10),
        NetworkSpec::Homophily {
            s: ratio(1, 5),
            gamma: int(1),
        },
    )
    .unwrap();
    let runs = homophily_sweep(&equal_b, &[ratio(1, 2), int(1), ratio(3, 2)], 100).unwrap();
    let second: Vec<Option<u64>> = runs
        .iter()
        .map(|r| r.trace.group_adoption_period(1))
        .collect();
    assert_eq!(second, vec![Some(4), Some(6), Some(12)]);
    for run in &runs {
        let inst = equal_b
            .with_network(NetworkSpec::Homophily {
                s: ratio(1, 5),
                gamma: run.gamma.clone(),
            })
            .unwrap();
        assert!(same_until(
            &run.trace,
            &oracle_simulate(&inst, 20).trace,
            20
        ));
    }

    let uniform = equal_b
        .with_network(NetworkSpec::Uniform { s: ratio(1, 5) })
        .unwrap();
    assert_eq!(
        simulate(&uniform, 100, true).unwrap(),
        simulate(&equal_b, 100, true).unwrap()
    );

    let single = Instance::validate(
        Population::new(vec![AspirationGroup::new(6, int(95))]),
        ProductSpec::constant(int(90), int(100), ratio(1, 2), 6),
        NetworkSpec::Homophily {
            s: ratio(1, 5),
            gamma: int(1),
        },
    )
    .unwrap();
    let base = oracle_simulate(&single, 10).trace;
    for gamma in [ratio(1, 2), ratio(3, 2), ratio(4, 1)] {
        let inst = single
            .with_network(NetworkSpec::Homophily {
                s: ratio(1, 5),
                gamma,
            })
            .unwrap();
        assert_eq!(
            oracle_simulate(&inst, 10).trace.adoption_periods(),
            base.adoption_periods()
        );
    }
}

#[test]
fn group_tie_examples() {
    let b = fixtures::instance_b();
    let ties = |v: [(i64, i64); 2]| NetworkSpec::GroupTies {
        ties: v.iter().map(|&(n, d)| ratio(n, d)).collect(),
    };
    let base = ties([(2, 5), (2, 5)]);
    let same = network_compare(&b, &base, &base, 100).unwrap();
    assert_eq!(same.trace_a, same.trace_b);

    let doubled = network_compare(&b, &base, &ties([(4, 5), (4, 5)]), 100).unwrap();
    assert!(doubled.asserted && doubled.containment);
    let oa = oracle_simulate(&b.with_network(base.clone()).unwrap(), 50).trace;
    let ob = oracle_simulate(&b.with_network(ties([(4, 5), (4, 5)])).unwrap(), 50).trace;
    assert!(contained(&oa, &ob, 50));

    let half = ties([(1, 2), (1, 2)]);
    let shifted = ties([(3, 5), (19, 40)]);
    let cmp = network_compare(&b, &half, &shifted, 100).unwrap();
    assert!(cmp.containment);
    let oa = oracle_simulate(&b.with_network(half).unwrap(), 50).trace;
    let ob = oracle_simulate(&b.with_network(shifted).unwrap(), 50).trace;
    assert!(contained(&oa, &ob, 50));
}
