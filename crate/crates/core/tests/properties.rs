mod common;

use casediff::dynamics::{periods_until_adoption, simulate, threshold_sequence, Threshold};
use casediff::generate::{generate, GeneratorSettings};
use casediff::model::NetworkKind;
use casediff::oracle::oracle_simulate;
use casediff::rational::{self, int, ratio, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::same_until;

fn settings(networks: &[NetworkKind]) -> GeneratorSettings {
    GeneratorSettings {
        networks: networks.to_vec(),
        ..GeneratorSettings::default()
    }
}

fn f_curve(v_h: &Rational, s_p: &Rational, v_l: &Rational, h: &Rational) -> Rational {
    (v_h - h) / ((Rational::one() - s_p) * (v_l - h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_agrees_with_oracle(seed in any::<u64>()) {
        let inst = generate(&settings(&common::all_networks()), seed);
        let engine = simulate(&inst, 40, true).unwrap();
        prop_assert!(same_until(&engine, &oracle_simulate(&inst, 40).trace, 40));
    }

    #[test]
    fn fast_forward_changes_nothing(seed in any::<u64>()) {
        let inst = generate(&settings(&common::all_networks()), seed);
        prop_assert_eq!(simulate(&inst, 300, true).unwrap(), simulate(&inst, 300, false).unwrap());
    }

    #[test]
    fn cumulative_adoption_never_falls(seed in any::<u64>()) {
        let inst = generate(&settings(&common::all_networks()), seed);
        let trace = simulate(&inst, 200, true).unwrap();
        let counts: Vec<usize> = (1..=200).map(|t| trace.cumulative_at(t)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn thresholds_never_rise(seed in any::<u64>()) {
        let inst = generate(&settings(&[NetworkKind::Uniform, NetworkKind::Homophily]), seed);
        let trace = simulate(&inst, 100, true).unwrap();
        let h = threshold_sequence(&trace, &inst).unwrap();
        prop_assert!(h.values.windows(2).all(|w| w[1] <= w[0]));
        // Everyone strictly above the threshold has adopted by then.
        for t in 1..=100u64 {
            let cut = h.at(t).unwrap();
            for i in 0..inst.size() {
                if cut.admits(inst.aspiration_of(i)) {
                    prop_assert!(trace.adoption_period(i).is_some_and(|p| p <= t), "t={} i={}", t, i);
                }
            }
        }
    }

    #[test]
    fn stall_length_matches_brute_force(dn in 0i64..400, dd in 1i64..30, gn in 1i64..60, gd in 1i64..30) {
        let (deficit, gain) = (ratio(dn, dd), ratio(gn, gd));
        let mut k = 1u64;
        while -&deficit + &gain * int(k as i64) <= Rational::zero() {
            k += 1;
        }
        prop_assert_eq!(periods_until_adoption(&deficit, &gain), Some(k));
        prop_assert_eq!(periods_until_adoption(&deficit, &Rational::zero()), None);
    }

    #[test]
    fn f_curves_cross_at_most_once(
        v_l in 50i64..100,
        premium_a in 1i64..200,
        premium_b in 1i64..200,
        sp_a in 1i64..20,
        sp_b in 1i64..20,
    ) {
        let v_l = int(v_l);
        let (v_a, v_b) = (&v_l + int(premium_a), &v_l + int(premium_b));
        let (s_a, s_b) = (ratio(sp_a, 20), ratio(sp_b, 20));
        // Every quarter unit from v_L - 200 up to just below v_L.
        let grid: Vec<Rational> = (1..=800).rev().map(|q| &v_l - ratio(q, 4)).collect();
        let signs: Vec<i8> = grid
            .iter()
            .map(|h| {
                let d = f_curve(&v_a, &s_a, &v_l, h) - f_curve(&v_b, &s_b, &v_l, h);
                if d > Rational::zero() { 1 } else if d < Rational::zero() { -1 } else { 0 }
            })
            .filter(|&s| s != 0)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        prop_assert!(changes <= 1, "{} sign changes", changes);
    }

    #[test]
    fn rationals_survive_text(n in -1_000_000i64..1_000_000, d in 1i64..100_000) {
        let value = ratio(n, d);
        prop_assert_eq!(rational::parse(&rational::format(&value)).unwrap(), value.clone());
        let t = Threshold::Finite(value);
        prop_assert!(Threshold::NegInfinity < t);
    }
}
