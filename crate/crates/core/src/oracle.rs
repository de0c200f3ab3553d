//! Brute-force reference engine. Keeps every case explicitly and sums the
//! evaluation case by case; shares nothing with the aggregated statistics
//! of [`crate::model`]. Quadratic per period by design.
//!
//! Values are kept as integers over fixed per-instance scales so the inner
//! loop stays exact without big-number allocation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::dynamics::{DiffusionTrace, Terminal};
use crate::model::{EvalMode, Instance, NetworkSpec, Product};
use crate::rational::Rational;

/// One consumption experience.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub consumer: usize,
    pub product: Product,
    pub period: u64,
    /// Payoff times the ledger's payoff scale.
    scaled_payoff: i128,
}

/// The full case set `C_t`: one case per individual per elapsed period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseLedger {
    payoff_scale: i128,
    cases: Vec<Case>,
}

impl CaseLedger {
    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn payoff(&self, case: &Case) -> Rational {
        Rational::new(
            BigInt::from(case.scaled_payoff),
            BigInt::from(self.payoff_scale),
        )
    }

    /// Records one period of consumption; `choices[i]` is what `i` consumed.
    fn record(&mut self, scales: &Scales, period: u64, choices: &[Product]) {
        for (consumer, &product) in choices.iter().enumerate() {
            let scaled_payoff = match product {
                Product::Incumbent => scales.v_l,
                Product::New => scales.v_h[consumer],
            };
            self.cases.push(Case {
                consumer,
                product,
                period,
                scaled_payoff,
            });
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub trace: DiffusionTrace,
    /// `(period, individual)` for every past adopter who chose the incumbent again.
    pub switchbacks: Vec<(u64, usize)>,
    pub ledger: CaseLedger,
}

fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(value: &Rational, scale: &BigInt) -> i128 {
    (value * Rational::from_integer(scale.clone()))
        .to_integer()
        .to_i128()
        .expect("oracle scale overflow")
}

/// Integer images of every model quantity.
struct Scales {
    payoff: i128,
    v_l: i128,
    v_h: Vec<i128>,
    aspiration: Vec<i128>,
    weight: i128,
    weights: Vec<Vec<i128>>,
    // s_{p,p} and s_{new,incumbent} over a common denominator.
    product_same: i128,
    product_cross: i128,
}

impl Scales {
    fn new(instance: &Instance) -> Self {
        let population = instance.population();
        let product = instance.product();
        let n = instance.size();
        let mut group = Vec::with_capacity(n);
        for (k, g) in population.groups.iter().enumerate() {
            group.extend(std::iter::repeat_n(k, g.size));
        }

        let mut payoffs: Vec<&Rational> = vec![&product.v_l];
        payoffs.extend(product.v_h.iter());
        payoffs.extend(population.groups.iter().map(|g| &g.aspiration));
        let payoff = lcm_of_denominators(payoffs);

        let similarity = |i: usize, j: usize| -> Rational {
            if i == j {
                return Rational::one();
            }
            match instance.network() {
                NetworkSpec::Uniform { s } => s.clone(),
                NetworkSpec::Homophily { s, gamma } if group[i] == group[j] => gamma * s,
                NetworkSpec::Homophily { s, .. } => s.clone(),
                NetworkSpec::GroupTies { ties } => ties[group[j]].clone(),
            }
        };
        let exact: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| similarity(i, j)).collect())
            .collect();
        let weight = lcm_of_denominators(exact.iter().flatten());

        let s_p = &product.s_p;
        Self {
            payoff: payoff.to_i128().expect("oracle scale overflow"),
            v_l: scaled(&product.v_l, &payoff),
            v_h: product.v_h.iter().map(|v| scaled(v, &payoff)).collect(),
            aspiration: group
                .iter()
                .map(|&k| scaled(population.aspiration(k), &payoff))
                .collect(),
            weight: weight.to_i128().expect("oracle scale overflow"),
            weights: exact
                .iter()
                .map(|row| row.iter().map(|w| scaled(w, &weight)).collect())
                .collect(),
            product_same: s_p.denom().to_i128().expect("oracle scale overflow"),
            product_cross: s_p.numer().to_i128().expect("oracle scale overflow"),
        }
    }

    fn new_ledger(&self) -> CaseLedger {
        CaseLedger {
            payoff_scale: self.payoff,
            cases: Vec::new(),
        }
    }

    /// Scaled `(U(incumbent), U(new), similarity mass)` for individual `i`.
    fn sums(&self, i: usize, ledger: &CaseLedger) -> (i128, i128, i128) {
        let h = self.aspiration[i];
        let row = &self.weights[i];
        let (mut incumbent, mut new, mut mass) = (0i128, 0i128, 0i128);
        for case in &ledger.cases {
            let w = row[case.consumer];
            let term = w * (case.scaled_payoff - h);
            mass += w;
            match case.product {
                // s_{c,c} = 1 and s_{n,c} = s_p.
                Product::Incumbent => {
                    incumbent += term * self.product_same;
                    new += term * self.product_cross;
                }
                // s_{c,n} = 0 and s_{n,n} = 1.
                Product::New => new += term * self.product_same,
            }
        }
        (incumbent, new, mass)
    }

    fn to_rational(&self, value: i128) -> Rational {
        let denom =
            BigInt::from(self.payoff) * BigInt::from(self.weight) * BigInt::from(self.product_same);
        Rational::new(BigInt::from(value), denom)
    }
}

/// `U_i(p)` by literal summation over the ledger.
pub fn oracle_evaluate(
    i: usize,
    product: Product,
    ledger: &CaseLedger,
    instance: &Instance,
    mode: EvalMode,
) -> Rational {
    let scales = Scales::new(instance);
    assert_eq!(
        ledger.payoff_scale, scales.payoff,
        "ledger built for another instance"
    );
    let (incumbent, new, mass) = scales.sums(i, ledger);
    let sum = scales.to_rational(match product {
        Product::Incumbent => incumbent,
        Product::New => new,
    });
    match mode {
        EvalMode::Sum => sum,
        EvalMode::Average if mass == 0 => Rational::zero(),
        EvalMode::Average => sum / Rational::new(BigInt::from(mass), BigInt::from(scales.weight)),
    }
}

/// Empty ledger for `instance`.
pub fn empty_ledger(instance: &Instance) -> CaseLedger {
    Scales::new(instance).new_ledger()
}

/// Ledger after the given per-period choices, starting from period 0.
pub fn ledger_from_choices(instance: &Instance, periods: &[Vec<Product>]) -> CaseLedger {
    let scales = Scales::new(instance);
    let mut ledger = scales.new_ledger();
    for (t, choices) in periods.iter().enumerate() {
        ledger.record(&scales, t as u64, choices);
    }
    ledger
}

/// Naive run: every individual, adopters included, picks the product with
/// the strictly higher evaluation every period from 1 to `horizon`.
pub fn oracle_simulate(instance: &Instance, horizon: u64) -> OracleRun {
    let scales = Scales::new(instance);
    let n = instance.size();
    let mut ledger = scales.new_ledger();
    let mut adoption: Vec<Option<u64>> = vec![None; n];
    let mut switchbacks = Vec::new();
    ledger.record(&scales, 0, &vec![Product::Incumbent; n]);
    for t in 1..=horizon {
        let choices: Vec<Product> = (0..n)
            .map(|i| {
                let (incumbent, new, _) = scales.sums(i, &ledger);
                if new > incumbent {
                    Product::New
                } else {
                    Product::Incumbent
                }
            })
            .collect();
        for (i, choice) in choices.iter().enumerate() {
            match (choice, adoption[i]) {
                (Product::New, None) => adoption[i] = Some(t),
                (Product::Incumbent, Some(_)) => switchbacks.push((t, i)),
                _ => {}
            }
        }
        ledger.record(&scales, t, &choices);
    }
    let adopters = adoption.iter().filter(|a| a.is_some()).count();
    let terminal = Terminal {
        asymptotic_adopters: adopters,
        g_bar: None,
        stall_period: None,
        certified: false,
    };
    let trace =
        DiffusionTrace::from_adoption_periods(horizon, instance.population(), adoption, terminal);
    OracleRun {
        trace,
        switchbacks,
        ledger,
    }
}
