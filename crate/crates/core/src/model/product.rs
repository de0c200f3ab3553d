use crate::rational::Rational;

use super::Population;

/// Incumbent payoff, realised new-product payoff per individual, and the
/// similarity of the incumbent as seen from the new product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    pub v_l: Rational,
    pub v_h: Vec<Rational>,
    pub s_p: Rational,
}

impl ProductSpec {
    pub fn new(v_l: Rational, v_h: Vec<Rational>, s_p: Rational) -> Self {
        Self { v_l, v_h, s_p }
    }

    /// Same new-product payoff for all `n` individuals.
    pub fn constant(v_l: Rational, v_h: Rational, s_p: Rational, n: usize) -> Self {
        Self {
            v_l,
            v_h: vec![v_h; n],
            s_p,
        }
    }

    /// One payoff per aspiration group, expanded to individuals.
    pub fn per_group(
        v_l: Rational,
        group_payoffs: &[Rational],
        s_p: Rational,
        population: &Population,
    ) -> Self {
        let v_h = population
            .groups
            .iter()
            .zip(group_payoffs)
            .flat_map(|(g, v)| std::iter::repeat_n(v.clone(), g.size))
            .collect();
        Self { v_l, v_h, s_p }
    }

    /// `Some(v)` when every individual gets the same payoff.
    pub fn constant_payoff(&self) -> Option<&Rational> {
        let first = self.v_h.first()?;
        self.v_h.iter().all(|v| v == first).then_some(first)
    }

    /// Largest minus smallest new-product payoff.
    pub fn payoff_spread(&self) -> Rational {
        let max = self.v_h.iter().max();
        let min = self.v_h.iter().min();
        match (max, min) {
            (Some(a), Some(b)) => a - b,
            _ => Rational::default(),
        }
    }
}
