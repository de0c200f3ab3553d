use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::DynamicsError;
use crate::model::{Instance, NetworkSpec};
use crate::rational::{from_u64, Exact, Rational};

/// Which individuals enter the average new-product payoff `v_{>H}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AboveReading {
    /// Payoffs of individuals whose aspiration is strictly above `H`.
    #[default]
    AspirationAbove,
    /// Payoffs strictly above `H`, summed over everyone, divided by `F(H)`.
    PayoffAbove,
}

/// Numerator of the left-hand side of the coverage inequality.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapNumerator {
    /// `v_{>H} - H`; the form consistent with the adoption condition.
    #[default]
    Aspiration,
    /// `v_{>H} - v_L`; kept for inspecting the alternative statement.
    Incumbent,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoverageOptions {
    pub above: AboveReading,
    pub numerator: GapNumerator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    /// 1-based.
    pub group: usize,
    pub aspiration: Exact,
    /// `F(H_k)`: individuals with aspiration strictly above `H_k`.
    pub above_count: usize,
    pub v_above: Option<Exact>,
    pub lhs: Option<Exact>,
    /// `None` is `+inf` (no cross-individual weight).
    pub rhs: Option<Exact>,
    pub never_adopts: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
    /// 1-based index of the first group that never adopts; `None` on full adoption.
    pub g_bar: Option<usize>,
    pub full_adoption: bool,
}

impl CoverageReport {
    pub fn eventual_adopters(&self, instance: &Instance) -> usize {
        match self.g_bar {
            None => instance.size(),
            Some(g) => instance.population().groups[..g - 1]
                .iter()
                .map(|g| g.size)
                .sum(),
        }
    }
}

pub fn coverage_check(instance: &Instance) -> Result<CoverageReport, DynamicsError> {
    coverage_check_with(instance, CoverageOptions::default())
}

/// Long-run adoption from the group-by-group inequality. Group `k >= 2`
/// never adopts once groups `1..k` have, iff its per-period margin gain is
/// not positive, which rearranges to `LHS <= RHS`.
pub fn coverage_check_with(
    instance: &Instance,
    options: CoverageOptions,
) -> Result<CoverageReport, DynamicsError> {
    let NetworkSpec::Uniform { s } = instance.network() else {
        return Err(DynamicsError::NonUniformNetwork);
    };
    let population = instance.population();
    let product = instance.product();
    let n = instance.size();

    let mut rows = Vec::with_capacity(population.group_count());
    let mut g_bar = None;
    let mut above_count = 0usize;
    let mut above_payoff = Rational::zero();
    for (k, group) in population.groups.iter().enumerate() {
        let h = &group.aspiration;
        let mut row = CoverageRow {
            group: k + 1,
            aspiration: Exact(h.clone()),
            above_count,
            v_above: None,
            lhs: None,
            rhs: None,
            never_adopts: false,
        };
        if k == 0 {
            // With nobody ahead, the top group moves iff its aspiration beats v_L.
            row.never_adopts = h <= &product.v_l;
        } else {
            let f = from_u64(above_count as u64);
            let v_above = match options.above {
                AboveReading::AspirationAbove => &above_payoff / &f,
                AboveReading::PayoffAbove => {
                    product
                        .v_h
                        .iter()
                        .filter(|v| *v > h)
                        .fold(Rational::zero(), |acc, v| acc + v)
                        / &f
                }
            };
            let numerator = match options.numerator {
                GapNumerator::Aspiration => &v_above - h,
                GapNumerator::Incumbent => &v_above - &product.v_l,
            };
            let lhs = numerator / (&product.v_l - h);
            let rhs = (!s.is_zero()).then(|| {
                let others = from_u64((n - above_count - 1) as u64);
                instance.one_minus_s_p() * (s * others + Rational::one()) / (s * &f)
            });
            row.never_adopts = rhs.as_ref().is_none_or(|r| &lhs <= r);
            row.v_above = Some(Exact(v_above));
            row.lhs = Some(Exact(lhs));
            row.rhs = rhs.map(Exact);
        }
        if row.never_adopts && g_bar.is_none() {
            g_bar = Some(k + 1);
        }
        if g_bar.is_some() {
            row.never_adopts = true;
        }
        above_count += group.size;
        for i in population.members(k) {
            above_payoff += &product.v_h[i];
        }
        rows.push(row);
    }
    Ok(CoverageReport {
        full_adoption: g_bar.is_none(),
        rows,
        g_bar,
    })
}

/// `F(H)` for an arbitrary aspiration level.
pub fn above_count(instance: &Instance, h: &Rational) -> usize {
    instance.population().count_above(h)
}

/// `v_{>H}` under the default reading; `None` when nobody is above `H`.
pub fn average_payoff_above(instance: &Instance, h: &Rational) -> Option<Rational> {
    let ids: Vec<usize> = (0..instance.size())
        .filter(|&i| instance.aspiration_of(i) > h)
        .collect();
    if ids.is_empty() {
        return None;
    }
    let total = ids
        .iter()
        .fold(Rational::zero(), |acc, &i| acc + &instance.product().v_h[i]);
    Some(total / from_u64(ids.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{AspirationGroup, Population, ProductSpec};
    use crate::rational::{int, ratio};

    #[test]
    fn instance_a_boundary_values() {
        let report = coverage_check(&fixtures::instance_a()).unwrap();
        let row = &report.rows[1];
        assert_eq!(row.lhs, Some(Exact(ratio(5, 4))));
        assert_eq!(row.rhs, Some(Exact(ratio(9, 4))));
        assert_eq!(report.g_bar, Some(2));
        assert!(!report.rows[0].never_adopts);
    }

    #[test]
    fn instance_b_adopts_fully() {
        let report = coverage_check(&fixtures::instance_b()).unwrap();
        assert_eq!(report.rows[1].lhs, Some(Exact(ratio(15, 4))));
        assert!(report.full_adoption);
        assert_eq!(report.eventual_adopters(&fixtures::instance_b()), 10);
    }

    #[test]
    fn top_group_at_incumbent_payoff_never_moves() {
        let report = coverage_check(&fixtures::instance_c()).unwrap();
        assert_eq!(report.g_bar, Some(1));
        assert_eq!(report.eventual_adopters(&fixtures::instance_c()), 0);
    }

    #[test]
    fn raising_group_two_aspiration_flips_at_86() {
        let with_h2 = |h: i64| {
            let pop = Population::new(vec![
                AspirationGroup::new(2, int(95)),
                AspirationGroup::new(8, int(h)),
            ]);
            let product = ProductSpec::constant(int(90), int(100), ratio(1, 2), 10);
            Instance::validate(pop, product, NetworkSpec::Uniform { s: ratio(1, 2) }).unwrap()
        };
        assert_eq!(coverage_check(&with_h2(80)).unwrap().g_bar, Some(2));
        let r86 = coverage_check(&with_h2(86)).unwrap();
        assert_eq!(r86.rows[1].lhs, Some(Exact(ratio(7, 2))));
        assert!(r86.full_adoption);
    }

    #[test]
    fn alternative_readings_are_selectable() {
        let a = fixtures::instance_a();
        let body = coverage_check_with(
            &a,
            CoverageOptions {
                above: AboveReading::AspirationAbove,
                numerator: GapNumerator::Incumbent,
            },
        )
        .unwrap();
        assert_eq!(body.rows[1].lhs, Some(Exact(ratio(1, 4))));
        let payoff = coverage_check_with(
            &a,
            CoverageOptions {
                above: AboveReading::PayoffAbove,
                numerator: GapNumerator::Aspiration,
            },
        )
        .unwrap();
        assert_eq!(payoff.rows[1].v_above, Some(Exact(int(500))));
    }

    #[test]
    fn step_function_helpers() {
        let a = fixtures::instance_a();
        assert_eq!(above_count(&a, &int(60)), 2);
        assert_eq!(above_count(&a, &int(95)), 0);
        assert_eq!(above_count(&a, &int(10)), 10);
        assert_eq!(average_payoff_above(&a, &int(60)), Some(int(100)));
        assert_eq!(average_payoff_above(&a, &int(95)), None);
    }

    #[test]
    fn non_uniform_is_rejected() {
        let a = fixtures::instance_a()
            .with_network(NetworkSpec::GroupTies {
                ties: vec![int(0), int(0)],
            })
            .unwrap();
        assert_eq!(coverage_check(&a), Err(DynamicsError::NonUniformNetwork));
    }
}
