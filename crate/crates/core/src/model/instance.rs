use num_traits::{One, Zero};

use crate::error::ModelError;
use crate::rational::{self, Rational};

use super::{NetworkSpec, Population, ProductSpec};

/// A validated, immutable market: population, product specification and
/// network. Cross-group similarity weights are precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    population: Population,
    product: ProductSpec,
    network: NetworkSpec,
    group_of: Vec<usize>,
    // cross[g][k]: weight a member of g puts on a distinct member of k.
    cross: Vec<Vec<Rational>>,
    one_minus_s_p: Rational,
}

impl Instance {
    /// Checks every invariant of the three inputs and builds the instance.
    pub fn validate(
        population: Population,
        product: ProductSpec,
        network: NetworkSpec,
    ) -> Result<Self, ModelError> {
        validate_population(&population)?;
        validate_product(&population, &product)?;
        validate_network(&population, &network)?;

        let group_count = population.group_count();
        let group_of = population
            .groups
            .iter()
            .enumerate()
            .flat_map(|(k, g)| std::iter::repeat_n(k, g.size))
            .collect();
        let cross = (0..group_count)
            .map(|from| {
                (0..group_count)
                    .map(|to| network.cross_weight(from, to))
                    .collect()
            })
            .collect();
        let one_minus_s_p = Rational::one() - &product.s_p;
        Ok(Self {
            population,
            product,
            network,
            group_of,
            cross,
            one_minus_s_p,
        })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn product(&self) -> &ProductSpec {
        &self.product
    }

    pub fn network(&self) -> &NetworkSpec {
        &self.network
    }

    pub fn size(&self) -> usize {
        self.group_of.len()
    }

    pub fn group_count(&self) -> usize {
        self.population.group_count()
    }

    pub fn group_of(&self, individual: usize) -> usize {
        self.group_of[individual]
    }

    pub fn aspiration_of(&self, individual: usize) -> &Rational {
        self.population.aspiration(self.group_of[individual])
    }

    pub(crate) fn cross_weight(&self, from_group: usize, to_group: usize) -> &Rational {
        &self.cross[from_group][to_group]
    }

    pub(crate) fn one_minus_s_p(&self) -> &Rational {
        &self.one_minus_s_p
    }

    /// Same population and network with a different product specification.
    pub fn with_product(&self, product: ProductSpec) -> Result<Self, ModelError> {
        Self::validate(self.population.clone(), product, self.network.clone())
    }

    /// Same population and product with a different network.
    pub fn with_network(&self, network: NetworkSpec) -> Result<Self, ModelError> {
        Self::validate(self.population.clone(), self.product.clone(), network)
    }

    /// `s_{i,j}`: 1 on the diagonal, otherwise the network's cross weight.
    pub fn similarity_weight(&self, i: usize, j: usize) -> Result<Rational, ModelError> {
        let n = self.size();
        for id in [i, j] {
            if id >= n {
                return Err(ModelError::IndividualOutOfRange {
                    individual: id,
                    population: n,
                });
            }
        }
        if i == j {
            return Ok(Rational::one());
        }
        Ok(self.cross[self.group_of[i]][self.group_of[j]].clone())
    }
}

fn validate_population(population: &Population) -> Result<(), ModelError> {
    if population.groups.is_empty() {
        return Err(ModelError::EmptyPopulation);
    }
    for (k, g) in population.groups.iter().enumerate() {
        if g.size == 0 {
            return Err(ModelError::EmptyGroup { group: k + 1 });
        }
    }
    for (k, pair) in population.groups.windows(2).enumerate() {
        if pair[1].aspiration >= pair[0].aspiration {
            return Err(ModelError::AspirationsNotDecreasing {
                group: k + 2,
                previous: k + 1,
            });
        }
    }
    Ok(())
}

fn validate_product(population: &Population, product: &ProductSpec) -> Result<(), ModelError> {
    if product.s_p <= Rational::zero() || product.s_p >= Rational::one() {
        return Err(ModelError::ProductSimilarityOutOfRange {
            value: rational::format(&product.s_p),
        });
    }
    let n = population.total();
    if product.v_h.len() != n {
        return Err(ModelError::PayoffCount {
            expected: n,
            found: product.v_h.len(),
        });
    }
    let h1 = population.aspiration(0);
    let below_second = population
        .groups
        .get(1)
        .is_none_or(|g| g.aspiration < product.v_l);
    if &product.v_l > h1 || !below_second {
        return Err(ModelError::IncumbentPayoffOutOfRange {
            value: rational::format(&product.v_l),
        });
    }
    for (i, v) in product.v_h.iter().enumerate() {
        if v < &product.v_l {
            return Err(ModelError::NewPayoffBelowIncumbent { individual: i });
        }
        if v < h1 {
            return Err(ModelError::NewPayoffBelowTopAspiration { individual: i });
        }
    }
    Ok(())
}

fn validate_network(population: &Population, network: &NetworkSpec) -> Result<(), ModelError> {
    let unit = |name: &str, v: &Rational| {
        if v < &Rational::zero() || v > &Rational::one() {
            Err(ModelError::NetworkSimilarityOutOfRange {
                name: name.to_string(),
                value: rational::format(v),
            })
        } else {
            Ok(())
        }
    };
    match network {
        NetworkSpec::Uniform { s } => unit("s", s),
        NetworkSpec::Homophily { s, gamma } => {
            unit("s", s)?;
            if s.is_zero() {
                return Err(ModelError::NetworkSimilarityOutOfRange {
                    name: "s".into(),
                    value: "0".into(),
                });
            }
            if gamma <= &Rational::zero() || gamma * s >= Rational::one() {
                return Err(ModelError::GammaOutOfRange {
                    value: rational::format(gamma),
                });
            }
            let first = population.groups[0].size;
            if population.groups.iter().any(|g| g.size != first) {
                return Err(ModelError::HomophilyUnequalGroups);
            }
            Ok(())
        }
        NetworkSpec::GroupTies { ties } => {
            if ties.len() != population.group_count() {
                return Err(ModelError::TieCount {
                    expected: population.group_count(),
                    found: ties.len(),
                });
            }
            for (k, t) in ties.iter().enumerate() {
                unit(&format!("s_{}", k + 1), t)?;
            }
            Ok(())
        }
    }
}
