//! Seeded random instances. The same settings and seed always give the
//! same instance.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{AspirationGroup, Instance, NetworkKind, NetworkSpec, Population, ProductSpec};
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSettings {
    #[serde(default = "default_groups")]
    pub groups: [usize; 2],
    #[serde(default = "default_sizes")]
    pub group_size: [usize; 2],
    /// Network families to draw from; empty means all three.
    #[serde(default)]
    pub networks: Vec<NetworkKind>,
    /// Largest premium of `v_H` over the top aspiration, in payoff units.
    #[serde(default = "default_premium")]
    pub max_premium: u32,
    /// Draw a separate `v_H` for every individual.
    #[serde(default)]
    pub heterogeneous_payoffs: bool,
}

fn default_groups() -> [usize; 2] {
    [1, 6]
}

fn default_sizes() -> [usize; 2] {
    [1, 8]
}

fn default_premium() -> u32 {
    120
}

impl Default for GeneratorSettings {
    fn default() -> Self {
        Self {
            groups: default_groups(),
            group_size: default_sizes(),
            networks: Vec::new(),
            max_premium: default_premium(),
            heterogeneous_payoffs: false,
        }
    }
}

impl GeneratorSettings {
    pub fn with_network(mut self, kind: NetworkKind) -> Self {
        self.networks = vec![kind];
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        let [g_lo, g_hi] = self.groups;
        let [n_lo, n_hi] = self.group_size;
        if g_lo == 0 || g_lo > g_hi {
            return Err(format!(
                "generator.groups must be 1 <= min <= max, got {g_lo}..{g_hi}"
            ));
        }
        if g_hi > 200 {
            return Err("generator.groups above 200 is not supported".into());
        }
        if n_lo == 0 || n_lo > n_hi {
            return Err(format!(
                "generator.group_size must be 1 <= min <= max, got {n_lo}..{n_hi}"
            ));
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(settings: &GeneratorSettings, seed: u64) -> Instance {
    generate_with(settings, &mut rng_for(seed))
}

/// Draws a valid instance. Aspirations sit on a half-unit grid in `[0, 100)`,
/// `v_L` on one of eight points in `(H_2, H_1]`, and every similarity on a
/// twentieths grid.
pub fn generate_with<R: Rng>(settings: &GeneratorSettings, rng: &mut R) -> Instance {
    let kinds = if settings.networks.is_empty() {
        vec![
            NetworkKind::Uniform,
            NetworkKind::Homophily,
            NetworkKind::GroupTies,
        ]
    } else {
        settings.networks.clone()
    };
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let g = rng.gen_range(settings.groups[0]..=settings.groups[1]);

    let mut halves: Vec<usize> = index::sample(rng, 200, g).into_vec();
    halves.sort_unstable_by(|a, b| b.cmp(a));
    let common_size = rng.gen_range(settings.group_size[0]..=settings.group_size[1]);
    let groups: Vec<AspirationGroup> = halves
        .iter()
        .map(|&h| {
            let size = if kind == NetworkKind::Homophily {
                common_size
            } else {
                rng.gen_range(settings.group_size[0]..=settings.group_size[1])
            };
            AspirationGroup::new(size, ratio(h as i64, 2))
        })
        .collect();
    let population = Population::new(groups);

    let h1 = population.aspiration(0).clone();
    let v_l = if g >= 2 {
        let h2 = population.aspiration(1);
        h2 + (&h1 - h2) * ratio(rng.gen_range(1..=8), 8)
    } else {
        &h1 - ratio(rng.gen_range(0..=16), 2)
    };
    let mut premium = || ratio(rng.gen_range(0..=2 * settings.max_premium as i64), 2);
    let n = population.total();
    let v_h: Vec<Rational> = if settings.heterogeneous_payoffs {
        (0..n).map(|_| &h1 + premium()).collect()
    } else {
        vec![&h1 + premium(); n]
    };
    let s_p = ratio(rng.gen_range(1..=19), 20);
    let product = ProductSpec::new(v_l, v_h, s_p);

    let network = match kind {
        NetworkKind::Uniform => NetworkSpec::Uniform {
            s: ratio(rng.gen_range(0..=20), 20),
        },
        NetworkKind::Homophily => {
            let s = ratio(rng.gen_range(1..=20), 20);
            let gamma = ratio(rng.gen_range(1..=9), 10) / &s;
            NetworkSpec::Homophily { s, gamma }
        }
        NetworkKind::GroupTies => NetworkSpec::GroupTies {
            ties: (0..g).map(|_| ratio(rng.gen_range(0..=20), 20)).collect(),
        },
    };
    Instance::validate(population, product, network)
        .expect("generated instance satisfies every invariant")
}

/// A second spec ranked weakly above `base` in every component, strictly in
/// at least one.
pub fn ranked_above<R: Rng>(base: &ProductSpec, rng: &mut R) -> ProductSpec {
    loop {
        let bump = rng.gen_range(0..=20);
        let per_individual = rng.gen_bool(0.3);
        let v_h: Vec<Rational> = if per_individual {
            base.v_h
                .iter()
                .map(|v| v + ratio(rng.gen_range(0..=40), 2))
                .collect()
        } else {
            base.v_h.iter().map(|v| v + int(bump)).collect()
        };
        let steps = (Rational::from_integer(20.into()) * &base.s_p).to_integer();
        let max_step: i64 = 19 - i64::try_from(steps).unwrap_or(19);
        let s_p = &base.s_p + ratio(rng.gen_range(0..=max_step), 20);
        let spec = ProductSpec::new(base.v_l.clone(), v_h, s_p);
        if spec != *base {
            return spec;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let s = GeneratorSettings::default();
        for seed in 0..20 {
            assert_eq!(generate(&s, seed), generate(&s, seed));
        }
        assert_ne!(generate(&s, 1), generate(&s, 2));
    }

    #[test]
    fn homophily_draws_equal_sizes() {
        let s = GeneratorSettings::default().with_network(NetworkKind::Homophily);
        for seed in 0..50 {
            let inst = generate(&s, seed);
            let first = inst.population().groups[0].size;
            assert!(inst.population().groups.iter().all(|g| g.size == first));
        }
    }

    #[test]
    fn ranked_specs_dominate_componentwise() {
        let mut rng = rng_for(7);
        for _ in 0..50 {
            let inst = generate_with(&GeneratorSettings::default(), &mut rng);
            let up = ranked_above(inst.product(), &mut rng);
            assert!(up.s_p >= inst.product().s_p && up.s_p < int(1));
            assert!(up.v_h.iter().zip(&inst.product().v_h).all(|(a, b)| a >= b));
            assert!(inst.with_product(up).is_ok());
        }
    }

    #[test]
    fn settings_are_checked() {
        let mut s = GeneratorSettings::default();
        assert!(s.validate().is_ok());
        s.groups = [3, 2];
        assert!(s.validate().is_err());
    }
}
