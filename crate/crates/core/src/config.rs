//! TOML run configuration.
//!
//! ```toml
//! [population]
//! groups = [{ size = 2, aspiration = 95 }, { size = 8, aspiration = 50 }]
//!
//! [product]
//! v_l = 90
//! v_h = 100          # or one value per group: [100, 120]
//! s_p = "1/2"        # decimals, fractions or integers
//!
//! [network]
//! kind = "uniform"   # uniform | homophily | group_ties
//! s = 0.5
//!
//! [run]
//! horizon = 1000
//! ```
//!
//! Per-individual payoffs go in `v_h_individual`. A `[generator]` section
//! replaces the three instance sections.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::generate::{self, GeneratorSettings};
use crate::model::{
    AspirationGroup, EvalMode, Instance, NetworkKind, NetworkSpec, Population, ProductSpec,
};
use crate::rational::{Exact, Rational};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid instance: {0}")]
    Model(#[from] ModelError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    population: Option<RawPopulation>,
    product: Option<RawProduct>,
    network: Option<RawNetwork>,
    #[serde(default)]
    run: RawRun,
    output: Option<RawOutput>,
    sweep: Option<RawSweep>,
    generator: Option<RawGenerator>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPopulation {
    groups: Vec<RawGroup>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    size: usize,
    aspiration: Exact,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPayoff {
    Single(Exact),
    PerGroup(Vec<Exact>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProduct {
    v_l: Exact,
    v_h: Option<RawPayoff>,
    v_h_individual: Option<Vec<Exact>>,
    s_p: Exact,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    kind: NetworkKind,
    s: Option<Exact>,
    gamma: Option<Exact>,
    ties: Option<Vec<Exact>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    horizon: Option<u64>,
    fast_forward: Option<bool>,
    mode: Option<EvalMode>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    values: Vec<Exact>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    seed: Option<u64>,
    groups: Option<[usize; 2]>,
    group_size: Option<[usize; 2]>,
    networks: Option<Vec<NetworkKind>>,
    max_premium: Option<u32>,
    heterogeneous_payoffs: Option<bool>,
}

/// Where the instance comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum InstanceSource {
    Explicit(Instance),
    Generated {
        settings: GeneratorSettings,
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSettings {
    pub horizon: u64,
    pub fast_forward: bool,
    pub mode: EvalMode,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            horizon: 1000,
            fast_forward: true,
            mode: EvalMode::Sum,
        }
    }
}

/// Numeric parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Gamma,
    S,
    SP,
    /// Every individual's `v_H`.
    VH,
    /// `v_H` of one group (0-based).
    GroupVH(usize),
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "gamma" => Ok(SweepAxis::Gamma),
            "s" => Ok(SweepAxis::S),
            "s_p" => Ok(SweepAxis::SP),
            "v_h" => Ok(SweepAxis::VH),
            other => match other.strip_prefix("v_h.").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Ok(SweepAxis::GroupVH(k - 1)),
                _ => Err(format!(
                    "unknown sweep axis `{other}` (expected gamma, s, s_p, v_h or v_h.<group>)"
                )),
            },
        }
    }
}

impl SweepAxis {
    /// `base` with this parameter set to `value`.
    pub fn apply(&self, base: &Instance, value: &Rational) -> Result<Instance, ConfigError> {
        let swept = match self {
            SweepAxis::Gamma => {
                let s = match base.network() {
                    NetworkSpec::Uniform { s } | NetworkSpec::Homophily { s, .. } => s.clone(),
                    NetworkSpec::GroupTies { .. } => {
                        return Err(ConfigError::Invalid(
                            "sweep axis gamma needs a uniform or homophily network".into(),
                        ))
                    }
                };
                base.with_network(NetworkSpec::Homophily {
                    s,
                    gamma: value.clone(),
                })
            }
            SweepAxis::S => match base.network() {
                NetworkSpec::Uniform { .. } => {
                    base.with_network(NetworkSpec::Uniform { s: value.clone() })
                }
                NetworkSpec::Homophily { gamma, .. } => base.with_network(NetworkSpec::Homophily {
                    s: value.clone(),
                    gamma: gamma.clone(),
                }),
                NetworkSpec::GroupTies { ties } => base.with_network(NetworkSpec::GroupTies {
                    ties: vec![value.clone(); ties.len()],
                }),
            },
            SweepAxis::SP => {
                let mut product = base.product().clone();
                product.s_p = value.clone();
                base.with_product(product)
            }
            SweepAxis::VH => {
                let mut product = base.product().clone();
                product.v_h.iter_mut().for_each(|v| *v = value.clone());
                base.with_product(product)
            }
            SweepAxis::GroupVH(k) => {
                if *k >= base.group_count() {
                    return Err(ConfigError::Invalid(format!(
                        "sweep axis v_h.{} names a missing group ({} groups)",
                        k + 1,
                        base.group_count()
                    )));
                }
                let mut product = base.product().clone();
                for i in base.population().members(*k) {
                    product.v_h[i] = value.clone();
                }
                base.with_product(product)
            }
        };
        Ok(swept?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub axis_name: String,
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub source: InstanceSource,
    pub run: RunSettings,
    pub output_dir: Option<PathBuf>,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
        let explicit = raw.population.is_some() || raw.product.is_some() || raw.network.is_some();
        let source = match (explicit, raw.generator) {
            (true, Some(_)) => {
                return Err(ConfigError::Invalid(
                    "give either an explicit instance or [generator], not both".into(),
                ))
            }
            (false, None) => {
                return Err(ConfigError::Invalid(
                    "missing instance: need [population], [product] and [network]".into(),
                ))
            }
            (false, Some(g)) => {
                let defaults = GeneratorSettings::default();
                let settings = GeneratorSettings {
                    groups: g.groups.unwrap_or(defaults.groups),
                    group_size: g.group_size.unwrap_or(defaults.group_size),
                    networks: g.networks.unwrap_or(defaults.networks),
                    max_premium: g.max_premium.unwrap_or(defaults.max_premium),
                    heterogeneous_payoffs: g
                        .heterogeneous_payoffs
                        .unwrap_or(defaults.heterogeneous_payoffs),
                };
                settings.validate().map_err(ConfigError::Invalid)?;
                InstanceSource::Generated {
                    settings,
                    seed: g.seed,
                }
            }
            (true, None) => {
                let population = raw.population.ok_or_else(|| missing("population"))?;
                let product = raw.product.ok_or_else(|| missing("product"))?;
                let network = raw.network.ok_or_else(|| missing("network"))?;
                InstanceSource::Explicit(build_instance(population, product, network)?)
            }
        };
        let defaults = RunSettings::default();
        let run = RunSettings {
            horizon: raw.run.horizon.unwrap_or(defaults.horizon),
            fast_forward: raw.run.fast_forward.unwrap_or(defaults.fast_forward),
            mode: raw.run.mode.unwrap_or(defaults.mode),
        };
        let sweep = raw
            .sweep
            .map(|s| -> Result<SweepSpec, ConfigError> {
                let axis = s.axis.parse().map_err(ConfigError::Invalid)?;
                if s.values.is_empty() {
                    return Err(ConfigError::Invalid("sweep.values is empty".into()));
                }
                Ok(SweepSpec {
                    axis,
                    axis_name: s.axis,
                    values: s.values.into_iter().map(|v| v.0).collect(),
                })
            })
            .transpose()?;
        Ok(Self {
            source,
            run,
            output_dir: raw.output.map(|o| o.dir),
            sweep,
        })
    }

    /// The instance; generated ones use `seed_override`, then the configured seed, then 0.
    pub fn instance(&self, seed_override: Option<u64>) -> Result<Instance, ConfigError> {
        match (&self.source, seed_override) {
            (InstanceSource::Explicit(_), Some(_)) => Err(ConfigError::Invalid(
                "--seed only applies to configs with a [generator] section".into(),
            )),
            (InstanceSource::Explicit(inst), None) => Ok(inst.clone()),
            (InstanceSource::Generated { settings, seed }, over) => {
                Ok(generate::generate(settings, over.or(*seed).unwrap_or(0)))
            }
        }
    }
}

fn missing(section: &str) -> ConfigError {
    ConfigError::Invalid(format!("missing section [{section}]"))
}

fn network_param(value: Option<Exact>, name: &str, kind: &str) -> Result<Rational, ConfigError> {
    value.map(|v| v.0).ok_or_else(|| {
        ConfigError::Invalid(format!(
            "missing field `{name}` in [network] for kind {kind}"
        ))
    })
}

fn build_instance(
    population: RawPopulation,
    product: RawProduct,
    network: RawNetwork,
) -> Result<Instance, ConfigError> {
    let population = Population::new(
        population
            .groups
            .into_iter()
            .map(|g| AspirationGroup::new(g.size, g.aspiration.0))
            .collect(),
    );
    let n = population.total();
    let product = match (product.v_h, product.v_h_individual) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid(
                "give either `v_h` or `v_h_individual` in [product], not both".into(),
            ))
        }
        (None, None) => {
            return Err(ConfigError::Invalid(
                "missing field `v_h` in [product]".into(),
            ))
        }
        (Some(RawPayoff::Single(v)), None) => {
            ProductSpec::constant(product.v_l.0, v.0, product.s_p.0, n)
        }
        (Some(RawPayoff::PerGroup(values)), None) => {
            if values.len() != population.group_count() {
                return Err(ConfigError::Invalid(format!(
                    "`v_h` lists {} values for {} groups",
                    values.len(),
                    population.group_count()
                )));
            }
            let values: Vec<Rational> = values.into_iter().map(|v| v.0).collect();
            ProductSpec::per_group(product.v_l.0, &values, product.s_p.0, &population)
        }
        (None, Some(values)) => ProductSpec::new(
            product.v_l.0,
            values.into_iter().map(|v| v.0).collect(),
            product.s_p.0,
        ),
    };
    let network = match network.kind {
        NetworkKind::Uniform => NetworkSpec::Uniform {
            s: network_param(network.s, "s", "uniform")?,
        },
        NetworkKind::Homophily => NetworkSpec::Homophily {
            s: network_param(network.s, "s", "homophily")?,
            gamma: network_param(network.gamma, "gamma", "homophily")?,
        },
        NetworkKind::GroupTies => NetworkSpec::GroupTies {
            ties: network
                .ties
                .ok_or_else(|| {
                    ConfigError::Invalid(
                        "missing field `ties` in [network] for kind group_ties".into(),
                    )
                })?
                .into_iter()
                .map(|v| v.0)
                .collect(),
        },
    };
    Ok(Instance::validate(population, product, network)?)
}
