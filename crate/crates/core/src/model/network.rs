use crate::rational::Rational;

/// Cross-individual similarity structure. Self-weight is always 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkSpec {
    /// Weight `s` on every other individual.
    Uniform { s: Rational },
    /// Weight `gamma * s` inside one's own group, `s` across groups.
    Homophily { s: Rational, gamma: Rational },
    /// Weight `ties[k]` on every member of group `k`.
    GroupTies { ties: Vec<Rational> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    Uniform,
    Homophily,
    GroupTies,
}

impl NetworkSpec {
    pub fn kind(&self) -> NetworkKind {
        match self {
            NetworkSpec::Uniform { .. } => NetworkKind::Uniform,
            NetworkSpec::Homophily { .. } => NetworkKind::Homophily,
            NetworkSpec::GroupTies { .. } => NetworkKind::GroupTies,
        }
    }

    /// Weight an individual of group `from` puts on a distinct individual of group `to`.
    pub(crate) fn cross_weight(&self, from: usize, to: usize) -> Rational {
        match self {
            NetworkSpec::Uniform { s } => s.clone(),
            NetworkSpec::Homophily { s, gamma } if from == to => gamma * s,
            NetworkSpec::Homophily { s, .. } => s.clone(),
            NetworkSpec::GroupTies { ties } => ties[to].clone(),
        }
    }
}
