use std::ops::Range;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspirationGroup {
    pub size: usize,
    pub aspiration: Rational,
}

impl AspirationGroup {
    pub fn new(size: usize, aspiration: Rational) -> Self {
        Self { size, aspiration }
    }
}

/// Aspiration groups in order of decreasing aspiration. Individuals are
/// numbered contiguously group by group, starting at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    pub groups: Vec<AspirationGroup>,
}

impl Population {
    pub fn new(groups: Vec<AspirationGroup>) -> Self {
        Self { groups }
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn aspiration(&self, group: usize) -> &Rational {
        &self.groups[group].aspiration
    }

    /// Individual ids belonging to `group`.
    pub fn members(&self, group: usize) -> Range<usize> {
        let start: usize = self.groups[..group].iter().map(|g| g.size).sum();
        start..start + self.groups[group].size
    }

    pub fn group_of(&self, individual: usize) -> Option<usize> {
        let mut upper = 0;
        for (k, g) in self.groups.iter().enumerate() {
            upper += g.size;
            if individual < upper {
                return Some(k);
            }
        }
        None
    }

    /// Number of individuals whose aspiration is strictly above `h`.
    pub fn count_above(&self, h: &Rational) -> usize {
        self.groups
            .iter()
            .filter(|g| &g.aspiration > h)
            .map(|g| g.size)
            .sum()
    }
}
