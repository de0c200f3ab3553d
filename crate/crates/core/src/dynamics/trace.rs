use serde::Serialize;

use crate::model::Population;

/// Individuals who first chose the new product in `period`, with the groups
/// (0-based) they belong to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdoptionEvent {
    pub period: u64,
    pub groups: Vec<usize>,
    pub individuals: Vec<usize>,
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Terminal {
    /// Adopters once every scheduled event has happened. When the run is not
    /// certified this is only the count reached by the end of the run.
    pub asymptotic_adopters: usize,
    /// 1-based index of the first group that never adopts; `None` when
    /// everyone adopts or the run is not certified.
    pub g_bar: Option<usize>,
    /// Period from which the adopter set is known to be final.
    pub stall_period: Option<u64>,
    pub certified: bool,
}

/// Adoption history of one run. Per-period rows cover `1..=horizon`; events
/// scheduled analytically past the horizon are kept as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionTrace {
    horizon: u64,
    group_sizes: Vec<usize>,
    adoption_period: Vec<Option<u64>>,
    events: Vec<AdoptionEvent>,
    terminal: Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub period: u64,
    pub new_adopters: usize,
    pub cumulative_adopters: usize,
}

impl DiffusionTrace {
    pub fn from_adoption_periods(
        horizon: u64,
        population: &Population,
        adoption_period: Vec<Option<u64>>,
        terminal: Terminal,
    ) -> Self {
        let group_sizes: Vec<usize> = population.groups.iter().map(|g| g.size).collect();
        let mut order: Vec<(u64, usize)> = adoption_period
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|p| (p, i)))
            .collect();
        order.sort_unstable();

        let mut events: Vec<AdoptionEvent> = Vec::new();
        for (period, i) in order {
            let group = population
                .group_of(i)
                .expect("individual within population");
            match events.last_mut() {
                Some(e) if e.period == period => {
                    e.individuals.push(i);
                    if !e.groups.contains(&group) {
                        e.groups.push(group);
                    }
                }
                _ => events.push(AdoptionEvent {
                    period,
                    groups: vec![group],
                    individuals: vec![i],
                }),
            }
        }
        Self {
            horizon,
            group_sizes,
            adoption_period,
            events,
            terminal,
        }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn population_size(&self) -> usize {
        self.adoption_period.len()
    }

    pub fn group_count(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn events(&self) -> &[AdoptionEvent] {
        &self.events
    }

    pub fn terminal(&self) -> &Terminal {
        &self.terminal
    }

    pub fn adoption_period(&self, individual: usize) -> Option<u64> {
        self.adoption_period[individual]
    }

    pub fn adoption_periods(&self) -> &[Option<u64>] {
        &self.adoption_period
    }

    /// Earliest adoption period among the members of `group` (0-based).
    pub fn group_adoption_period(&self, group: usize) -> Option<u64> {
        let start: usize = self.group_sizes[..group].iter().sum();
        self.adoption_period[start..start + self.group_sizes[group]]
            .iter()
            .flatten()
            .min()
            .copied()
    }

    pub fn new_at(&self, period: u64) -> usize {
        self.events
            .iter()
            .find(|e| e.period == period)
            .map_or(0, |e| e.individuals.len())
    }

    /// `|D_n^t|`: everyone who has adopted by period `t`.
    pub fn cumulative_at(&self, period: u64) -> usize {
        self.events
            .iter()
            .take_while(|e| e.period <= period)
            .map(|e| e.individuals.len())
            .sum()
    }

    pub fn adopters_at(&self, period: u64) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .adoption_period
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_some_and(|p| p <= period))
            .map(|(i, _)| i)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Last period with an adoption, if any.
    pub fn last_event_period(&self) -> Option<u64> {
        self.events.last().map(|e| e.period)
    }

    pub fn rows(&self) -> Vec<TraceRow> {
        let mut rows = Vec::with_capacity(self.horizon as usize);
        let mut events = self.events.iter().peekable();
        let mut cumulative = 0;
        for period in 1..=self.horizon {
            let mut new = 0;
            if let Some(e) = events.next_if(|e| e.period == period) {
                new = e.individuals.len();
            }
            cumulative += new;
            rows.push(TraceRow {
                period,
                new_adopters: new,
                cumulative_adopters: cumulative,
            });
        }
        rows
    }

    /// Same adopters in every period `1..=horizon` of both traces.
    pub fn same_path_to(&self, other: &DiffusionTrace, horizon: u64) -> bool {
        let clip = |a: &Option<u64>| a.filter(|&p| p <= horizon);
        self.adoption_period.len() == other.adoption_period.len()
            && self
                .adoption_period
                .iter()
                .zip(&other.adoption_period)
                .all(|(a, b)| clip(a) == clip(b))
    }

    /// Whether higher-aspiration groups never adopt later than lower ones.
    pub fn is_aspiration_monotone(&self) -> bool {
        let periods: Vec<Option<u64>> = (0..self.group_count())
            .map(|k| self.group_adoption_period(k))
            .collect();
        periods.windows(2).all(|w| match (w[0], w[1]) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn terminal() -> Terminal {
        Terminal {
            asymptotic_adopters: 3,
            g_bar: None,
            stall_period: None,
            certified: false,
        }
    }

    #[test]
    fn events_and_rows_are_derived_from_periods() {
        let pop = fixtures::instance_a().population().clone();
        let mut periods = vec![None; 10];
        periods[0] = Some(1);
        periods[1] = Some(1);
        periods[4] = Some(3);
        let trace = DiffusionTrace::from_adoption_periods(4, &pop, periods, terminal());
        assert_eq!(trace.events().len(), 2);
        assert_eq!(trace.events()[1].groups, vec![1]);
        let cum: Vec<usize> = trace.rows().iter().map(|r| r.cumulative_adopters).collect();
        assert_eq!(cum, vec![2, 2, 3, 3]);
        assert_eq!(trace.adopters_at(3), vec![0, 1, 4]);
        assert_eq!(trace.group_adoption_period(1), Some(3));
        assert!(trace.is_aspiration_monotone());
    }

    #[test]
    fn path_comparison_ignores_events_after_horizon() {
        let pop = fixtures::instance_a().population().clone();
        let mut early = vec![None; 10];
        early[0] = Some(1);
        let mut late = early.clone();
        late[9] = Some(50);
        let a = DiffusionTrace::from_adoption_periods(10, &pop, early, terminal());
        let b = DiffusionTrace::from_adoption_periods(10, &pop, late, terminal());
        assert!(a.same_path_to(&b, 10));
        assert!(!a.same_path_to(&b, 50));
        assert!(b.is_aspiration_monotone());
    }
}
