use num_traits::{One, Zero};

use crate::rational::{from_u64, Rational};

use super::{EvalMode, Instance, Product};

/// Cases generated by one group, aggregated over a span of periods.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupStats {
    /// Consumer-periods on the incumbent product.
    pub incumbent_cases: u64,
    /// Consumer-periods on the new product.
    pub new_cases: u64,
    /// Sum of realised new-product payoffs over those consumer-periods.
    pub new_payoff: Rational,
}

/// Market at the start of period `period`: cumulative statistics cover the
/// periods `0..period`, and `adoption_period[i]` is the first period in which
/// individual `i` chose the new product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketState {
    period: u64,
    adoption_period: Vec<Option<u64>>,
    stats: Vec<GroupStats>,
    adopters: Vec<usize>,
    adopter_payoff: Vec<Rational>,
    last_adoption: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepOptions {
    pub mode: EvalMode,
    /// Re-run the adoption condition for past adopters and report any who
    /// would now prefer the incumbent. Adoption stays absorbing either way.
    pub reevaluate_adopters: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub state: MarketState,
    pub new_adopters: Vec<usize>,
    pub switchbacks: Vec<usize>,
}

/// An individual's own past cases.
#[derive(Clone, Copy)]
struct OwnCases<'a> {
    incumbent: u64,
    new: u64,
    payoff: &'a Rational,
}

impl MarketState {
    pub fn initial(instance: &Instance) -> Self {
        let g = instance.group_count();
        Self {
            period: 0,
            adoption_period: vec![None; instance.size()],
            stats: vec![GroupStats::default(); g],
            adopters: vec![0; g],
            adopter_payoff: vec![Rational::zero(); g],
            last_adoption: None,
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn adoption_period(&self, individual: usize) -> Option<u64> {
        self.adoption_period[individual]
    }

    pub fn adoption_periods(&self) -> &[Option<u64>] {
        &self.adoption_period
    }

    pub fn group_stats(&self) -> &[GroupStats] {
        &self.stats
    }

    pub fn group_adopters(&self, group: usize) -> usize {
        self.adopters[group]
    }

    /// Most recent period in which anyone adopted.
    pub fn last_adoption_period(&self) -> Option<u64> {
        self.last_adoption
    }

    pub fn adopted_count(&self) -> usize {
        self.adopters.iter().sum()
    }

    /// True when the decision in the previous period (at least period 1)
    /// produced no new adopters.
    pub fn is_stalled(&self) -> bool {
        self.period >= 2 && self.last_adoption != Some(self.period - 1)
    }

    /// The consumption of a single period under the current adopter set.
    pub(crate) fn current_consumption(&self, instance: &Instance) -> Vec<GroupStats> {
        instance
            .population()
            .groups
            .iter()
            .enumerate()
            .map(|(k, g)| GroupStats {
                incumbent_cases: (g.size - self.adopters[k]) as u64,
                new_cases: self.adopters[k] as u64,
                new_payoff: self.adopter_payoff[k].clone(),
            })
            .collect()
    }
}

impl Instance {
    fn own_cases<'a>(&'a self, state: &MarketState, individual: usize) -> OwnCases<'a> {
        let new = state.adoption_period[individual].map_or(0, |a| state.period.saturating_sub(a));
        OwnCases {
            incumbent: state.period - new,
            new,
            payoff: &self.product().v_h[individual],
        }
    }

    /// Similarity mass on incumbent cases and aspiration-normalised mass on
    /// new-product cases, seen from a member of `group` with aspiration `h`.
    fn weighted_cases(
        &self,
        stats: &[GroupStats],
        group: usize,
        h: &Rational,
        own: OwnCases<'_>,
    ) -> (Rational, Rational) {
        let mut incumbent = Rational::zero();
        let mut new = Rational::zero();
        for (k, st) in stats.iter().enumerate() {
            let w = self.cross_weight(group, k);
            if w.is_zero() {
                continue;
            }
            incumbent += w * from_u64(st.incumbent_cases);
            new += w * (&st.new_payoff - h * from_u64(st.new_cases));
        }
        let self_correction = Rational::one() - self.cross_weight(group, group);
        if !self_correction.is_zero() {
            incumbent += &self_correction * from_u64(own.incumbent);
            new += &self_correction * from_u64(own.new) * (own.payoff - h);
        }
        (incumbent, new)
    }

    fn similarity_mass(&self, state: &MarketState, group: usize) -> Rational {
        let mut mass = Rational::zero();
        for (k, st) in state.stats.iter().enumerate() {
            mass += self.cross_weight(group, k) * from_u64(st.incumbent_cases + st.new_cases);
        }
        mass + (Rational::one() - self.cross_weight(group, group)) * from_u64(state.period)
    }

    fn evaluate_with(
        &self,
        state: &MarketState,
        group: usize,
        own: OwnCases<'_>,
        product: Product,
        mode: EvalMode,
    ) -> Rational {
        let h = self.population().aspiration(group);
        let (incumbent, new) = self.weighted_cases(&state.stats, group, h, own);
        let incumbent_value = incumbent * (&self.product().v_l - h);
        let sum = match product {
            Product::Incumbent => incumbent_value,
            Product::New => &self.product().s_p * incumbent_value + new,
        };
        match mode {
            EvalMode::Sum => sum,
            EvalMode::Average if state.period == 0 => Rational::zero(),
            EvalMode::Average => sum / self.similarity_mass(state, group),
        }
    }

    /// `U_i^t(p)` for individual `i` at the state's period.
    pub fn evaluate(
        &self,
        state: &MarketState,
        individual: usize,
        product: Product,
        mode: EvalMode,
    ) -> Rational {
        let own = self.own_cases(state, individual);
        self.evaluate_with(state, self.group_of(individual), own, product, mode)
    }

    /// `Σ Δ_n − (1 − s_p) Σ Δ_c` over the given statistics.
    fn margin_on(&self, stats: &[GroupStats], group: usize, own: OwnCases<'_>) -> Rational {
        let h = self.population().aspiration(group);
        let (incumbent, new) = self.weighted_cases(stats, group, h, own);
        new - self.one_minus_s_p() * incumbent * (&self.product().v_l - h)
    }

    /// True iff individual `i` strictly prefers the new product; ties go to
    /// the incumbent.
    pub fn adoption_condition(&self, state: &MarketState, individual: usize) -> bool {
        let own = self.own_cases(state, individual);
        self.margin_on(&state.stats, self.group_of(individual), own) > Rational::zero()
    }

    /// Adoption margin of a member of `group` who has never adopted.
    pub(crate) fn group_margin(&self, state: &MarketState, group: usize) -> Rational {
        let own = OwnCases {
            incumbent: state.period,
            new: 0,
            payoff: &self.product().v_l,
        };
        self.margin_on(&state.stats, group, own)
    }

    /// Change in a never-adopted member's margin from one more period of the
    /// current consumption.
    pub(crate) fn group_gain(&self, state: &MarketState, group: usize) -> Rational {
        let one_period = state.current_consumption(self);
        let own = OwnCases {
            incumbent: 1,
            new: 0,
            payoff: &self.product().v_l,
        };
        self.margin_on(&one_period, group, own)
    }

    fn group_prefers_new(&self, state: &MarketState, group: usize, mode: EvalMode) -> bool {
        match mode {
            EvalMode::Sum => self.group_margin(state, group) > Rational::zero(),
            EvalMode::Average => {
                let own = OwnCases {
                    incumbent: state.period,
                    new: 0,
                    payoff: &self.product().v_l,
                };
                let new = self.evaluate_with(state, group, own, Product::New, mode);
                let old = self.evaluate_with(state, group, own, Product::Incumbent, mode);
                new > old
            }
        }
    }

    /// One period of choices followed by case accumulation.
    pub fn step(&self, state: &MarketState) -> (MarketState, Vec<usize>) {
        let outcome = self.step_with(state, StepOptions::default());
        (outcome.state, outcome.new_adopters)
    }

    pub fn step_with(&self, state: &MarketState, options: StepOptions) -> StepOutcome {
        let mut next = state.clone();
        let (new_adopters, switchbacks) = self.advance(&mut next, options);
        StepOutcome {
            state: next,
            new_adopters,
            switchbacks,
        }
    }

    /// In-place form of [`Instance::step_with`].
    pub(crate) fn advance(
        &self,
        state: &mut MarketState,
        options: StepOptions,
    ) -> (Vec<usize>, Vec<usize>) {
        let t = state.period;
        let mut new_adopters = Vec::new();
        let mut switchbacks = Vec::new();
        if t > 0 {
            if options.reevaluate_adopters {
                switchbacks = self.find_switchbacks(state, options.mode);
            }
            // Never-adopted members of a group share every case statistic,
            // so one evaluation decides for all of them.
            let deciding: Vec<usize> = (0..self.group_count())
                .filter(|&k| state.adopters[k] < self.population().groups[k].size)
                .filter(|&k| self.group_prefers_new(state, k, options.mode))
                .collect();
            for k in deciding {
                for i in self.population().members(k) {
                    if state.adoption_period[i].is_none() {
                        state.adoption_period[i] = Some(t);
                        state.adopters[k] += 1;
                        state.adopter_payoff[k] += &self.product().v_h[i];
                        new_adopters.push(i);
                    }
                }
            }
            if !new_adopters.is_empty() {
                state.last_adoption = Some(t);
            }
        }
        self.record_consumption(state, 1);
        state.period += 1;
        (new_adopters, switchbacks)
    }

    fn find_switchbacks(&self, state: &MarketState, mode: EvalMode) -> Vec<usize> {
        // Adopters sharing group, adoption period and payoff share their evaluation.
        let mut cache: std::collections::HashMap<(usize, u64, Rational), bool> = Default::default();
        let mut out = Vec::new();
        for (i, adopted) in state.adoption_period.iter().enumerate() {
            let Some(a) = *adopted else { continue };
            let g = self.group_of(i);
            let key = (g, a, self.product().v_h[i].clone());
            let prefers_new = *cache.entry(key).or_insert_with(|| match mode {
                EvalMode::Sum => self.adoption_condition(state, i),
                EvalMode::Average => {
                    self.evaluate(state, i, Product::New, mode)
                        > self.evaluate(state, i, Product::Incumbent, mode)
                }
            });
            if !prefers_new {
                out.push(i);
            }
        }
        out
    }

    fn record_consumption(&self, state: &mut MarketState, periods: u64) {
        for (k, g) in self.population().groups.iter().enumerate() {
            let adopters = state.adopters[k] as u64;
            let st = &mut state.stats[k];
            st.incumbent_cases += periods * (g.size as u64 - adopters);
            st.new_cases += periods * adopters;
            if adopters > 0 {
                st.new_payoff += &state.adopter_payoff[k] * from_u64(periods);
            }
        }
    }

    /// Advances `periods` periods in which nobody changes product. Returns
    /// `None` (leaving the state untouched) if a counter would overflow.
    pub(crate) fn advance_frozen(&self, state: &mut MarketState, periods: u64) -> Option<()> {
        let n = self.size() as u64;
        let end = state.period.checked_add(periods)?;
        end.checked_mul(n)?;
        self.record_consumption(state, periods);
        state.period = end;
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn advance_to(instance: &Instance, t: u64) -> MarketState {
        let mut state = MarketState::initial(instance);
        while state.period() < t {
            state = instance.step(&state).0;
        }
        state
    }

    #[test]
    fn empty_case_set_evaluates_to_zero() {
        for inst in [
            fixtures::instance_a(),
            fixtures::instance_b(),
            fixtures::instance_c(),
        ] {
            let s0 = MarketState::initial(&inst);
            for mode in [EvalMode::Sum, EvalMode::Average] {
                for p in [Product::Incumbent, Product::New] {
                    assert_eq!(inst.evaluate(&s0, 0, p, mode), int(0));
                }
            }
        }
    }

    #[test]
    fn instance_a_period_one_evaluations() {
        let a = fixtures::instance_a();
        let s1 = advance_to(&a, 1);
        assert_eq!(
            a.evaluate(&s1, 0, Product::Incumbent, EvalMode::Sum),
            ratio(-55, 2)
        );
        assert_eq!(
            a.evaluate(&s1, 0, Product::New, EvalMode::Sum),
            ratio(-55, 4)
        );
        assert!(a.adoption_condition(&s1, 0));
        assert!(!a.adoption_condition(&s1, 5));
    }

    #[test]
    fn instance_a_period_two_evaluations() {
        let a = fixtures::instance_a();
        let s2 = advance_to(&a, 2);
        assert_eq!(
            a.evaluate(&s2, 5, Product::Incumbent, EvalMode::Sum),
            int(400)
        );
        assert_eq!(a.evaluate(&s2, 5, Product::New, EvalMode::Sum), int(250));
        assert!(!a.adoption_condition(&s2, 5));
    }

    #[test]
    fn average_mode_divides_by_similarity_mass() {
        let a = fixtures::instance_a();
        let s2 = advance_to(&a, 2);
        // Mass seen by a group-2 member after two periods: 2 * (1 + 9/2).
        assert_eq!(
            a.evaluate(&s2, 5, Product::Incumbent, EvalMode::Average),
            ratio(400, 11)
        );
        assert_eq!(
            a.evaluate(&s2, 5, Product::New, EvalMode::Average),
            ratio(250, 11)
        );
    }

    #[test]
    fn tie_goes_to_incumbent() {
        let c = fixtures::instance_c();
        let s1 = advance_to(&c, 1);
        assert_eq!(
            c.evaluate(&s1, 0, Product::Incumbent, EvalMode::Sum),
            int(0)
        );
        assert_eq!(c.evaluate(&s1, 0, Product::New, EvalMode::Sum), int(0));
        assert!(!c.adoption_condition(&s1, 0));
    }

    #[test]
    fn step_sequences_match_hand_computation() {
        let a = fixtures::instance_a();
        let s0 = MarketState::initial(&a);
        let (s1, none) = a.step(&s0);
        assert!(none.is_empty());
        let (s2, first) = a.step(&s1);
        assert_eq!(first, vec![0, 1]);
        let (_, second) = a.step(&s2);
        assert!(second.is_empty());

        let b = fixtures::instance_b();
        let mut state = MarketState::initial(&b);
        let mut per_period = Vec::new();
        for _ in 0..4 {
            let (next, adopters) = b.step(&state);
            per_period.push(adopters.len());
            state = next;
        }
        assert_eq!(per_period, vec![0, 2, 0, 8]);
        assert_eq!(state.adoption_period(9), Some(3));

        let c = fixtures::instance_c();
        let mut state = MarketState::initial(&c);
        for _ in 0..20 {
            let (next, adopters) = c.step(&state);
            assert!(adopters.is_empty());
            state = next;
        }
    }

    #[test]
    fn conservation_holds_each_period() {
        let b = fixtures::instance_b();
        let mut state = MarketState::initial(&b);
        for _ in 0..10 {
            state = b.step(&state).0;
            for (k, g) in b.population().groups.iter().enumerate() {
                let st = &state.group_stats()[k];
                assert_eq!(
                    st.incumbent_cases + st.new_cases,
                    state.period() * g.size as u64
                );
            }
        }
    }

    #[test]
    fn frozen_advance_matches_repeated_steps_without_adoption() {
        let a = fixtures::instance_a();
        let mut stepped = advance_to(&a, 2);
        let mut jumped = stepped.clone();
        for _ in 0..7 {
            stepped = a.step(&stepped).0;
        }
        a.advance_frozen(&mut jumped, 7).unwrap();
        assert_eq!(stepped.group_stats(), jumped.group_stats());
        assert_eq!(stepped.period(), jumped.period());
    }

    #[test]
    fn group_gain_is_the_margin_increment() {
        let b = fixtures::instance_b();
        let s2 = advance_to(&b, 2);
        let s3 = b.step(&s2).0;
        assert_eq!(b.group_gain(&s2, 1), int(60));
        assert_eq!(b.group_margin(&s2, 1), int(-50));
        assert_eq!(b.group_margin(&s3, 1), int(10));
    }

    #[test]
    fn stall_detection() {
        let a = fixtures::instance_a();
        assert!(!advance_to(&a, 1).is_stalled());
        assert!(!advance_to(&a, 2).is_stalled());
        assert!(advance_to(&a, 3).is_stalled());
        assert!(advance_to(&fixtures::instance_c(), 2).is_stalled());
    }
}
