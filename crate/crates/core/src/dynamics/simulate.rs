use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::DynamicsError;
use crate::model::{EvalMode, Instance, MarketState, StepOptions};
use crate::rational::Rational;

use super::trace::{DiffusionTrace, Terminal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationOptions {
    pub horizon: u64,
    /// Jump over stalls to the next scheduled adoption and keep going past the
    /// horizon until the outcome is certified. Without it the run stops at
    /// the horizon.
    pub fast_forward: bool,
    pub mode: EvalMode,
    /// Debug: re-run the adoption condition for past adopters every stepped period.
    pub reevaluate_adopters: bool,
}

impl SimulationOptions {
    pub fn new(horizon: u64) -> Self {
        Self {
            horizon,
            fast_forward: true,
            mode: EvalMode::Sum,
            reevaluate_adopters: false,
        }
    }
}

/// An adopter who, on re-evaluation, would have picked the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Switchback {
    pub period: u64,
    pub individual: usize,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub trace: DiffusionTrace,
    pub switchbacks: Vec<Switchback>,
    pub final_state: MarketState,
}

/// What happens after a stall while the adopter set stays frozen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StallOutcome {
    /// The listed groups (0-based) are the next to adopt, all in `period`.
    Adoption {
        period: u64,
        groups: Vec<usize>,
    },
    NoFurtherAdoption,
}

/// Periods after a decision with margin `-deficit` until the margin, growing
/// by `gain` per period, is strictly positive.
pub fn periods_until_adoption(deficit: &Rational, gain: &Rational) -> Option<u64> {
    if *gain <= Rational::zero() {
        return None;
    }
    let q = deficit / gain;
    let whole = q.numer().div_floor(q.denom());
    (whole + 1u32).to_u64()
}

/// Next adoption event from a stalled state, found in closed form.
pub fn fast_forward_stall(
    instance: &Instance,
    state: &MarketState,
) -> Result<StallOutcome, DynamicsError> {
    if !state.is_stalled() {
        return Err(DynamicsError::NotStalled {
            period: state.period(),
        });
    }
    // The last stepped decision period saw no adoption, so every remaining
    // margin there was at most zero; from then on it moves by a fixed gain.
    let decided = state.period() - 1;
    let mut best: Option<(u64, Vec<usize>)> = None;
    for k in 0..instance.group_count() {
        if state.group_adopters(k) == instance.population().groups[k].size {
            continue;
        }
        let gain = instance.group_gain(state, k);
        if gain <= Rational::zero() {
            continue;
        }
        let deficit = &gain - instance.group_margin(state, k);
        let wait = periods_until_adoption(&deficit, &gain).ok_or(DynamicsError::PeriodOverflow)?;
        let period = decided
            .checked_add(wait)
            .ok_or(DynamicsError::PeriodOverflow)?;
        match &mut best {
            Some((p, groups)) if *p == period => groups.push(k),
            Some((p, _)) if *p < period => {}
            _ => best = Some((period, vec![k])),
        }
    }
    Ok(match best {
        Some((period, groups)) => StallOutcome::Adoption { period, groups },
        None => StallOutcome::NoFurtherAdoption,
    })
}

pub fn simulate(
    instance: &Instance,
    horizon: u64,
    fast_forward: bool,
) -> Result<DiffusionTrace, DynamicsError> {
    let options = SimulationOptions {
        fast_forward,
        ..SimulationOptions::new(horizon)
    };
    Ok(simulate_with(instance, &options)?.trace)
}

pub fn simulate_with(
    instance: &Instance,
    options: &SimulationOptions,
) -> Result<Simulation, DynamicsError> {
    if options.horizon == 0 {
        return Err(DynamicsError::ZeroHorizon);
    }
    let step = StepOptions {
        mode: options.mode,
        reevaluate_adopters: options.reevaluate_adopters,
    };
    let n = instance.size();
    let mut state = MarketState::initial(instance);
    let mut switchbacks = Vec::new();
    instance.advance(&mut state, step);

    let (certified, stall_period) = loop {
        let t = state.period();
        if state.adopted_count() == n {
            break (true, state.last_adoption_period());
        }
        if state.is_stalled() {
            match fast_forward_stall(instance, &state) {
                Ok(StallOutcome::NoFurtherAdoption) => break (true, Some(t - 1)),
                Ok(StallOutcome::Adoption { period, .. }) if options.fast_forward && period > t => {
                    if instance.advance_frozen(&mut state, period - t).is_none() {
                        break (false, None);
                    }
                }
                Ok(_) => {}
                Err(_) if options.fast_forward => break (false, None),
                Err(_) => {}
            }
        }
        let t = state.period();
        if !options.fast_forward && t > options.horizon {
            break (false, None);
        }
        let (_, back) = instance.advance(&mut state, step);
        switchbacks.extend(back.into_iter().map(|individual| Switchback {
            period: t,
            individual,
        }));
    };

    let adopters = state.adopted_count();
    let g_bar = if certified && adopters < n {
        (0..instance.group_count())
            .find(|&k| state.group_adopters(k) == 0)
            .map(|k| k + 1)
    } else {
        None
    };
    let terminal = Terminal {
        asymptotic_adopters: adopters,
        g_bar,
        stall_period,
        certified,
    };
    let trace = DiffusionTrace::from_adoption_periods(
        options.horizon,
        instance.population(),
        state.adoption_periods().to_vec(),
        terminal,
    );
    Ok(Simulation {
        trace,
        switchbacks,
        final_state: state,
    })
}
