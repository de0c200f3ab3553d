use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::DynamicsError;
use crate::model::{Instance, NetworkSpec};
use crate::rational::{self, from_u64, Rational};

use super::trace::DiffusionTrace;

/// Aspiration cutoff for one period: exactly the individuals strictly above
/// it have adopted. `NegInfinity` means everyone has.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Threshold {
    NegInfinity,
    Finite(Rational),
}

impl Threshold {
    pub fn admits(&self, aspiration: &Rational) -> bool {
        match self {
            Threshold::NegInfinity => true,
            Threshold::Finite(h) => aspiration > h,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Threshold::Finite(h) => Some(h),
            Threshold::NegInfinity => None,
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::NegInfinity, Threshold::NegInfinity) => Ordering::Equal,
            (Threshold::NegInfinity, _) => Ordering::Less,
            (_, Threshold::NegInfinity) => Ordering::Greater,
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::NegInfinity => f.write_str("-inf"),
            Threshold::Finite(h) => f.write_str(&rational::format(h)),
        }
    }
}

/// `H̄_t` for `t = 1..=horizon`. `empirical` marks values read off an
/// aspiration-monotone group-ties trace rather than solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSequence {
    pub values: Vec<Threshold>,
    pub empirical: bool,
}

impl ThresholdSequence {
    pub fn at(&self, period: u64) -> Option<&Threshold> {
        self.values
            .get(usize::try_from(period).ok()?.checked_sub(1)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Affine {
    slope: Rational,
    offset: Rational,
}

impl Affine {
    fn at(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.offset
    }
}

/// Threshold on `start..` until the next piece: `x(t) / y(t)` while
/// `y(t) > 0` and someone is left, otherwise minus infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Piece {
    start: u64,
    x: Affine,
    y: Affine,
    everyone_adopted: bool,
}

/// The whole threshold path of a run in closed form. Between adoption events
/// every per-period increment is constant, so each piece is a ratio of two
/// affine functions of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdPath {
    pieces: Vec<Piece>,
    valid_until: Option<u64>,
}

/// Maximal run of periods over which one path stays in a fixed order
/// relative to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSegment {
    pub start: u64,
    /// Inclusive; `None` means the relation holds forever.
    pub end: Option<u64>,
    pub ordering: Ordering,
}

impl ThresholdPath {
    /// Solved thresholds for uniform and homophily networks. The path is
    /// exact forever when the trace is certified and up to its horizon
    /// otherwise.
    pub fn from_trace(instance: &Instance, trace: &DiffusionTrace) -> Result<Self, DynamicsError> {
        let (s, own_group_weight) = match instance.network() {
            NetworkSpec::Uniform { s } => (s.clone(), s.clone()),
            NetworkSpec::Homophily { s, gamma } => (s.clone(), gamma * s),
            NetworkSpec::GroupTies { .. } => return Err(DynamicsError::ThresholdsUndefined),
        };
        let product = instance.product();
        let n = instance.size() as u64;
        // Non-adopters come in whole groups, so a deciding individual's own
        // group is entirely among the incumbent consumers.
        let group_size = instance.population().groups[0].size as u64;
        let incumbent_mass = |consumers: u64| -> Rational {
            let others_in_group = own_group_weight.clone() * from_u64(group_size - 1);
            let outside = &s * from_u64(consumers - group_size);
            instance.one_minus_s_p() * (Rational::one() + others_in_group + outside)
        };
        let uniform_mass = |consumers: u64| -> Rational {
            instance.one_minus_s_p() * (&s * from_u64(consumers - 1) + Rational::one())
        };
        let is_uniform = matches!(instance.network(), NetworkSpec::Uniform { .. });

        let mut pieces = Vec::new();
        let (mut a, mut b, mut c) = (Rational::zero(), Rational::zero(), Rational::zero());
        let mut anchor = 0u64;
        let mut adopters = 0u64;
        let mut payoff = Rational::zero();
        let mut events = trace.events().iter();
        loop {
            let (da, db) = (&s * &payoff, &s * from_u64(adopters));
            let dc = if adopters == n {
                Rational::zero()
            } else if is_uniform {
                uniform_mass(n - adopters)
            } else {
                incumbent_mass(n - adopters)
            };
            let t0 = from_u64(anchor);
            // A_t = a + (t - anchor) da, likewise B and C.
            let a_fn = Affine {
                slope: da.clone(),
                offset: &a - &da * &t0,
            };
            let b_fn = Affine {
                slope: db.clone(),
                offset: &b - &db * &t0,
            };
            let c_fn = Affine {
                slope: dc.clone(),
                offset: &c - &dc * &t0,
            };
            let x = Affine {
                slope: &c_fn.slope * &product.v_l - &a_fn.slope,
                offset: &c_fn.offset * &product.v_l - &a_fn.offset,
            };
            let y = Affine {
                slope: &c_fn.slope - &b_fn.slope,
                offset: &c_fn.offset - &b_fn.offset,
            };
            pieces.push(Piece {
                start: anchor + 1,
                x,
                y,
                everyone_adopted: adopters == n,
            });

            let Some(event) = events.next() else { break };
            let span = from_u64(event.period - anchor);
            a += &da * &span;
            b += &db * &span;
            c += &dc * &span;
            anchor = event.period;
            adopters += event.individuals.len() as u64;
            for &i in &event.individuals {
                payoff += &product.v_h[i];
            }
        }
        let valid_until = if trace.terminal().certified {
            None
        } else {
            Some(trace.horizon())
        };
        Ok(Self {
            pieces,
            valid_until,
        })
    }

    pub fn valid_until(&self) -> Option<u64> {
        self.valid_until
    }

    /// First period from which the threshold stays at minus infinity, when
    /// the run reaches full adoption.
    pub fn neg_infinity_from(&self) -> Option<u64> {
        let last = self.pieces.last()?;
        if !last.everyone_adopted {
            return None;
        }
        let event = last.start - 1;
        Some(if self.value_at(event) == Threshold::NegInfinity {
            event
        } else {
            last.start
        })
    }

    fn piece_at(&self, period: u64) -> &Piece {
        let idx = self.pieces.partition_point(|p| p.start <= period);
        &self.pieces[idx.saturating_sub(1)]
    }

    /// `H̄_t`; periods before 1 are treated as period 1.
    pub fn value_at(&self, period: u64) -> Threshold {
        let piece = self.piece_at(period.max(1));
        let t = from_u64(period.max(1));
        let y = piece.y.at(&t);
        if y > Rational::zero() && !piece.everyone_adopted {
            Threshold::Finite(piece.x.at(&t) / y)
        } else {
            Threshold::NegInfinity
        }
    }

    pub fn sequence(&self, horizon: u64) -> ThresholdSequence {
        ThresholdSequence {
            values: (1..=horizon).map(|t| self.value_at(t)).collect(),
            empirical: false,
        }
    }

    /// Order of `self` against `other` for every period from `from` on,
    /// exact over the part of the tail where both paths are known.
    pub fn compare_from(&self, other: &ThresholdPath, from: u64) -> Vec<RelationSegment> {
        let from = from.max(1);
        let limit = match (self.valid_until, other.valid_until) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if limit.is_some_and(|l| l < from) {
            return Vec::new();
        }
        let mut starts: Vec<u64> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .map(|p| p.start)
            .filter(|&s| s > from && limit.is_none_or(|l| s <= l))
            .collect();
        starts.push(from);
        starts.sort_unstable();
        starts.dedup();

        let mut segments: Vec<RelationSegment> = Vec::new();
        for (w, &lo) in starts.iter().enumerate() {
            let hi = starts.get(w + 1).map(|&next| next - 1).or(limit);
            let p = self.piece_at(lo);
            let q = other.piece_at(lo);
            let mut split = vec![lo];
            for root_floor in window_root_floors(p, q) {
                for d in -2i64..=3 {
                    let c = &root_floor + BigInt::from(d);
                    if let Some(c) = c.to_u64() {
                        if c > lo && hi.is_none_or(|h| c <= h) {
                            split.push(c);
                        }
                    }
                }
            }
            split.sort_unstable();
            split.dedup();
            for (r, &start) in split.iter().enumerate() {
                let end = split.get(r + 1).map(|&next| next - 1).or(hi);
                let ordering = self.value_at(start).cmp(&other.value_at(start));
                match segments.last_mut() {
                    Some(last) if last.ordering == ordering => last.end = end,
                    _ => segments.push(RelationSegment {
                        start,
                        end,
                        ordering,
                    }),
                }
            }
        }
        segments
    }
}

/// Floors (approximate to within one) of every real root of `y_p`, `y_q`
/// and of `x_p y_q - x_q y_p`; between them the relation cannot change.
fn window_root_floors(p: &Piece, q: &Piece) -> Vec<BigInt> {
    let mut out = Vec::new();
    for y in [&p.y, &q.y] {
        if !y.slope.is_zero() {
            out.push(rational::floor(&(-&y.offset / &y.slope)));
        }
    }
    let alpha = &p.x.slope * &q.y.slope - &q.x.slope * &p.y.slope;
    let beta = &p.x.slope * &q.y.offset + &p.x.offset * &q.y.slope
        - &q.x.slope * &p.y.offset
        - &q.x.offset * &p.y.slope;
    let gamma = &p.x.offset * &q.y.offset - &q.x.offset * &p.y.offset;
    if alpha.is_zero() {
        if !beta.is_zero() {
            out.push(rational::floor(&(-gamma / beta)));
        }
        return out;
    }
    // Scale to integers so the square-root error moves a root by at most 1/2.
    let scale = [&alpha, &beta, &gamma]
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let to_int = |v: &Rational| (v * Rational::from_integer(scale.clone())).to_integer();
    let (a, b, c) = (to_int(&alpha), to_int(&beta), to_int(&gamma));
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    if disc.is_negative() {
        return out;
    }
    let root = disc.sqrt();
    for num in [-&b + &root, -&b - &root] {
        out.push(num.div_floor(&(BigInt::from(2) * &a)));
    }
    out
}

/// `H̄_t` for `t = 1..=trace.horizon()`.
pub fn threshold_sequence(
    trace: &DiffusionTrace,
    instance: &Instance,
) -> Result<ThresholdSequence, DynamicsError> {
    match instance.network() {
        NetworkSpec::GroupTies { .. } => empirical_thresholds(trace, instance),
        _ => Ok(ThresholdPath::from_trace(instance, trace)?.sequence(trace.horizon())),
    }
}

fn empirical_thresholds(
    trace: &DiffusionTrace,
    instance: &Instance,
) -> Result<ThresholdSequence, DynamicsError> {
    if !trace.is_aspiration_monotone() {
        return Err(DynamicsError::ThresholdsUndefined);
    }
    let groups = instance.group_count();
    let values = (1..=trace.horizon())
        .map(|t| {
            if t == 1 {
                return Threshold::Finite(instance.product().v_l.clone());
            }
            (0..groups)
                .find(|&k| trace.group_adoption_period(k).is_none_or(|a| a > t))
                .map_or(Threshold::NegInfinity, |k| {
                    Threshold::Finite(instance.population().aspiration(k).clone())
                })
        })
        .collect();
    Ok(ThresholdSequence {
        values,
        empirical: true,
    })
}
