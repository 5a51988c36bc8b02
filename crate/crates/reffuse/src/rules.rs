//! The catalog of combination rules, each packaged as a referee function.
//!
//! Every rule is a recipe for arbitrating one tuple of focal propositions
//! `Y_1..Y_s` drawn from the sources:
//!
//! * conjunctive: keep `∩Y_i`, rejecting when it is empty (`dst` once the
//!   rejection is renormalized away),
//! * disjunctive: keep `∪Y_i`,
//! * Dubois-Prade: keep `∩Y_i`, falling back to `∪Y_i` on conflict,
//! * averaging: pick entry `Y_i` with probability `α_i`,
//! * PCR6: keep the consensus, otherwise return some entry `Y_j` with
//!   probability proportional to `m_j(Y_j)`,
//! * PCR#: look for the largest partial consensus, i.e. the largest `k`
//!   such that some `k` of the entries intersect, and pick one such
//!   intersection with probability proportional to its product of masses,
//! * scheduled PCR#: same search restricted to a decreasing list of
//!   consensus sizes, rejecting when none of the probed sizes works,
//! * focus-or-reject: reject tuples whose union is the whole frame, average
//!   the entries otherwise.

use thiserror::Error;

use crate::belief::{AveragingWeights, Bba, BeliefError};
use crate::lattice::{Frame, Proposition};
use crate::referee::{mix, Arbitrament, Referee, RefereeError, SeparableReferee};

/// Names accepted on the command line and in scenario files.
pub const RULE_NAMES: [&str; 8] = [
    "dst",
    "disjunctive",
    "dubois-prade",
    "average",
    "pcr6",
    "pcr-sharp",
    "pcr-sharp-schedule",
    "focus-or-reject",
];

#[derive(Debug, Error, PartialEq)]
pub enum RulesError {
    #[error("combination size {size} is out of range for {item_count} items")]
    CombinationOutOfRange { size: usize, item_count: usize },
    #[error("a consensus schedule needs at least one size")]
    EmptySchedule,
    #[error("consensus sizes must be at least 1")]
    ZeroScheduleSize,
    #[error("consensus sizes must strictly decrease ({0} is followed by {1})")]
    ScheduleNotDecreasing(usize, usize),
    #[error("schedule starts at size {start}, but only {sources} sources are fused")]
    ScheduleTooLarge { start: usize, sources: usize },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("rule \"pcr-sharp-schedule\" needs an explicit schedule")]
    ScheduleRequired,
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Referee(#[from] RefereeError),
}

/// All `size`-element subsets of `{0, .., item_count-1}` in lexicographic
/// order. This is the consensus enumerator behind PCR#.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinationSet {
    item_count: usize,
    size: usize,
    members: Vec<Vec<usize>>,
}

pub fn combinations(size: usize, item_count: usize) -> Result<CombinationSet, RulesError> {
    if size == 0 || size > item_count {
        return Err(RulesError::CombinationOutOfRange { size, item_count });
    }
    let mut members = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        members.push(current.clone());
        let mut pos = size;
        while pos > 0 && current[pos - 1] == item_count - size + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        current[pos - 1] += 1;
        for j in pos..size {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(CombinationSet {
        item_count,
        size,
        members,
    })
}

impl CombinationSet {
    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member subsets as sorted zero-based index lists.
    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(|m| m.as_slice())
    }
}

/// A strictly decreasing list of consensus sizes for scheduled PCR#.
#[derive(Clone, Debug, PartialEq)]
pub struct PcrSharpSchedule {
    sizes: Vec<usize>,
}

impl PcrSharpSchedule {
    pub fn new<I>(sizes: I) -> Result<PcrSharpSchedule, RulesError>
    where
        I: IntoIterator<Item = usize>,
    {
        let sizes: Vec<usize> = sizes.into_iter().collect();
        if sizes.is_empty() {
            return Err(RulesError::EmptySchedule);
        }
        if sizes.contains(&0) {
            return Err(RulesError::ZeroScheduleSize);
        }
        for w in sizes.windows(2) {
            if w[1] >= w[0] {
                return Err(RulesError::ScheduleNotDecreasing(w[0], w[1]));
            }
        }
        Ok(PcrSharpSchedule { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// The first (largest) probed size.
    pub fn max_size(&self) -> usize {
        self.sizes[0]
    }
}

fn meet_bits(entries: &[Proposition]) -> u64 {
    let mut bits = entries[0].frame().universe_mask();
    for e in entries {
        bits &= e.bits();
    }
    bits
}

fn join_bits(entries: &[Proposition]) -> u64 {
    entries.iter().fold(0, |acc, e| acc | e.bits())
}

/// Point mass on the intersection of the entries; an empty intersection is
/// a rejection. Renormalizing that rejection away is Dempster-Shafer, hence
/// the rule name `dst`.
pub fn f_conjunctive() -> Referee {
    Referee::from_fn(|entries, _| {
        Arbitrament::point(entries[0].frame().proposition_from_bits(meet_bits(entries)))
    })
}

/// Point mass on the union of the entries. Never rejects.
pub fn f_disjunctive() -> Referee {
    Referee::from_fn(|entries, _| {
        Arbitrament::point(entries[0].frame().proposition_from_bits(join_bits(entries)))
    })
    .never_rejecting()
}

/// Intersection when the entries agree, union when they conflict.
pub fn f_dubois_prade() -> Referee {
    Referee::from_fn(|entries, _| {
        let meet = meet_bits(entries);
        let bits = if meet != 0 { meet } else { join_bits(entries) };
        Arbitrament::point(entries[0].frame().proposition_from_bits(bits))
    })
    .never_rejecting()
}

/// Returns the entry of source `i` with probability 1. The building block
/// of the averaging mixture.
pub fn f_identity() -> Referee {
    Referee::from_fn(|entries, _| Arbitrament::point(entries[0].clone()))
        .with_arity(1)
        .never_rejecting()
}

/// Weighted averaging, built as a separable mixture: with probability `α_i`
/// the arbitrament returns entry `Y_i` unchanged. Fusing under it yields
/// `Σ_i α_i m_i`.
pub fn f_average(weights: &AveragingWeights) -> Referee {
    let branches = weights
        .values()
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, vec![i], f_identity()))
        .collect();
    mix(SeparableReferee::new(weights.len(), branches)
        .expect("validated weights always form a mixture"))
}

/// PCR6 arbitrament: global consensus when it exists, otherwise one of the
/// entries, picked proportionally to the mass its own source gives it.
///
/// When every entry carries zero mass in its source (possible only for
/// tuples outside the focal supports, which never arise in fusion) the
/// entries share the probability equally.
pub fn f_pcr6() -> Referee {
    Referee::from_fn(|entries, contexts| {
        let frame = entries[0].frame();
        let meet = meet_bits(entries);
        if meet != 0 {
            return Arbitrament::point(frame.proposition_from_bits(meet));
        }
        let masses: Vec<f64> = entries
            .iter()
            .zip(contexts)
            .map(|(e, m)| m.mass(e))
            .collect();
        let total: f64 = masses.iter().sum();
        let pairs: Vec<(u64, f64)> = if total > 0.0 {
            entries
                .iter()
                .zip(&masses)
                .map(|(e, &w)| (e.bits(), w / total))
                .collect()
        } else {
            let share = 1.0 / entries.len() as f64;
            entries.iter().map(|e| (e.bits(), share)).collect()
        };
        Arbitrament::from_bits(frame.clone(), pairs)
    })
    .never_rejecting()
}

/// Weighted intersections of the functional consensus subsets at one size,
/// or `None` when no subset of that size has a non-empty intersection.
/// Sizes above the entry count probe nothing and are never functional.
fn consensus_at_size(
    entries: &[Proposition],
    contexts: &[Bba],
    size: usize,
) -> Option<Vec<(u64, f64)>> {
    let s = entries.len();
    if size > s {
        return None;
    }
    let combos = combinations(size, s).expect("size within range");
    let mut outcomes: Vec<(u64, f64)> = Vec::new();
    let mut total = 0.0;
    for gamma in combos.iter() {
        let mut meet = entries[0].frame().universe_mask();
        for &i in gamma {
            meet &= entries[i].bits();
        }
        if meet == 0 {
            continue;
        }
        let mut weight = 1.0;
        for &i in gamma {
            weight *= contexts[i].mass(&entries[i]);
        }
        outcomes.push((meet, weight));
        total += weight;
    }
    if outcomes.is_empty() {
        return None;
    }
    if total > 0.0 {
        for o in &mut outcomes {
            o.1 /= total;
        }
    } else {
        let share = 1.0 / outcomes.len() as f64;
        for o in &mut outcomes {
            o.1 = share;
        }
    }
    Some(outcomes)
}

fn consensus_arbitrament<I>(entries: &[Proposition], contexts: &[Bba], sizes: I) -> Arbitrament
where
    I: IntoIterator<Item = usize>,
{
    let frame: &Frame = entries[0].frame();
    for size in sizes {
        if let Some(outcomes) = consensus_at_size(entries, contexts, size) {
            return Arbitrament::from_bits(frame.clone(), outcomes);
        }
    }
    Arbitrament::point(frame.empty())
}

/// Full PCR# arbitrament: probe consensus sizes `s, s-1, .., 1` and stop at
/// the first size where some subset of entries intersects. Subsets sharing
/// one intersection pool their probability. Never rejects, since size 1 is
/// always functional for non-empty entries.
pub fn f_pcr_sharp() -> Referee {
    Referee::from_fn(|entries, contexts| {
        consensus_arbitrament(entries, contexts, (1..=entries.len()).rev())
    })
    .never_rejecting()
}

/// PCR# restricted to the scheduled consensus sizes, rejecting the tuple
/// when none of them is functional. A schedule ending at size 1 never
/// rejects; `[s]` is the conjunctive rule and `[s, 1]` is PCR6.
pub fn f_pcr_sharp_schedule(schedule: &PcrSharpSchedule) -> Referee {
    let sizes = schedule.sizes().to_vec();
    let referee = Referee::from_fn(move |entries, contexts| {
        consensus_arbitrament(entries, contexts, sizes.iter().copied())
    });
    if schedule.sizes().last() == Some(&1) {
        referee.never_rejecting()
    } else {
        referee
    }
}

/// Rejects tuples whose union covers the whole frame; otherwise returns one
/// of the entries uniformly.
pub fn f_focus_or_reject() -> Referee {
    Referee::from_fn(|entries, _| {
        let frame = entries[0].frame();
        if join_bits(entries) == frame.universe_mask() {
            return Arbitrament::point(frame.empty());
        }
        let share = 1.0 / entries.len() as f64;
        Arbitrament::from_bits(
            frame.clone(),
            entries.iter().map(|e| (e.bits(), share)).collect(),
        )
    })
}

/// A fully specified rule choice, ready to be turned into a referee for a
/// given number of sources.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleSpec {
    Dst,
    Disjunctive,
    DuboisPrade,
    Average(AveragingWeights),
    Pcr6,
    PcrSharp,
    PcrSharpSchedule(PcrSharpSchedule),
    FocusOrReject,
}

impl RuleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RuleSpec::Dst => "dst",
            RuleSpec::Disjunctive => "disjunctive",
            RuleSpec::DuboisPrade => "dubois-prade",
            RuleSpec::Average(_) => "average",
            RuleSpec::Pcr6 => "pcr6",
            RuleSpec::PcrSharp => "pcr-sharp",
            RuleSpec::PcrSharpSchedule(_) => "pcr-sharp-schedule",
            RuleSpec::FocusOrReject => "focus-or-reject",
        }
    }

    /// Resolves a bare rule name for `sources` sources. `average` gets
    /// uniform weights; `pcr-sharp-schedule` cannot be named bare because a
    /// schedule must come with it.
    pub fn from_name(name: &str, sources: usize) -> Result<RuleSpec, RulesError> {
        match name {
            "dst" => Ok(RuleSpec::Dst),
            "disjunctive" => Ok(RuleSpec::Disjunctive),
            "dubois-prade" => Ok(RuleSpec::DuboisPrade),
            "average" => Ok(RuleSpec::Average(AveragingWeights::uniform(sources)?)),
            "pcr6" => Ok(RuleSpec::Pcr6),
            "pcr-sharp" => Ok(RuleSpec::PcrSharp),
            "pcr-sharp-schedule" => Err(RulesError::ScheduleRequired),
            "focus-or-reject" => Ok(RuleSpec::FocusOrReject),
            other => Err(RulesError::UnknownRule(other.to_string())),
        }
    }

    /// Builds the referee for `sources` sources, checking that the rule
    /// parameters fit that arity.
    pub fn referee(&self, sources: usize) -> Result<Referee, RulesError> {
        match self {
            RuleSpec::Dst => Ok(f_conjunctive()),
            RuleSpec::Disjunctive => Ok(f_disjunctive()),
            RuleSpec::DuboisPrade => Ok(f_dubois_prade()),
            RuleSpec::Average(weights) => {
                if weights.len() != sources {
                    return Err(RulesError::Belief(BeliefError::WeightCountMismatch {
                        weights: weights.len(),
                        sources,
                    }));
                }
                Ok(f_average(weights))
            }
            RuleSpec::Pcr6 => Ok(f_pcr6()),
            RuleSpec::PcrSharp => Ok(f_pcr_sharp()),
            RuleSpec::PcrSharpSchedule(schedule) => {
                if schedule.max_size() > sources {
                    return Err(RulesError::ScheduleTooLarge {
                        start: schedule.max_size(),
                        sources,
                    });
                }
                Ok(f_pcr_sharp_schedule(schedule))
            }
            RuleSpec::FocusOrReject => Ok(f_focus_or_reject()),
        }
    }
}
