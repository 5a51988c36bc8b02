//! Referee functions and exact fusion by enumeration.
//!
//! A referee function models an arbitrament: given one focal proposition
//! drawn from each source and the sources themselves as context, it returns
//! a probability distribution over propositions, where the empty proposition
//! stands for rejection. Fusing sources `m_1..m_s` under a referee `F` gives
//!
//! `m(X) ∝ Σ_{Y_1..Y_s} F(X | Y_1..Y_s) · Π_i m_i(Y_i)` for `X ≠ ∅`,
//!
//! normalized by `1 - z`, where `z` is the total probability of rejection.
//! [`fuse_exact`] computes this sum over every focal tuple; the sampler
//! module approximates the same quantity stochastically.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::belief::{Bba, BeliefError};
use crate::lattice::{Frame, Proposition};

/// Slack allowed on the total probability of an arbitrament distribution.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// A rejection rate above `1 - TOTAL_CONFLICT_TOLERANCE` counts as total
/// conflict, leaving no mass to renormalize.
pub const TOTAL_CONFLICT_TOLERANCE: f64 = 1e-12;

/// Largest number of focal tuples [`fuse_exact`] will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum RefereeError {
    #[error("referee expects {expected} entries, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{entries} entries given with {contexts} contexts")]
    EntryContextMismatch { entries: usize, contexts: usize },
    #[error("at least one source is required")]
    NoSources,
    #[error("all sources must share one frame")]
    FrameMismatch,
    #[error("total conflict: z=1")]
    TotalConflict,
    #[error("{tuples} focal tuples exceed the enumeration cap of {cap}")]
    EnumerationTooLarge { tuples: u128, cap: u64 },
    #[error("negative branch weight {0}")]
    NegativeBranchWeight(f64),
    #[error("branch weights sum to {0}, outside tolerance around 1")]
    BranchWeightSum(f64),
    #[error("a branch needs at least one source index")]
    EmptyBranch,
    #[error("branch source index {index} out of range for arity {arity}")]
    BranchSourceOutOfRange { index: usize, arity: usize },
    #[error("source index {0} repeated within a branch")]
    DuplicateBranchSource(usize),
    #[error("branch referee expects {expected} entries but selects {got} sources")]
    BranchArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Belief(#[from] BeliefError),
}

/// The output of one arbitrament: probabilities attached to propositions,
/// where the empty proposition means the entry tuple is rejected.
///
/// Construction only fixes the structure (shared frame, merged duplicates,
/// bitmask order). Whether the numbers form a probability distribution is a
/// separate question answered by [`Arbitrament::is_distribution`], so a
/// faulty referee can be observed rather than crash.
#[derive(Clone, Debug, PartialEq)]
pub struct Arbitrament {
    frame: Frame,
    entries: Vec<(u64, f64)>,
}

impl Arbitrament {
    /// Distribution putting probability 1 on a single proposition.
    pub fn point(p: Proposition) -> Arbitrament {
        Arbitrament {
            frame: p.frame().clone(),
            entries: vec![(p.bits(), 1.0)],
        }
    }

    /// Builds a distribution from proposition/probability pairs, merging
    /// duplicate propositions by summing.
    ///
    /// Panics when no pair is given or the propositions disagree on the
    /// frame; those are structural mistakes in the calling referee.
    pub fn new<I>(pairs: I) -> Arbitrament
    where
        I: IntoIterator<Item = (Proposition, f64)>,
    {
        let mut frame: Option<Frame> = None;
        let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
        for (prop, p) in pairs {
            match &frame {
                None => frame = Some(prop.frame().clone()),
                Some(f) => assert!(
                    *f == *prop.frame(),
                    "arbitrament entries must share one frame"
                ),
            }
            *merged.entry(prop.bits()).or_insert(0.0) += p;
        }
        let frame = frame.expect("an arbitrament needs at least one entry");
        Arbitrament {
            frame,
            entries: merged.into_iter().collect(),
        }
    }

    pub(crate) fn from_bits(frame: Frame, pairs: Vec<(u64, f64)>) -> Arbitrament {
        debug_assert!(!pairs.is_empty());
        let sorted = pairs.windows(2).all(|w| w[0].0 < w[1].0);
        if sorted {
            return Arbitrament {
                frame,
                entries: pairs,
            };
        }
        let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
        for (bits, p) in pairs {
            *merged.entry(bits).or_insert(0.0) += p;
        }
        Arbitrament {
            frame,
            entries: merged.into_iter().collect(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Entries in increasing bitmask order; the empty proposition, when
    /// present, comes first.
    pub fn support(&self) -> impl Iterator<Item = (Proposition, f64)> + '_ {
        self.entries
            .iter()
            .map(|&(bits, p)| (self.frame.proposition_from_bits(bits), p))
    }

    pub fn probability(&self, prop: &Proposition) -> f64 {
        debug_assert!(*prop.frame() == self.frame);
        match self.entries.binary_search_by_key(&prop.bits(), |&(b, _)| b) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    /// Probability of rejection, i.e. of the empty proposition.
    pub fn rejection_probability(&self) -> f64 {
        match self.entries.first() {
            Some(&(0, p)) => p,
            _ => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    /// True when every probability is non-negative and the total is within
    /// [`PROBABILITY_SUM_TOLERANCE`] of 1.
    pub fn is_distribution(&self) -> bool {
        self.entries.iter().all(|&(_, p)| p >= 0.0)
            && (self.total() - 1.0).abs() <= PROBABILITY_SUM_TOLERANCE
    }

    pub(crate) fn entries_bits(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub(crate) fn draw_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.entries.len() == 1 {
            return self.entries[0].0;
        }
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        for &(bits, p) in &self.entries {
            cum += p;
            if u < cum {
                return bits;
            }
        }
        self.entries[self.entries.len() - 1].0
    }
}

type ArbitramentFn = dyn Fn(&[Proposition], &[Bba]) -> Arbitrament + Send + Sync;

#[derive(Clone)]
enum RefereeKind {
    Fn(Arc<ArbitramentFn>),
    Mixture(Arc<SeparableReferee>),
}

/// A referee function: entries (one focal proposition per source) plus the
/// sources as context, mapped to an [`Arbitrament`].
///
/// Referees must be pure so that exact fusion and sampling see the same
/// function, and they are `Send + Sync` so samplers may call them from
/// several workers at once.
#[derive(Clone)]
pub struct Referee {
    kind: RefereeKind,
    arity: Option<usize>,
    never_rejects: bool,
}

impl Referee {
    /// Wraps an arbitrament function. The referee accepts any number of
    /// entries until [`with_arity`](Self::with_arity) pins it down, and is
    /// assumed to reject until marked otherwise.
    pub fn from_fn<F>(f: F) -> Referee
    where
        F: Fn(&[Proposition], &[Bba]) -> Arbitrament + Send + Sync + 'static,
    {
        Referee {
            kind: RefereeKind::Fn(Arc::new(f)),
            arity: None,
            never_rejects: false,
        }
    }

    /// Restricts the referee to exactly `arity` entries.
    pub fn with_arity(mut self, arity: usize) -> Referee {
        self.arity = Some(arity);
        self
    }

    /// Declares that the referee never puts probability on the empty
    /// proposition. Fusion then skips the renormalization stage. Setting
    /// this on a referee that does reject leaves a mass deficit that
    /// surfaces as a validation error on the fused output.
    pub fn never_rejecting(mut self) -> Referee {
        self.never_rejects = true;
        self
    }

    pub fn arity(&self) -> Option<usize> {
        self.arity
    }

    pub fn never_rejects(&self) -> bool {
        self.never_rejects
    }

    /// The mixture structure, for referees built by [`mix`].
    pub fn separable(&self) -> Option<&SeparableReferee> {
        match &self.kind {
            RefereeKind::Mixture(sep) => Some(sep),
            RefereeKind::Fn(_) => None,
        }
    }

    /// Evaluates the referee at one entry tuple.
    pub fn arbitrate(
        &self,
        entries: &[Proposition],
        contexts: &[Bba],
    ) -> Result<Arbitrament, RefereeError> {
        if entries.len() != contexts.len() {
            return Err(RefereeError::EntryContextMismatch {
                entries: entries.len(),
                contexts: contexts.len(),
            });
        }
        if entries.is_empty() {
            return Err(RefereeError::NoSources);
        }
        if let Some(expected) = self.arity {
            if entries.len() != expected {
                return Err(RefereeError::ArityMismatch {
                    expected,
                    got: entries.len(),
                });
            }
        }
        Ok(self.eval(entries, contexts))
    }

    pub(crate) fn eval(&self, entries: &[Proposition], contexts: &[Bba]) -> Arbitrament {
        match &self.kind {
            RefereeKind::Fn(f) => f(entries, contexts),
            RefereeKind::Mixture(sep) => sep.eval(entries, contexts),
        }
    }
}

/// One weighted branch of a separable referee: a sub-referee applied to a
/// selection of the sources.
#[derive(Clone)]
pub struct Branch {
    weight: f64,
    sources: Vec<usize>,
    referee: Referee,
}

impl Branch {
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn referee(&self) -> &Referee {
        &self.referee
    }
}

/// A convex combination of sub-referees, `F = Σ_j θ_j F_j`, where branch `j`
/// looks only at its selected sources.
///
/// The structure is worth keeping explicit: a sampler can first draw the
/// branch, then sample only the entries that branch reads.
#[derive(Clone)]
pub struct SeparableReferee {
    arity: usize,
    branches: Vec<Branch>,
}

impl SeparableReferee {
    /// Builds a mixture over `arity` sources from `(weight, sources,
    /// referee)` triples. Weights must be non-negative and sum to 1 within
    /// [`PROBABILITY_SUM_TOLERANCE`]; they are renormalized to exactly 1.
    pub fn new(
        arity: usize,
        branches: Vec<(f64, Vec<usize>, Referee)>,
    ) -> Result<SeparableReferee, RefereeError> {
        if arity == 0 || branches.is_empty() {
            return Err(RefereeError::NoSources);
        }
        let mut sum = 0.0;
        for (weight, sources, referee) in &branches {
            if *weight < 0.0 {
                return Err(RefereeError::NegativeBranchWeight(*weight));
            }
            sum += weight;
            if sources.is_empty() {
                return Err(RefereeError::EmptyBranch);
            }
            for (i, &index) in sources.iter().enumerate() {
                if index >= arity {
                    return Err(RefereeError::BranchSourceOutOfRange { index, arity });
                }
                if sources[..i].contains(&index) {
                    return Err(RefereeError::DuplicateBranchSource(index));
                }
            }
            if let Some(expected) = referee.arity() {
                if expected != sources.len() {
                    return Err(RefereeError::BranchArityMismatch {
                        expected,
                        got: sources.len(),
                    });
                }
            }
        }
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(RefereeError::BranchWeightSum(sum));
        }
        Ok(SeparableReferee {
            arity,
            branches: branches
                .into_iter()
                .map(|(weight, sources, referee)| Branch {
                    weight: weight / sum,
                    sources,
                    referee,
                })
                .collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    fn never_rejects(&self) -> bool {
        self.branches.iter().all(|b| b.referee.never_rejects())
    }

    fn eval(&self, entries: &[Proposition], contexts: &[Bba]) -> Arbitrament {
        let frame = entries[0].frame().clone();
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        for branch in &self.branches {
            if branch.weight == 0.0 {
                continue;
            }
            let sub_entries: Vec<Proposition> =
                branch.sources.iter().map(|&i| entries[i].clone()).collect();
            let sub_contexts: Vec<Bba> = branch
                .sources
                .iter()
                .map(|&i| contexts[i].clone())
                .collect();
            let dist = branch.referee.eval(&sub_entries, &sub_contexts);
            for &(bits, p) in dist.entries_bits() {
                *acc.entry(bits).or_insert(0.0) += branch.weight * p;
            }
        }
        Arbitrament::from_bits(frame, acc.into_iter().collect())
    }
}

/// Turns an explicit mixture into a referee. The result keeps the branch
/// structure visible through [`Referee::separable`].
pub fn mix(separable: SeparableReferee) -> Referee {
    let arity = separable.arity();
    let never_rejects = separable.never_rejects();
    let referee = Referee {
        kind: RefereeKind::Mixture(Arc::new(separable)),
        arity: Some(arity),
        never_rejects: false,
    };
    if never_rejects {
        referee.never_rejecting()
    } else {
        referee
    }
}

/// A referee that ignores its entries and always returns the masses of
/// `target`, so fusing anything under it yields `target` back.
pub fn constant_referee(target: &Bba) -> Referee {
    let target = target.clone();
    Referee::from_fn(move |_, _| {
        Arbitrament::from_bits(target.frame().clone(), target.focal_bits().to_vec())
    })
    .never_rejecting()
}

/// Evaluates the referee at one entry tuple and reports whether the output
/// is a probability distribution. Expects matching arity.
pub fn check_normalization(referee: &Referee, entries: &[Proposition], contexts: &[Bba]) -> bool {
    referee
        .arbitrate(entries, contexts)
        .expect("check_normalization needs entries matching the referee arity")
        .is_distribution()
}

/// The outcome of a fusion: the combined bba and the rejection rate `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionResult {
    pub fused: Bba,
    pub rejection_rate: f64,
}

/// Exact fusion with the default enumeration cap.
pub fn fuse_exact(sources: &[Bba], referee: &Referee) -> Result<FusionResult, RefereeError> {
    fuse_exact_with_cap(sources, referee, DEFAULT_ENUMERATION_CAP)
}

/// Exact fusion by enumerating every focal tuple.
///
/// The cost is the product of the sources' focal counts; enumeration is
/// refused above `cap` tuples. Rejection mass is renormalized away unless
/// the referee is marked never-rejecting, and a rejection rate within
/// [`TOTAL_CONFLICT_TOLERANCE`] of 1 is reported as total conflict.
pub fn fuse_exact_with_cap(
    sources: &[Bba],
    referee: &Referee,
    cap: u64,
) -> Result<FusionResult, RefereeError> {
    if sources.is_empty() {
        return Err(RefereeError::NoSources);
    }
    let frame = sources[0].frame().clone();
    if sources.iter().any(|m| *m.frame() != frame) {
        return Err(RefereeError::FrameMismatch);
    }
    if let Some(expected) = referee.arity() {
        if sources.len() != expected {
            return Err(RefereeError::ArityMismatch {
                expected,
                got: sources.len(),
            });
        }
    }
    let tuples: u128 = sources.iter().map(|m| m.focal_count() as u128).product();
    if tuples > u128::from(cap) {
        return Err(RefereeError::EnumerationTooLarge { tuples, cap });
    }

    let focal: Vec<&[(u64, f64)]> = sources.iter().map(|m| m.focal_bits()).collect();
    let s = sources.len();
    let mut index = vec![0usize; s];
    let mut entries: Vec<Proposition> = Vec::with_capacity(s);
    let mut accumulated: BTreeMap<u64, f64> = BTreeMap::new();
    let mut z = 0.0f64;
    'tuples: loop {
        entries.clear();
        let mut weight = 1.0;
        for (i, &k) in index.iter().enumerate() {
            let (bits, mass) = focal[i][k];
            entries.push(frame.proposition_from_bits(bits));
            weight *= mass;
        }
        let dist = referee.eval(&entries, sources);
        for &(bits, p) in dist.entries_bits() {
            if bits == 0 {
                z += weight * p;
            } else {
                *accumulated.entry(bits).or_insert(0.0) += weight * p;
            }
        }
        for i in (0..s).rev() {
            index[i] += 1;
            if index[i] < focal[i].len() {
                continue 'tuples;
            }
            index[i] = 0;
        }
        break;
    }

    let scale = if referee.never_rejects() {
        1.0
    } else {
        if z >= 1.0 - TOTAL_CONFLICT_TOLERANCE {
            return Err(RefereeError::TotalConflict);
        }
        1.0 / (1.0 - z)
    };
    let fused = Bba::new(
        accumulated
            .into_iter()
            .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass * scale)),
    )?;
    Ok(FusionResult {
        fused,
        rejection_rate: z,
    })
}
