//! Basic belief assignments and the queries defined on them.
//!
//! A basic belief assignment (bba) `m` puts strictly positive mass on a set
//! of focal propositions, with `m(∅) = 0` and total mass 1. From it derive
//! the belief of a proposition, `bel(X) = Σ_{Y ⊆ X} m(Y)`, and its
//! plausibility, `pl(X) = Σ_{Y ∩ X ≠ ∅} m(Y)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::lattice::{Frame, Proposition};

/// Slack allowed on a mass or weight total before rejecting the input.
/// Totals inside the tolerance are renormalized to exactly 1.
pub const MASS_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum BeliefError {
    #[error("a bba needs at least one focal proposition")]
    EmptyAssignment,
    #[error("negative mass {mass} on {proposition:?}")]
    NegativeMass { proposition: String, mass: f64 },
    #[error("the empty proposition cannot carry mass (got {0})")]
    MassOnEmptySet(f64),
    #[error("masses sum to {0}, outside tolerance around 1")]
    MassSumOutOfTolerance(f64),
    #[error("all entries of a bba must share one frame")]
    FrameMismatch,
    #[error("{weights} weights given for {sources} sources")]
    WeightCountMismatch { weights: usize, sources: usize },
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("weights sum to {0}, outside tolerance around 1")]
    WeightSumOutOfTolerance(f64),
    #[error("at least one source is required")]
    NoSources,
}

/// A validated basic belief assignment.
///
/// Construction sums duplicate propositions, drops exact-zero masses,
/// rejects negative masses and mass on the empty set, and renormalizes the
/// total when it is within [`MASS_SUM_TOLERANCE`] of 1. Focal propositions
/// are stored in increasing bitmask order, and the value is immutable and
/// cheap to clone afterwards.
#[derive(Clone, PartialEq, Debug)]
pub struct Bba {
    frame: Frame,
    focal: Arc<[(u64, f64)]>,
}

impl Bba {
    pub fn new<I>(entries: I) -> Result<Bba, BeliefError>
    where
        I: IntoIterator<Item = (Proposition, f64)>,
    {
        let mut frame: Option<Frame> = None;
        let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
        for (prop, mass) in entries {
            match &frame {
                None => frame = Some(prop.frame().clone()),
                Some(f) if *f == *prop.frame() => {}
                Some(_) => return Err(BeliefError::FrameMismatch),
            }
            if mass < 0.0 {
                return Err(BeliefError::NegativeMass {
                    proposition: prop.to_string(),
                    mass,
                });
            }
            *merged.entry(prop.bits()).or_insert(0.0) += mass;
        }
        let frame = frame.ok_or(BeliefError::EmptyAssignment)?;
        merged.retain(|_, mass| *mass != 0.0);
        if let Some(mass) = merged.get(&0) {
            return Err(BeliefError::MassOnEmptySet(*mass));
        }
        if merged.is_empty() {
            return Err(BeliefError::EmptyAssignment);
        }
        let sum: f64 = merged.values().sum();
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(BeliefError::MassSumOutOfTolerance(sum));
        }
        let focal: Vec<(u64, f64)> = merged.into_iter().map(|(b, m)| (b, m / sum)).collect();
        Ok(Bba {
            frame,
            focal: focal.into(),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Number of focal propositions.
    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// Focal propositions with their masses, in increasing bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (Proposition, f64)> + '_ {
        self.focal
            .iter()
            .map(|&(bits, mass)| (self.frame.proposition_from_bits(bits), mass))
    }

    /// Mass of a proposition; zero when it is not focal.
    pub fn mass(&self, prop: &Proposition) -> f64 {
        debug_assert!(*prop.frame() == self.frame);
        self.mass_bits(prop.bits())
    }

    pub(crate) fn mass_bits(&self, bits: u64) -> f64 {
        match self.focal.binary_search_by_key(&bits, |&(b, _)| b) {
            Ok(i) => self.focal[i].1,
            Err(_) => 0.0,
        }
    }

    pub(crate) fn focal_bits(&self) -> &[(u64, f64)] {
        &self.focal
    }

    /// Total mass of the focal propositions implying `x`.
    pub fn belief(&self, x: &Proposition) -> Result<f64, BeliefError> {
        if *x.frame() != self.frame {
            return Err(BeliefError::FrameMismatch);
        }
        let target = x.bits();
        Ok(self
            .focal
            .iter()
            .filter(|(bits, _)| bits & !target == 0)
            .map(|(_, mass)| mass)
            .sum())
    }

    /// Total mass of the focal propositions compatible with `x`.
    pub fn plausibility(&self, x: &Proposition) -> Result<f64, BeliefError> {
        if *x.frame() != self.frame {
            return Err(BeliefError::FrameMismatch);
        }
        let target = x.bits();
        Ok(self
            .focal
            .iter()
            .filter(|(bits, _)| bits & target != 0)
            .map(|(_, mass)| mass)
            .sum())
    }

    /// Draws one focal proposition with probability equal to its mass, by
    /// inverting the cumulative mass in bitmask order.
    pub fn draw_focal<R: Rng + ?Sized>(&self, rng: &mut R) -> Proposition {
        self.frame.proposition_from_bits(self.draw_bits(rng))
    }

    pub(crate) fn draw_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        for &(bits, mass) in self.focal.iter() {
            cum += mass;
            if u < cum {
                return bits;
            }
        }
        self.focal[self.focal.len() - 1].0
    }
}

/// Non-negative source weights summing to 1, for weighted averaging.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragingWeights {
    values: Vec<f64>,
}

impl AveragingWeights {
    /// Validates the weights and renormalizes a total within
    /// [`MASS_SUM_TOLERANCE`] of 1.
    pub fn new<I>(weights: I) -> Result<AveragingWeights, BeliefError>
    where
        I: IntoIterator<Item = f64>,
    {
        let mut values: Vec<f64> = weights.into_iter().collect();
        if values.is_empty() {
            return Err(BeliefError::NoSources);
        }
        if let Some(&w) = values.iter().find(|&&w| w < 0.0) {
            return Err(BeliefError::NegativeWeight(w));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(BeliefError::WeightSumOutOfTolerance(sum));
        }
        for w in &mut values {
            *w /= sum;
        }
        Ok(AveragingWeights { values })
    }

    /// Equal weight on each of `n` sources.
    pub fn uniform(n: usize) -> Result<AveragingWeights, BeliefError> {
        if n == 0 {
            return Err(BeliefError::NoSources);
        }
        Ok(AveragingWeights {
            values: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Weighted mixture of bbas: `m(X) = Σ_i α_i m_i(X)`.
pub fn average(sources: &[Bba], weights: &AveragingWeights) -> Result<Bba, BeliefError> {
    if sources.is_empty() {
        return Err(BeliefError::NoSources);
    }
    if weights.len() != sources.len() {
        return Err(BeliefError::WeightCountMismatch {
            weights: weights.len(),
            sources: sources.len(),
        });
    }
    let frame = sources[0].frame().clone();
    if sources.iter().any(|m| *m.frame() != frame) {
        return Err(BeliefError::FrameMismatch);
    }
    let mut mixed: BTreeMap<u64, f64> = BTreeMap::new();
    for (source, &alpha) in sources.iter().zip(weights.values()) {
        for &(bits, mass) in source.focal_bits() {
            *mixed.entry(bits).or_insert(0.0) += alpha * mass;
        }
    }
    Bba::new(
        mixed
            .into_iter()
            .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass)),
    )
}
