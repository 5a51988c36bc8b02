//! Direct implementations of the classical combination rules, written from
//! their summation formulas rather than through referee arbitrament.
//!
//! These exist to cross-check the referee-based pipeline: the same rule is
//! computed along two independent routes and the results are compared in
//! tests. Keep these implementations free of any call into the referee
//! machinery.

use std::collections::BTreeMap;

use crate::belief::Bba;
use crate::lattice::{Frame, Proposition};
use crate::referee::{FusionResult, RefereeError, TOTAL_CONFLICT_TOLERANCE};

/// The index renumbering `σ_i` used by the PCR6 formula: counts through the
/// sources while skipping source `i`, so `σ_i(j) = j` below `i` and `j + 1`
/// from `i` on. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaIndex {
    skipped: usize,
}

impl SigmaIndex {
    pub fn new(skipped: usize) -> SigmaIndex {
        SigmaIndex { skipped }
    }

    pub fn map(&self, j: usize) -> usize {
        if j < self.skipped {
            j
        } else {
            j + 1
        }
    }
}

fn validate(sources: &[Bba]) -> Result<Frame, RefereeError> {
    let first = sources.first().ok_or(RefereeError::NoSources)?;
    let frame = first.frame().clone();
    if sources.iter().any(|m| *m.frame() != frame) {
        return Err(RefereeError::FrameMismatch);
    }
    Ok(frame)
}

/// Visits every tuple of focal propositions, one per listed source, with
/// the product of their masses. No sources yields the single empty tuple
/// with product 1.
fn each_tuple<F>(focal: &[&[(u64, f64)]], mut visit: F)
where
    F: FnMut(&[u64], f64),
{
    let s = focal.len();
    if s == 0 {
        visit(&[], 1.0);
        return;
    }
    let mut index = vec![0usize; s];
    let mut bits = vec![0u64; s];
    'tuples: loop {
        let mut product = 1.0;
        for i in 0..s {
            let (b, mass) = focal[i][index[i]];
            bits[i] = b;
            product *= mass;
        }
        visit(&bits, product);
        for i in (0..s).rev() {
            index[i] += 1;
            if index[i] < focal[i].len() {
                continue 'tuples;
            }
            index[i] = 0;
        }
        break;
    }
}

fn focal_lists(sources: &[Bba]) -> Vec<&[(u64, f64)]> {
    sources.iter().map(|m| m.focal_bits()).collect()
}

/// The conjunctive consensus `m_∧(X) = Σ_{∩Y_i = X} Π_i m_i(Y_i)`, including
/// the mass `m_∧(∅)` landing on the empty proposition, which measures the
/// conjunctive conflict.
pub fn conjunctive_consensus(sources: &[Bba]) -> Result<BTreeMap<Proposition, f64>, RefereeError> {
    let frame = validate(sources)?;
    let universe = frame.universe_mask();
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    each_tuple(&focal_lists(sources), |bits, product| {
        let meet = bits.iter().fold(universe, |a, &b| a & b);
        *acc.entry(meet).or_insert(0.0) += product;
    });
    acc.entry(0).or_insert(0.0);
    Ok(acc
        .into_iter()
        .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass))
        .collect())
}

/// Dempster-Shafer: the conjunctive consensus with the conflict normalized
/// away, `m(X) = m_∧(X) / (1 - m_∧(∅))`.
pub fn dst_direct(sources: &[Bba]) -> Result<FusionResult, RefereeError> {
    let frame = validate(sources)?;
    let consensus = conjunctive_consensus(sources)?;
    let z = consensus[&frame.empty()];
    if z >= 1.0 - TOTAL_CONFLICT_TOLERANCE {
        return Err(RefereeError::TotalConflict);
    }
    let fused = Bba::new(
        consensus
            .into_iter()
            .filter(|(p, _)| !p.is_empty())
            .map(|(p, mass)| (p, mass / (1.0 - z))),
    )?;
    Ok(FusionResult {
        fused,
        rejection_rate: z,
    })
}

/// The disjunctive rule `m(X) = Σ_{∪Y_i = X} Π_i m_i(Y_i)`.
pub fn disjunctive_direct(sources: &[Bba]) -> Result<FusionResult, RefereeError> {
    let frame = validate(sources)?;
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    each_tuple(&focal_lists(sources), |bits, product| {
        let join = bits.iter().fold(0, |a, &b| a | b);
        *acc.entry(join).or_insert(0.0) += product;
    });
    let fused = Bba::new(
        acc.into_iter()
            .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass)),
    )?;
    Ok(FusionResult {
        fused,
        rejection_rate: 0.0,
    })
}

/// Dubois-Prade: conjunctive consensus for agreeing tuples, with the product
/// of each conflicting tuple moved to the union of its entries.
pub fn dubois_prade_direct(sources: &[Bba]) -> Result<FusionResult, RefereeError> {
    let frame = validate(sources)?;
    let universe = frame.universe_mask();
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    each_tuple(&focal_lists(sources), |bits, product| {
        let meet = bits.iter().fold(universe, |a, &b| a & b);
        let target = if meet != 0 {
            meet
        } else {
            bits.iter().fold(0, |a, &b| a | b)
        };
        *acc.entry(target).or_insert(0.0) += product;
    });
    let fused = Bba::new(
        acc.into_iter()
            .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass)),
    )?;
    Ok(FusionResult {
        fused,
        rejection_rate: 0.0,
    })
}

/// PCR6 from its summation formula: the conjunctive consensus plus, for
/// each source `i` and focal `X`, the term
///
/// `m_i(X)² Σ Π_j m_{σ_i(j)}(Y_{σ_i(j)}) / (m_i(X) + Σ_j m_{σ_i(j)}(Y_{σ_i(j)}))`
///
/// summed over tuples of the other sources whose intersection misses `X`.
/// A zero denominator discards the fraction.
pub fn pcr6_direct(sources: &[Bba]) -> Result<FusionResult, RefereeError> {
    let frame = validate(sources)?;
    let universe = frame.universe_mask();
    let s = sources.len();
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    each_tuple(&focal_lists(sources), |bits, product| {
        let meet = bits.iter().fold(universe, |a, &b| a & b);
        if meet != 0 {
            *acc.entry(meet).or_insert(0.0) += product;
        }
    });
    for i in 0..s {
        let sigma = SigmaIndex::new(i);
        let others: Vec<&[(u64, f64)]> = (0..s - 1)
            .map(|j| sources[sigma.map(j)].focal_bits())
            .collect();
        for &(x_bits, x_mass) in sources[i].focal_bits() {
            each_tuple(&others, |bits, product| {
                let meet = bits.iter().fold(universe, |a, &b| a & b);
                if meet & x_bits != 0 {
                    return;
                }
                let mass_sum: f64 = bits
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| mass_of(others[j], b))
                    .sum();
                let denominator = x_mass + mass_sum;
                if denominator == 0.0 {
                    return;
                }
                *acc.entry(x_bits).or_insert(0.0) += x_mass * x_mass * product / denominator;
            });
        }
    }
    let fused = Bba::new(
        acc.into_iter()
            .map(|(bits, mass)| (frame.proposition_from_bits(bits), mass)),
    )?;
    Ok(FusionResult {
        fused,
        rejection_rate: 0.0,
    })
}

fn mass_of(focal: &[(u64, f64)], bits: u64) -> f64 {
    match focal.binary_search_by_key(&bits, |&(b, _)| b) {
        Ok(i) => focal[i].1,
        Err(_) => 0.0,
    }
}
