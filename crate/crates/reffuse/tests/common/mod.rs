//! Fixtures shared by the integration suites: the recurring source sets,
//! a randomized instance generator, and a from-scratch consensus-search
//! oracle used to cross-check the referee pipeline.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reffuse::{AveragingWeights, Bba, Frame};

pub fn frame3() -> Frame {
    Frame::new(["a", "b", "c"]).unwrap()
}

pub fn bba(frame: &Frame, masses: &[(&[&str], f64)]) -> Bba {
    Bba::new(
        masses
            .iter()
            .map(|(labels, mass)| (frame.proposition(labels.iter().copied()).unwrap(), *mass)),
    )
    .unwrap()
}

/// Two sources whose focal sets always intersect: no conflict at all.
pub fn no_conflict_pair(f: &Frame) -> Vec<Bba> {
    vec![
        bba(
            f,
            &[
                (&["a", "b"], 0.2),
                (&["a", "c"], 0.4),
                (&["b", "c"], 0.3),
                (&["a", "b", "c"], 0.1),
            ],
        ),
        bba(
            f,
            &[
                (&["a", "b"], 0.4),
                (&["a", "c"], 0.2),
                (&["b", "c"], 0.3),
                (&["a", "b", "c"], 0.1),
            ],
        ),
    ]
}

/// Two sources leaning toward opposite atoms; conjunctive conflict 0.56.
pub fn partial_conflict_pair(f: &Frame) -> Vec<Bba> {
    vec![
        bba(
            f,
            &[(&["a"], 0.4), (&["a", "b"], 0.5), (&["a", "b", "c"], 0.1)],
        ),
        bba(
            f,
            &[(&["c"], 0.4), (&["b", "c"], 0.5), (&["a", "b", "c"], 0.1)],
        ),
    ]
}

/// Two sources with broad focal sets and heavy universe tails.
pub fn spread_pair(f: &Frame) -> Vec<Bba> {
    vec![
        bba(
            f,
            &[(&["a"], 0.5), (&["a", "b"], 0.1), (&["a", "b", "c"], 0.4)],
        ),
        bba(
            f,
            &[(&["c"], 0.3), (&["a", "c"], 0.3), (&["a", "b", "c"], 0.4)],
        ),
    ]
}

/// Three point masses with empty joint intersection: total conflict.
pub fn point_mass_triple(f: &Frame) -> Vec<Bba> {
    vec![
        bba(f, &[(&["a", "b"], 1.0)]),
        bba(f, &[(&["a", "c"], 1.0)]),
        bba(f, &[(&["c"], 1.0)]),
    ]
}

/// Three sources where pairs agree even when all three cannot.
pub fn consensus_triple(f: &Frame) -> Vec<Bba> {
    vec![
        bba(f, &[(&["a"], 0.6), (&["a", "b"], 0.4)]),
        bba(f, &[(&["a"], 0.3), (&["a", "c"], 0.7)]),
        bba(f, &[(&["b"], 0.8), (&["a", "b", "c"], 0.2)]),
    ]
}

/// Two sources whose focal sets chain into each other; used with the
/// focus-or-reject rule.
pub fn nested_pair(f: &Frame) -> Vec<Bba> {
    vec![
        bba(f, &[(&["a"], 0.1), (&["a", "b"], 0.9)]),
        bba(f, &[(&["b"], 0.2), (&["b", "c"], 0.8)]),
    ]
}

/// A random bba with up to `max_focal` focal propositions. Masses come
/// from small integer weights so they stay comfortably positive.
pub fn random_bba(frame: &Frame, rng: &mut ChaCha8Rng, max_focal: usize) -> Bba {
    let candidates: Vec<_> = frame.propositions().filter(|p| !p.is_empty()).collect();
    let count = rng.gen_range(1..=max_focal.min(candidates.len()));
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    while chosen.len() < count {
        let i = rng.gen_range(0..candidates.len());
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    let weights: Vec<u32> = (0..count).map(|_| rng.gen_range(1..=8)).collect();
    let total: u32 = weights.iter().sum();
    Bba::new(
        chosen
            .iter()
            .zip(&weights)
            .map(|(&i, &w)| (candidates[i].clone(), f64::from(w) / f64::from(total))),
    )
    .unwrap()
}

/// A frame of 2 to 4 atoms with 2 or 3 random sources on it.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Frame, Vec<Bba>) {
    let atom_count = rng.gen_range(2..=4);
    let labels = &["a", "b", "c", "d"][..atom_count];
    let frame = Frame::new(labels.iter().copied()).unwrap();
    let source_count = rng.gen_range(2..=3);
    let sources = (0..source_count)
        .map(|_| random_bba(&frame, rng, 4))
        .collect();
    (frame, sources)
}

pub fn random_weights(rng: &mut ChaCha8Rng, count: usize) -> AveragingWeights {
    let raw: Vec<u32> = (0..count).map(|_| rng.gen_range(1..=8)).collect();
    let total: u32 = raw.iter().sum();
    AveragingWeights::new(raw.iter().map(|&w| f64::from(w) / f64::from(total))).unwrap()
}

/// The fused outcome computed by a literal consensus search, written
/// independently of the library's referee machinery.
pub struct OracleFusion {
    pub masses: BTreeMap<u64, f64>,
    pub z: f64,
}

/// Consensus-search fusion: for each focal tuple, walk the given subset
/// sizes from first to last; at the first size where some source subset of
/// that cardinality has a nonempty intersection of entries, split the tuple
/// product over those subsets in proportion to the product of their entry
/// masses. Tuples placing at no listed size are rejected, and the rejected
/// share is normalized away at the end.
///
/// Returns `None` when everything is rejected.
pub fn consensus_search_oracle(sources: &[Bba], sizes: &[usize]) -> Option<OracleFusion> {
    let s = sources.len();
    assert!((1..=16).contains(&s));
    let focal: Vec<Vec<(u64, f64)>> = sources
        .iter()
        .map(|m| m.iter().map(|(p, mass)| (p.bits(), mass)).collect())
        .collect();
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    let mut z = 0.0;
    let mut index = vec![0usize; s];
    loop {
        let tuple: Vec<(u64, f64)> = (0..s).map(|i| focal[i][index[i]]).collect();
        let product: f64 = tuple.iter().map(|&(_, mass)| mass).product();
        let mut placed = false;
        for &k in sizes {
            let mut candidates: Vec<(u64, f64)> = Vec::new();
            for subset in 1u32..(1 << s) {
                if subset.count_ones() as usize != k {
                    continue;
                }
                let mut meet = u64::MAX;
                let mut weight = 1.0;
                for (i, &(bits, mass)) in tuple.iter().enumerate() {
                    if subset & (1 << i) != 0 {
                        meet &= bits;
                        weight *= mass;
                    }
                }
                if meet != 0 {
                    candidates.push((meet, weight));
                }
            }
            if !candidates.is_empty() {
                let total: f64 = candidates.iter().map(|&(_, w)| w).sum();
                for (meet, w) in candidates {
                    *acc.entry(meet).or_insert(0.0) += product * w / total;
                }
                placed = true;
                break;
            }
        }
        if !placed {
            z += product;
        }
        let mut done = true;
        for i in (0..s).rev() {
            index[i] += 1;
            if index[i] < focal[i].len() {
                done = false;
                break;
            }
            index[i] = 0;
        }
        if done {
            break;
        }
    }
    if z >= 1.0 - 1e-12 {
        return None;
    }
    for mass in acc.values_mut() {
        *mass /= 1.0 - z;
    }
    Some(OracleFusion { masses: acc, z })
}
