//! Shared fixtures for the unit tests.

use rand::Rng;

use crate::belief::Bba;
use crate::lattice::Frame;

pub fn abc() -> Frame {
    Frame::new(["a", "b", "c"]).unwrap()
}

pub fn bba(frame: &Frame, entries: &[(&[&str], f64)]) -> Bba {
    Bba::new(
        entries
            .iter()
            .map(|(labels, mass)| (frame.proposition(labels.iter().copied()).unwrap(), *mass)),
    )
    .unwrap()
}

/// A bba with up to `max_focal` random non-empty focal propositions whose
/// integer-derived masses sum to 1 within float error.
pub fn random_bba<R: Rng + ?Sized>(frame: &Frame, rng: &mut R, max_focal: usize) -> Bba {
    let universe = frame.universe_mask();
    let count = rng.gen_range(1..=max_focal);
    let mut masks = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let mut total = 0u32;
    for _ in 0..count {
        masks.push(rng.gen_range(1..=universe));
        let w = rng.gen_range(1..=100u32);
        weights.push(w);
        total += w;
    }
    Bba::new(masks.iter().zip(&weights).map(|(&bits, &w)| {
        (
            frame.proposition_from_bits(bits),
            f64::from(w) / f64::from(total),
        )
    }))
    .unwrap()
}
