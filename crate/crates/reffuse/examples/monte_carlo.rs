//! Estimate a fusion by sampling instead of enumerating: draw a focal set
//! from each source, let the referee arbitrate the tuple, tally the
//! outcome. The estimate comes with a distribution-free error bound of
//! sqrt(m(1-m)/N) per proposition, and the tally is reproducible: same
//! seed, same counts, no matter how many worker threads run (cap them
//! with REFFUSE_THREADS).
//!
//! Run with `cargo run --example monte_carlo`.

use reffuse::rules::f_pcr6;
use reffuse::{
    convergence_series, estimate, estimate_with_workers, fuse_exact, stderr_bound, Bba, Frame,
    SampleConfig,
};

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let sources = vec![
        Bba::new([
            (set(&["a"]), 0.5),
            (set(&["a", "b"]), 0.1),
            (set(&["a", "b", "c"]), 0.4),
        ])
        .unwrap(),
        Bba::new([
            (set(&["c"]), 0.3),
            (set(&["a", "c"]), 0.3),
            (set(&["a", "b", "c"]), 0.4),
        ])
        .unwrap(),
    ];
    let referee = f_pcr6();

    let exact = fuse_exact(&sources, &referee).unwrap();
    let cfg = SampleConfig::new(200_000, 42);
    let est = estimate(&sources, &referee, &cfg).unwrap();

    println!(
        "n = {}, accepted = {}, z = {:.6}",
        est.n(),
        est.accepted(),
        est.z_hat()
    );
    println!();
    println!(
        "{:<12} {:>10} {:>10} {:>10} {:>10}",
        "proposition", "estimate", "exact", "|error|", "bound"
    );
    for (prop, mass) in exact.fused.iter() {
        println!(
            "{:<12} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            prop.to_string(),
            est.m_hat(&prop),
            mass,
            (est.m_hat(&prop) - mass).abs(),
            stderr_bound(mass, cfg.n),
        );
    }
    println!();

    // the error bound shrinks like 1/sqrt(N); watch an atom's estimate
    // settle as N climbs through powers of ten
    let series = convergence_series(&sources, &referee, &[2, 3, 4, 5], 42).unwrap();
    let a = set(&["a"]);
    println!(
        "estimate of m(a) as N grows (exact {:.6}):",
        exact.fused.mass(&a)
    );
    for est in &series {
        println!(
            "  N = {:>7}: {:.6} (bound {:.6})",
            est.n(),
            est.m_hat(&a),
            stderr_bound(exact.fused.mass(&a), est.n()),
        );
    }
    println!();

    // per-chunk counter-based seeding makes the tally a pure function of
    // (seed, n): worker counts only change who computes which chunk
    let solo = estimate_with_workers(&sources, &referee, &cfg, 1).unwrap();
    let crowd = estimate_with_workers(&sources, &referee, &cfg, 8).unwrap();
    println!(
        "same counts with 1 worker and 8 workers: {}",
        if solo == crowd { "yes" } else { "no" }
    );
}
