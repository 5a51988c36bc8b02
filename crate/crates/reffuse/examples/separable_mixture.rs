//! A referee can be declared as a weighted mixture of sub-referees, each
//! reading its own subset of the sources. Declared structure pays off
//! twice: exact fusion of a mixture is the weighted blend of the branch
//! fusions, and the sampler draws a branch first and then samples only
//! the sources that branch actually reads.
//!
//! Run with `cargo run --example separable_mixture`.

use reffuse::rules::{f_average, f_dubois_prade};
use reffuse::{
    estimate, fuse_exact, mix, AveragingWeights, Bba, Frame, SampleConfig, SeparableReferee,
};

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let senior = Bba::new([(set(&["a"]), 0.6), (set(&["a", "b"]), 0.4)]).unwrap();
    let left = Bba::new([(set(&["a"]), 0.3), (set(&["a", "c"]), 0.7)]).unwrap();
    let right = Bba::new([(set(&["b"]), 0.8), (set(&["a", "b", "c"]), 0.2)]).unwrap();
    let sources = vec![senior, left, right];

    // consult the senior source with one junior at a time, never all three
    let panel = mix(SeparableReferee::new(
        3,
        vec![
            (0.5, vec![0, 1], f_dubois_prade()),
            (0.5, vec![0, 2], f_dubois_prade()),
        ],
    )
    .unwrap());

    println!("branches:");
    for branch in panel.separable().unwrap().branches() {
        println!(
            "  weight {:.2}, reads sources {:?}",
            branch.weight(),
            branch.sources()
        );
    }
    println!();

    let blended = fuse_exact(&sources, &panel).unwrap();
    let with_left = fuse_exact(&sources[..2], &f_dubois_prade()).unwrap();
    let with_right =
        fuse_exact(&[sources[0].clone(), sources[2].clone()], &f_dubois_prade()).unwrap();

    println!(
        "{:<12} {:>10} {:>12} {:>12}",
        "proposition", "mixture", "senior+left", "senior+right"
    );
    let mut matches = true;
    for prop in frame.propositions().filter(|p| !p.is_empty()) {
        let mass = blended.fused.mass(&prop);
        let l = with_left.fused.mass(&prop);
        let r = with_right.fused.mass(&prop);
        if mass == 0.0 && l == 0.0 && r == 0.0 {
            continue;
        }
        println!(
            "{:<12} {:>10.6} {:>12.6} {:>12.6}",
            prop.to_string(),
            mass,
            l,
            r
        );
        matches &= (mass - (0.5 * l + 0.5 * r)).abs() < 1e-12;
    }
    println!();
    println!(
        "mixture equals the half-and-half blend of the branch fusions: {}",
        if matches { "yes" } else { "no" }
    );

    let est = estimate(&sources, &panel, &SampleConfig::new(100_000, 5)).unwrap();
    let worst = frame
        .propositions()
        .filter(|p| !p.is_empty())
        .map(|p| (est.m_hat(&p) - blended.fused.mass(&p)).abs())
        .fold(0.0, f64::max);
    println!("largest sampling error at n=100000: {worst:.6}");
    println!();

    // weighted averaging is itself a mixture: one branch per source,
    // each forwarding that source's draw unchanged
    let weights = AveragingWeights::new([0.5, 0.3, 0.2]).unwrap();
    let averaging = f_average(&weights);
    println!("averaging viewed as a mixture:");
    for branch in averaging.separable().unwrap().branches() {
        println!(
            "  weight {:.2}, reads sources {:?}",
            branch.weight(),
            branch.sources()
        );
    }
}
