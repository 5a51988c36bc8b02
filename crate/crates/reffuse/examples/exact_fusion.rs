//! Fuse two partially agreeing sources and read the result three ways:
//! as fused mass, as belief (mass provably inside a set), and as
//! plausibility (mass not provably outside it).
//!
//! Run with `cargo run --example exact_fusion`.

use reffuse::rules::f_conjunctive;
use reffuse::{fuse_exact, Bba, Frame};

fn main() {
    let frame = Frame::new(["red", "green", "blue"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    // a witness is fairly sure of red but hedges toward green
    let witness = Bba::new([
        (set(&["red"]), 0.55),
        (set(&["red", "green"]), 0.25),
        (set(&["red", "green", "blue"]), 0.20),
    ])
    .unwrap();

    // a sensor cannot separate red from green and sometimes reads blue
    let sensor = Bba::new([
        (set(&["green"]), 0.30),
        (set(&["red", "green"]), 0.50),
        (set(&["blue"]), 0.20),
    ])
    .unwrap();

    let result = fuse_exact(&[witness, sensor], &f_conjunctive()).unwrap();

    println!(
        "conflict mass normalized away: {:.4}",
        result.rejection_rate
    );
    println!();
    println!(
        "{:<12} {:>8} {:>8} {:>8}",
        "proposition", "mass", "belief", "plaus"
    );
    for (prop, mass) in result.fused.iter() {
        let bel = result.fused.belief(&prop).unwrap();
        let pl = result.fused.plausibility(&prop).unwrap();
        println!(
            "{:<12} {:>8.4} {:>8.4} {:>8.4}",
            prop.to_string(),
            mass,
            bel,
            pl
        );
    }
    println!();

    // the [belief, plausibility] interval brackets each atom's support
    for label in frame.atoms() {
        let atom = frame.atom(label).unwrap();
        println!(
            "{label}: support is somewhere in [{:.4}, {:.4}]",
            result.fused.belief(&atom).unwrap(),
            result.fused.plausibility(&atom).unwrap(),
        );
    }
}
