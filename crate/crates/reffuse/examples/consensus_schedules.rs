//! Consensus-walk fusion on three sources that agree in pairs but never
//! all at once. Each schedule lists the coalition sizes tried in order:
//! a focal tuple settles at the first size where some subset of sources
//! of that size has a nonempty intersection, and is rejected if no listed
//! size works. Full walks subsume the classical rules: [3] is conjunctive
//! normalization and [3, 1] is proportional redistribution.
//!
//! Run with `cargo run --example consensus_schedules`.

use reffuse::rules::{f_conjunctive, f_pcr6, f_pcr_sharp, f_pcr_sharp_schedule, PcrSharpSchedule};
use reffuse::{fuse_exact, Bba, Frame, FusionResult, Referee, RefereeError};

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let sources = vec![
        Bba::new([(set(&["a"]), 0.6), (set(&["a", "b"]), 0.4)]).unwrap(),
        Bba::new([(set(&["a"]), 0.3), (set(&["a", "c"]), 0.7)]).unwrap(),
        Bba::new([(set(&["b"]), 0.8), (set(&["a", "b", "c"]), 0.2)]).unwrap(),
    ];

    let schedule = |sizes: &[usize]| -> Referee {
        f_pcr_sharp_schedule(&PcrSharpSchedule::new(sizes.iter().copied()).unwrap())
    };
    let columns: Vec<(&str, Referee)> = vec![
        ("[3]", schedule(&[3])),
        ("[3,2]", schedule(&[3, 2])),
        ("[3,1]", schedule(&[3, 1])),
        ("[3,2,1]", schedule(&[3, 2, 1])),
        ("dst", f_conjunctive()),
        ("pcr6", f_pcr6()),
        ("pcr-sharp", f_pcr_sharp()),
    ];

    let outcomes: Vec<(&str, Result<FusionResult, RefereeError>)> = columns
        .iter()
        .map(|(name, referee)| (*name, fuse_exact(&sources, referee)))
        .collect();

    print!("{:<12}", "proposition");
    for (name, _) in &outcomes {
        print!(" {name:>10}");
    }
    println!();
    for prop in frame.propositions().filter(|p| !p.is_empty()) {
        let shown: Vec<String> = outcomes
            .iter()
            .map(|(_, outcome)| match outcome {
                Ok(result) => format!("{:>10.6}", result.fused.mass(&prop)),
                Err(_) => format!("{:>10}", "-"),
            })
            .collect();
        if shown
            .iter()
            .all(|cell| cell.trim() == "0.000000" || cell.trim() == "-")
        {
            continue;
        }
        print!("{:<12}", prop.to_string());
        for cell in shown {
            print!(" {cell}");
        }
        println!();
    }
    print!("{:<12}", "z");
    for (_, outcome) in &outcomes {
        match outcome {
            Ok(result) => print!(" {:>10.6}", result.rejection_rate),
            Err(_) => print!(" {:>10}", "conflict"),
        }
    }
    println!();
    println!();
    println!("walking all sizes down to 1 ([3,2,1], the default pcr-sharp walk)");
    println!("rejects nothing; stopping early ([3] or [3,2]) rejects whatever");
    println!("found no coalition of the listed sizes.");
}
