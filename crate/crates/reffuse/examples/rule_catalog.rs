//! Run every built-in combination rule on the same conflicted pair of
//! sources and print the fused assignments side by side. The pair agrees
//! that the middle atom is possible but leans toward opposite ends, so the
//! rules' different conflict treatments show up clearly.
//!
//! Run with `cargo run --example rule_catalog`.

use reffuse::rules::PcrSharpSchedule;
use reffuse::{fuse_exact, Bba, Frame, FusionResult, Proposition, RuleSpec};

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let sources = vec![
        Bba::new([
            (set(&["a"]), 0.4),
            (set(&["a", "b"]), 0.5),
            (set(&["a", "b", "c"]), 0.1),
        ])
        .unwrap(),
        Bba::new([
            (set(&["c"]), 0.4),
            (set(&["b", "c"]), 0.5),
            (set(&["a", "b", "c"]), 0.1),
        ])
        .unwrap(),
    ];

    let rules = vec![
        RuleSpec::from_name("dst", sources.len()).unwrap(),
        RuleSpec::from_name("disjunctive", sources.len()).unwrap(),
        RuleSpec::from_name("dubois-prade", sources.len()).unwrap(),
        RuleSpec::from_name("average", sources.len()).unwrap(),
        RuleSpec::from_name("pcr6", sources.len()).unwrap(),
        RuleSpec::from_name("pcr-sharp", sources.len()).unwrap(),
        RuleSpec::from_name("focus-or-reject", sources.len()).unwrap(),
        RuleSpec::PcrSharpSchedule(PcrSharpSchedule::new([2, 1]).unwrap()),
    ];

    let mut fused: Vec<(String, FusionResult)> = Vec::new();
    for rule in &rules {
        let referee = rule.referee(sources.len()).unwrap();
        let result = fuse_exact(&sources, &referee).unwrap();
        let label = match rule {
            RuleSpec::PcrSharpSchedule(_) => "pcr-sharp [2,1]".to_string(),
            other => other.name().to_string(),
        };
        fused.push((label, result));
    }

    let props: Vec<Proposition> = frame
        .propositions()
        .filter(|p| !p.is_empty() && fused.iter().any(|(_, r)| r.fused.mass(p) > 0.0))
        .collect();

    print!("{:<12}", "proposition");
    for (name, _) in &fused {
        print!(" {name:>15}");
    }
    println!();
    for prop in &props {
        print!("{:<12}", prop.to_string());
        for (_, result) in &fused {
            print!(" {:>15.6}", result.fused.mass(prop));
        }
        println!();
    }
    print!("{:<12}", "z");
    for (_, result) in &fused {
        print!(" {:>15.6}", result.rejection_rate);
    }
    println!();
    println!();
    println!("pcr-sharp [2,1] and pcr6 agree on pairs: both split each");
    println!("conflicting product over the two entries that produced it.");
}
