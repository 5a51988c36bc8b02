//! Combination rules here are ordinary functions: a referee maps a tuple
//! of focal sets (one per source) to a probability distribution over
//! propositions, with leftover probability meaning "reject the tuple".
//! This example writes a referee from scratch: agree on the intersection
//! when one exists, otherwise side with the most specific source.
//!
//! Run with `cargo run --example custom_referee`.

use reffuse::rules::{f_conjunctive, f_dubois_prade};
use reffuse::{check_normalization, fuse_exact, Arbitrament, Bba, Frame, Proposition, Referee};

fn f_most_specific() -> Referee {
    Referee::from_fn(|entries: &[Proposition], _contexts: &[Bba]| {
        let mut meet = entries[0].clone();
        for entry in &entries[1..] {
            meet = meet.meet(entry).unwrap();
        }
        if !meet.is_empty() {
            return Arbitrament::point(meet);
        }
        // disagreement: the fewest-atom entry wins, ties split evenly
        let narrowest = entries.iter().map(|e| e.atom_count()).min().unwrap();
        let winners: Vec<&Proposition> = entries
            .iter()
            .filter(|e| e.atom_count() == narrowest)
            .collect();
        let share = 1.0 / winners.len() as f64;
        Arbitrament::new(winners.into_iter().map(|e| (e.clone(), share)))
    })
    .never_rejecting()
}

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let sources = vec![
        Bba::new([(set(&["a"]), 0.4), (set(&["a", "b"]), 0.6)]).unwrap(),
        Bba::new([(set(&["c"]), 0.5), (set(&["b", "c"]), 0.5)]).unwrap(),
    ];

    // a referee must hand out exactly one unit of probability per tuple;
    // spot-check that over every pair of focal sets
    let referee = f_most_specific();
    let props: Vec<Proposition> = frame.propositions().filter(|p| !p.is_empty()).collect();
    for y1 in &props {
        for y2 in &props {
            assert!(check_normalization(
                &referee,
                &[y1.clone(), y2.clone()],
                &sources
            ));
        }
    }
    println!(
        "normalization holds on all {} tuples",
        props.len() * props.len()
    );
    println!();

    let columns = vec![
        ("most-specific", fuse_exact(&sources, &referee).unwrap()),
        (
            "conjunctive",
            fuse_exact(&sources, &f_conjunctive()).unwrap(),
        ),
        (
            "dubois-prade",
            fuse_exact(&sources, &f_dubois_prade()).unwrap(),
        ),
    ];
    print!("{:<12}", "proposition");
    for (name, _) in &columns {
        print!(" {name:>14}");
    }
    println!();
    for prop in &props {
        if columns.iter().all(|(_, r)| r.fused.mass(prop) == 0.0) {
            continue;
        }
        print!("{:<12}", prop.to_string());
        for (_, result) in &columns {
            print!(" {:>14.6}", result.fused.mass(prop));
        }
        println!();
    }
    print!("{:<12}", "z");
    for (_, result) in &columns {
        print!(" {:>14.6}", result.rejection_rate);
    }
    println!();
    println!();
    println!("unlike the conjunctive rule, the custom referee keeps conflicting");
    println!("mass (z = 0) by crediting it to the narrowest claim; unlike");
    println!("dubois-prade it never widens a claim to a union.");
}
