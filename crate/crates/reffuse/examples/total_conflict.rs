//! What happens when sources cannot all be right at once. Three point
//! masses with an empty joint intersection push the conjunctive rule into
//! total conflict, which fusion reports as an error rather than a result;
//! redistribution rules still produce an answer. Sampling reports the
//! same dead end through its own error values.
//!
//! Run with `cargo run --example total_conflict`.

use reffuse::rules::{f_conjunctive, f_pcr6, f_pcr_sharp};
use reffuse::{estimate, fuse_exact, Bba, Frame, RefereeError, SampleConfig, SampleError};

fn main() {
    let frame = Frame::new(["a", "b", "c"]).unwrap();
    let set = |labels: &[&str]| frame.proposition(labels.iter().copied()).unwrap();

    let sources = vec![
        Bba::new([(set(&["a", "b"]), 1.0)]).unwrap(),
        Bba::new([(set(&["a", "c"]), 1.0)]).unwrap(),
        Bba::new([(set(&["c"]), 1.0)]).unwrap(),
    ];

    match fuse_exact(&sources, &f_conjunctive()) {
        Err(RefereeError::TotalConflict) => {
            println!(
                "conjunctive rule: every tuple is rejected ({})",
                RefereeError::TotalConflict
            )
        }
        other => println!("conjunctive rule: unexpected outcome {other:?}"),
    }
    println!();

    // proportional redistribution returns each conflicting product to the
    // sources that spent it
    let pcr6 = fuse_exact(&sources, &f_pcr6()).unwrap();
    println!("pcr6 keeps all mass (z = {}):", pcr6.rejection_rate);
    for (prop, mass) in pcr6.fused.iter() {
        println!("  {:<6} {mass:.6}", prop.to_string());
    }
    println!();

    // the consensus walk settles for the largest agreeing coalition: the
    // first two sources share a, the last two share c
    let sharp = fuse_exact(&sources, &f_pcr_sharp()).unwrap();
    println!(
        "pcr-sharp finds partial agreement (z = {}):",
        sharp.rejection_rate
    );
    for (prop, mass) in sharp.fused.iter() {
        println!("  {:<6} {mass:.6}", prop.to_string());
    }
    println!();

    match estimate(&sources, &f_conjunctive(), &SampleConfig::new(10_000, 1)) {
        Err(SampleError::AllRejected { n }) => {
            println!("sampling the conjunctive rule: all {n} samples rejected");
        }
        other => println!("sampling: unexpected outcome {other:?}"),
    }

    // on huge runs the sampler gives up early instead of rejecting forever
    let cfg = SampleConfig::new(50_000_000, 1).with_rejection_guard(100_000);
    match estimate(&sources, &f_conjunctive(), &cfg) {
        Err(SampleError::RejectionGuardTripped { observed }) => {
            println!("with a guard: stopped after {observed} fruitless draws");
        }
        other => println!("with a guard: unexpected outcome {other:?}"),
    }
}
