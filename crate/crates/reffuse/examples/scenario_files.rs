//! The scenario format the command-line tool reads is ordinary data, so
//! programs can build, store, and replay the same files. This example
//! parses a scenario from a JSON string, reconstructs the sources, and
//! fuses them under the rule the scenario names.
//!
//! Run with `cargo run --example scenario_files`.

use reffuse::cli::{Scenario, ScenarioMode};
use reffuse::{fuse_exact, Bba, Frame, RuleSpec};

fn main() {
    let text = r#"{
        "frame": ["up", "down", "flat"],
        "sources": [
            {
                "focal": [
                    { "set": ["up"], "mass": 0.5 },
                    { "set": ["up", "flat"], "mass": 0.5 }
                ]
            },
            {
                "focal": [
                    { "set": ["down"], "mass": 0.3 },
                    { "set": ["down", "flat"], "mass": 0.4 },
                    { "set": ["up", "down", "flat"], "mass": 0.3 }
                ]
            }
        ],
        "rule": { "name": "pcr6" },
        "mode": { "kind": "exact" }
    }"#;

    let scenario: Scenario = serde_json::from_str(text).unwrap();
    assert_eq!(scenario.mode, ScenarioMode::Exact);

    let frame = Frame::new(scenario.frame.iter().cloned()).unwrap();
    let sources: Vec<Bba> = scenario
        .sources
        .iter()
        .map(|source| {
            Bba::new(source.focal.iter().map(|focal| {
                let prop = frame
                    .proposition(focal.set.iter().map(String::as_str))
                    .unwrap();
                (prop, focal.mass)
            }))
            .unwrap()
        })
        .collect();

    let rule = RuleSpec::from_name(&scenario.rule.name, sources.len()).unwrap();
    let referee = rule.referee(sources.len()).unwrap();
    let result = fuse_exact(&sources, &referee).unwrap();

    println!("rule: {}", rule.name());
    for (prop, mass) in result.fused.iter() {
        println!("  {:<14} {mass:.6}", prop.to_string());
    }
    println!("rejection rate: {:.6}", result.rejection_rate);
    println!();
    println!("the same file drives the binary: save it and run");
    println!("  reffuse run --scenario <file>");
    println!("(`reffuse init-example` prints a starter scenario to edit.)");
}
