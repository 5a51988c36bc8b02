//! End-to-end acceptance gate. Each test covers one numbered criterion and
//! prints a PASS/FAIL line (visible with `--nocapture`).

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reffuse::closed_form::{disjunctive_direct, dst_direct, dubois_prade_direct, pcr6_direct};
use reffuse::rules::{
    f_average, f_conjunctive, f_disjunctive, f_dubois_prade, f_focus_or_reject, f_identity, f_pcr6,
    f_pcr_sharp, f_pcr_sharp_schedule, PcrSharpSchedule,
};
use reffuse::sampler::{estimate_with_workers, stderr_bound, SampleConfig};
use reffuse::{
    average, check_normalization, constant_referee, fuse_exact, AveragingWeights, Frame,
    FusionResult, Proposition, Referee, RefereeError, SeparableReferee,
};

fn run_criterion(number: u32, label: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("criterion {number} ({label}): PASS"),
        Err(msg) => {
            println!("criterion {number} ({label}): FAIL");
            panic!("criterion {number} ({label}): {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(actual: f64, expected: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure(
        (actual - expected).abs() <= tol,
        format!("{what}: got {actual}, want {expected} within {tol}"),
    )
}

fn prop(f: &Frame, labels: &[&str]) -> Proposition {
    f.proposition(labels.iter().copied()).unwrap()
}

/// Largest difference between two fusion results over every proposition,
/// including the rejection rates.
fn max_gap(frame: &Frame, a: &FusionResult, b: &FusionResult) -> f64 {
    frame
        .propositions()
        .filter(|p| !p.is_empty())
        .map(|p| (a.fused.mass(&p) - b.fused.mass(&p)).abs())
        .fold((a.rejection_rate - b.rejection_rate).abs(), f64::max)
}

fn routes_agree(
    frame: &Frame,
    via_referee: Result<FusionResult, RefereeError>,
    direct: Result<FusionResult, RefereeError>,
    tol: f64,
    what: &str,
) -> Result<(), String> {
    match (via_referee, direct) {
        (Ok(a), Ok(b)) => {
            let gap = max_gap(frame, &a, &b);
            ensure(gap <= tol, format!("{what}: routes differ by {gap}"))
        }
        (Err(RefereeError::TotalConflict), Err(RefereeError::TotalConflict)) => Ok(()),
        (a, b) => Err(format!(
            "{what}: routes disagree on the outcome kind ({} vs {})",
            a.is_ok(),
            b.is_ok()
        )),
    }
}

#[test]
fn criterion_01_exact_fusion_of_the_no_conflict_pair() {
    run_criterion(1, "exact conjunctive fusion, no conflict", || {
        let f = frame3();
        let sources = no_conflict_pair(&f);
        let result = fuse_exact(&sources, &f_conjunctive()).map_err(|e| e.to_string())?;
        ensure(result.rejection_rate == 0.0, "rejection rate must be 0")?;
        for (labels, expected) in [
            (&["a"][..], 0.2),
            (&["b"][..], 0.18),
            (&["a", "b"][..], 0.14),
            (&["c"][..], 0.18),
            (&["a", "c"][..], 0.14),
            (&["b", "c"][..], 0.15),
            (&["a", "b", "c"][..], 0.01),
        ] {
            close(
                result.fused.mass(&prop(&f, labels)),
                expected,
                1e-12,
                &format!("mass of {labels:?}"),
            )?;
        }
        let mut best = Duration::MAX;
        for _ in 0..5 {
            let t = Instant::now();
            let _ = fuse_exact(&sources, &f_conjunctive()).unwrap();
            best = best.min(t.elapsed());
        }
        ensure(
            best < Duration::from_millis(1),
            format!("fusion took {best:?}, budget is 1ms"),
        )
    });
}

#[test]
fn criterion_02_exact_fusion_of_the_partially_conflicting_pair() {
    run_criterion(2, "exact conjunctive fusion, partial conflict", || {
        let f = frame3();
        let result =
            fuse_exact(&partial_conflict_pair(&f), &f_conjunctive()).map_err(|e| e.to_string())?;
        close(result.rejection_rate, 0.56, 1e-12, "rejection rate")?;
        let b = result.fused.mass(&prop(&f, &["b"]));
        close(b, 25.0 / 44.0, 1e-12, "mass of b")?;
        ensure(
            format!("{b:.3}") == "0.568",
            format!("mass of b renders as {b:.3}, want 0.568"),
        )
    });
}

#[test]
fn criterion_03_consensus_search_on_the_pairwise_agreeing_triple() {
    run_criterion(3, "largest-consensus rule on the pairwise triple", || {
        let f = frame3();
        let sources = consensus_triple(&f);
        let result = fuse_exact(&sources, &f_pcr_sharp()).map_err(|e| e.to_string())?;
        close(
            result.fused.mass(&prop(&f, &["a"])),
            0.811,
            1e-3,
            "mass of a",
        )?;
        close(
            result.fused.mass(&prop(&f, &["b"])),
            0.189,
            1e-3,
            "mass of b",
        )?;
        let oracle = consensus_search_oracle(&sources, &[3, 2, 1])
            .ok_or("the oracle rejected everything")?;
        close(
            result.rejection_rate,
            oracle.z,
            1e-12,
            "rejection rate vs oracle",
        )?;
        for p in f.propositions().filter(|p| !p.is_empty()) {
            let want = oracle.masses.get(&p.bits()).copied().unwrap_or(0.0);
            close(
                result.fused.mass(&p),
                want,
                1e-12,
                &format!("oracle mass of {p}"),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_04_three_point_masses_with_empty_joint_intersection() {
    run_criterion(4, "point-mass triple under three rules", || {
        let f = frame3();
        let sources = point_mass_triple(&f);
        match fuse_exact(&sources, &f_conjunctive()) {
            Err(RefereeError::TotalConflict) => {}
            other => {
                return Err(format!(
                    "conjunctive fusion must report total conflict, got ok={}",
                    other.is_ok()
                ))
            }
        }
        let third = 1.0 / 3.0;
        let pcr6 = fuse_exact(&sources, &f_pcr6()).map_err(|e| e.to_string())?;
        close(
            pcr6.fused.mass(&prop(&f, &["a", "b"])),
            third,
            1e-12,
            "pcr6 a|b",
        )?;
        close(
            pcr6.fused.mass(&prop(&f, &["a", "c"])),
            third,
            1e-12,
            "pcr6 a|c",
        )?;
        close(pcr6.fused.mass(&prop(&f, &["c"])), third, 1e-12, "pcr6 c")?;
        let sharp = fuse_exact(&sources, &f_pcr_sharp()).map_err(|e| e.to_string())?;
        close(
            sharp.fused.mass(&prop(&f, &["a"])),
            0.5,
            1e-12,
            "consensus a",
        )?;
        close(
            sharp.fused.mass(&prop(&f, &["c"])),
            0.5,
            1e-12,
            "consensus c",
        )?;
        ensure(
            sharp.fused.focal_count() == 2,
            "consensus output has two focal sets",
        )
    });
}

#[test]
fn criterion_05_focus_or_reject_rule_on_the_nested_pair() {
    run_criterion(5, "focus-or-reject rule", || {
        let f = frame3();
        let result =
            fuse_exact(&nested_pair(&f), &f_focus_or_reject()).map_err(|e| e.to_string())?;
        close(result.rejection_rate, 0.8, 1e-12, "rejection rate")?;
        close(
            result.fused.mass(&prop(&f, &["a"])),
            0.05,
            1e-12,
            "mass of a",
        )?;
        close(
            result.fused.mass(&prop(&f, &["a", "b"])),
            0.45,
            1e-12,
            "mass of a|b",
        )?;
        close(
            result.fused.mass(&prop(&f, &["b"])),
            0.5,
            1e-12,
            "mass of b",
        )
    });
}

#[test]
fn criterion_06_schedule_reductions_match_the_direct_rules() {
    run_criterion(6, "consensus schedules reduce to known rules", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for case in 0..100 {
            let (frame, sources) = random_instance(&mut rng);
            let s = sources.len();
            let full = f_pcr_sharp_schedule(&PcrSharpSchedule::new([s]).unwrap());
            routes_agree(
                &frame,
                fuse_exact(&sources, &full),
                dst_direct(&sources),
                1e-9,
                &format!("case {case}: schedule [s] vs conjunctive normalization"),
            )?;
            let fallback = f_pcr_sharp_schedule(&PcrSharpSchedule::new([s, 1]).unwrap());
            routes_agree(
                &frame,
                fuse_exact(&sources, &fallback),
                pcr6_direct(&sources),
                1e-9,
                &format!("case {case}: schedule [s,1] vs proportional redistribution"),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_07_referee_route_matches_the_summation_formulas() {
    run_criterion(7, "referee fusion vs direct summation formulas", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7_2024);
        for case in 0..100 {
            let (frame, sources) = random_instance(&mut rng);
            routes_agree(
                &frame,
                fuse_exact(&sources, &f_conjunctive()),
                dst_direct(&sources),
                1e-9,
                &format!("case {case}: conjunctive"),
            )?;
            routes_agree(
                &frame,
                fuse_exact(&sources, &f_disjunctive()),
                disjunctive_direct(&sources),
                1e-9,
                &format!("case {case}: disjunctive"),
            )?;
            routes_agree(
                &frame,
                fuse_exact(&sources, &f_dubois_prade()),
                dubois_prade_direct(&sources),
                1e-9,
                &format!("case {case}: union fallback"),
            )?;
            routes_agree(
                &frame,
                fuse_exact(&sources, &f_pcr6()),
                pcr6_direct(&sources),
                1e-9,
                &format!("case {case}: proportional redistribution"),
            )?;
            let weights = random_weights(&mut rng, sources.len());
            let mixed = fuse_exact(&sources, &f_average(&weights)).map_err(|e| e.to_string())?;
            ensure(mixed.rejection_rate == 0.0, "averaging never rejects")?;
            let direct = average(&sources, &weights).map_err(|e| e.to_string())?;
            for p in frame.propositions().filter(|p| !p.is_empty()) {
                close(
                    mixed.fused.mass(&p),
                    direct.mass(&p),
                    1e-9,
                    &format!("case {case}: averaging mass of {p}"),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_sampler_accuracy_at_a_million_samples() {
    run_criterion(8, "sampler accuracy at N=10^6", || {
        let f = frame3();
        let sources = no_conflict_pair(&f);
        let referee = f_conjunctive();
        let exact = fuse_exact(&sources, &referee).unwrap();
        let cfg = SampleConfig::new(1_000_000, 314);
        let t = Instant::now();
        let est = estimate_with_workers(&sources, &referee, &cfg, 1).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(
            elapsed <= Duration::from_secs(10),
            format!("sampling took {elapsed:?}, budget is 10s"),
        )?;
        ensure(est.z_hat() == 0.0, "no tuple can be rejected here")?;
        for (p, mass) in exact.fused.iter() {
            close(est.m_hat(&p), mass, 2e-3, &format!("estimated mass of {p}"))?;
        }

        let sources = partial_conflict_pair(&f);
        let cfg = SampleConfig::new(1_000_000, 159);
        let t = Instant::now();
        let est = estimate_with_workers(&sources, &referee, &cfg, 1).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(
            elapsed <= Duration::from_secs(10),
            format!("sampling took {elapsed:?}, budget is 10s"),
        )?;
        close(est.z_hat(), 0.56, 2.5e-3, "estimated rejection rate")
    });
}

#[test]
fn criterion_09_tallies_do_not_depend_on_the_worker_count() {
    run_criterion(9, "bit-identical tallies across worker counts", || {
        let f = frame3();
        let sources = partial_conflict_pair(&f);
        let referee = f_conjunctive();
        let cfg = SampleConfig::new(100_000, 7).with_chunk_size(4096);
        let one = estimate_with_workers(&sources, &referee, &cfg, 1).map_err(|e| e.to_string())?;
        let eight =
            estimate_with_workers(&sources, &referee, &cfg, 8).map_err(|e| e.to_string())?;
        ensure(one == eight, "worker counts 1 and 8 disagree")?;
        let again =
            estimate_with_workers(&sources, &referee, &cfg, 8).map_err(|e| e.to_string())?;
        ensure(eight == again, "a repeated run disagrees with itself")
    });
}

#[test]
fn criterion_10_redistribution_routes_and_sampler_agree_on_the_spread_pair() {
    run_criterion(10, "two exact routes and the sampler converge", || {
        let f = frame3();
        let sources = spread_pair(&f);
        let via_referee = fuse_exact(&sources, &f_pcr6()).map_err(|e| e.to_string())?;
        let direct = pcr6_direct(&sources).map_err(|e| e.to_string())?;
        let gap = max_gap(&f, &via_referee, &direct);
        ensure(gap <= 1e-9, format!("exact routes differ by {gap}"))?;
        let cfg = SampleConfig::new(1_000_000, 271);
        let est = estimate_with_workers(&sources, &f_pcr6(), &cfg, 1).map_err(|e| e.to_string())?;
        ensure(est.z_hat() == 0.0, "the rule never rejects")?;
        for (p, mass) in via_referee.fused.iter() {
            let bound = 5.0 * stderr_bound(mass, cfg.n);
            close(est.m_hat(&p), mass, bound, &format!("sampled mass of {p}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_normalization_validity_and_separability_properties() {
    run_criterion(
        11,
        "referee normalization, output validity, separability",
        || {
            // every built-in referee arbitrates a probability distribution on
            // every non-empty entry triple
            let f = frame3();
            let contexts = vec![
                bba(
                    &f,
                    &[
                        (&["a"], 0.25),
                        (&["b"], 0.05),
                        (&["c"], 0.05),
                        (&["a", "b"], 0.15),
                        (&["a", "c"], 0.15),
                        (&["b", "c"], 0.15),
                        (&["a", "b", "c"], 0.2),
                    ],
                ),
                bba(
                    &f,
                    &[
                        (&["a"], 0.1),
                        (&["b"], 0.3),
                        (&["c"], 0.1),
                        (&["a", "b"], 0.1),
                        (&["a", "c"], 0.2),
                        (&["b", "c"], 0.1),
                        (&["a", "b", "c"], 0.1),
                    ],
                ),
                bba(
                    &f,
                    &[
                        (&["a"], 0.15),
                        (&["b"], 0.15),
                        (&["c"], 0.3),
                        (&["a", "b"], 0.1),
                        (&["a", "c"], 0.1),
                        (&["b", "c"], 0.1),
                        (&["a", "b", "c"], 0.1),
                    ],
                ),
            ];
            let referees: Vec<(&str, Referee)> = vec![
                ("conjunctive", f_conjunctive()),
                ("disjunctive", f_disjunctive()),
                ("union fallback", f_dubois_prade()),
                ("proportional redistribution", f_pcr6()),
                ("largest consensus", f_pcr_sharp()),
                (
                    "consensus schedule [3,2]",
                    f_pcr_sharp_schedule(&PcrSharpSchedule::new([3, 2]).unwrap()),
                ),
                (
                    "consensus schedule [2]",
                    f_pcr_sharp_schedule(&PcrSharpSchedule::new([2]).unwrap()),
                ),
                ("focus or reject", f_focus_or_reject()),
                (
                    "averaging",
                    f_average(&AveragingWeights::uniform(3).unwrap()),
                ),
                ("constant", constant_referee(&contexts[0])),
            ];
            let props: Vec<Proposition> = f.propositions().filter(|p| !p.is_empty()).collect();
            for (name, referee) in &referees {
                for y1 in &props {
                    for y2 in &props {
                        for y3 in &props {
                            let entries = [y1.clone(), y2.clone(), y3.clone()];
                            ensure(
                                check_normalization(referee, &entries, &contexts),
                                format!("{name} is not normalized at ({y1}, {y2}, {y3})"),
                            )?;
                        }
                    }
                }
            }
            for y in &props {
                ensure(
                    check_normalization(&f_identity(), std::slice::from_ref(y), &contexts[..1]),
                    format!("identity is not normalized at {y}"),
                )?;
            }

            // every fusion output is a valid assignment
            let mut rng = ChaCha8Rng::seed_from_u64(11_2024);
            for _ in 0..20 {
                let (_, sources) = random_instance(&mut rng);
                let weights = AveragingWeights::uniform(sources.len()).unwrap();
                let catalog = vec![
                    f_conjunctive(),
                    f_disjunctive(),
                    f_dubois_prade(),
                    f_pcr6(),
                    f_pcr_sharp(),
                    f_average(&weights),
                    f_focus_or_reject(),
                ];
                for referee in &catalog {
                    let result = match fuse_exact(&sources, referee) {
                        Ok(result) => result,
                        Err(RefereeError::TotalConflict) => continue,
                        Err(e) => return Err(e.to_string()),
                    };
                    let total: f64 = result.fused.iter().map(|(_, mass)| mass).sum();
                    ensure(
                        (total - 1.0).abs() <= 1e-9,
                        format!("fused masses sum to {total}"),
                    )?;
                    ensure(
                        result
                            .fused
                            .iter()
                            .all(|(p, mass)| mass > 0.0 && !p.is_empty()),
                        "fused masses must be positive and off the empty set",
                    )?;
                    ensure(
                        (0.0..1.0).contains(&result.rejection_rate),
                        format!("rejection rate {} out of range", result.rejection_rate),
                    )?;
                }
            }

            // fusing under a mixture of non-rejecting referees equals the
            // mixture of the per-referee fusions
            for case in 0..20 {
                let (frame, _) = random_instance(&mut rng);
                let sources = vec![
                    random_bba(&frame, &mut rng, 4),
                    random_bba(&frame, &mut rng, 4),
                ];
                let theta: f64 = rng.gen_range(0.05..0.95);
                let blend = mix_of(theta, f_disjunctive(), f_dubois_prade());
                let mixed = fuse_exact(&sources, &blend).map_err(|e| e.to_string())?;
                let left = fuse_exact(&sources, &f_disjunctive()).map_err(|e| e.to_string())?;
                let right = fuse_exact(&sources, &f_dubois_prade()).map_err(|e| e.to_string())?;
                for p in frame.propositions().filter(|p| !p.is_empty()) {
                    let want = theta * left.fused.mass(&p) + (1.0 - theta) * right.fused.mass(&p);
                    close(
                        mixed.fused.mass(&p),
                        want,
                        1e-12,
                        &format!("case {case}: blended mass of {p}"),
                    )?;
                }
            }
            Ok(())
        },
    );
}

fn mix_of(theta: f64, first: Referee, second: Referee) -> Referee {
    reffuse::mix(
        SeparableReferee::new(
            2,
            vec![
                (theta, vec![0, 1], first),
                (1.0 - theta, vec![0, 1], second),
            ],
        )
        .unwrap(),
    )
}
