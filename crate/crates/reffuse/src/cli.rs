//! Command-line front end: JSON scenario files in, fused assignments,
//! rule comparisons, and convergence tables out.
//!
//! Exit codes: 0 on success, 2 on argument or scenario validation errors,
//! 3 when fusion itself is impossible (total conflict in exact mode, every
//! sample rejected in sampled mode).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::belief::{AveragingWeights, Bba, BeliefError};
use crate::lattice::{Frame, LatticeError, Proposition};
use crate::referee::{fuse_exact, FusionResult, Referee, RefereeError};
use crate::rules::{PcrSharpSchedule, RuleSpec, RulesError};
use crate::sampler::{convergence_series, estimate, FusionEstimate, SampleConfig, SampleError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CONFLICT: i32 = 3;

/// On-disk scenario description. Field names are part of the file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub frame: Vec<String>,
    pub sources: Vec<ScenarioSource>,
    pub rule: ScenarioRule,
    pub mode: ScenarioMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSource {
    pub focal: Vec<ScenarioFocal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFocal {
    pub set: Vec<String>,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRule {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ScenarioMode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "sample")]
    Sample { n: u64, seed: u64 },
}

/// A ready-to-edit scenario: two overlapping sources on a three-atom frame
/// under the Dempster-Shafer rule. `init-example` prints it.
pub fn canonical_scenario() -> Scenario {
    let source = |masses: &[(&[&str], f64)]| ScenarioSource {
        focal: masses
            .iter()
            .map(|(labels, mass)| ScenarioFocal {
                set: labels.iter().map(|s| s.to_string()).collect(),
                mass: *mass,
            })
            .collect(),
    };
    Scenario {
        frame: vec!["a".into(), "b".into(), "c".into()],
        sources: vec![
            source(&[
                (&["a", "b"], 0.2),
                (&["a", "c"], 0.4),
                (&["b", "c"], 0.3),
                (&["a", "b", "c"], 0.1),
            ]),
            source(&[
                (&["a", "b"], 0.4),
                (&["a", "c"], 0.2),
                (&["b", "c"], 0.3),
                (&["a", "b", "c"], 0.1),
            ]),
        ],
        rule: ScenarioRule {
            name: "dst".into(),
            weights: None,
            schedule: None,
        },
        mode: ScenarioMode::Exact,
    }
}

#[derive(Parser)]
#[command(
    name = "reffuse",
    version,
    about = "Fuse belief assignments with referee-based combination rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse one scenario and print the result
    Run(RunArgs),
    /// Fuse one scenario under several rules, side by side
    Compare(CompareArgs),
    /// Show sampled estimates converging toward the exact fusion
    Converge(ConvergeArgs),
    /// Print a ready-to-edit scenario file
    InitExample(InitExampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeFlag {
    Exact,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON)
    #[arg(long)]
    scenario: PathBuf,
    /// Rule name replacing the scenario's rule; `average` means uniform
    /// weights, `pcr-sharp-schedule` needs a schedule and is rejected here
    #[arg(long)]
    rule: Option<String>,
    /// Replace the scenario's mode
    #[arg(long, value_enum)]
    mode: Option<ModeFlag>,
    /// Sample count for sampled mode
    #[arg(long)]
    n: Option<u64>,
    /// Seed for sampled mode
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    /// Scenario file (JSON); its rule entry is ignored
    #[arg(long)]
    scenario: PathBuf,
    /// Comma-separated rule names, one output column each
    #[arg(long, value_delimiter = ',', required = true)]
    rules: Vec<String>,
    /// Replace the scenario's mode
    #[arg(long, value_enum)]
    mode: Option<ModeFlag>,
    /// Sample count for sampled mode
    #[arg(long)]
    n: Option<u64>,
    /// Seed for sampled mode
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Scenario file (JSON)
    #[arg(long)]
    scenario: PathBuf,
    /// Rule name replacing the scenario's rule
    #[arg(long)]
    rule: Option<String>,
    /// Largest sample count as a power of ten: columns N=10^1..10^e
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
    exponents: u32,
    /// Seed for the sampled columns
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct InitExampleArgs {
    /// Write the scenario here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn conflict(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_CONFLICT,
            message: message.into(),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<BeliefError> for CliError {
    fn from(e: BeliefError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<RulesError> for CliError {
    fn from(e: RulesError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<RefereeError> for CliError {
    fn from(e: RefereeError) -> CliError {
        match e {
            RefereeError::TotalConflict => CliError::conflict(e.to_string()),
            other => CliError::validation(other.to_string()),
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> CliError {
        match e {
            SampleError::AllRejected { .. } | SampleError::RejectionGuardTripped { .. } => {
                CliError::conflict(e.to_string())
            }
            SampleError::Referee(inner) => inner.into(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// printing results to standard output and errors to standard error.
/// Returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = i32::from(e.use_stderr());
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_VALIDATION };
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => exec_run(args),
        Command::Compare(args) => exec_compare(args),
        Command::Converge(args) => exec_converge(args),
        Command::InitExample(args) => exec_init_example(args),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

struct Problem {
    sources: Vec<Bba>,
    rule: RuleSpec,
    mode: ScenarioMode,
}

fn build_sources(scenario: &Scenario) -> Result<(Frame, Vec<Bba>), CliError> {
    let frame = Frame::new(scenario.frame.iter().cloned())?;
    if scenario.sources.is_empty() {
        return Err(CliError::validation("at least one source is required"));
    }
    let mut sources = Vec::with_capacity(scenario.sources.len());
    for (i, source) in scenario.sources.iter().enumerate() {
        let mut pairs = Vec::with_capacity(source.focal.len());
        for focal in &source.focal {
            let prop = frame
                .proposition(focal.set.iter().map(String::as_str))
                .map_err(|e| CliError::validation(format!("source {}: {e}", i + 1)))?;
            pairs.push((prop, focal.mass));
        }
        let bba =
            Bba::new(pairs).map_err(|e| CliError::validation(format!("source {}: {e}", i + 1)))?;
        sources.push(bba);
    }
    Ok((frame, sources))
}

fn rule_from_scenario(rule: &ScenarioRule, source_count: usize) -> Result<RuleSpec, CliError> {
    if rule.name != "average" && rule.weights.is_some() {
        return Err(CliError::validation(format!(
            "rule {}: weights only apply to the average rule",
            rule.name
        )));
    }
    if rule.name != "pcr-sharp-schedule" && rule.schedule.is_some() {
        return Err(CliError::validation(format!(
            "rule {}: a schedule only applies to pcr-sharp-schedule",
            rule.name
        )));
    }
    match (rule.name.as_str(), &rule.weights, &rule.schedule) {
        ("average", Some(weights), _) => {
            Ok(RuleSpec::Average(AveragingWeights::new(weights.clone())?))
        }
        ("pcr-sharp-schedule", _, Some(sizes)) => Ok(RuleSpec::PcrSharpSchedule(
            PcrSharpSchedule::new(sizes.clone())?,
        )),
        (name, _, _) => Ok(RuleSpec::from_name(name, source_count)?),
    }
}

fn merge_mode(
    scenario: &ScenarioMode,
    mode: Option<ModeFlag>,
    n: Option<u64>,
    seed: Option<u64>,
) -> Result<ScenarioMode, CliError> {
    let scenario_sample = match scenario {
        ScenarioMode::Sample { n, seed } => Some((*n, *seed)),
        ScenarioMode::Exact => None,
    };
    let merged = match (mode, scenario_sample) {
        (Some(ModeFlag::Exact), _) => ScenarioMode::Exact,
        (Some(ModeFlag::Sample), existing) => ScenarioMode::Sample {
            n: n.or(existing.map(|(n, _)| n)).unwrap_or(100_000),
            seed: seed.or(existing.map(|(_, s)| s)).unwrap_or(0),
        },
        (None, Some((base_n, base_seed))) => ScenarioMode::Sample {
            n: n.unwrap_or(base_n),
            seed: seed.unwrap_or(base_seed),
        },
        (None, None) => ScenarioMode::Exact,
    };
    if let ScenarioMode::Sample { n: 0, .. } = merged {
        return Err(CliError::validation("sample count must be at least 1"));
    }
    Ok(merged)
}

fn build_problem(
    scenario: &Scenario,
    rule_override: Option<&str>,
    mode: Option<ModeFlag>,
    n: Option<u64>,
    seed: Option<u64>,
) -> Result<Problem, CliError> {
    let (_, sources) = build_sources(scenario)?;
    let rule = match rule_override {
        Some(name) => RuleSpec::from_name(name, sources.len())?,
        None => rule_from_scenario(&scenario.rule, sources.len())?,
    };
    let mode = merge_mode(&scenario.mode, mode, n, seed)?;
    Ok(Problem {
        sources,
        rule,
        mode,
    })
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// The number actually shown in tables: the value after 6-decimal rounding.
/// JSON output uses it too, so both formats carry identical numbers.
fn rounded(x: f64) -> f64 {
    fmt6(x).parse().expect("a formatted float parses back")
}

fn labels_json(prop: &Proposition) -> serde_json::Value {
    serde_json::json!(prop.labels())
}

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let columns = header.len();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        debug_assert_eq!(row.len(), columns);
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: &[String], out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < columns {
                for _ in cell.len()..widths[i] {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    };
    push_row(header, &mut out);
    for row in rows {
        push_row(row, &mut out);
    }
    out
}

fn mode_label(mode: &ScenarioMode) -> String {
    match mode {
        ScenarioMode::Exact => "exact".into(),
        ScenarioMode::Sample { n, seed } => format!("sample (n={n}, seed={seed})"),
    }
}

fn mode_json(mode: &ScenarioMode) -> serde_json::Value {
    serde_json::to_value(mode).expect("a mode serializes")
}

enum RuleOutcome {
    Exact(FusionResult),
    Sampled(FusionEstimate),
    /// Fusion produced nothing: total conflict or every sample rejected.
    Conflict,
}

impl RuleOutcome {
    fn mass(&self, prop: &Proposition) -> Option<f64> {
        match self {
            RuleOutcome::Exact(result) => Some(result.fused.mass(prop)),
            RuleOutcome::Sampled(est) => Some(est.m_hat(prop)),
            RuleOutcome::Conflict => None,
        }
    }

    fn rejection_rate(&self) -> Option<f64> {
        match self {
            RuleOutcome::Exact(result) => Some(result.rejection_rate),
            RuleOutcome::Sampled(est) => Some(est.z_hat()),
            RuleOutcome::Conflict => None,
        }
    }

    fn support(&self) -> Vec<Proposition> {
        match self {
            RuleOutcome::Exact(result) => result.fused.iter().map(|(p, _)| p).collect(),
            RuleOutcome::Sampled(est) => est.counts().map(|(p, _)| p).collect(),
            RuleOutcome::Conflict => Vec::new(),
        }
    }
}

/// Runs one rule in the scenario's mode. `Conflict` is only returned where
/// the mode makes it an expressible outcome; other errors propagate.
fn fuse_outcome(
    sources: &[Bba],
    referee: &Referee,
    mode: &ScenarioMode,
    allow_conflict: bool,
) -> Result<RuleOutcome, CliError> {
    match mode {
        ScenarioMode::Exact => match fuse_exact(sources, referee) {
            Ok(result) => Ok(RuleOutcome::Exact(result)),
            Err(RefereeError::TotalConflict) if allow_conflict => Ok(RuleOutcome::Conflict),
            Err(e) => Err(e.into()),
        },
        ScenarioMode::Sample { n, seed } => {
            let cfg = SampleConfig::new(*n, *seed);
            match estimate(sources, referee, &cfg) {
                Ok(est) => Ok(RuleOutcome::Sampled(est)),
                Err(
                    SampleError::AllRejected { .. } | SampleError::RejectionGuardTripped { .. },
                ) if allow_conflict => Ok(RuleOutcome::Conflict),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn exec_run(args: &RunArgs) -> Result<String, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let problem = build_problem(
        &scenario,
        args.rule.as_deref(),
        args.mode,
        args.n,
        args.seed,
    )?;
    let referee = problem.rule.referee(problem.sources.len())?;
    let outcome = fuse_outcome(&problem.sources, &referee, &problem.mode, false)?;
    match args.format {
        Format::Table => {
            let mut out = format!(
                "rule: {}\nmode: {}\n",
                problem.rule.name(),
                mode_label(&problem.mode)
            );
            let sampled = matches!(outcome, RuleOutcome::Sampled(_));
            let mut header = vec!["proposition".to_string(), "mass".to_string()];
            if sampled {
                header.push("stderr".to_string());
            }
            let mut rows = Vec::new();
            match &outcome {
                RuleOutcome::Exact(result) => {
                    for (prop, mass) in result.fused.iter() {
                        rows.push(vec![prop.to_string(), fmt6(mass)]);
                    }
                }
                RuleOutcome::Sampled(est) => {
                    for (prop, _) in est.counts() {
                        rows.push(vec![
                            prop.to_string(),
                            fmt6(est.m_hat(&prop)),
                            fmt6(est.stderr(&prop)),
                        ]);
                    }
                }
                RuleOutcome::Conflict => unreachable!("run propagates conflicts"),
            }
            out.push_str(&render_table(&header, &rows));
            let z = outcome.rejection_rate().expect("run outcome has a rate");
            out.push_str(&format!("rejection rate: {}\n", fmt6(z)));
            Ok(out)
        }
        Format::Json => {
            let fused: Vec<serde_json::Value> = match &outcome {
                RuleOutcome::Exact(result) => result
                    .fused
                    .iter()
                    .map(|(prop, mass)| {
                        serde_json::json!({
                            "set": labels_json(&prop),
                            "mass": rounded(mass),
                        })
                    })
                    .collect(),
                RuleOutcome::Sampled(est) => est
                    .counts()
                    .map(|(prop, _)| {
                        serde_json::json!({
                            "set": labels_json(&prop),
                            "mass": rounded(est.m_hat(&prop)),
                            "stderr": rounded(est.stderr(&prop)),
                        })
                    })
                    .collect(),
                RuleOutcome::Conflict => unreachable!("run propagates conflicts"),
            };
            let z = outcome.rejection_rate().expect("run outcome has a rate");
            let doc = serde_json::json!({
                "rule": problem.rule.name(),
                "mode": mode_json(&problem.mode),
                "fused": fused,
                "rejection_rate": rounded(z),
            });
            Ok(format!("{doc:#}\n"))
        }
    }
}

fn union_support(outcomes: &[(String, RuleOutcome)]) -> Vec<Proposition> {
    let mut props: Vec<Proposition> = Vec::new();
    for (_, outcome) in outcomes {
        for prop in outcome.support() {
            if !props.contains(&prop) {
                props.push(prop);
            }
        }
    }
    props.sort();
    props
}

fn exec_compare(args: &CompareArgs) -> Result<String, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let (_, sources) = build_sources(&scenario)?;
    let mode = merge_mode(&scenario.mode, args.mode, args.n, args.seed)?;
    let mut outcomes: Vec<(String, RuleOutcome)> = Vec::new();
    for name in &args.rules {
        let rule = RuleSpec::from_name(name, sources.len())?;
        let referee = rule.referee(sources.len())?;
        let outcome = fuse_outcome(&sources, &referee, &mode, true)?;
        outcomes.push((rule.name().to_string(), outcome));
    }
    let props = union_support(&outcomes);
    match args.format {
        Format::Table => {
            let mut out = format!("mode: {}\n", mode_label(&mode));
            let mut header = vec!["proposition".to_string()];
            header.extend(outcomes.iter().map(|(name, _)| name.clone()));
            let mut rows = Vec::new();
            for prop in &props {
                let mut row = vec![prop.to_string()];
                for (_, outcome) in &outcomes {
                    row.push(match outcome.mass(prop) {
                        Some(mass) => fmt6(mass),
                        None => "-".to_string(),
                    });
                }
                rows.push(row);
            }
            let mut z_row = vec!["z".to_string()];
            for (_, outcome) in &outcomes {
                z_row.push(match outcome.rejection_rate() {
                    Some(z) => fmt6(z),
                    None => "conflict".to_string(),
                });
            }
            rows.push(z_row);
            out.push_str(&render_table(&header, &rows));
            Ok(out)
        }
        Format::Json => {
            let rules: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|(name, outcome)| match outcome {
                    RuleOutcome::Conflict => serde_json::json!({
                        "rule": name,
                        "conflict": true,
                    }),
                    _ => {
                        let fused: Vec<serde_json::Value> = props
                            .iter()
                            .filter_map(|prop| {
                                let mass = outcome.mass(prop)?;
                                Some(serde_json::json!({
                                    "set": labels_json(prop),
                                    "mass": rounded(mass),
                                }))
                            })
                            .collect();
                        serde_json::json!({
                            "rule": name,
                            "fused": fused,
                            "rejection_rate": rounded(outcome.rejection_rate().unwrap()),
                        })
                    }
                })
                .collect();
            let doc = serde_json::json!({
                "mode": mode_json(&mode),
                "rules": rules,
            });
            Ok(format!("{doc:#}\n"))
        }
    }
}

fn exec_converge(args: &ConvergeArgs) -> Result<String, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let (_, sources) = build_sources(&scenario)?;
    let rule = match args.rule.as_deref() {
        Some(name) => RuleSpec::from_name(name, sources.len())?,
        None => rule_from_scenario(&scenario.rule, sources.len())?,
    };
    let referee = rule.referee(sources.len())?;
    let seed = args.seed.unwrap_or(match scenario.mode {
        ScenarioMode::Sample { seed, .. } => seed,
        ScenarioMode::Exact => 0,
    });
    let exponents: Vec<u32> = (1..=args.exponents).collect();
    let series = convergence_series(&sources, &referee, &exponents, seed)?;
    let exact = fuse_exact(&sources, &referee).ok();
    let mut props: Vec<Proposition> = Vec::new();
    for est in &series {
        for (prop, _) in est.counts() {
            if !props.contains(&prop) {
                props.push(prop);
            }
        }
    }
    if let Some(result) = &exact {
        for (prop, _) in result.fused.iter() {
            if !props.contains(&prop) {
                props.push(prop);
            }
        }
    }
    props.sort();
    match args.format {
        Format::Table => {
            let mut out = format!("rule: {}\nseed: {seed}\n", rule.name());
            let mut header = vec!["proposition".to_string()];
            header.extend(exponents.iter().map(|e| format!("N=10^{e}")));
            if exact.is_some() {
                header.push("exact".to_string());
            }
            let mut rows = Vec::new();
            for prop in &props {
                let mut row = vec![prop.to_string()];
                for est in &series {
                    row.push(fmt6(est.m_hat(prop)));
                }
                if let Some(result) = &exact {
                    row.push(fmt6(result.fused.mass(prop)));
                }
                rows.push(row);
            }
            let mut z_row = vec!["z".to_string()];
            for est in &series {
                z_row.push(fmt6(est.z_hat()));
            }
            if let Some(result) = &exact {
                z_row.push(fmt6(result.rejection_rate));
            }
            rows.push(z_row);
            out.push_str(&render_table(&header, &rows));
            Ok(out)
        }
        Format::Json => {
            let columns: Vec<serde_json::Value> = series
                .iter()
                .map(|est| {
                    let fused: Vec<serde_json::Value> = est
                        .counts()
                        .map(|(prop, _)| {
                            serde_json::json!({
                                "set": labels_json(&prop),
                                "mass": rounded(est.m_hat(&prop)),
                                "stderr": rounded(est.stderr(&prop)),
                            })
                        })
                        .collect();
                    serde_json::json!({
                        "n": est.n(),
                        "fused": fused,
                        "rejection_rate": rounded(est.z_hat()),
                    })
                })
                .collect();
            let exact_json = match &exact {
                Some(result) => {
                    let fused: Vec<serde_json::Value> = result
                        .fused
                        .iter()
                        .map(|(prop, mass)| {
                            serde_json::json!({
                                "set": labels_json(&prop),
                                "mass": rounded(mass),
                            })
                        })
                        .collect();
                    serde_json::json!({
                        "fused": fused,
                        "rejection_rate": rounded(result.rejection_rate),
                    })
                }
                None => serde_json::Value::Null,
            };
            let doc = serde_json::json!({
                "rule": rule.name(),
                "seed": seed,
                "columns": columns,
                "exact": exact_json,
            });
            Ok(format!("{doc:#}\n"))
        }
    }
}

fn exec_init_example(args: &InitExampleArgs) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(&canonical_scenario())
        .expect("the canonical scenario serializes");
    let text = format!("{text}\n");
    match &args.out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}
