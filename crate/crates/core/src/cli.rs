//! Command-line front end: validation, order and twin checks, amalgamation
//! with trace output, fuzz campaigns, chain simulation, and irreducible-base
//! search over JSON documents.
//!
//! Exit codes: 0 = success / verdict holds, 1 = property fails / verdict
//! negative, 2 = usage or input error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::amalgamation::{amalgamate, verify_amalgamation, AmalgamationRequest};
use crate::condition::{check_extension, Condition, Inclusion};
use crate::doc::{ConditionDoc, DecompositionDoc, LimitDoc, SpaceDoc, TraceDoc};
use crate::sim::{check_p3_global, run_simulation, SimulationConfig};
use crate::topology::{find_irreducible_base, generate_topology};
use crate::twins::is_twin_pair;
use crate::verifier::{run_fuzz, GenParams, MutationHook, Property};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "finbase", version, about = "Finite conditions, amalgamation, and topology tools")]
pub struct Cli {
    /// Output format for verdicts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a condition document against the validity axioms.
    Validate {
        file: PathBuf,
        /// Read the nesting axiom with strict inclusion.
        #[arg(long)]
        strict: bool,
    },
    /// Check the extension order: does the first condition extend the second?
    Leq { file_q: PathBuf, file_p: PathBuf },
    /// Check whether two conditions are twins and print the pairing.
    Twins { file0: PathBuf, file1: PathBuf },
    /// Amalgamate two twin conditions and re-check every claim.
    Amalgamate {
        file0: PathBuf,
        file1: PathBuf,
        #[arg(long)]
        xi0: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Write the full trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a randomized property campaign.
    Fuzz {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Maximum points per side.
        #[arg(long, default_value_t = 6)]
        max_a: usize,
        /// Maximum depth.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 64)]
        universe: u32,
        #[arg(long)]
        property: String,
        /// Apply a named trace mutation as a negative control.
        #[arg(long)]
        mutation: Option<String>,
    },
    /// Build a descending chain and check the limit invariants.
    Simulate {
        #[arg(long)]
        points: u32,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Grow by plain singleton rows only, without randomized enrichment.
        #[arg(long)]
        plain: bool,
        /// Write the limit structure as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a space document for an irreducible base.
    Irreducible { file_space: PathBuf },
}

fn load_condition(path: &Path) -> Result<Condition, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: ConditionDoc =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    doc.to_condition().map_err(|e| format!("{}: {e}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(format: Format, text: String, value: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("value")),
    }
}

fn fail_usage(message: String) -> i32 {
    eprintln!("error: {message}");
    2
}

pub fn run(cli: Cli) -> i32 {
    let format = cli.format;
    match cli.command {
        Command::Validate { file, strict } => {
            let cond = match load_condition(&file) {
                Ok(c) => c,
                Err(e) => return fail_usage(e),
            };
            let mode = if strict {
                Inclusion::Strict
            } else {
                Inclusion::NonStrict
            };
            let violations = cond.violations_with(mode);
            let verdict = violations.is_empty();
            emit(
                format,
                if verdict {
                    "valid".to_string()
                } else {
                    format!("invalid: {}", violations[0])
                },
                json!({
                    "valid": verdict,
                    "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }),
            );
            i32::from(!verdict)
        }
        Command::Leq { file_q, file_p } => {
            let (q, p) = match (load_condition(&file_q), load_condition(&file_p)) {
                (Ok(q), Ok(p)) => (q, p),
                (Err(e), _) | (_, Err(e)) => return fail_usage(e),
            };
            match check_extension(&q, &p) {
                Err(e) => fail_usage(e.to_string()),
                Ok(Ok(())) => {
                    emit(format, "extends".to_string(), json!({"extends": true}));
                    0
                }
                Ok(Err(failure)) => {
                    emit(
                        format,
                        format!("does not extend: {failure}"),
                        json!({"extends": false, "failure": failure.to_string()}),
                    );
                    1
                }
            }
        }
        Command::Twins { file0, file1 } => {
            let (p0, p1) = match (load_condition(&file0), load_condition(&file1)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return fail_usage(e),
            };
            for (name, c) in [("first", &p0), ("second", &p1)] {
                if let Some(v) = c.first_violation() {
                    return fail_usage(format!("{name} condition is invalid: {v}"));
                }
            }
            match is_twin_pair(&p0, &p1) {
                Some(cert) => {
                    let sigma: Vec<(u32, u32)> =
                        cert.sigma_map().iter().map(|(&a, &b)| (a, b)).collect();
                    emit(
                        format,
                        format!("twins: sigma = {sigma:?}"),
                        json!({"twins": true, "sigma": sigma, "root": cert.root().to_vec()}),
                    );
                    0
                }
                None => {
                    emit(format, "not twins".to_string(), json!({"twins": false}));
                    1
                }
            }
        }
        Command::Amalgamate {
            file0,
            file1,
            xi0,
            k,
            m,
            trace: trace_out,
        } => {
            let (p0, p1) = match (load_condition(&file0), load_condition(&file1)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return fail_usage(e),
            };
            let req = match AmalgamationRequest::new(p0, p1, xi0, k, m) {
                Ok(req) => req,
                Err(e) => return fail_usage(e.to_string()),
            };
            let trace = match amalgamate(&req) {
                Ok(trace) => trace,
                Err(e) => return fail_usage(e.to_string()),
            };
            if let Some(path) = trace_out {
                if let Err(e) = write_json(&path, &TraceDoc::from(&trace)) {
                    return fail_usage(e);
                }
            }
            let report = verify_amalgamation(&trace, &req);
            let verdict = report.all_hold();
            let failing: Vec<String> = report.failing().iter().map(|c| c.name().to_string()).collect();
            emit(
                format,
                if verdict {
                    format!(
                        "amalgamated onto {:?}; all claims hold",
                        trace.p.support().to_vec()
                    )
                } else {
                    format!("claims failed: {failing:?}")
                },
                json!({
                    "support": trace.p.support().to_vec(),
                    "all_claims_hold": verdict,
                    "failing": failing,
                }),
            );
            i32::from(!verdict)
        }
        Command::Fuzz {
            trials,
            seed,
            max_a,
            max_n,
            universe,
            property,
            mutation,
        } => {
            let Some(property) = Property::by_name(&property) else {
                return fail_usage(format!("unknown property {property:?}"));
            };
            let mutation = match mutation {
                None => None,
                Some(name) => match MutationHook::by_name(&name) {
                    Some(hook) => Some(hook),
                    None => return fail_usage(format!("unknown mutation {name:?}")),
                },
            };
            let params = GenParams {
                max_side_points: max_a,
                max_depth: max_n,
                universe,
                seed,
                trials,
            };
            let report = run_fuzz(&params, &[property], mutation);
            let verdict = report.failures.is_empty();
            emit(
                format,
                format!(
                    "{} trials, {} failures, {} skipped, {} ms",
                    report.trials,
                    report.failures.len(),
                    report.skipped,
                    report.wall_ms
                ),
                serde_json::to_value(&report).expect("report"),
            );
            i32::from(!verdict)
        }
        Command::Simulate {
            points,
            depth,
            seed,
            budget,
            plain,
            out,
        } => {
            let config = SimulationConfig {
                universe: points,
                depth,
                seed,
                budget,
                enrich: !plain,
            };
            let outcome = match run_simulation(&config) {
                Ok(outcome) => outcome,
                Err(e) => return fail_usage(e.to_string()),
            };
            if let Some(path) = out {
                if let Err(e) = write_json(&path, &LimitDoc::from(&outcome.structure)) {
                    return fail_usage(e);
                }
            }
            let p3 = check_p3_global(&outcome.structure);
            let verdict = outcome.completed && p3.is_ok();
            emit(
                format,
                format!(
                    "{} steps, {} points, depth {}, completed: {}, global nesting: {}",
                    outcome.steps,
                    outcome.structure.points.len(),
                    outcome.structure.depth,
                    outcome.completed,
                    p3.is_ok()
                ),
                json!({
                    "steps": outcome.steps,
                    "completed": outcome.completed,
                    "points": outcome.structure.points.to_vec(),
                    "depth": outcome.structure.depth,
                    "p3_holds": p3.is_ok(),
                    "unmet_intersections": outcome.unmet.len(),
                }),
            );
            i32::from(!verdict)
        }
        Command::Irreducible { file_space } => {
            let text = match std::fs::read_to_string(&file_space) {
                Ok(text) => text,
                Err(e) => return fail_usage(format!("{}: {e}", file_space.display())),
            };
            let doc: SpaceDoc = match serde_json::from_str(&text) {
                Ok(doc) => doc,
                Err(e) => return fail_usage(format!("{}: {e}", file_space.display())),
            };
            let (points, generators) = match doc.to_parts() {
                Ok(parts) => parts,
                Err(e) => return fail_usage(format!("{}: {e}", file_space.display())),
            };
            let space = match generate_topology(points, &generators) {
                Ok(space) => space,
                Err(e) => return fail_usage(e.to_string()),
            };
            match find_irreducible_base(&space) {
                Err(e) => fail_usage(e.to_string()),
                Ok(Some((base, dec))) => {
                    let base_vec: Vec<Vec<u32>> = base.iter().map(|s| s.to_vec()).collect();
                    emit(
                        format,
                        format!("irreducible base found: {base_vec:?}"),
                        json!({
                            "found": true,
                            "base": base_vec,
                            "decomposition": serde_json::to_value(DecompositionDoc::from(&dec))
                                .expect("decomposition"),
                        }),
                    );
                    0
                }
                Ok(None) => {
                    emit(format, "no irreducible base".to_string(), json!({"found": false}));
                    1
                }
            }
        }
    }
}

pub fn main_entry() -> i32 {
    run(Cli::parse())
}
