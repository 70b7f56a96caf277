//! Command-line front end: `features`, `check`, `swarm`, `replay` and
//! `solve`. [`run`] takes its streams as arguments so it can be driven
//! in-process.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bmc::{self, BmcOptions, Counterexample, OutcomeKind, VerificationOutcome};
use crate::encode::export_dimacs;
use crate::frontend::{extract_features, parse_named, validate, Program};
use crate::sat::{self, parse_dimacs, SolveBudget, SolveResult};
use crate::swarm::{self, Strategy, SwarmOptions, Verdict};
use crate::value::Width;

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_REPLAY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 10;
pub const EXIT_RESOURCE_OUT: i32 = 20;
pub const EXIT_PARTIAL: i32 = 30;

/// Environment variable read when `--seed` is not given.
pub const SEED_ENV: &str = "SWARM_BMC_SEED";

#[derive(Debug, Parser)]
#[command(name = "swarm-bmc", version, about = "Swarm bounded model checking for .imp programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the feature labels of a program, one per line.
    Features { file: PathBuf },
    /// Check one variant of a program.
    Check(CheckArgs),
    /// Check many feature-omission variants in parallel.
    Swarm(SwarmArgs),
    /// Replay a counterexample on a program.
    Replay {
        file: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 8)]
        width: u32,
    },
    /// Solve a DIMACS CNF formula.
    Solve {
        /// Read the formula as DIMACS, from FILE or standard input.
        #[arg(long = "dimacs-in")]
        dimacs_in: bool,
        file: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_conflicts: Option<u64>,
    },
}

#[derive(Debug, Args, Serialize)]
struct RunArgs {
    #[arg(long, default_value_t = bmc::DEFAULT_DEPTH)]
    depth: u32,
    #[arg(long, default_value_t = 8)]
    width: u32,
    /// Slice the SSA to the cone of influence of the checks.
    #[arg(long)]
    slice: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_conflicts: Option<u64>,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args, Serialize)]
struct CheckArgs {
    #[serde(skip)]
    file: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    run: RunArgs,
    /// Features to omit, comma separated.
    #[arg(long, value_delimiter = ',')]
    omit: Vec<String>,
    /// Features every trace must exercise, comma separated.
    #[arg(long, value_delimiter = ',')]
    require: Vec<String>,
    /// Also write the encoded instance in DIMACS format.
    #[arg(long)]
    dimacs: Option<PathBuf>,
    /// Print `vars=<n> clauses=<m> sliced=<bool>`.
    #[arg(long)]
    stats: bool,
    /// Print the encoded SSA equations.
    #[arg(long)]
    emit_ssa: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyArg {
    LeaveOneOut,
    Half,
}

#[derive(Debug, Args, Serialize)]
struct SwarmArgs {
    #[serde(skip)]
    file: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value = "leave-one-out")]
    strategy: StrategyArg,
    /// Number of random configs for `--strategy half`.
    #[arg(long, default_value_t = 8)]
    configs: usize,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    keep_going: bool,
}

/// Provenance embedded in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub options: Value,
    pub version: String,
    pub input_digest: String,
}

impl RunManifest {
    fn new(args: &[String], options: Value, input: &[u8]) -> RunManifest {
        RunManifest {
            command: args.to_vec(),
            options,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: format!("sha256:{}", hex::encode(Sha256::digest(input))),
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A diagnostic for the error stream plus the exit code to return.
struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_VERIFIED
            };
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Features { file } => cmd_features(&file, &mut io),
        Command::Check(a) => cmd_check(args, &a, &mut io),
        Command::Swarm(a) => cmd_swarm(args, &a, &mut io),
        Command::Replay { file, trace, width } => cmd_replay(&file, &trace, width, &mut io),
        Command::Solve {
            dimacs_in,
            file,
            seed,
            max_conflicts,
        } => cmd_solve(dimacs_in, file.as_deref(), seed, max_conflicts, stdin, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

fn load(path: &Path) -> Result<(Program, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| usage(format!("{} is not UTF-8", path.display())))?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into());
    let p = parse_named(&text, &name).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let errors = validate(&p);
    if !errors.is_empty() {
        let msgs: Vec<String> = errors.iter().map(|e| format!("{}: {e}", path.display())).collect();
        return Err(usage(msgs.join("\n")));
    }
    Ok((p, bytes))
}

fn seed_from(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV} is not an unsigned integer: {v}"))),
        Err(_) => Ok(0),
    }
}

fn bmc_options(a: &RunArgs) -> Result<BmcOptions, Failure> {
    if a.depth == 0 {
        return Err(usage("--depth must be at least 1"));
    }
    let width = Width::new(a.width).map_err(|e| usage(e.to_string()))?;
    Ok(BmcOptions {
        depth: a.depth,
        width,
        max_conflicts: a.max_conflicts,
        timeout: a.timeout_ms.map(Duration::from_millis),
        seed: seed_from(a.seed)?,
        slice: a.slice,
        ..BmcOptions::default()
    })
}

fn write_out(io: &mut Io, text: &str) -> Result<(), Failure> {
    io.out
        .write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_USAGE, format!("cannot write output: {e}")))
}

fn cmd_features(file: &Path, io: &mut Io) -> Result<i32, Failure> {
    let (p, _) = load(file)?;
    let mut text = String::new();
    for f in extract_features(&p).iter() {
        text.push_str(f);
        text.push('\n');
    }
    write_out(io, &text)?;
    Ok(EXIT_VERIFIED)
}

fn outcome_code(o: &VerificationOutcome) -> i32 {
    match o.kind {
        OutcomeKind::Counterexample(_) => EXIT_FALSIFIED,
        OutcomeKind::Verified { .. } => EXIT_VERIFIED,
        OutcomeKind::ResourceOut(_) => EXIT_RESOURCE_OUT,
    }
}

/// JSON form of a single-variant outcome.
pub fn outcome_json(o: &VerificationOutcome) -> Value {
    let mut v = json!({
        "status": match o.kind {
            OutcomeKind::Counterexample(_) => "counterexample",
            OutcomeKind::Verified { .. } => "verified",
            OutcomeKind::ResourceOut(_) => "resource_out",
        },
        "metrics": o.metrics,
        "counterexample": o.counterexample().map(Counterexample::to_json),
    });
    match o.kind {
        OutcomeKind::Verified { depth } => v["depth"] = json!(depth),
        OutcomeKind::ResourceOut(r) => v["reason"] = json!(r),
        OutcomeKind::Counterexample(_) => {}
    }
    v
}

fn describe_cex(c: &Counterexample) -> String {
    let mut s = format!("violated: {}:{}\n", c.file, c.line);
    s += &format!("tape: {:?}\n", c.tape.values);
    for step in &c.trace {
        let vars: Vec<String> = step
            .vars
            .iter()
            .map(|(k, v)| format!("{k}={}", serde_json::to_string(v).unwrap_or_default()))
            .collect();
        s += &format!("  line {:>4}  {}\n", step.line, vars.join(" "));
    }
    s
}

fn cmd_check(args: &[String], a: &CheckArgs, io: &mut Io) -> Result<i32, Failure> {
    let (p, bytes) = load(&a.file)?;
    let opts = BmcOptions {
        omitted: a.omit.iter().map(String::as_str).collect(),
        required: a.require.iter().map(String::as_str).collect(),
        ..bmc_options(&a.run)?
    };
    let start = Instant::now();
    let prep = bmc::prepare(&p, &opts).map_err(|e| usage(e.to_string()))?;
    if let Some(path) = &a.dimacs {
        fs::write(path, export_dimacs(&prep.instance, &prep.sliced))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = String::new();
    if a.emit_ssa {
        text += &prep.sliced.to_string();
    }
    if a.stats {
        let s = &prep.instance.stats;
        text += &format!("vars={} clauses={} sliced={}\n", s.vars, s.clauses, s.sliced);
    }
    let outcome = bmc::solve_prepared(&p, &prep, &opts, start);
    if a.run.json {
        let mut v = outcome_json(&outcome);
        let options = serde_json::to_value(a).unwrap_or(Value::Null);
        v["manifest"] = json!(RunManifest::new(args, options, &bytes));
        text += &format!("{}\n", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        match &outcome.kind {
            OutcomeKind::Counterexample(c) => {
                text += "status: counterexample\n";
                text += &describe_cex(c);
            }
            OutcomeKind::Verified { depth } => text += &format!("status: verified to depth {depth}\n"),
            OutcomeKind::ResourceOut(r) => {
                text += &format!("status: resource out ({})\n", json!(r).as_str().unwrap_or(""))
            }
        }
    }
    write_out(io, &text)?;
    Ok(outcome_code(&outcome))
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Falsified { .. } => EXIT_FALSIFIED,
        Verdict::VerifiedToDepth(_) => EXIT_VERIFIED,
        Verdict::PartiallyVerified(_) => EXIT_PARTIAL,
        Verdict::Inconclusive => EXIT_RESOURCE_OUT,
    }
}

fn cmd_swarm(args: &[String], a: &SwarmArgs, io: &mut Io) -> Result<i32, Failure> {
    let (p, bytes) = load(&a.file)?;
    let per_run = bmc_options(&a.run)?;
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let opts = SwarmOptions {
        strategy: match a.strategy {
            StrategyArg::LeaveOneOut => Strategy::LeaveOneOut,
            StrategyArg::Half => Strategy::IndependentHalf,
        },
        config_count: a.configs,
        seed: per_run.seed,
        jobs,
        keep_going: a.keep_going,
        per_run,
        include_baseline: true,
    };
    let report = swarm::run_swarm(&p, &opts).map_err(|e| usage(e.to_string()))?;
    let text = if a.run.json {
        let mut v = report.to_json();
        let mut options = serde_json::to_value(a).unwrap_or(Value::Null);
        options["seed"] = json!(opts.seed);
        options["jobs"] = json!(jobs);
        v["manifest"] = json!(RunManifest::new(args, options, &bytes));
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
    } else {
        report.table()
    };
    write_out(io, &text)?;
    Ok(verdict_code(&report.verdict))
}

fn cmd_replay(file: &Path, trace: &Path, width: u32, io: &mut Io) -> Result<i32, Failure> {
    let (p, _) = load(file)?;
    let width = Width::new(width).map_err(|e| usage(e.to_string()))?;
    let text = fs::read_to_string(trace).map_err(|e| usage(format!("cannot read {}: {e}", trace.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", trace.display())))?;
    // a whole `check --json` report is accepted as well as a bare counterexample
    let v = match v.get("counterexample") {
        Some(inner) if inner.is_object() => inner.clone(),
        _ => v,
    };
    let cex = Counterexample::from_json(&v, &p, width).map_err(|e| usage(e.to_string()))?;
    if cex.replays_on(&p) {
        write_out(io, &format!("confirmed: violation at {}:{}\n", cex.file, cex.line))?;
        Ok(EXIT_VERIFIED)
    } else {
        write_out(io, "not confirmed: the tape does not reach the recorded violation\n")?;
        Ok(EXIT_REPLAY_FAILED)
    }
}

fn cmd_solve(
    dimacs_in: bool,
    file: Option<&Path>,
    seed: Option<u64>,
    max_conflicts: Option<u64>,
    stdin: &mut dyn Read,
    io: &mut Io,
) -> Result<i32, Failure> {
    if !dimacs_in {
        return Err(usage("solve needs --dimacs-in"));
    }
    let text = match file {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    let f = parse_dimacs(&text).map_err(|e| usage(e.to_string()))?;
    let budget = SolveBudget {
        max_conflicts,
        ..SolveBudget::unlimited()
    };
    let (out, code) = match sat::solve(&f, &budget, seed_from(seed)?) {
        SolveResult::Sat(m) => {
            let lits: Vec<String> = m.literals().iter().map(i32::to_string).collect();
            let v = if lits.is_empty() {
                "v 0".to_string()
            } else {
                format!("v {} 0", lits.join(" "))
            };
            (format!("SAT\n{v}\n"), EXIT_FALSIFIED)
        }
        SolveResult::Unsat => ("UNSAT\n".to_string(), EXIT_VERIFIED),
        SolveResult::Unknown(_) => ("UNKNOWN\n".to_string(), EXIT_RESOURCE_OUT),
    };
    write_out(io, &out)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let args: Vec<String> = std::iter::once("swarm-bmc").chain(args.iter().copied()).map(String::from).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&args, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn solve_from_stdin() {
        let (code, out, _) = call(&["solve", "--dimacs-in"], "p cnf 1 1\n1 0\n");
        assert_eq!((code, out.as_str()), (10, "SAT\nv 1 0\n"));
        let (code, out, _) = call(&["solve", "--dimacs-in"], "p cnf 1 2\n1 0\n-1 0\n");
        assert_eq!((code, out.as_str()), (0, "UNSAT\n"));
        let (code, _, err) = call(&["solve", "--dimacs-in"], "p cnf x\n");
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn missing_file_names_the_path() {
        let (code, _, err) = call(&["features", "/no/such/file.imp"], "");
        assert_eq!(code, 2);
        assert!(err.contains("/no/such/file.imp"), "{err}");
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        let (code, _, _) = call(&["swarm", "x.imp", "--strategy", "sideways"], "");
        assert_eq!(code, 2);
        let (code, _, _) = call(&["frobnicate"], "");
        assert_eq!(code, 2);
    }
}
