//! The `frkit` command line: `lp analyze|verify`, `sdp verify|lowrank|worst-case`
//! and `sat reduce|sequence|certify`. Reports go to stdout (or `-o`) as JSON,
//! logs go to stderr.
//!
//! Exit codes: 0 success, 1 a checked claim fails, 2 input error, 3 internal
//! invariant breach, 4 budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::kernel::{sym_eig, SymMatrixF, DEFAULT_EIG_TOL, DEFAULT_RANK_TOL};
use crate::lp_fr::{
    brute_force_msd, fra_minimal, minimal_cone_lp, sd_lp, verify_sequence_lp, FRSequenceLP,
    LinearSet, OrthantFace, DEFAULT_BRUTE_CAP,
};
use crate::sat_reduce::{
    assignment_to_sequence, build_msd_sdp, build_msd_sdp_unchecked, certify, duplicate_clauses,
    parse_dimacs, preprocess, Assignment, CnfInstance, ReductionInstance,
};
use crate::sdp_fr::{
    fra_lowrank, verify_sequence_sdp, worst_case_instance, FRSequenceSDP, LowRankOptions, SdpFace,
    SdpProblem,
};

pub const SEED_ENV: &str = "FR_SEED";

#[derive(Parser, Debug)]
#[command(name = "frkit", version, about = "Facial reduction toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_EIG_TOL)]
    pub eig_tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub res_tol: f64,
    /// Base seed; overrides the FR_SEED environment variable.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for assignment and seed enumeration.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest number of assignments to enumerate.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Linear programs over the nonnegative orthant.
    #[command(subcommand)]
    Lp(LpCommand),
    /// Semidefinite programs.
    #[command(subcommand)]
    Sdp(SdpCommand),
    /// The 3SAT reduction.
    #[command(subcommand)]
    Sat(SatCommand),
}

#[derive(Subcommand, Debug)]
pub enum LpCommand {
    /// Maximum and minimum singularity degree, minimal cone and a longest sequence.
    Analyze {
        input: PathBuf,
        /// Cross-check against exhaustive face enumeration.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
    },
    /// Check a sequence step by step, including minimality.
    Verify { problem: PathBuf, sequence: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SdpCommand {
    /// Check a sequence with rank-drop certificates.
    Verify { problem: PathBuf, sequence: PathBuf },
    /// Greedy reduction with low-rank exposing vectors.
    Lowrank {
        problem: Option<PathBuf>,
        /// Use the worst-case instance of this order instead of a file.
        #[arg(long)]
        worst_case: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    /// Emit the worst-case instance of order N.
    WorstCase { n: usize },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ReduceFlags {
    /// Skip clause duplication.
    #[arg(long)]
    pub no_duplicate: bool,
    /// Build from the clauses as given: no preprocessing, no duplication.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Subcommand, Debug)]
pub enum SatCommand {
    /// Emit the SDP instance of a CNF.
    Reduce {
        cnf: PathBuf,
        #[command(flatten)]
        flags: ReduceFlags,
    },
    /// Emit the sequence induced by a satisfying assignment of the input variables.
    Sequence {
        cnf: PathBuf,
        #[arg(long)]
        assign: String,
        #[command(flatten)]
        flags: ReduceFlags,
    },
    /// Decide satisfiability and compare with the exact maximum singularity degree.
    Certify {
        cnf: PathBuf,
        /// Write the witness sequence here when satisfiable.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::TooLarge { .. } => {
                CliError::Budget(e.to_string())
            }
            Error::Parse { .. }
            | Error::NonTernaryClause { .. }
            | Error::Input(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite
            | Error::MalformedTask(_)
            | Error::BadOrder(_)
            | Error::NotPreprocessed
            | Error::UnsatisfiedAssignment { .. }
            | Error::EmptyFeasibleSet => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Echo of the effective configuration, included in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub output: Option<String>,
    pub eig_tol: f64,
    pub rank_tol: f64,
    pub res_tol: f64,
    pub seed: u64,
    pub budget: u64,
    pub jobs: Option<usize>,
    pub flags: BTreeMap<String, Value>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    version: &'static str,
    config: &'a RunConfig,
    result: Value,
    timings_ms: BTreeMap<&'static str, f64>,
}

struct Timer(BTreeMap<&'static str, f64>);

impl Timer {
    fn new() -> Self {
        Timer(BTreeMap::new())
    }

    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(phase, start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// What a command produced: a report (with a verdict) or a raw artifact.
enum Output {
    Report {
        result: Value,
        holds: bool,
        timer: Timer,
    },
    Artifact(Value),
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_json(path: Option<&Path>, v: &Value) -> CliResult<()> {
    let text =
        serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))? + "\n";
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn config_for(cli: &Cli) -> CliResult<RunConfig> {
    let c = &cli.common;
    for (name, v) in [
        ("eig-tol", c.eig_tol),
        ("rank-tol", c.rank_tol),
        ("res-tol", c.res_tol),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Input(format!("--{name} must be positive")));
        }
    }
    if c.budget == 0 {
        return Err(CliError::Input("--budget must be at least 1".into()));
    }
    if c.jobs == Some(0) {
        return Err(CliError::Input("--jobs must be at least 1".into()));
    }
    let mut flags = BTreeMap::new();
    let (command, inputs): (&str, Vec<&Path>) = match &cli.command {
        Command::Lp(LpCommand::Analyze {
            input,
            brute,
            brute_cap,
        }) => {
            flags.insert("brute".into(), json!(brute));
            flags.insert("brute_cap".into(), json!(brute_cap));
            ("lp analyze", vec![input])
        }
        Command::Lp(LpCommand::Verify { problem, sequence }) => {
            ("lp verify", vec![problem, sequence])
        }
        Command::Sdp(SdpCommand::Verify { problem, sequence }) => {
            ("sdp verify", vec![problem, sequence])
        }
        Command::Sdp(SdpCommand::Lowrank {
            problem,
            worst_case,
            ranks,
            seeds,
            restarts,
            max_iter,
        }) => {
            flags.insert("worst_case".into(), json!(worst_case));
            flags.insert("ranks".into(), json!(ranks));
            flags.insert("seeds".into(), json!(seeds));
            flags.insert("restarts".into(), json!(restarts));
            flags.insert("max_iter".into(), json!(max_iter));
            (
                "sdp lowrank",
                problem.iter().map(PathBuf::as_path).collect(),
            )
        }
        Command::Sdp(SdpCommand::WorstCase { n }) => {
            flags.insert("n".into(), json!(n));
            ("sdp worst-case", vec![])
        }
        Command::Sat(SatCommand::Reduce { cnf, flags: f }) => {
            flags.insert("no_duplicate".into(), json!(f.no_duplicate));
            flags.insert("raw".into(), json!(f.raw));
            ("sat reduce", vec![cnf])
        }
        Command::Sat(SatCommand::Sequence {
            cnf,
            assign,
            flags: f,
        }) => {
            flags.insert("assign".into(), json!(assign));
            flags.insert("no_duplicate".into(), json!(f.no_duplicate));
            flags.insert("raw".into(), json!(f.raw));
            ("sat sequence", vec![cnf])
        }
        Command::Sat(SatCommand::Certify { cnf, witness }) => {
            flags.insert(
                "witness".into(),
                json!(witness.as_ref().map(|p| p.display().to_string())),
            );
            ("sat certify", vec![cnf])
        }
    };
    Ok(RunConfig {
        command: command.into(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        output: c.output.as_ref().map(|p| p.display().to_string()),
        eig_tol: c.eig_tol,
        rank_tol: c.rank_tol,
        res_tol: c.res_tol,
        seed: resolve_seed(c.seed)?,
        budget: c.budget,
        jobs: c.jobs,
        flags,
    })
}

fn lp_analyze(input: &Path, brute: bool, brute_cap: usize) -> CliResult<Output> {
    let mut timer = Timer::new();
    let set: LinearSet = read_json(input)?;
    let seq = timer.time("msd", || fra_minimal(&set, &OrthantFace::full(set.n())))?;
    let (sd, sd_step) = timer.time("sd", || sd_lp(&set))?;
    let cone = timer.time("minimal_cone", || minimal_cone_lp(&set))?;
    if seq.final_face() != &cone {
        return Err(CliError::Internal(
            "sequence does not end at the minimal cone".into(),
        ));
    }
    let mut result = json!({
        "msd": seq.len(),
        "sd": sd,
        "sd_step": sd_step,
        "minimal_cone": { "zero_set": cone.zero_set_one_based(), "dim": cone.dim() },
        "sequence": seq,
    });
    let mut holds = true;
    if brute {
        let b = timer.time("brute_force", || brute_force_msd(&set, brute_cap))?;
        result["brute_force"] = json!(b);
        holds = b == seq.len();
    }
    Ok(Output::Report {
        result,
        holds,
        timer,
    })
}

fn lp_verify(problem: &Path, sequence: &Path) -> CliResult<Output> {
    let mut timer = Timer::new();
    let set: LinearSet = read_json(problem)?;
    let seq: FRSequenceLP = read_json(sequence)?;
    if seq.faces.iter().any(|f| f.n() != set.n()) {
        return Err(CliError::Input(
            "sequence and problem dimensions differ".into(),
        ));
    }
    let r = timer.time("verify", || verify_sequence_lp(&set, &seq))?;
    let result = json!({
        "valid": r.valid,
        "minimal": r.minimal,
        "complete": r.complete,
        "length": r.length,
        "final_face": r.final_face.zero_set_one_based(),
        "steps": r.steps,
    });
    Ok(Output::Report {
        result,
        holds: r.valid,
        timer,
    })
}

fn spectrum_on_face(
    face: &SdpFace,
    w: &crate::sdp_fr::SparseSym,
    eig_tol: f64,
) -> CliResult<(f64, f64)> {
    let ev = sym_eig(&SymMatrixF::from_dmatrix(&face.restrict(w)), eig_tol)?.eigenvalues;
    Ok((
        ev.last().copied().unwrap_or(0.0),
        ev.first().copied().unwrap_or(0.0),
    ))
}

fn sdp_verify(problem: &Path, sequence: &Path, cfg: &RunConfig) -> CliResult<Output> {
    let mut timer = Timer::new();
    let p: SdpProblem = read_json(problem)?;
    let seq: FRSequenceSDP = read_json(sequence)?;
    let r = timer.time("verify", || verify_sequence_sdp(&p, &seq, cfg.rank_tol))?;
    let mut steps = Vec::new();
    for (d, (e, face)) in r.steps.iter().zip(seq.steps.iter().zip(&seq.faces)) {
        let (lo, hi) = if face.n() == p.n {
            spectrum_on_face(face, &e.w, cfg.eig_tol)?
        } else {
            (f64::NAN, f64::NAN)
        };
        let mut v = to_value(d);
        v["lambda_min"] = json!(lo);
        v["lambda_max"] = json!(hi);
        steps.push(v);
    }
    let result = json!({
        "valid": r.valid,
        "length": r.length,
        "rank_drops": r.rank_drops,
        "minimal_certified": r.minimal_certified,
        "final_face_dim": r.final_face.k(),
        "steps": steps,
    });
    Ok(Output::Report {
        result,
        holds: r.valid,
        timer,
    })
}

fn sdp_lowrank(cmd: &SdpCommand, cfg: &RunConfig) -> CliResult<Output> {
    let SdpCommand::Lowrank {
        problem,
        worst_case,
        ranks,
        seeds,
        restarts,
        max_iter,
    } = cmd
    else {
        unreachable!("dispatched on Lowrank")
    };
    let mut timer = Timer::new();
    let p = match (problem, worst_case) {
        (Some(path), None) => read_json::<SdpProblem>(path)?,
        (None, Some(n)) => worst_case_instance(*n)?,
        _ => {
            return Err(CliError::Input(
                "give exactly one of a problem file or --worst-case N".into(),
            ))
        }
    };
    let opts = LowRankOptions {
        ranks: ranks.clone(),
        seeds: *seeds,
        restarts: *restarts,
        base_seed: cfg.seed,
        max_iter: *max_iter,
        res_tol: cfg.res_tol,
        rank_tol: cfg.rank_tol,
    };
    let run = timer.time("search", || fra_lowrank(&p, &opts))?;
    let check = timer.time("verify", || verify_sequence_sdp(&p, &run.seq, cfg.rank_tol))?;
    if !check.valid {
        return Err(CliError::Internal(
            "the search produced a sequence that fails verification".into(),
        ));
    }
    let result = json!({
        "length": run.seq.len(),
        "termination": run.termination,
        "residuals": run.residuals,
        "ranks": run.ranks,
        "rank_drops": check.rank_drops,
        "final_face_dim": run.seq.final_face().k(),
        "sequence": run.seq,
    });
    Ok(Output::Report {
        result,
        holds: true,
        timer,
    })
}

fn load_reduction(
    path: &Path,
    flags: ReduceFlags,
) -> CliResult<(CnfInstance, Option<Vec<usize>>, ReductionInstance)> {
    let cnf = parse_dimacs(&read(path)?)?;
    if flags.raw {
        let r = build_msd_sdp_unchecked(&cnf)?;
        return Ok((cnf, None, r));
    }
    let pre = preprocess(&cnf);
    if pre.trivialized() {
        return Err(CliError::Input(
            "preprocessing removed every clause; there is no instance to build".into(),
        ));
    }
    let target = if flags.no_duplicate {
        pre.cnf.clone()
    } else {
        duplicate_clauses(&pre.cnf)?
    };
    let r = build_msd_sdp(&target)?;
    Ok((cnf, Some(pre.origin), r))
}

fn sat_sequence(path: &Path, assign: &str, flags: ReduceFlags) -> CliResult<Output> {
    let (cnf, origin, r) = load_reduction(path, flags)?;
    let full: Assignment = assign.parse()?;
    if full.values.len() != cnf.p {
        return Err(CliError::Input(format!(
            "--assign has {} values for {} variables",
            full.values.len(),
            cnf.p
        )));
    }
    let a = match origin {
        Some(origin) => Assignment {
            values: origin.iter().map(|&i| full.values[i - 1]).collect(),
        },
        None => full,
    };
    let seq = assignment_to_sequence(&r, &a)?;
    Ok(Output::Artifact(to_value(&seq)))
}

fn sat_certify(path: &Path, witness_path: Option<&Path>, cfg: &RunConfig) -> CliResult<Output> {
    let mut timer = Timer::new();
    let cnf = parse_dimacs(&read(path)?)?;
    let report = timer.time("certify", || certify(&cnf, cfg.budget))?;
    let mut result = to_value(&report);
    if let (Some(w), Some(p)) = (&report.witness, witness_path) {
        write_json(Some(p), &to_value(&w.sequence))?;
        result["witness_file"] = json!(p.display().to_string());
    }
    Ok(Output::Report {
        result,
        holds: report.consistent,
        timer,
    })
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> CliResult<Output> {
    match &cli.command {
        Command::Lp(LpCommand::Analyze {
            input,
            brute,
            brute_cap,
        }) => lp_analyze(input, *brute, *brute_cap),
        Command::Lp(LpCommand::Verify { problem, sequence }) => lp_verify(problem, sequence),
        Command::Sdp(SdpCommand::Verify { problem, sequence }) => {
            sdp_verify(problem, sequence, cfg)
        }
        Command::Sdp(cmd @ SdpCommand::Lowrank { .. }) => sdp_lowrank(cmd, cfg),
        Command::Sdp(SdpCommand::WorstCase { n }) => {
            Ok(Output::Artifact(to_value(&worst_case_instance(*n)?)))
        }
        Command::Sat(SatCommand::Reduce { cnf, flags }) => {
            let (_, _, r) = load_reduction(cnf, *flags)?;
            Ok(Output::Artifact(r.to_json()))
        }
        Command::Sat(SatCommand::Sequence { cnf, assign, flags }) => {
            sat_sequence(cnf, assign, *flags)
        }
        Command::Sat(SatCommand::Certify { cnf, witness }) => {
            sat_certify(cnf, witness.as_deref(), cfg)
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let cfg = config_for(cli)?;
    let output = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(|| dispatch(cli, &cfg))?,
        None => dispatch(cli, &cfg)?,
    };
    let out = cli.common.output.as_deref();
    match output {
        Output::Artifact(v) => {
            write_json(out, &v)?;
            Ok(0)
        }
        Output::Report {
            result,
            holds,
            timer,
        } => {
            let report = Report {
                command: &cfg.command,
                version: env!("CARGO_PKG_VERSION"),
                config: &cfg,
                result,
                timings_ms: timer.0,
            };
            write_json(out, &to_value(&report))?;
            if !holds {
                eprintln!("frkit: a checked claim does not hold");
            }
            Ok(if holds { 0 } else { 1 })
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("frkit: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("frkit: internal error: a computation panicked");
            3
        }
    }
}
