//! The `canonset` command line.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use canonset_core::canonize::{
    build_enumeration_formula, compute_canonizing_set, enumerate_graphs, reduce, verify_canonizing, Breaking, Method, Mode,
    PermSet, Provenance, Verdict,
};
use canonset_core::graph::canonical_form_bruteforce;
use canonset_core::matrix::{
    build_mm_enumeration_formula, doublelex_pairs, mm_compute_canonizing_set, mm_enumerate, mm_reduce,
    mm_verify_canonizing, EfpaInstance, MatrixModel, MatrixVerdict, PairSet,
};
use canonset_core::oracle::{EnumerationEnd, SatOracle, SolveResult};
use canonset_core::problems::Predicate;
use canonset_core::GraphAssignment;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::permfile::{self, SetFile};
use crate::pipeline::{run_hi_pipeline, HiConfig};
use crate::report::RunReport;
use crate::solver::{Backend, Deadline, EmbeddedSolver};
use crate::{dimacs, graph6, spec};

/// Exit status of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// A time budget ran out or an input set was flagged incomplete.
    Partial,
    /// `verify` found a counterexample.
    NotCanonizing,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Complete => 0,
            Status::Partial => 2,
            Status::NotCanonizing => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "canonset", version, about = "Canonizing symmetry breaks for graph and matrix search problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Wall-clock budget for the whole run, in seconds.
    #[arg(long, value_name = "SECS")]
    pub time_budget: Option<f64>,
    /// External solver command (DIMACS on stdin, competition output);
    /// defaults to $CANONSET_SOLVER, then to the embedded solver.
    #[arg(long, value_name = "CMD")]
    pub solver: Option<String>,
    /// Write the JSON run report here instead of stderr.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    G6,
    Bits,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BreakKind {
    None,
    Lexstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixBreak {
    Doublelex,
    Canonizing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMethod {
    Sat,
    Bruteforce,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Compute (and reduce) a canonizing permutation set.
    ComputeSet {
        #[arg(long)]
        n: Option<usize>,
        /// Problem spec; anything but `true` gives an instance-dependent set.
        #[arg(long, default_value = "true")]
        problem: String,
        /// Compute a pair set for an EFPA instance `q,lambda,d,v` instead.
        #[arg(long, value_name = "Q,L,D,V", conflicts_with = "n")]
        efpa: Option<String>,
        /// Start from this set (default: empty, or DoubleLex for matrices).
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long)]
        no_reduce: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the solutions of a problem under a symmetry break.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "true")]
        problem: String,
        #[arg(long, conflicts_with = "break_kind")]
        permset: Option<PathBuf>,
        /// Break to use without a permset.
        #[arg(long = "break", value_enum, default_value = "none")]
        break_kind: BreakKind,
        #[arg(long, value_enum, default_value = "g6")]
        format: Format,
        /// Stop after this many solutions.
        #[arg(long)]
        limit: Option<usize>,
        /// Also enumerate under sb*ℓ, reduce to canonical forms by brute
        /// force, and compare (n ≤ 6).
        #[arg(long, conflicts_with = "limit")]
        crosscheck: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Count highly irregular graphs, one worker shard per degree sequence.
    HiPipeline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        no_reduce: bool,
        /// Write the graphs as well as the counts.
        #[arg(long, value_enum, default_value = "g6")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Check whether a permutation set is canonizing.
    Verify {
        #[arg(long)]
        permset: PathBuf,
        /// Defaults to the problem recorded in the set file.
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, value_enum, default_value = "sat")]
        method: VerifyMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Write the problem and its symmetry break as DIMACS.
    EmitCnf {
        #[arg(long, required_unless_present = "efpa")]
        n: Option<usize>,
        #[arg(long, default_value = "true")]
        problem: String,
        #[arg(long, value_name = "Q,L,D,V", conflicts_with = "n")]
        efpa: Option<String>,
        #[arg(long, conflicts_with = "break_kind")]
        permset: Option<PathBuf>,
        #[arg(long = "break", value_enum, default_value = "none")]
        break_kind: BreakKind,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate EFPA solutions under DoubleLex or a canonizing pair set.
    Efpa {
        #[arg(long, value_name = "Q,L,D,V")]
        efpa: String,
        #[arg(long = "break", value_enum, default_value = "canonizing")]
        break_kind: MatrixBreak,
        /// Use this pair set instead of computing one.
        #[arg(long)]
        permset: Option<PathBuf>,
        /// Save the computed pair set here.
        #[arg(long)]
        save_permset: Option<PathBuf>,
        #[arg(long)]
        no_reduce: bool,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a DIMACS file (or stdin) with the embedded solver, printing
    /// competition output.
    #[command(hide = true)]
    Solve { input: Option<PathBuf> },
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn emit_report(common: &Common, report: &RunReport) -> Result<()> {
    let json = report.to_json();
    match &common.report {
        Some(p) => std::fs::write(p, json + "\n").map_err(|e| Error::io(p, e)),
        None => {
            eprintln!("{json}");
            Ok(())
        }
    }
}

fn format_graph(g: &GraphAssignment, format: Format) -> Result<String> {
    match format {
        Format::G6 => Ok(graph6::encode(g)),
        Format::Bits => Ok(g.upper_tri_string()),
        Format::Matrix => Err(Error::Usage("--format matrix applies to matrix problems".into())),
    }
}

fn load_model(s: &str) -> Result<EfpaInstance> {
    spec::parse_efpa(s)
}

fn status_of(complete: bool) -> Status {
    if complete {
        Status::Complete
    } else {
        Status::Partial
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("canonset: {e}");
            1
        }
    }
}

pub fn run(cmd: Cmd) -> Result<Status> {
    match cmd {
        Cmd::ComputeSet { n, problem, efpa, init, no_reduce, common } => match efpa {
            Some(params) => compute_pair_set(&load_model(&params)?, init.as_deref(), !no_reduce, &common),
            None => {
                let n = n.ok_or_else(|| Error::Usage("--n or --efpa is required".into()))?;
                compute_graph_set(n, &problem, init.as_deref(), !no_reduce, &common)
            }
        },
        Cmd::Enumerate { n, problem, permset, break_kind, format, limit, crosscheck, common } => {
            enumerate(n, &problem, permset.as_deref(), break_kind, format, limit, crosscheck, &common)
        }
        Cmd::HiPipeline { n, workers, no_reduce, format, common } => hi_pipeline(n, workers, !no_reduce, format, &common),
        Cmd::Verify { permset, problem, method, common } => verify(&permset, problem.as_deref(), method, &common),
        Cmd::EmitCnf { n, problem, efpa, permset, break_kind, common } => {
            emit_cnf(n, &problem, efpa.as_deref(), permset.as_deref(), break_kind, &common)
        }
        Cmd::Efpa { efpa, break_kind, permset, save_permset, no_reduce, limit, common } => run_efpa(
            &load_model(&efpa)?,
            break_kind,
            permset.as_deref(),
            save_permset.as_deref(),
            !no_reduce,
            limit,
            &common,
        ),
        Cmd::Solve { input } => solve(input.as_deref()),
    }
}

fn compute_graph_set(n: usize, problem: &str, init: Option<&Path>, do_reduce: bool, common: &Common) -> Result<Status> {
    let start = Instant::now();
    let backend = Backend::resolve(common.solver.as_deref());
    let deadline = Deadline::from_secs(common.time_budget);
    let phi = spec::parse_problem(problem)?;
    let mode = if phi.is_trivial() { Mode::Independent } else { Mode::Dependent };
    let init = match init {
        Some(p) => {
            let s = permfile::load_graph_set(p)?;
            if s.n() != n {
                return Err(Error::Usage(format!("{}: set is for n = {}, not {n}", p.display(), s.n())));
            }
            if mode == Mode::Dependent {
                // Entries stay valid; the result is specific to this problem.
                PermSet::from_perms(n, s.entries().iter().cloned(), Provenance::InstanceIndependent)?
            } else {
                s
            }
        }
        None => PermSet::new(n, Provenance::InstanceIndependent),
    };
    let computed = compute_canonizing_set(backend.oracle(deadline)?, &init, &phi, mode)?;
    let mut report = RunReport::new("compute-set", backend.name());
    report.problem = Some(phi.to_string());
    report.n = Some(n);
    report.iterations = Some(computed.added);
    let mut set = computed.set;
    if do_reduce && set.is_complete() {
        let r = reduce(backend.oracle(deadline)?, &set, &phi)?;
        report.removed = Some(r.removed.len());
        report.fully_reduced = Some(r.fully_reduced);
        set = r.set;
    }
    report.permutations = Some(set.len());
    report.complete = set.is_complete();
    let mut out = out_writer(&common.output)?;
    permfile::write_perm_set(&mut out, &set)?;
    out.flush()?;
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    Ok(status_of(report.complete))
}

fn compute_pair_set(model: &EfpaInstance, init: Option<&Path>, do_reduce: bool, common: &Common) -> Result<Status> {
    let start = Instant::now();
    let backend = Backend::resolve(common.solver.as_deref());
    let deadline = Deadline::from_secs(common.time_budget);
    let (set, added, removed, fully) = pair_set_for(model, init, do_reduce, &backend, deadline)?;
    let mut report = RunReport::new("compute-set", backend.name());
    report.problem = Some(model.describe());
    report.iterations = Some(added);
    report.removed = removed;
    report.fully_reduced = fully;
    report.permutations = Some(set.len());
    report.complete = set.is_complete();
    let mut out = out_writer(&common.output)?;
    permfile::write_pair_set(&mut out, &set)?;
    out.flush()?;
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    Ok(status_of(report.complete))
}

type PairSetRun = (PairSet, usize, Option<usize>, Option<bool>);

fn pair_set_for(model: &EfpaInstance, init: Option<&Path>, do_reduce: bool, backend: &Backend, deadline: Deadline) -> Result<PairSetRun> {
    let shape = model.shape();
    let init = match init {
        Some(p) => permfile::load_pair_set(p)?,
        None => PairSet::from_pairs(shape.rows, shape.cols, doublelex_pairs(shape.rows, shape.cols))?,
    };
    let computed = mm_compute_canonizing_set(backend.oracle(deadline)?, &init, model)?;
    let mut set = computed.set;
    let (mut removed, mut fully) = (None, None);
    if do_reduce && set.is_complete() {
        let r = mm_reduce(backend.oracle(deadline)?, &set, model)?;
        removed = Some(r.removed.len());
        fully = Some(r.fully_reduced);
        set = r.set;
    }
    Ok((set, computed.added, removed, fully))
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    n: usize,
    problem: &str,
    permset: Option<&Path>,
    break_kind: BreakKind,
    format: Format,
    limit: Option<usize>,
    crosscheck: bool,
    common: &Common,
) -> Result<Status> {
    let start = Instant::now();
    let backend = Backend::resolve(common.solver.as_deref());
    let deadline = Deadline::from_secs(common.time_budget);
    let phi = spec::parse_problem(problem)?;
    if crosscheck && n > 6 {
        return Err(Error::Usage("--crosscheck is limited to n ≤ 6".into()));
    }
    let set = permset.map(permfile::load_graph_set).transpose()?;
    if let Some(s) = &set {
        if s.n() != n {
            return Err(Error::Usage(format!("permutation set is for n = {}, not {n}", s.n())));
        }
    }
    let breaking = match (&set, break_kind) {
        (Some(s), _) => Breaking::Perms(s.entries()),
        (None, BreakKind::Lexstar) => Breaking::LexStar,
        (None, BreakKind::None) => Breaking::None,
    };
    let mut out = out_writer(&common.output)?;
    let mut seen = BTreeSet::new();
    let mut write_err = None;
    let e = enumerate_graphs(backend.oracle(deadline)?, n, &phi, breaking, limit, |g| {
        if write_err.is_none() {
            if let Err(e) = format_graph(&g, format).and_then(|line| Ok(writeln!(out, "{line}")?)) {
                write_err = Some(e);
            }
        }
        if crosscheck {
            seen.insert(g);
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    out.flush()?;
    let mut report = RunReport::new("enumerate", backend.name());
    report.problem = Some(phi.to_string());
    report.n = Some(n);
    report.solutions = Some(e.count);
    report.permutations = set.as_ref().map(PermSet::len);
    report.complete = e.is_complete() && set.as_ref().map_or(true, PermSet::is_complete);
    let timed_out = e.end == EnumerationEnd::TimedOut;
    if crosscheck {
        let mut reduced = BTreeSet::new();
        let e2 = enumerate_graphs(backend.oracle(deadline)?, n, &phi, Breaking::LexStar, None, |g| {
            reduced.insert(g);
        })?;
        let forms = reduced
            .iter()
            .map(canonical_form_bruteforce)
            .collect::<std::result::Result<BTreeSet<_>, _>>()?;
        report.crosscheck = Some(forms == seen);
        report.complete &= e2.is_complete();
    }
    let status = if timed_out || !report.complete && limit.is_none() { Status::Partial } else { Status::Complete };
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    if report.crosscheck == Some(false) {
        return Err(Error::Usage("cross-check failed: the two enumerations differ".into()));
    }
    Ok(status)
}

fn hi_pipeline(n: usize, workers: Option<usize>, do_reduce: bool, format: Format, common: &Common) -> Result<Status> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::Usage("--n must be at least 2".into()));
    }
    let backend = Backend::resolve(common.solver.as_deref());
    let workers = workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
        .max(1);
    let cfg = HiConfig {
        n,
        workers,
        backend: backend.clone(),
        deadline: Deadline::from_secs(common.time_budget),
        reduce: do_reduce,
        keep_graphs: common.output.is_some(),
    };
    let outcome = run_hi_pipeline(&cfg)?;
    let mut report = RunReport::new("hi-pipeline", backend.name());
    report.problem = Some("hi".into());
    report.n = Some(n);
    report.solutions = Some(outcome.total());
    report.complete = outcome.complete();
    report.shards = outcome.shards.iter().map(|s| s.report()).collect();
    if common.output.is_some() {
        let mut out = out_writer(&common.output)?;
        for s in &outcome.shards {
            for g in &s.graphs {
                writeln!(out, "{}", format_graph(g, format)?)?;
            }
        }
        out.flush()?;
    } else {
        println!("{}", outcome.total());
    }
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    Ok(status_of(report.complete))
}

fn verify(path: &Path, problem: Option<&str>, method: VerifyMethod, common: &Common) -> Result<Status> {
    let start = Instant::now();
    let backend = Backend::resolve(common.solver.as_deref());
    let deadline = Deadline::from_secs(common.time_budget);
    let mut report = RunReport::new("verify", backend.name());
    let mut out = out_writer(&common.output)?;
    let (verdict, complete_flag) = match permfile::load(path)? {
        SetFile::Graph(set) => {
            let spec_str = problem.map(str::to_owned).unwrap_or_else(|| match set.provenance() {
                Provenance::InstanceIndependent => "true".into(),
                Provenance::InstanceDependent(s) => s.clone(),
            });
            let phi = spec::parse_problem(&spec_str)?;
            report.problem = Some(phi.to_string());
            report.n = Some(set.n());
            report.permutations = Some(set.len());
            let method = match method {
                VerifyMethod::Sat => Method::Sat(backend.oracle(deadline)?),
                VerifyMethod::Bruteforce => Method::BruteForce,
            };
            let v = verify_canonizing(&set, &phi, method)?;
            let text = match &v {
                Verdict::Canonizing => "canonizing".to_owned(),
                Verdict::Unknown => "unknown".to_owned(),
                Verdict::NotCanonizing { graph, perm } => format!(
                    "not canonizing\ngraph {} ({})\npermutation {perm} maps it to {}",
                    graph.upper_tri_string(),
                    graph6::encode(graph),
                    canonset_core::graph::apply_perm(perm, graph)?.upper_tri_string()
                ),
            };
            writeln!(out, "{text}")?;
            let status = match v {
                Verdict::Canonizing => Status::Complete,
                Verdict::Unknown => Status::Partial,
                Verdict::NotCanonizing { .. } => Status::NotCanonizing,
            };
            (status, set.is_complete())
        }
        SetFile::Matrix(set) => {
            if method == VerifyMethod::Bruteforce {
                return Err(Error::Usage("matrix sets are verified with --method sat".into()));
            }
            let spec_str = problem
                .map(str::to_owned)
                .or_else(|| set.problem.clone())
                .ok_or_else(|| Error::Usage("matrix set has no recorded model; pass --problem efpa:…".into()))?;
            let model = load_model(&spec_str)?;
            report.problem = Some(model.describe());
            report.permutations = Some(set.len());
            let v = mm_verify_canonizing(backend.oracle(deadline)?, &set, &model)?;
            let status = match &v {
                MatrixVerdict::Canonizing => {
                    writeln!(out, "canonizing")?;
                    Status::Complete
                }
                MatrixVerdict::Unknown => {
                    writeln!(out, "unknown")?;
                    Status::Partial
                }
                MatrixVerdict::NotCanonizing { matrix, pair } => {
                    writeln!(out, "not canonizing\npair {pair} lowers\n{matrix}")?;
                    Status::NotCanonizing
                }
            };
            (status, set.is_complete())
        }
    };
    out.flush()?;
    report.verdict = Some(
        match verdict {
            Status::Complete => "canonizing",
            Status::Partial => "unknown",
            Status::NotCanonizing => "not-canonizing",
        }
        .into(),
    );
    report.complete = verdict != Status::Partial && complete_flag;
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    Ok(match verdict {
        Status::Complete if !complete_flag => Status::Partial,
        v => v,
    })
}

fn emit_cnf(
    n: Option<usize>,
    problem: &str,
    efpa: Option<&str>,
    permset: Option<&Path>,
    break_kind: BreakKind,
    common: &Common,
) -> Result<Status> {
    let mut comments = Vec::new();
    let formula = if let Some(params) = efpa {
        let model = load_model(params)?;
        let shape = model.shape();
        let set = match permset {
            Some(p) => permfile::load_pair_set(p)?,
            None => PairSet::from_pairs(shape.rows, shape.cols, doublelex_pairs(shape.rows, shape.cols))?,
        };
        let (f, cells) = build_mm_enumeration_formula(&model, set.entries())?;
        comments.push(format!("canonset emit-cnf {} pairs={}", model.describe(), set.len()));
        comments.push(format!("cell (r,c) >= w for w = 2..{}, rows and columns 1-based", shape.q));
        for r in 0..shape.rows {
            for c in 0..shape.cols {
                for w in 2..=shape.q {
                    comments.push(format!("cell ({},{}) >= {w} : {}", r + 1, c + 1, cells.at_least(r, c, w).to_dimacs()));
                }
            }
        }
        f
    } else {
        let n = n.ok_or_else(|| Error::Usage("--n or --efpa is required".into()))?;
        let phi = spec::parse_problem(problem)?;
        let set = permset.map(permfile::load_graph_set).transpose()?;
        if let Some(s) = &set {
            if s.n() != n {
                return Err(Error::Usage(format!("permutation set is for n = {}, not {n}", s.n())));
            }
        }
        let breaking = match (&set, break_kind) {
            (Some(s), _) => Breaking::Perms(s.entries()),
            (None, BreakKind::Lexstar) => Breaking::LexStar,
            (None, BreakKind::None) => Breaking::None,
        };
        let (f, a) = build_enumeration_formula(n, &phi, breaking)?;
        comments.push(format!(
            "canonset emit-cnf n={n} problem={phi} permutations={}",
            set.as_ref().map_or(0, PermSet::len)
        ));
        for i in 0..n {
            for j in i + 1..n {
                comments.push(format!("edge ({},{}) : {}", i + 1, j + 1, a.lit(i, j).to_dimacs()));
            }
        }
        f
    };
    let mut out = out_writer(&common.output)?;
    dimacs::write(&mut out, &formula, &comments)?;
    out.flush()?;
    Ok(Status::Complete)
}

#[allow(clippy::too_many_arguments)]
fn run_efpa(
    model: &EfpaInstance,
    break_kind: MatrixBreak,
    permset: Option<&Path>,
    save: Option<&Path>,
    do_reduce: bool,
    limit: Option<usize>,
    common: &Common,
) -> Result<Status> {
    let start = Instant::now();
    let backend = Backend::resolve(common.solver.as_deref());
    let deadline = Deadline::from_secs(common.time_budget);
    let shape = model.shape();
    let mut report = RunReport::new("efpa", backend.name());
    report.problem = Some(model.describe());
    let set = match (permset, break_kind) {
        (Some(p), _) => permfile::load_pair_set(p)?,
        (None, MatrixBreak::Doublelex) => PairSet::from_pairs(shape.rows, shape.cols, doublelex_pairs(shape.rows, shape.cols))?,
        (None, MatrixBreak::Canonizing) => {
            let (set, added, removed, fully) = pair_set_for(model, None, do_reduce, &backend, deadline)?;
            report.iterations = Some(added);
            report.removed = removed;
            report.fully_reduced = fully;
            if let Some(p) = save {
                permfile::save(p, &SetFile::Matrix(set.clone()))?;
            }
            set
        }
    };
    if (set.rows(), set.cols()) != (shape.rows, shape.cols) {
        return Err(Error::Usage(format!(
            "pair set is for {}x{} matrices, not {}x{}",
            set.rows(),
            set.cols(),
            shape.rows,
            shape.cols
        )));
    }
    report.permutations = Some(set.len());
    let mut out = out_writer(&common.output)?;
    let mut write_err = None;
    let mut first = true;
    let e = mm_enumerate(backend.oracle(deadline)?, model, set.entries(), limit, |m| {
        let sep = if first { "" } else { "\n" };
        first = false;
        if write_err.is_none() {
            write_err = write!(out, "{sep}{m}").err();
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    out.flush()?;
    report.solutions = Some(e.count);
    report.complete = e.is_complete() && set.is_complete();
    report.seconds = start.elapsed().as_secs_f64();
    emit_report(common, &report)?;
    Ok(if e.end == EnumerationEnd::LimitReached && set.is_complete() { Status::Complete } else { status_of(report.complete) })
}

/// Competition-format front end for the embedded solver; exit code 10 for
/// SAT, 20 for UNSAT.
fn solve(input: Option<&Path>) -> Result<Status> {
    let text = match input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let d = dimacs::parse(BufReader::new(text.as_bytes()), "input")?;
    let f = d.to_formula();
    let mut solver = EmbeddedSolver::new();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match solver.solve(&f, &[])? {
        SolveResult::Sat(m) => {
            writeln!(out, "s SATISFIABLE")?;
            let lits: Vec<String> = (0..d.num_vars as usize)
                .map(|i| if m.values()[i] { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                .collect();
            writeln!(out, "v {} 0", lits.join(" "))?;
            out.flush()?;
            std::process::exit(10);
        }
        SolveResult::Unsat => {
            writeln!(out, "s UNSATISFIABLE")?;
            out.flush()?;
            std::process::exit(20);
        }
        SolveResult::Timeout => {
            writeln!(out, "s UNKNOWN")?;
            Ok(Status::Partial)
        }
    }
}

/// Builds the predicate for a spec string; exposed for tests.
pub fn predicate(spec_str: &str) -> Result<Predicate> {
    spec::parse_problem(spec_str)
}
