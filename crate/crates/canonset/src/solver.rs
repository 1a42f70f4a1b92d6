//! SAT backends: an embedded CDCL solver and an external DIMACS solver run
//! as a subprocess. Both honour a wall-clock deadline.

use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use batsat::{lbool, Callbacks, Solver, SolverInterface, SolverOpts};
use canonset_core::cnf::{CnfFormula, Lit};
use canonset_core::oracle::{Model, OracleError, SatOracle, SolveResult};

use crate::dimacs;

/// A point in time after which solver calls report a timeout.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Some(Instant::now() + budget))
    }

    /// A non-positive budget has already expired.
    pub fn from_secs(budget: Option<f64>) -> Self {
        match budget {
            Some(s) => Deadline::after(Duration::from_secs_f64(s.max(0.0))),
            None => Deadline::none(),
        }
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.0.map(|d| d.saturating_duration_since(Instant::now()))
    }
}

struct DeadlineCallbacks(Deadline);

impl Callbacks for DeadlineCallbacks {
    fn stop(&self) -> bool {
        self.0.expired()
    }
}

/// In-process incremental solver.
pub struct EmbeddedSolver {
    solver: Solver<DeadlineCallbacks>,
    vars: Vec<batsat::Var>,
    loaded: usize,
    deadline: Deadline,
}

impl EmbeddedSolver {
    pub fn new() -> Self {
        Self::with_deadline(Deadline::none())
    }

    pub fn with_deadline(deadline: Deadline) -> Self {
        EmbeddedSolver {
            solver: Solver::new(SolverOpts::default(), DeadlineCallbacks(deadline)),
            vars: Vec::new(),
            loaded: 0,
            deadline,
        }
    }

    fn lit(&self, l: Lit) -> batsat::Lit {
        batsat::Lit::new(self.vars[l.var().index()], l.is_positive())
    }
}

impl Default for EmbeddedSolver {
    fn default() -> Self {
        Self::new()
    }
}

impl SatOracle for EmbeddedSolver {
    fn solve(&mut self, f: &CnfFormula, assumptions: &[Lit]) -> Result<SolveResult, OracleError> {
        if f.num_clauses() < self.loaded {
            return Err(OracleError::State("formula shrank between calls".into()));
        }
        if f.is_marked_unsat() {
            return Ok(SolveResult::Unsat);
        }
        if self.deadline.expired() {
            return Ok(SolveResult::Timeout);
        }
        while self.vars.len() < f.num_vars() as usize {
            let v = self.solver.new_var_default();
            self.vars.push(v);
        }
        let mut buf = Vec::new();
        for c in f.clauses_from(self.loaded) {
            buf.clear();
            buf.extend(c.iter().map(|&l| self.lit(l)));
            self.solver.add_clause_reuse(&mut buf);
        }
        self.loaded = f.num_clauses();
        let assumps: Vec<batsat::Lit> = assumptions.iter().map(|&l| self.lit(l)).collect();
        let r = self.solver.solve_limited(&assumps);
        if r == lbool::TRUE {
            let values = self
                .vars
                .iter()
                .map(|&v| self.solver.value_var(v) == lbool::TRUE)
                .collect();
            Ok(SolveResult::Sat(Model::new(values)))
        } else if r == lbool::FALSE {
            Ok(SolveResult::Unsat)
        } else {
            Ok(SolveResult::Timeout)
        }
    }
}

/// A solver binary speaking the competition format: DIMACS on stdin,
/// `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines on stdout.
///
/// Every call starts a fresh process on the whole formula; assumptions
/// become unit clauses.
pub struct ExternalSolver {
    command: Vec<String>,
    deadline: Deadline,
}

impl ExternalSolver {
    /// `command` is split on whitespace: program then arguments.
    pub fn new(command: &str, deadline: Deadline) -> Result<Self, OracleError> {
        let command: Vec<String> = command.split_whitespace().map(str::to_owned).collect();
        if command.is_empty() {
            return Err(OracleError::Backend("empty solver command".into()));
        }
        Ok(ExternalSolver { command, deadline })
    }
}

impl SatOracle for ExternalSolver {
    fn solve(&mut self, f: &CnfFormula, assumptions: &[Lit]) -> Result<SolveResult, OracleError> {
        if f.is_marked_unsat() {
            return Ok(SolveResult::Unsat);
        }
        if self.deadline.expired() {
            return Ok(SolveResult::Timeout);
        }
        let backend = |e: std::io::Error| OracleError::Backend(format!("{}: {e}", self.command[0]));
        let mut child = Command::new(&self.command[0])
            .args(&self.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(backend)?;

        let mut input = Vec::new();
        dimacs::write_with_units(&mut input, f, assumptions, &[]).map_err(backend)?;
        let mut stdin = child.stdin.take().expect("stdin is piped");
        let writer = std::thread::spawn(move || {
            // A solver may exit before reading everything; ignore EPIPE.
            let _ = stdin.write_all(&input);
        });
        let mut stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let mut out = String::new();
            let r = stdout.read_to_string(&mut out).map(|_| out);
            let _ = tx.send(r);
        });
        let received = match self.deadline.remaining() {
            Some(left) => rx.recv_timeout(left),
            None => rx.recv().map_err(|_| mpsc::RecvTimeoutError::Disconnected),
        };
        let output = match received {
            Ok(r) => r.map_err(backend)?,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                let _ = child.kill();
                let _ = child.wait();
                let _ = writer.join();
                return Ok(SolveResult::Timeout);
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                return Err(OracleError::Backend("solver output reader failed".into()))
            }
        };
        let _ = writer.join();
        let status = child.wait().map_err(backend)?;
        parse_competition_output(&output, f.num_vars() as usize).map_err(|msg| {
            OracleError::Backend(format!("{} (exit status {status}): {msg}", self.command[0]))
        })
    }
}

/// Parses `s` and `v` lines. Variables absent from the `v` lines are false.
pub fn parse_competition_output(output: &str, num_vars: usize) -> Result<SolveResult, String> {
    let mut status = None;
    let mut values = vec![false; num_vars];
    for line in BufReader::new(output.as_bytes()).lines() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_owned());
        } else if let Some(v) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in v.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| format!("bad literal {tok:?}"))?;
                let var = l.unsigned_abs() as usize;
                if l != 0 && var <= num_vars {
                    values[var - 1] = l > 0;
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SolveResult::Sat(Model::new(values))),
        Some("UNSATISFIABLE") => Ok(SolveResult::Unsat),
        Some("UNKNOWN") => Ok(SolveResult::Timeout),
        Some(other) => Err(format!("unexpected status {other:?}")),
        None => Err("no status line".into()),
    }
}

/// Which solver to run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Embedded,
    /// Command line of an external solver.
    External(String),
}

pub type DynOracle = Box<dyn SatOracle + Send>;

impl Backend {
    /// `--solver` wins over the `CANONSET_SOLVER` environment variable; with
    /// neither the embedded solver is used.
    pub fn resolve(flag: Option<&str>) -> Backend {
        let env = std::env::var("CANONSET_SOLVER").ok();
        match flag.map(str::to_owned).or(env) {
            Some(cmd) if !cmd.trim().is_empty() && cmd.trim() != "embedded" => Backend::External(cmd),
            _ => Backend::Embedded,
        }
    }

    pub fn oracle(&self, deadline: Deadline) -> Result<DynOracle, OracleError> {
        Ok(match self {
            Backend::Embedded => Box::new(EmbeddedSolver::with_deadline(deadline)),
            Backend::External(cmd) => Box::new(ExternalSolver::new(cmd, deadline)?),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Backend::Embedded => "embedded".into(),
            Backend::External(cmd) => format!("external:{cmd}"),
        }
    }
}
