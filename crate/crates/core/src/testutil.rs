//! Test-only helpers: a minimal batsat-backed oracle and truth-table
//! projection for small formulas.

extern crate std;

use std::collections::BTreeSet;
use std::vec::Vec;

use batsat::{lbool, BasicSolver, SolverInterface};

use crate::cnf::{CnfFormula, Lit};
use crate::oracle::{Model, OracleError, SatOracle, SolveResult};

pub(crate) struct TestOracle {
    solver: BasicSolver,
    vars: Vec<batsat::Var>,
    loaded: usize,
}

impl TestOracle {
    pub(crate) fn new() -> Self {
        TestOracle {
            solver: BasicSolver::default(),
            vars: Vec::new(),
            loaded: 0,
        }
    }

    fn lit(&self, l: Lit) -> batsat::Lit {
        batsat::Lit::new(self.vars[l.var().index()], l.is_positive())
    }
}

impl SatOracle for TestOracle {
    fn solve(&mut self, f: &CnfFormula, assumptions: &[Lit]) -> Result<SolveResult, OracleError> {
        if f.is_marked_unsat() {
            return Ok(SolveResult::Unsat);
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
        let assumps: Vec<_> = assumptions.iter().map(|&l| self.lit(l)).collect();
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

/// All assignments to `proj` (in order) that extend to a model of `f`.
///
/// Small formulas are decided by a full truth table; larger ones by one
/// assumption query per projected assignment.
pub(crate) fn project_all(f: &CnfFormula, proj: &[Lit]) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    let nv = f.num_vars() as usize;
    if nv <= 16 {
        for m in 0..1u64 << nv {
            let values: Vec<bool> = (0..nv).map(|i| (m >> i) & 1 == 1).collect();
            if f.is_satisfied_by(&values) {
                out.insert(
                    proj.iter()
                        .map(|l| values[l.var().index()] == l.is_positive())
                        .collect(),
                );
            }
        }
        return out;
    }
    let mut oracle = TestOracle::new();
    for m in 0..1u64 << proj.len() {
        let bits: Vec<bool> = (0..proj.len()).map(|i| (m >> i) & 1 == 1).collect();
        let assumps: Vec<Lit> = proj
            .iter()
            .zip(&bits)
            .map(|(&l, &b)| if b { l } else { !l })
            .collect();
        if oracle.solve(f, &assumps).unwrap().is_sat() {
            out.insert(bits);
        }
    }
    out
}

pub(crate) fn count_projected(f: &CnfFormula, proj: &[Lit]) -> usize {
    project_all(f, proj).len()
}
