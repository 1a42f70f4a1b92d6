//! The satisfiability-oracle contract and projected all-models enumeration.
//!
//! An oracle consumes a [`CnfFormula`] incrementally: each call to
//! [`SatOracle::solve`] first loads whatever variables and clauses were
//! appended since the previous call. Formulas only grow, so learned state
//! stays valid across calls.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cnf::{CnfFormula, Lit, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("solver backend failed: {0}")]
    Backend(String),
    #[error("oracle session misuse: {0}")]
    State(String),
}

/// A total assignment to the variables of a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    /// `values[i]` is the value of variable `i + 1`.
    pub fn new(values: Vec<bool>) -> Self {
        Model { values }
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
    /// The oracle's time budget ran out before an answer was found.
    Timeout,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveResult::Unsat)
    }
}

/// An incremental SAT oracle bound to one growing formula.
pub trait SatOracle {
    /// Solves `formula ∧ assumptions`. The formula must be the one passed on
    /// every earlier call, possibly extended.
    fn solve(&mut self, formula: &CnfFormula, assumptions: &[Lit])
        -> Result<SolveResult, OracleError>;
}

impl<O: SatOracle + ?Sized> SatOracle for &mut O {
    fn solve(
        &mut self,
        formula: &CnfFormula,
        assumptions: &[Lit],
    ) -> Result<SolveResult, OracleError> {
        (**self).solve(formula, assumptions)
    }
}

impl<O: SatOracle + ?Sized> SatOracle for alloc::boxed::Box<O> {
    fn solve(
        &mut self,
        formula: &CnfFormula,
        assumptions: &[Lit],
    ) -> Result<SolveResult, OracleError> {
        (**self).solve(formula, assumptions)
    }
}

/// A formula together with the oracle that consumes it.
pub struct Session<O> {
    formula: CnfFormula,
    oracle: O,
    closed: bool,
}

impl<O: SatOracle> Session<O> {
    pub fn new(oracle: O) -> Self {
        Self::with_formula(CnfFormula::new(), oracle)
    }

    pub fn with_formula(formula: CnfFormula, oracle: O) -> Self {
        Session {
            formula,
            oracle,
            closed: false,
        }
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    /// Mutable access for encoders. Fails once the session is closed.
    pub fn formula_mut(&mut self) -> Result<&mut CnfFormula, OracleError> {
        if self.closed {
            return Err(OracleError::State("session is closed".into()));
        }
        Ok(&mut self.formula)
    }

    pub fn add_clauses<'a>(
        &mut self,
        clauses: impl IntoIterator<Item = &'a [Lit]>,
    ) -> Result<(), OracleError> {
        let f = self.formula_mut()?;
        for c in clauses {
            f.add_clause(c);
        }
        Ok(())
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, OracleError> {
        if self.closed {
            return Err(OracleError::State("session is closed".into()));
        }
        self.oracle.solve(&self.formula, assumptions)
    }

    pub fn close(&mut self) {
        self.closed = true;
    }

    pub fn into_parts(self) -> (CnfFormula, O) {
        (self.formula, self.oracle)
    }
}

/// Why an enumeration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationEnd {
    /// The oracle reported UNSAT: every projected model was produced.
    Exhausted,
    LimitReached,
    TimedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub count: usize,
    pub end: EnumerationEnd,
}

impl Enumeration {
    pub fn is_complete(&self) -> bool {
        self.end == EnumerationEnd::Exhausted
    }
}

/// Enumerates the distinct assignments to `projection` that extend to
/// models, each exactly once.
///
/// After every model a blocking clause over the projection literals alone is
/// added, so auxiliary variables never split a projected model. `on_model`
/// receives the projected values in `projection` order.
pub fn enumerate_models<O: SatOracle>(
    session: &mut Session<O>,
    projection: &[Var],
    limit: Option<usize>,
    mut on_model: impl FnMut(&[bool]),
) -> Result<Enumeration, OracleError> {
    let max_var = session.formula().num_vars();
    if let Some(v) = projection.iter().find(|v| v.id() > max_var) {
        return Err(OracleError::State(alloc::format!(
            "projection variable {v:?} is not allocated"
        )));
    }
    let mut count = 0;
    let mut values = Vec::with_capacity(projection.len());
    let mut blocking = Vec::with_capacity(projection.len());
    loop {
        if limit.is_some_and(|l| count >= l) {
            return Ok(Enumeration {
                count,
                end: EnumerationEnd::LimitReached,
            });
        }
        match session.solve(&[])? {
            SolveResult::Sat(model) => {
                values.clear();
                blocking.clear();
                for &v in projection {
                    let b = model.value(v);
                    values.push(b);
                    blocking.push(v.lit(!b));
                }
                count += 1;
                on_model(&values);
                session.formula_mut()?.add_clause(&blocking);
            }
            SolveResult::Unsat => {
                return Ok(Enumeration {
                    count,
                    end: EnumerationEnd::Exhausted,
                })
            }
            SolveResult::Timeout => {
                return Ok(Enumeration {
                    count,
                    end: EnumerationEnd::TimedOut,
                })
            }
        }
    }
}
