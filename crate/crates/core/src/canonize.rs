//! Computing, reducing and verifying canonizing permutation sets.
//!
//! [`compute_canonizing_set`] runs the counterexample loop: find a solution
//! that is minimal under the current set yet not canonical, add the
//! offending permutation, repeat until the search is unsatisfiable.
//! [`reduce`] then drops every permutation implied by the others.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cnf::{encode_lex_leq_if, CnfFormula, LexPair, Lit};
use crate::encodings::{
    build_alg1_formula, decode_perm, encode_adj, encode_min_pi, encode_sb_lex_star, leader_pair, EdgeVars,
};
use crate::graph::{apply_perm, graph_leq, is_min_under, num_positions, GraphAssignment};
use crate::oracle::{enumerate_models, Enumeration, Model, SatOracle, Session, SolveResult};
use crate::perm::Permutation;
use crate::problems::Predicate;
use crate::{Error, Result};

/// Largest `n` accepted by [`verify_canonizing`] with brute force.
pub const VERIFY_BRUTE_FORCE_MAX_N: usize = 6;

/// What a permutation set was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Canonizing for every graph on `n` vertices.
    InstanceIndependent,
    /// Canonizing only for the solutions of the named problem, under the
    /// degree-class-preserving notion of canonical form.
    InstanceDependent(String),
}

/// An ordered set of non-identity permutations of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSet {
    n: usize,
    entries: Vec<Permutation>,
    provenance: Provenance,
    complete: bool,
}

impl PermSet {
    pub fn new(n: usize, provenance: Provenance) -> Self {
        PermSet {
            n,
            entries: Vec::new(),
            provenance,
            complete: true,
        }
    }

    /// Builds a set, skipping identities and repeated entries.
    pub fn from_perms(
        n: usize,
        perms: impl IntoIterator<Item = Permutation>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut s = PermSet::new(n, provenance);
        for p in perms {
            s.push(p)?;
        }
        Ok(s)
    }

    /// Appends `p` unless it is the identity or already present. Returns
    /// whether the set grew.
    pub fn push(&mut self, p: Permutation) -> Result<bool> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        if p.is_identity() || self.entries.contains(&p) {
            return Ok(false);
        }
        self.entries.push(p);
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Permutation] {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    /// False when the computation producing this set stopped early; the set
    /// is then not guaranteed to be canonizing.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn set_complete(&mut self, complete: bool) {
        self.complete = complete;
    }
}

/// Which notion of canonical form a set is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Lex-least over all relabelings; `φ` must be trivial.
    Independent,
    /// Lex-least over relabelings that keep the degree classes fixed.
    Dependent,
}

#[derive(Debug, Clone)]
pub struct Computation {
    pub set: PermSet,
    /// Number of counterexamples found (permutations added).
    pub added: usize,
}

fn extra_b(phi: &Predicate, dependent: bool) -> Option<Predicate> {
    if !dependent {
        return None;
    }
    phi.degree_sequence().map(|d| Predicate::DegreeSequence(d.clone()))
}

/// Extends `init` until it is canonizing for `φ`.
///
/// If the oracle times out the partial set is returned with
/// [`PermSet::is_complete`] false.
pub fn compute_canonizing_set<O: SatOracle>(
    oracle: O,
    init: &PermSet,
    phi: &Predicate,
    mode: Mode,
) -> Result<Computation> {
    let n = init.n;
    let dependent = mode == Mode::Dependent;
    if !dependent && !phi.is_trivial() {
        return Err(Error::InvalidArgument(
            "an instance-independent set is computed for the trivial predicate only".to_string(),
        ));
    }
    if !dependent && init.provenance != Provenance::InstanceIndependent {
        return Err(Error::InvalidArgument(
            "cannot extend an instance-dependent set to an instance-independent one".to_string(),
        ));
    }
    let mut set = init.clone();
    set.provenance = if dependent {
        Provenance::InstanceDependent(phi.to_string())
    } else {
        Provenance::InstanceIndependent
    };
    set.complete = true;

    let extra = extra_b(phi, dependent);
    let mut session = Session::new(oracle);
    let vars = build_alg1_formula(session.formula_mut()?, n, phi, &set.entries, extra.as_ref())?;
    let mut added = 0;
    loop {
        match session.solve(&[])? {
            SolveResult::Sat(m) => {
                let pi = decode_perm(&m, &vars.p)?;
                encode_min_pi(session.formula_mut()?, &vars.a, core::slice::from_ref(&pi))?;
                if !set.push(pi)? {
                    return Err(Error::Internal(
                        "counterexample permutation is already in the set".to_string(),
                    ));
                }
                added += 1;
            }
            SolveResult::Unsat => break,
            SolveResult::Timeout => {
                set.complete = false;
                break;
            }
        }
    }
    Ok(Computation { set, added })
}

/// A solution showing that a kept permutation is not implied by the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub perm: Permutation,
    pub graph: GraphAssignment,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub set: PermSet,
    pub removed: Vec<Permutation>,
    /// One witness per kept permutation whose test finished; valid against
    /// the final set.
    pub witnesses: Vec<Witness>,
    /// False when some redundancy test timed out; those permutations were
    /// kept without a witness.
    pub fully_reduced: bool,
}

pub(crate) struct ReduceOutcome {
    pub kept: Vec<usize>,
    pub witnesses: Vec<(usize, Model)>,
    pub fully_reduced: bool,
}

/// Redundancy elimination over guarded leader constraints.
///
/// Entry `i` contributes `s_i → pair_i` and `v_i → swap(pair_i)` strictly.
/// Testing entry `i` assumes `v_i` and `s_j` for every other live entry:
/// unsatisfiable means entry `i` is implied and is dropped for good.
pub(crate) fn reduce_pairs<O: SatOracle>(
    session: &mut Session<O>,
    pairs: &[LexPair],
) -> Result<ReduceOutcome> {
    let mut selectors = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let f = session.formula_mut()?;
        let s = f.new_var().pos();
        encode_lex_leq_if(f, pair, false, Some(s))?;
        selectors.push(s);
    }
    let mut alive = alloc::vec![true; pairs.len()];
    let mut witnesses = Vec::new();
    let mut fully_reduced = true;
    let mut assumptions: Vec<Lit> = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.iter().enumerate() {
        let f = session.formula_mut()?;
        let v = f.new_var().pos();
        encode_lex_leq_if(f, &pair.swapped(), true, Some(v))?;
        assumptions.clear();
        assumptions.extend(
            (0..pairs.len())
                .filter(|&j| j != i && alive[j])
                .map(|j| selectors[j]),
        );
        assumptions.push(v);
        match session.solve(&assumptions)? {
            SolveResult::Unsat => alive[i] = false,
            SolveResult::Sat(m) => witnesses.push((i, m)),
            SolveResult::Timeout => fully_reduced = false,
        }
        session.formula_mut()?.add_clause(&[!v]);
    }
    Ok(ReduceOutcome {
        kept: (0..pairs.len()).filter(|&i| alive[i]).collect(),
        witnesses,
        fully_reduced,
    })
}

/// Removes every permutation whose leader constraint is implied, on the
/// solutions of `φ`, by the remaining ones.
pub fn reduce<O: SatOracle>(oracle: O, set: &PermSet, phi: &Predicate) -> Result<Reduction> {
    let mut session = Session::new(oracle);
    let f = session.formula_mut()?;
    let a = encode_adj(f, set.n);
    phi.emit(f, &a)?;
    let pairs = set
        .entries
        .iter()
        .map(|p| leader_pair(&a, p))
        .collect::<Result<Vec<_>>>()?;
    let out = reduce_pairs(&mut session, &pairs)?;
    let mut kept = PermSet::new(set.n, set.provenance.clone());
    kept.complete = set.complete;
    for &i in &out.kept {
        kept.push(set.entries[i].clone())?;
    }
    let removed = (0..set.len())
        .filter(|i| !out.kept.contains(i))
        .map(|i| set.entries[i].clone())
        .collect();
    let witnesses = out
        .witnesses
        .into_iter()
        .map(|(i, m)| Witness {
            perm: set.entries[i].clone(),
            graph: a.decode(&m),
        })
        .collect();
    Ok(Reduction {
        set: kept,
        removed,
        witnesses,
        fully_reduced: out.fully_reduced,
    })
}

/// Checks a witness concretely: `φ(g)`, `g ⪯ ρ(g)` for every other `ρ` in
/// `set`, and `π(g) ≺ g`. `None` if `φ` cannot be evaluated directly.
pub fn check_witness(phi: &Predicate, set: &PermSet, w: &Witness) -> Option<bool> {
    if !phi.evaluate(&w.graph)? {
        return Some(false);
    }
    let others: Vec<Permutation> = set.entries.iter().filter(|p| **p != w.perm).cloned().collect();
    let min_rest = is_min_under(&w.graph, &others).ok()?;
    let moved = apply_perm(&w.perm, &w.graph).ok()?;
    Some(min_rest && !graph_leq(&w.graph, &moved).ok()?)
}

/// How [`verify_canonizing`] decides.
pub enum Method<O> {
    /// One query of the counterexample formula.
    Sat(O),
    /// Exhaustive check over all graphs; `n ≤` [`VERIFY_BRUTE_FORCE_MAX_N`].
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Canonizing,
    /// `graph` satisfies `φ` and is minimal under the set, yet
    /// `perm(graph) ≺ graph`.
    NotCanonizing {
        graph: GraphAssignment,
        perm: Permutation,
    },
    /// The oracle timed out.
    Unknown,
}

/// Decides whether `set` is canonizing for `φ`, using the notion of
/// canonical form recorded in its provenance.
pub fn verify_canonizing<O: SatOracle>(set: &PermSet, phi: &Predicate, method: Method<O>) -> Result<Verdict> {
    let dependent = matches!(set.provenance, Provenance::InstanceDependent(_));
    match method {
        Method::Sat(oracle) => {
            let extra = extra_b(phi, dependent);
            let mut session = Session::new(oracle);
            let vars = build_alg1_formula(session.formula_mut()?, set.n, phi, &set.entries, extra.as_ref())?;
            match session.solve(&[])? {
                SolveResult::Unsat => Ok(Verdict::Canonizing),
                SolveResult::Timeout => Ok(Verdict::Unknown),
                SolveResult::Sat(m) => Ok(Verdict::NotCanonizing {
                    graph: vars.a.decode(&m),
                    perm: decode_perm(&m, &vars.p)?,
                }),
            }
        }
        Method::BruteForce => verify_bruteforce(set, phi, dependent),
    }
}

fn verify_bruteforce(set: &PermSet, phi: &Predicate, dependent: bool) -> Result<Verdict> {
    let n = set.n;
    if n > VERIFY_BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: VERIFY_BRUTE_FORCE_MAX_N,
            what: "brute-force verification",
        });
    }
    let group: Vec<Permutation> = match phi.degree_sequence().filter(|_| dependent) {
        Some(d) => Permutation::all(n)
            .filter(|p| (0..n).all(|i| d.degree(p.apply(i)) == d.degree(i)))
            .collect(),
        None => Permutation::all(n).collect(),
    };
    for idx in 0..1u64 << num_positions(n) {
        let g = GraphAssignment::from_index(n, idx);
        let holds = phi.evaluate(&g).ok_or_else(|| {
            Error::InvalidArgument("predicate cannot be evaluated without a solver".to_string())
        })?;
        if !holds || !is_min_under(&g, &set.entries)? {
            continue;
        }
        for p in &group {
            if !graph_leq(&g, &apply_perm(p, &g)?)? {
                return Ok(Verdict::NotCanonizing {
                    graph: g,
                    perm: p.clone(),
                });
            }
        }
    }
    Ok(Verdict::Canonizing)
}

/// Symmetry breaking added on top of `φ` when enumerating solutions.
#[derive(Debug, Clone, Copy)]
pub enum Breaking<'a> {
    None,
    /// The transposition break `sb*ℓ`.
    LexStar,
    /// `min_Π` for the given permutations.
    Perms(&'a [Permutation]),
}

/// The formula `φ(A) ∧ break(A)` and its edge variables.
pub fn build_enumeration_formula(n: usize, phi: &Predicate, breaking: Breaking<'_>) -> Result<(CnfFormula, EdgeVars)> {
    let mut f = CnfFormula::new();
    let a = encode_adj(&mut f, n);
    phi.emit(&mut f, &a)?;
    match breaking {
        Breaking::None => {}
        Breaking::LexStar => encode_sb_lex_star(&mut f, &a)?,
        Breaking::Perms(perms) => encode_min_pi(&mut f, &a, perms)?,
    }
    Ok((f, a))
}

/// Enumerates the solutions of `φ(A) ∧ break(A)`, projected on the edges.
pub fn enumerate_graphs<O: SatOracle>(
    oracle: O,
    n: usize,
    phi: &Predicate,
    breaking: Breaking<'_>,
    limit: Option<usize>,
    mut on_graph: impl FnMut(GraphAssignment),
) -> Result<Enumeration> {
    let (f, a) = build_enumeration_formula(n, phi, breaking)?;
    let mut session = Session::with_formula(f, oracle);
    let e = enumerate_models(&mut session, a.vars(), limit, |bits| {
        on_graph(GraphAssignment::from_bits(n, bits.to_vec()).expect("projection covers all edges"))
    })?;
    Ok(e)
}
