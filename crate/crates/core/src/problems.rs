//! Graph predicates `φ` with a CNF encoding over edge variables and an
//! independent concrete evaluator, plus degree-sequence utilities for
//! highly irregular graphs.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::cnf::{encode_exactly_k, Cardinality, CnfFormula, Lit};
use crate::encodings::{encode_adj, EdgeVars};
use crate::graph::{num_positions, GraphAssignment};
use crate::oracle::{SatOracle, Session, SolveResult};
use crate::{Error, Result};

/// Whether an emitted predicate can have solutions at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// Some constraint is trivially violated (for instance a degree larger
    /// than `n − 1`); the formula was marked unsatisfiable.
    Infeasible,
}

impl Feasibility {
    pub fn and(self, other: Feasibility) -> Feasibility {
        if self == Feasibility::Feasible && other == Feasibility::Feasible {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        }
    }
}

impl From<Cardinality> for Feasibility {
    fn from(c: Cardinality) -> Self {
        match c {
            Cardinality::Encoded => Feasibility::Feasible,
            Cardinality::Infeasible => Feasibility::Infeasible,
        }
    }
}

/// A non-increasing degree sequence with even sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "degree sequence must be non-increasing".to_string(),
            ));
        }
        if degrees.iter().sum::<usize>() % 2 != 0 {
            return Err(Error::InvalidArgument(
                "degree sequence must have an even sum".to_string(),
            ));
        }
        Ok(DegreeSequence(degrees))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree of 0-based vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.0[v]
    }

    /// Multiplicity notation, e.g. `⟨3^2 2^2⟩` for `[3, 3, 2, 2]`.
    pub fn exponent_notation(&self) -> String {
        let mut out = String::from("⟨");
        let mut k = 0;
        while k < self.0.len() {
            let d = self.0[k];
            let run = self.0[k..].iter().take_while(|&&x| x == d).count();
            if k > 0 {
                out.push(' ');
            }
            out.push_str(&alloc::format!("{d}^{run}"));
            k += run;
        }
        out.push('⟩');
        out
    }

    /// Exactly `d_i` incident edges at every vertex `i`.
    fn emit(&self, f: &mut CnfFormula, a: &EdgeVars) -> Result<Feasibility> {
        check_len(self.0.len(), a.n())?;
        let mut feas = Feasibility::Feasible;
        for (v, &d) in self.0.iter().enumerate() {
            feas = feas.and(encode_exactly_k(f, &a.row(v), d).into());
        }
        Ok(feas)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

fn check_len(len: usize, n: usize) -> Result<()> {
    if len != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: len,
        });
    }
    Ok(())
}

/// A CNF fragment conjoined to the edge variables.
///
/// DIMACS variables `1..=n(n−1)/2` are the edge variables in string order;
/// larger variables are auxiliary and get fresh variables at emission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFragment {
    pub label: String,
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFragment {
    fn emit(&self, f: &mut CnfFormula, a: &EdgeVars) -> Result<Feasibility> {
        let edges = a.vars().len() as u32;
        let aux_count = self.num_vars.saturating_sub(edges) as usize;
        let aux = f.new_vars(aux_count);
        let mut buf = Vec::new();
        for c in &self.clauses {
            buf.clear();
            for &l in c {
                let v = l.unsigned_abs();
                if v == 0 || v > self.num_vars.max(edges) {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "{}: literal {l} outside 1..={}",
                        self.label,
                        self.num_vars
                    )));
                }
                let var = if v <= edges {
                    a.vars()[v as usize - 1]
                } else {
                    aux[(v - edges - 1) as usize]
                };
                buf.push(var.lit(l > 0));
            }
            f.add_clause(&buf);
        }
        Ok(if f.is_marked_unsat() {
            Feasibility::Infeasible
        } else {
            Feasibility::Feasible
        })
    }

    /// Direct evaluation when the fragment mentions edge variables only.
    fn evaluate(&self, g: &GraphAssignment) -> Option<bool> {
        let edges = num_positions(g.n()) as u32;
        if self.num_vars > edges {
            return None;
        }
        Some(self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = l.unsigned_abs() as usize;
                v >= 1 && v <= g.bits().len() && g.bits()[v - 1] == (l > 0)
            })
        }))
    }
}

/// A graph property with a CNF encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    True,
    /// No clique of size `s` and no independent set of size `t`.
    Ramsey { s: usize, t: usize },
    /// No induced `K_{1,3}`.
    ClawFree,
    DegreeSequence(DegreeSequence),
    Connected,
    /// Connected, with the given degrees, and no vertex has two neighbours
    /// of equal degree.
    HighlyIrregular(DegreeSequence),
    Cnf(Box<CnfFragment>),
    All(Vec<Predicate>),
}

impl Predicate {
    pub fn ramsey(s: usize, t: usize) -> Result<Self> {
        if s < 2 || t < 2 {
            return Err(Error::InvalidArgument(
                "Ramsey parameters must be at least 2".to_string(),
            ));
        }
        Ok(Predicate::Ramsey { s, t })
    }

    /// Conjoins two predicates, flattening nested conjunctions.
    pub fn and(self, other: Predicate) -> Predicate {
        let mut parts = match self {
            Predicate::True => Vec::new(),
            Predicate::All(v) => v,
            p => alloc::vec![p],
        };
        match other {
            Predicate::True => {}
            Predicate::All(v) => parts.extend(v),
            p => parts.push(p),
        }
        match parts.len() {
            0 => Predicate::True,
            1 => parts.pop().unwrap(),
            _ => Predicate::All(parts),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Predicate::True => true,
            Predicate::All(v) => v.iter().all(Predicate::is_trivial),
            _ => false,
        }
    }

    /// The first degree sequence the predicate fixes, if any.
    pub fn degree_sequence(&self) -> Option<&DegreeSequence> {
        match self {
            Predicate::DegreeSequence(d) | Predicate::HighlyIrregular(d) => Some(d),
            Predicate::All(v) => v.iter().find_map(Predicate::degree_sequence),
            _ => None,
        }
    }

    /// Appends `φ(A)` to `f`.
    pub fn emit(&self, f: &mut CnfFormula, a: &EdgeVars) -> Result<Feasibility> {
        let n = a.n();
        match self {
            Predicate::True => Ok(Feasibility::Feasible),
            Predicate::Ramsey { s, t } => {
                if *s < 2 || *t < 2 {
                    return Err(Error::InvalidArgument(
                        "Ramsey parameters must be at least 2".to_string(),
                    ));
                }
                let mut clause = Vec::new();
                for_each_subset(n, *s, |set| {
                    clause.clear();
                    for_each_pair(set, |i, j| clause.push(!a.lit(i, j)));
                    f.add_clause(&clause);
                });
                for_each_subset(n, *t, |set| {
                    clause.clear();
                    for_each_pair(set, |i, j| clause.push(a.lit(i, j)));
                    f.add_clause(&clause);
                });
                Ok(Feasibility::Feasible)
            }
            Predicate::ClawFree => {
                for centre in 0..n {
                    for_each_subset(n, 3, |leaves| {
                        if leaves.contains(&centre) {
                            return;
                        }
                        let [j, k, l] = [leaves[0], leaves[1], leaves[2]];
                        f.add_clause(&[
                            !a.lit(centre, j),
                            !a.lit(centre, k),
                            !a.lit(centre, l),
                            a.lit(j, k),
                            a.lit(j, l),
                            a.lit(k, l),
                        ]);
                    });
                }
                Ok(Feasibility::Feasible)
            }
            Predicate::DegreeSequence(d) => d.emit(f, a),
            Predicate::Connected => {
                encode_connected(f, a);
                Ok(Feasibility::Feasible)
            }
            Predicate::HighlyIrregular(d) => {
                check_len(d.len(), n)?;
                for i in 0..n {
                    for j in 0..n {
                        for k in j + 1..n {
                            if j != i && k != i && d.degree(j) == d.degree(k) {
                                f.add_clause(&[!a.lit(i, j), !a.lit(i, k)]);
                            }
                        }
                    }
                }
                let feas = d.emit(f, a)?;
                encode_connected(f, a);
                Ok(feas)
            }
            Predicate::Cnf(frag) => frag.emit(f, a),
            Predicate::All(parts) => {
                let mut feas = Feasibility::Feasible;
                for p in parts {
                    feas = feas.and(p.emit(f, a)?);
                }
                Ok(feas)
            }
        }
    }

    /// Evaluates the predicate directly on a graph, without CNF.
    ///
    /// `None` when this cannot be decided concretely (a CNF fragment with
    /// auxiliary variables).
    pub fn evaluate(&self, g: &GraphAssignment) -> Option<bool> {
        let n = g.n();
        match self {
            Predicate::True => Some(true),
            Predicate::Ramsey { s, t } => {
                Some(!has_clique(g, *s, true) && !has_clique(g, *t, false))
            }
            Predicate::ClawFree => {
                let claw = (0..n).any(|c| {
                    let nb: Vec<usize> = (0..n).filter(|&v| v != c && g.adjacent(c, v)).collect();
                    let mut found = false;
                    for_each_subset(nb.len(), 3, |s| {
                        let (x, y, z) = (nb[s[0]], nb[s[1]], nb[s[2]]);
                        if !g.adjacent(x, y) && !g.adjacent(x, z) && !g.adjacent(y, z) {
                            found = true;
                        }
                    });
                    found
                });
                Some(!claw)
            }
            Predicate::DegreeSequence(d) => Some(g.degrees() == d.degrees()),
            Predicate::Connected => Some(is_connected(g)),
            Predicate::HighlyIrregular(d) => {
                let deg = g.degrees();
                if deg != d.degrees() || !is_connected(g) {
                    return Some(false);
                }
                Some((0..n).all(|v| {
                    let mut seen: Vec<usize> = (0..n)
                        .filter(|&u| u != v && g.adjacent(u, v))
                        .map(|u| deg[u])
                        .collect();
                    let total = seen.len();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len() == total
                }))
            }
            Predicate::Cnf(frag) => frag.evaluate(g),
            Predicate::All(parts) => {
                let mut all = true;
                for p in parts {
                    all &= p.evaluate(g)?;
                }
                Some(all)
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::Ramsey { s, t } => write!(f, "ramsey:s={s},t={t}"),
            Predicate::ClawFree => f.write_str("clawfree"),
            Predicate::DegreeSequence(d) => write!(f, "degseq:{d}"),
            Predicate::Connected => f.write_str("connected"),
            Predicate::HighlyIrregular(d) => write!(f, "hi:{d}"),
            Predicate::Cnf(frag) => write!(f, "extra-cnf:{}", frag.label),
            Predicate::All(parts) => {
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Calls `visit` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn for_each_pair(set: &[usize], mut visit: impl FnMut(usize, usize)) {
    for (x, &i) in set.iter().enumerate() {
        for &j in &set[x + 1..] {
            visit(i, j);
        }
    }
}

fn has_clique(g: &GraphAssignment, k: usize, edges: bool) -> bool {
    let mut found = false;
    for_each_subset(g.n(), k, |set| {
        if found {
            return;
        }
        let mut all = true;
        for_each_pair(set, |i, j| all &= g.adjacent(i, j) == edges);
        found = all;
    });
    found
}

fn is_connected(g: &GraphAssignment) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let mut seen = alloc::vec![false; n];
    let mut stack = alloc::vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for (v, s) in seen.iter_mut().enumerate() {
            if v != u && !*s && g.adjacent(u, v) {
                *s = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Reachability closure: `p^k[i][j]` holds iff `i` and `j` are joined by a
/// path whose inner vertices are all below `k`. Connectivity asserts
/// `p^n[i][j]` for all pairs.
fn encode_connected(f: &mut CnfFormula, a: &EdgeVars) {
    let n = a.n();
    if n <= 1 {
        return;
    }
    let idx = |i: usize, j: usize| crate::graph::pair_index(n, i, j);
    let mut p: Vec<Lit> = a.vars().iter().map(|v| v.pos()).collect();
    for k in 0..n {
        let mut next = p.clone();
        for i in 0..n {
            for j in i + 1..n {
                if i == k || j == k {
                    continue;
                }
                let (old, via_i, via_j) = (p[idx(i, j)], p[idx(i, k)], p[idx(k, j)]);
                let q = f.new_var().pos();
                f.add_clause(&[!old, q]);
                f.add_clause(&[!via_i, !via_j, q]);
                f.add_clause(&[!q, old, via_i]);
                f.add_clause(&[!q, old, via_j]);
                next[idx(i, j)] = q;
            }
        }
        p = next;
    }
    for l in p {
        f.add_clause(&[l]);
    }
}

/// Candidate degree sequences for highly irregular graphs on `n` vertices.
///
/// Each candidate is `⟨m^{n_m} … 1^{n_1}⟩` with every multiplicity `n_i`
/// at least `n_m`, `n_m` even and at least 2, `Σ n_i = n` and `Σ i·n_i`
/// even. Candidates are returned in decreasing lexicographic order.
pub fn gen_hi_degseq_candidates(n: usize) -> Vec<DegreeSequence> {
    fn fill(level: usize, nm: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if level == 0 {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        // Each remaining level needs at least nm vertices.
        if left < nm * level {
            return;
        }
        let max = left - nm * (level - 1);
        for count in nm..=max {
            acc.extend(core::iter::repeat(level).take(count));
            fill(level - 1, nm, left - count, acc, out);
            acc.truncate(acc.len() - count);
        }
    }
    let mut out = Vec::new();
    for m in 1..n {
        for nm in (2..=n).step_by(2) {
            if nm * m > n {
                break;
            }
            let mut acc: Vec<usize> = alloc::vec![m; nm];
            fill(m - 1, nm, n - nm, &mut acc, &mut out);
        }
    }
    out.retain(|d| d.iter().sum::<usize>() % 2 == 0);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out.dedup();
    out.into_iter().map(DegreeSequence).collect()
}

/// Result of asking whether a candidate has a highly irregular realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realizability {
    Realizable,
    NotRealizable,
    /// The oracle gave up; the candidate is kept but flagged.
    Unknown,
}

/// Decides for each candidate whether `HI(d)` is satisfiable, with one fresh
/// oracle per query.
pub fn filter_realizable_degseqs<O: SatOracle>(
    candidates: &[DegreeSequence],
    mut make_oracle: impl FnMut() -> O,
) -> Result<Vec<(DegreeSequence, Realizability)>> {
    let mut out = Vec::with_capacity(candidates.len());
    for d in candidates {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, d.len());
        Predicate::HighlyIrregular(d.clone()).emit(&mut f, &a)?;
        let mut s = Session::with_formula(f, make_oracle());
        let r = match s.solve(&[])? {
            SolveResult::Sat(_) => Realizability::Realizable,
            SolveResult::Unsat => Realizability::NotRealizable,
            SolveResult::Timeout => Realizability::Unknown,
        };
        out.push((d.clone(), r));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_models;
    use crate::testutil::TestOracle;
    use proptest::prelude::*;

    fn all_graphs(n: usize) -> impl Iterator<Item = GraphAssignment> {
        (0..1u64 << num_positions(n)).map(move |i| GraphAssignment::from_index(n, i))
    }

    fn sat_set(n: usize, phi: &Predicate) -> std::collections::BTreeSet<Vec<bool>> {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, n);
        phi.emit(&mut f, &a).unwrap();
        let mut s = Session::with_formula(f, TestOracle::new());
        let mut out = std::collections::BTreeSet::new();
        let e = enumerate_models(&mut s, a.vars(), None, |m| {
            out.insert(m.to_vec());
        })
        .unwrap();
        assert!(e.is_complete());
        out
    }

    fn check_agrees(n: usize, phi: &Predicate) -> usize {
        let got = sat_set(n, phi);
        for g in all_graphs(n) {
            assert_eq!(
                got.contains(g.bits()),
                phi.evaluate(&g).unwrap(),
                "{phi} on {}",
                g.upper_tri_string()
            );
        }
        got.len()
    }

    fn ds(d: &[usize]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    #[test]
    fn subsets_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        let mut count = 0;
        for_each_subset(3, 4, |_| count += 1);
        assert_eq!(count, 0);
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn ramsey_encoding_matches_evaluation() {
        for n in 1..=6 {
            check_agrees(n, &Predicate::ramsey(3, 3).unwrap());
        }
        // R(3,3) = 6: no graph on 6 vertices qualifies, but the 5-cycle does.
        assert_eq!(check_agrees(6, &Predicate::ramsey(3, 3).unwrap()), 0);
        let c5 = GraphAssignment::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        assert_eq!(Predicate::ramsey(3, 3).unwrap().evaluate(&c5), Some(true));
        check_agrees(5, &Predicate::ramsey(3, 4).unwrap());
        check_agrees(4, &Predicate::ramsey(2, 3).unwrap());
        assert!(Predicate::ramsey(1, 3).is_err());
    }

    #[test]
    fn claw_free_matches_evaluation() {
        for n in 1..=6 {
            check_agrees(n, &Predicate::ClawFree);
        }
        let claw = GraphAssignment::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(Predicate::ClawFree.evaluate(&claw), Some(false));
    }

    #[test]
    fn connectivity_matches_evaluation() {
        // Labelled connected graphs: 1, 1, 4, 38, 728.
        let counts: Vec<usize> = (1..=5).map(|n| check_agrees(n, &Predicate::Connected)).collect();
        assert_eq!(counts, [1, 1, 4, 38, 728]);
    }

    #[test]
    fn degree_sequences_match_evaluation() {
        check_agrees(4, &Predicate::DegreeSequence(ds(&[2, 2, 1, 1])));
        check_agrees(5, &Predicate::DegreeSequence(ds(&[2, 2, 2, 2, 2])));
        check_agrees(5, &Predicate::DegreeSequence(ds(&[4, 1, 1, 1, 1])));
        assert_eq!(check_agrees(4, &Predicate::DegreeSequence(ds(&[3, 3, 3, 3]))), 1);
        // A degree above n − 1 makes the instance infeasible up front.
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 3);
        let feas = Predicate::DegreeSequence(ds(&[3, 3, 2])).emit(&mut f, &a).unwrap();
        assert_eq!(feas, Feasibility::Infeasible);
        assert!(f.is_marked_unsat());
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 3);
        assert!(Predicate::DegreeSequence(ds(&[1, 1])).emit(&mut f, &a).is_err());
    }

    #[test]
    fn degree_sequence_validation() {
        assert!(DegreeSequence::new(alloc::vec![1, 2, 1]).is_err());
        assert!(DegreeSequence::new(alloc::vec![2, 1]).is_err());
        assert_eq!(ds(&[3, 3, 2, 2]).exponent_notation(), "⟨3^2 2^2⟩");
        assert_eq!(ds(&[3, 3, 2, 2]).to_string(), "3,3,2,2");
    }

    #[test]
    fn highly_irregular_matches_evaluation() {
        for d in gen_hi_degseq_candidates(6) {
            check_agrees(6, &Predicate::HighlyIrregular(d));
        }
        check_agrees(4, &Predicate::HighlyIrregular(ds(&[2, 2, 1, 1])));
    }

    #[test]
    fn hi_candidates_follow_the_definition() {
        // Oracle: all non-increasing sequences over 1..n−1, filtered by the
        // multiplicity rules directly.
        fn brute(n: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == n {
                    out.push(cur.clone());
                    return;
                }
                for d in (1..=max).rev() {
                    cur.push(d);
                    rec(n, d, cur, out);
                    cur.pop();
                }
            }
            rec(n, n.saturating_sub(1), &mut cur, &mut out);
            out.retain(|d| {
                let m = d[0];
                let mult = |i: usize| d.iter().filter(|&&x| x == i).count();
                let nm = mult(m);
                nm >= 2
                    && nm % 2 == 0
                    && (1..m).all(|i| mult(i) >= nm)
                    && d.iter().sum::<usize>() % 2 == 0
            });
            out
        }
        for n in 2..=13 {
            let got: Vec<Vec<usize>> =
                gen_hi_degseq_candidates(n).into_iter().map(|d| d.0).collect();
            assert_eq!(got, brute(n), "n = {n}");
        }
        assert_eq!(gen_hi_degseq_candidates(4), [ds(&[2, 2, 1, 1]), ds(&[1, 1, 1, 1])]);
    }

    #[test]
    fn realizability_filter() {
        // Oracle: backtrack over edges in string order, pruning on degrees,
        // and evaluate every completed graph directly.
        fn realizable(d: &DegreeSequence) -> bool {
            let n = d.len();
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            fn rec(k: usize, pairs: &[(usize, usize)], deg: &mut [usize], g: &mut GraphAssignment, d: &DegreeSequence) -> bool {
                if k == pairs.len() {
                    return deg == d.degrees()
                        && Predicate::HighlyIrregular(d.clone()).evaluate(g).unwrap();
                }
                let (i, j) = pairs[k];
                if deg[i] < d.degree(i) && deg[j] < d.degree(j) {
                    deg[i] += 1;
                    deg[j] += 1;
                    g.set_edge(i + 1, j + 1, true).unwrap();
                    let hit = rec(k + 1, pairs, deg, g, d);
                    g.set_edge(i + 1, j + 1, false).unwrap();
                    deg[i] -= 1;
                    deg[j] -= 1;
                    if hit {
                        return true;
                    }
                }
                // Vertex i sees its last candidate partner at j = n − 1.
                if j == deg.len() - 1 && deg[i] != d.degree(i) {
                    return false;
                }
                rec(k + 1, pairs, deg, g, d)
            }
            rec(0, &pairs, &mut alloc::vec![0; n], &mut GraphAssignment::empty(n), d)
        }
        let mut realized = 0;
        for n in [7, 8, 9] {
            let cands = gen_hi_degseq_candidates(n);
            let got = filter_realizable_degseqs(&cands, TestOracle::new).unwrap();
            for (d, r) in got {
                assert_eq!(r == Realizability::Realizable, realizable(&d), "{d}");
                realized += usize::from(r == Realizability::Realizable);
            }
        }
        assert!(realized > 0);
    }

    #[test]
    fn conjunction_and_display() {
        let p = Predicate::True
            .and(Predicate::ClawFree)
            .and(Predicate::Connected.and(Predicate::ramsey(3, 4).unwrap()));
        assert_eq!(p.to_string(), "clawfree+connected+ramsey:s=3,t=4");
        assert!(Predicate::True.and(Predicate::True).is_trivial());
        check_agrees(5, &p);
        let hi = Predicate::HighlyIrregular(ds(&[2, 2, 1, 1]));
        assert_eq!(Predicate::Connected.and(hi).degree_sequence(), Some(&ds(&[2, 2, 1, 1])));
    }

    #[test]
    fn cnf_fragments() {
        // "edge 1–2 present or edge 3–4 present", plus an aux variable
        // forced equal to edge 1–3.
        let frag = CnfFragment {
            label: "frag".into(),
            num_vars: 7,
            clauses: alloc::vec![alloc::vec![1, 6], alloc::vec![7, -2], alloc::vec![-7, 2]],
        };
        let p = Predicate::Cnf(Box::new(frag.clone()));
        assert_eq!(p.evaluate(&GraphAssignment::empty(4)), None);
        let got = sat_set(4, &p);
        for g in all_graphs(4) {
            assert_eq!(got.contains(g.bits()), g.has_edge(1, 2) || g.has_edge(3, 4));
        }
        let simple = Predicate::Cnf(Box::new(CnfFragment {
            label: "s".into(),
            num_vars: 6,
            clauses: alloc::vec![alloc::vec![1, 6]],
        }));
        check_agrees(4, &simple);
        let bad = Predicate::Cnf(Box::new(CnfFragment {
            label: "b".into(),
            num_vars: 6,
            clauses: alloc::vec![alloc::vec![9]],
        }));
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 4);
        assert!(bad.emit(&mut f, &a).is_err());
    }

    proptest! {
        #[test]
        fn ramsey_evaluation_symmetric_under_complement(idx in 0u64..1 << 15, s in 2usize..5, t in 2usize..5) {
            let g = GraphAssignment::from_index(6, idx);
            let comp = GraphAssignment::from_bits(6, g.bits().iter().map(|b| !b).collect()).unwrap();
            prop_assert_eq!(
                Predicate::Ramsey { s, t }.evaluate(&g),
                Predicate::Ramsey { s: t, t: s }.evaluate(&comp)
            );
        }
    }
}
