//! Clause store with a dense variable pool, plus the lexicographic and
//! cardinality encodings every constraint in the crate is built from.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

use crate::{Error, Result};

/// A propositional variable, numbered densely from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// Wraps a 1-based DIMACS variable number.
    pub fn from_dimacs(id: u32) -> Option<Var> {
        (id > 0 && id < i32::MAX as u32).then_some(Var(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// 0-based index, for model lookups.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn pos(self) -> Lit {
        Lit(self.0 as i32)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit(-(self.0 as i32))
    }

    pub fn lit(self, positive: bool) -> Lit {
        if positive {
            self.pos()
        } else {
            self.neg()
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A signed literal in DIMACS convention.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0 && value != i32::MIN).then_some(Lit(value))
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Append-only CNF formula.
///
/// Clauses are never removed or rewritten, so an incremental oracle can
/// consume the formula by remembering how far it has read.
#[derive(Debug, Clone, Default)]
pub struct CnfFormula {
    num_vars: u32,
    lits: Vec<Lit>,
    ends: Vec<usize>,
    unsat: bool,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.ends.len()
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars)
    }

    pub fn new_vars(&mut self, count: usize) -> Vec<Var> {
        (0..count).map(|_| self.new_var()).collect()
    }

    /// Raises the pool so that `var` is allocated (used when importing
    /// clauses that mention variables not yet created here).
    pub fn ensure_var(&mut self, var: Var) {
        self.num_vars = self.num_vars.max(var.0);
    }

    /// Adds a clause. An empty clause marks the formula unsatisfiable
    /// instead of being stored.
    ///
    /// # Panics
    ///
    /// If the clause mentions a variable that was never allocated.
    pub fn add_clause(&mut self, clause: &[Lit]) {
        if clause.is_empty() {
            self.unsat = true;
            return;
        }
        for l in clause {
            assert!(
                l.var().0 <= self.num_vars,
                "literal {l:?} refers to an unallocated variable"
            );
        }
        self.lits.extend_from_slice(clause);
        self.ends.push(self.lits.len());
    }

    /// Adds `guard → clause`; with no guard this is [`Self::add_clause`].
    pub fn add_clause_if(&mut self, guard: Option<Lit>, clause: &[Lit]) {
        match guard {
            None => self.add_clause(clause),
            Some(g) => {
                let mut c = Vec::with_capacity(clause.len() + 1);
                c.push(!g);
                c.extend_from_slice(clause);
                self.add_clause(&c);
            }
        }
    }

    pub fn mark_unsat(&mut self) {
        self.unsat = true;
    }

    pub fn is_marked_unsat(&self) -> bool {
        self.unsat
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        let start = if index == 0 { 0 } else { self.ends[index - 1] };
        &self.lits[start..self.ends[index]]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        (0..self.ends.len()).map(move |i| self.clause(i))
    }

    /// Clauses with index `>= start`, for incremental consumers.
    pub fn clauses_from(&self, start: usize) -> impl Iterator<Item = &[Lit]> + '_ {
        (start..self.ends.len()).map(move |i| self.clause(i))
    }

    /// Evaluates every clause under a total assignment indexed by
    /// [`Var::index`].
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        !self.unsat
            && self.clauses().all(|c| {
                c.iter()
                    .any(|l| values[l.var().index()] == l.is_positive())
            })
    }
}

/// Operands of a lexicographic comparison `xs ⪯ ys`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LexPair {
    pub xs: Vec<Lit>,
    pub ys: Vec<Lit>,
}

impl LexPair {
    pub fn new(xs: Vec<Lit>, ys: Vec<Lit>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::SizeMismatch {
                expected: xs.len(),
                found: ys.len(),
            });
        }
        Ok(LexPair { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `ys ⪯ xs`.
    pub fn swapped(&self) -> LexPair {
        LexPair {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
        }
    }
}

/// Encodes `xs ⪯lex ys` (or `xs ≺lex ys` when `strict`).
pub fn encode_lex_leq(f: &mut CnfFormula, pair: &LexPair, strict: bool) -> Result<()> {
    encode_lex_leq_if(f, pair, strict, None)
}

/// Encodes `guard → (xs ⪯lex ys)` (strict variant on request), with one
/// auxiliary prefix-equality variable per position but the last.
///
/// `e_k` is implied by `e_{k−1} ∧ x_k = y_k`; each position contributes
/// `e_{k−1} → (¬x_k ∨ y_k)` plus the two clauses propagating `e_k`. A strict
/// comparison forbids the full-length prefix from being equal.
pub fn encode_lex_leq_if(
    f: &mut CnfFormula,
    pair: &LexPair,
    strict: bool,
    guard: Option<Lit>,
) -> Result<()> {
    if pair.xs.len() != pair.ys.len() {
        return Err(Error::SizeMismatch {
            expected: pair.xs.len(),
            found: pair.ys.len(),
        });
    }
    let len = pair.len();
    if len == 0 {
        if strict {
            f.add_clause_if(guard, &[]);
        }
        return Ok(());
    }
    // `prefix` holds e_{k−1} (initially the guard); `None` is true.
    let mut prefix: Option<Lit> = guard;
    let mut clause = Vec::with_capacity(3);
    for k in 0..len {
        let (x, y) = (pair.xs[k], pair.ys[k]);
        let last = k + 1 == len;
        let mut push = |f: &mut CnfFormula, lits: &[Lit]| {
            clause.clear();
            if let Some(e) = prefix {
                clause.push(!e);
            }
            clause.extend_from_slice(lits);
            f.add_clause(&clause);
        };
        if x == y {
            // Equal operands: the position is always equal.
            if last && strict {
                push(f, &[]);
            }
            continue;
        }
        push(f, &[!x, y]);
        if last {
            if strict {
                push(f, &[!x]);
                push(f, &[y]);
            }
        } else {
            let e = f.new_var().pos();
            push(f, &[!x, e]);
            push(f, &[y, e]);
            prefix = Some(e);
        }
    }
    Ok(())
}

/// Filters the pairs of `xs ⪯lex ys`, where `ys` is a rearrangement of `xs`,
/// down to an equivalent shorter comparison.
///
/// Positions are scanned left to right while a union-find tracks which
/// elements are forced equal by the kept prefix; a pair whose two sides are
/// already in one class can only compare equal and is dropped.
pub fn simplify_permuted_lex<T: Ord + Copy>(xs: &[T], ys: &[T]) -> Result<Vec<(T, T)>> {
    if xs.len() != ys.len() {
        return Err(Error::SizeMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    let mut ids: BTreeMap<T, usize> = BTreeMap::new();
    let mut counts: Vec<isize> = Vec::new();
    for &x in xs {
        let next = ids.len();
        let id = *ids.entry(x).or_insert(next);
        if id == counts.len() {
            counts.push(0);
        }
        counts[id] += 1;
    }
    for &y in ys {
        match ids.get(&y) {
            Some(&id) => counts[id] -= 1,
            None => {
                return Err(Error::InvalidArgument(
                    "right-hand sequence is not a rearrangement of the left".into(),
                ))
            }
        }
    }
    if counts.iter().any(|&c| c != 0) {
        return Err(Error::InvalidArgument(
            "right-hand sequence is not a rearrangement of the left".into(),
        ));
    }

    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut kept = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let rx = find(&mut parent, ids[&x]);
        let ry = find(&mut parent, ids[&y]);
        if rx != ry {
            parent[rx] = ry;
            kept.push((x, y));
        }
    }
    Ok(kept)
}

/// Outcome of a cardinality encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Encoded,
    /// `k` was outside `0..=|vars|`; the formula has been marked
    /// unsatisfiable.
    Infeasible,
}

/// Encodes "exactly `k` of `lits` are true" with a sequential unary counter.
///
/// Register `r[j]` after reading the `i`-th literal is equivalent to "at
/// least `j + 1` of the first `i` literals are true"; registers are kept up
/// to `k + 1`, the last of which must end false.
pub fn encode_exactly_k(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Cardinality {
    let n = lits.len();
    if k > n {
        f.mark_unsat();
        return Cardinality::Infeasible;
    }
    if k == 0 {
        for &l in lits {
            f.add_clause(&[!l]);
        }
        return Cardinality::Encoded;
    }
    if k == n {
        for &l in lits {
            f.add_clause(&[l]);
        }
        return Cardinality::Encoded;
    }

    let width = k + 1;
    // None = constant false (fewer than j + 1 literals read so far).
    let mut regs: Vec<Option<Lit>> = alloc::vec![None; width];
    for &x in lits {
        let mut next: Vec<Option<Lit>> = alloc::vec![None; width];
        for j in 0..width {
            // r'[j] ↔ r[j] ∨ (x ∧ r[j−1]), with r[−1] = true.
            let carry = if j == 0 { Some(None) } else { regs[j - 1].map(Some) };
            let stay = regs[j];
            let r = match (stay, carry) {
                (None, None) => None,
                _ => Some(f.new_var().pos()),
            };
            if let Some(r) = r {
                let mut up = alloc::vec![!r];
                if let Some(s) = stay {
                    f.add_clause(&[!s, r]);
                    up.push(s);
                }
                match carry {
                    Some(None) => {
                        f.add_clause(&[!x, r]);
                        up.push(x);
                    }
                    Some(Some(c)) => {
                        f.add_clause(&[!x, !c, r]);
                        let mut a = up.clone();
                        a.push(x);
                        let mut b = up.clone();
                        b.push(c);
                        f.add_clause(&a);
                        f.add_clause(&b);
                        up.clear();
                    }
                    None => {}
                }
                if !up.is_empty() {
                    f.add_clause(&up);
                }
            }
            next[j] = r;
        }
        regs = next;
    }
    match regs[k - 1] {
        Some(r) => f.add_clause(&[r]),
        None => f.mark_unsat(),
    }
    if let Some(r) = regs[k] {
        f.add_clause(&[!r]);
    }
    Cardinality::Encoded
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{count_projected, project_all};

    fn vars(f: &mut CnfFormula, n: usize) -> Vec<Lit> {
        f.new_vars(n).into_iter().map(Var::pos).collect()
    }

    fn lex_leq_bits(x: &[bool], y: &[bool], strict: bool) -> bool {
        if strict {
            x < y
        } else {
            x <= y
        }
    }

    #[test]
    fn empty_lex() {
        let mut f = CnfFormula::new();
        encode_lex_leq(&mut f, &LexPair::default(), false).unwrap();
        assert_eq!(f.num_clauses(), 0);
        assert!(!f.is_marked_unsat());
        encode_lex_leq(&mut f, &LexPair::default(), true).unwrap();
        assert!(f.is_marked_unsat());
    }

    #[test]
    fn lex_length_mismatch() {
        let mut f = CnfFormula::new();
        let v = vars(&mut f, 3);
        let pair = LexPair {
            xs: v[..2].to_vec(),
            ys: v[..1].to_vec(),
        };
        assert!(encode_lex_leq(&mut f, &pair, false).is_err());
        assert!(LexPair::new(v[..2].to_vec(), v[..1].to_vec()).is_err());
    }

    #[test]
    fn two_bit_lex_has_ten_models() {
        // Enumerate the 16 assignments of (x1 x2, y1 y2) directly.
        let oracle = (0..16u32)
            .filter(|m| {
                let b = |i: u32| (m >> i) & 1 == 1;
                lex_leq_bits(&[b(0), b(1)], &[b(2), b(3)], false)
            })
            .count();
        assert_eq!(oracle, 10);
        let mut f = CnfFormula::new();
        let v = vars(&mut f, 4);
        encode_lex_leq(&mut f, &LexPair::new(v[..2].to_vec(), v[2..].to_vec()).unwrap(), false).unwrap();
        assert_eq!(count_projected(&f, &v), 10);
    }

    #[test]
    fn lex_matches_truth_table_up_to_four_bits() {
        for len in 1..=4 {
            for strict in [false, true] {
                for guarded in [false, true] {
                    let mut f = CnfFormula::new();
                    let v = vars(&mut f, 2 * len);
                    let guard = guarded.then(|| f.new_var().pos());
                    let pair = LexPair::new(v[..len].to_vec(), v[len..].to_vec()).unwrap();
                    encode_lex_leq_if(&mut f, &pair, strict, guard).unwrap();
                    let mut proj = v.clone();
                    if let Some(g) = guard {
                        proj.push(g);
                    }
                    let models = project_all(&f, &proj);
                    for m in 0..1u32 << proj.len() {
                        let bits: Vec<bool> = (0..proj.len()).map(|i| (m >> i) & 1 == 1).collect();
                        let active = !guarded || bits[2 * len];
                        let expected = !active || lex_leq_bits(&bits[..len], &bits[len..2 * len], strict);
                        assert_eq!(models.contains(&bits), expected, "len {len} strict {strict} {bits:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn lex_with_shared_operands() {
        // x ⪯ x is a tautology; x ≺ x is not satisfiable.
        let mut f = CnfFormula::new();
        let v = vars(&mut f, 2);
        let pair = LexPair::new(v.clone(), v.clone()).unwrap();
        encode_lex_leq(&mut f, &pair, false).unwrap();
        assert_eq!(count_projected(&f, &v), 4);
        encode_lex_leq(&mut f, &pair, true).unwrap();
        assert_eq!(count_projected(&f, &v), 0);
    }

    #[test]
    fn antisymmetry_forces_equality() {
        for len in 1..=4 {
            let mut f = CnfFormula::new();
            let v = vars(&mut f, 2 * len);
            let pair = LexPair::new(v[..len].to_vec(), v[len..].to_vec()).unwrap();
            encode_lex_leq(&mut f, &pair, false).unwrap();
            encode_lex_leq(&mut f, &pair.swapped(), false).unwrap();
            let models = project_all(&f, &v);
            assert_eq!(models.len(), 1 << len);
            assert!(models.iter().all(|m| m[..len] == m[len..]));
        }
    }

    fn letters(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn simplified(xs: &str, ys: &str) -> (String, String) {
        let kept = simplify_permuted_lex(&letters(xs), &letters(ys)).unwrap();
        (kept.iter().map(|p| p.0).collect(), kept.iter().map(|p| p.1).collect())
    }

    use alloc::string::String;

    #[test]
    fn simplification_reproduces_worked_example() {
        assert_eq!(simplified("abcdef", "adebcf"), ("bc".into(), "de".into()));
        assert_eq!(simplified("abcdef", "bacdfe"), ("ae".into(), "bf".into()));
        assert_eq!(simplified("abcdef", "acbedf"), ("bd".into(), "ce".into()));
        assert_eq!(simplified("abcdef", "aedcbf"), ("bc".into(), "ed".into()));
        assert_eq!(simplified("abcdef", "abcdef"), (String::new(), String::new()));
    }

    #[test]
    fn simplification_rejects_non_rearrangements() {
        assert!(simplify_permuted_lex(&[1, 2, 3], &[1, 2, 2]).is_err());
        assert!(simplify_permuted_lex(&[1, 2, 3], &[1, 2, 4]).is_err());
        assert!(simplify_permuted_lex(&[1, 2, 3], &[1, 2]).is_err());
    }

    #[test]
    fn exactly_k_edge_cases() {
        let mut f = CnfFormula::new();
        let v = vars(&mut f, 3);
        assert_eq!(encode_exactly_k(&mut f, &v, 0), Cardinality::Encoded);
        assert_eq!(f.num_clauses(), 3);
        assert!(f.clauses().all(|c| c.len() == 1 && !c[0].is_positive()));

        let mut f = CnfFormula::new();
        let v = vars(&mut f, 3);
        encode_exactly_k(&mut f, &v, 3);
        assert!(f.clauses().all(|c| c.len() == 1 && c[0].is_positive()));
        assert_eq!(f.num_vars(), 3);

        let mut f = CnfFormula::new();
        let v = vars(&mut f, 3);
        assert_eq!(encode_exactly_k(&mut f, &v, 4), Cardinality::Infeasible);
        assert!(f.is_marked_unsat());
    }

    #[test]
    fn exactly_two_of_four() {
        let oracle = (0..16u32).filter(|m| m.count_ones() == 2).count();
        assert_eq!(oracle, 6);
        let mut f = CnfFormula::new();
        let v = vars(&mut f, 4);
        encode_exactly_k(&mut f, &v, 2);
        assert_eq!(count_projected(&f, &v), 6);
    }

    #[test]
    fn exactly_k_counts_are_binomial() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 0..=5 {
            for k in 0..=n {
                let mut f = CnfFormula::new();
                let v = vars(&mut f, n);
                encode_exactly_k(&mut f, &v, k);
                let models = project_all(&f, &v);
                assert_eq!(models.len(), binom(n, k), "n {n} k {k}");
                assert!(models.iter().all(|m| m.iter().filter(|&&b| b).count() == k));
            }
        }
    }

    #[test]
    fn pool_is_monotone() {
        let mut f = CnfFormula::new();
        let before = f.new_var();
        let v = vars(&mut f, 4);
        encode_exactly_k(&mut f, &v, 2);
        encode_lex_leq(&mut f, &LexPair::new(v[..2].to_vec(), v[2..].to_vec()).unwrap(), true).unwrap();
        let after = f.new_var();
        assert!(after.id() > before.id());
        assert_eq!(after.id(), f.num_vars());
    }
}
