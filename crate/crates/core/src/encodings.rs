//! Constraint schemas over a shared variable layout: adjacency matrices,
//! permutation matrices, isomorphism channeling, `min_Π`, the transposition
//! break `sb*ℓ`, and the formulas behind the counterexample search and the
//! redundancy test.

use alloc::vec::Vec;

use crate::cnf::{encode_lex_leq, encode_lex_leq_if, simplify_permuted_lex, CnfFormula, LexPair, Lit, Var};
use crate::graph::{edge_position_perm, num_positions, pair_index, GraphAssignment};
use crate::oracle::Model;
use crate::perm::Permutation;
use crate::problems::{Feasibility, Predicate};
use crate::{Error, Result};

/// One variable per upper-triangle position of an `n × n` adjacency matrix.
///
/// Symmetry and the empty diagonal hold by construction: `A[i][j]` and
/// `A[j][i]` are the same variable and there are no diagonal variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVars {
    n: usize,
    vars: Vec<Var>,
}

impl EdgeVars {
    /// Wraps existing variables (in position order) as an adjacency matrix.
    pub fn from_vars(n: usize, vars: Vec<Var>) -> Result<Self> {
        if vars.len() != num_positions(n) {
            return Err(Error::SizeMismatch {
                expected: num_positions(n),
                found: vars.len(),
            });
        }
        Ok(EdgeVars { n, vars })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Variables in string (position) order.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// `A[a][b]` for distinct 0-based vertices.
    #[inline]
    pub fn lit(&self, a: usize, b: usize) -> Lit {
        self.vars[pair_index(self.n, a, b)].pos()
    }

    pub fn position_lit(&self, k: usize) -> Lit {
        self.vars[k].pos()
    }

    /// Incident edge literals of 0-based vertex `a`, in vertex order.
    pub fn row(&self, a: usize) -> Vec<Lit> {
        (0..self.n).filter(|&b| b != a).map(|b| self.lit(a, b)).collect()
    }

    /// Reads the graph assigned by `model`.
    pub fn decode(&self, model: &Model) -> GraphAssignment {
        let bits = self.vars.iter().map(|&v| model.value(v)).collect();
        GraphAssignment::from_bits(self.n, bits).expect("layout has n(n-1)/2 vars")
    }

    /// Unit clauses fixing these variables to `g`.
    pub fn fix(&self, f: &mut CnfFormula, g: &GraphAssignment) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: g.n(),
            });
        }
        for (&v, &b) in self.vars.iter().zip(g.bits()) {
            f.add_clause(&[v.lit(b)]);
        }
        Ok(())
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}

/// One-hot permutation matrix: `P[i'][i]` is true iff `π(i') = i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermVars {
    n: usize,
    matrix: Vec<Var>,
}

impl PermVars {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `π(from) = to`, 0-based.
    #[inline]
    pub fn maps(&self, from: usize, to: usize) -> Lit {
        self.matrix[from * self.n + to].pos()
    }

    pub fn vars(&self) -> &[Var] {
        &self.matrix
    }

    pub fn fix(&self, f: &mut CnfFormula, p: &Permutation) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        for i in 0..self.n {
            f.add_clause(&[self.maps(i, p.apply(i))]);
        }
        Ok(())
    }
}

/// Allocates the edge variables of an `n`-vertex graph. No clauses are
/// needed: the layout already rules out loops and asymmetry.
pub fn encode_adj(f: &mut CnfFormula, n: usize) -> EdgeVars {
    EdgeVars {
        n,
        vars: f.new_vars(num_positions(n)),
    }
}

fn exactly_one(f: &mut CnfFormula, lits: &[Lit]) {
    f.add_clause(lits);
    for (k, &a) in lits.iter().enumerate() {
        for &b in &lits[k + 1..] {
            f.add_clause(&[!a, !b]);
        }
    }
}

/// A permutation of `{1, …, n}` as a one-hot matrix with exactly one true
/// entry in every row and every column.
pub fn encode_perm(f: &mut CnfFormula, n: usize) -> PermVars {
    let p = PermVars {
        n,
        matrix: f.new_vars(n * n),
    };
    for i in 0..n {
        let row: Vec<Lit> = (0..n).map(|j| p.maps(i, j)).collect();
        exactly_one(f, &row);
        let col: Vec<Lit> = (0..n).map(|j| p.maps(j, i)).collect();
        exactly_one(f, &col);
    }
    p
}

/// Channels `B = π(A)`: whenever `π(i') = i` and `π(j') = j`,
/// `A[i'][j'] ↔ B[i][j]`.
pub fn encode_iso(f: &mut CnfFormula, a: &EdgeVars, b: &EdgeVars, p: &PermVars) -> Result<()> {
    a.check_n(b.n)?;
    a.check_n(p.n)?;
    let n = a.n;
    for src_i in 0..n {
        for src_j in src_i + 1..n {
            let x = a.lit(src_i, src_j);
            for dst_i in 0..n {
                let pi = p.maps(src_i, dst_i);
                for dst_j in 0..n {
                    if dst_i == dst_j {
                        continue;
                    }
                    let pj = p.maps(src_j, dst_j);
                    let y = b.lit(dst_i, dst_j);
                    f.add_clause(&[!pi, !pj, !x, y]);
                    f.add_clause(&[!pi, !pj, x, !y]);
                }
            }
        }
    }
    Ok(())
}

/// The simplified operands of `A ⪯ π(A)` over the edge variables.
pub fn leader_pair(a: &EdgeVars, p: &Permutation) -> Result<LexPair> {
    let q = edge_position_perm(p, a.n)?;
    let positions: Vec<usize> = (0..q.len()).collect();
    let kept = simplify_permuted_lex(&positions, &q)?;
    Ok(LexPair {
        xs: kept.iter().map(|&(x, _)| a.position_lit(x)).collect(),
        ys: kept.iter().map(|&(_, y)| a.position_lit(y)).collect(),
    })
}

/// `min_Π(A)`: `A ⪯ π(A)` for every `π` in `perms`.
pub fn encode_min_pi(f: &mut CnfFormula, a: &EdgeVars, perms: &[Permutation]) -> Result<()> {
    for p in perms {
        encode_lex_leq(f, &leader_pair(a, p)?, false)?;
    }
    Ok(())
}

/// `sb*ℓ(A)`: for all `i < j`, row `i` of the full matrix is lex-below row
/// `j` once entries `i` and `j` are deleted from both.
pub fn encode_sb_lex_star(f: &mut CnfFormula, a: &EdgeVars) -> Result<()> {
    let n = a.n;
    for i in 0..n {
        for j in i + 1..n {
            let rest = (0..n).filter(|&k| k != i && k != j);
            let xs = rest.clone().map(|k| a.lit(i, k)).collect();
            let ys = rest.map(|k| a.lit(j, k)).collect();
            encode_lex_leq(f, &LexPair { xs, ys }, false)?;
        }
    }
    Ok(())
}

/// Variables of the counterexample-search formula.
#[derive(Debug, Clone)]
pub struct Alg1Vars {
    pub a: EdgeVars,
    pub b: EdgeVars,
    pub p: PermVars,
    pub feasibility: Feasibility,
}

/// `adj(A) ∧ adj(B) ∧ perm(π) ∧ iso(A, B, π) ∧ φ(A) ∧ min_Π(A) ∧ A ≻ B`,
/// optionally with `extra_b(B)`.
///
/// A model is a solution `A` that is minimal under `Π` together with a
/// relabeling `π` making it strictly smaller, i.e. a witness that `Π` is
/// not yet canonizing for `φ`.
pub fn build_alg1_formula(
    f: &mut CnfFormula,
    n: usize,
    phi: &Predicate,
    perms: &[Permutation],
    extra_b: Option<&Predicate>,
) -> Result<Alg1Vars> {
    let a = encode_adj(f, n);
    let b = encode_adj(f, n);
    let p = encode_perm(f, n);
    encode_iso(f, &a, &b, &p)?;
    let mut feasibility = phi.emit(f, &a)?;
    encode_min_pi(f, &a, perms)?;
    let a_lits: Vec<Lit> = a.vars.iter().map(|v| v.pos()).collect();
    let b_lits: Vec<Lit> = b.vars.iter().map(|v| v.pos()).collect();
    encode_lex_leq(f, &LexPair { xs: b_lits, ys: a_lits }, true)?;
    if let Some(extra) = extra_b {
        feasibility = feasibility.and(extra.emit(f, &b)?);
    }
    Ok(Alg1Vars {
        a,
        b,
        p,
        feasibility,
    })
}

/// `adj(A) ∧ φ(A) ∧ min_{Π∖{π}}(A) ∧ π(A) ≺ A`. Unsatisfiable exactly when
/// `π` is implied by the other permutations on the solutions of `φ`.
pub fn build_alg2_formula(
    f: &mut CnfFormula,
    n: usize,
    phi: &Predicate,
    perms_minus: &[Permutation],
    pi: &Permutation,
) -> Result<EdgeVars> {
    if perms_minus.contains(pi) {
        return Err(Error::InvalidArgument(alloc::format!(
            "{pi} must not be among the remaining permutations"
        )));
    }
    let a = encode_adj(f, n);
    phi.emit(f, &a)?;
    encode_min_pi(f, &a, perms_minus)?;
    encode_violation_if(f, &a, pi, None)?;
    Ok(a)
}

/// `guard → π(A) ≺ A`.
pub(crate) fn encode_violation_if(
    f: &mut CnfFormula,
    a: &EdgeVars,
    pi: &Permutation,
    guard: Option<Lit>,
) -> Result<()> {
    encode_lex_leq_if(f, &leader_pair(a, pi)?.swapped(), true, guard)
}

/// Reads `π` from a model of a one-hot permutation matrix.
pub fn decode_perm(model: &Model, p: &PermVars) -> Result<Permutation> {
    let n = p.n;
    let mut map = Vec::with_capacity(n);
    for i in 0..n {
        let mut hits = (0..n).filter(|&j| model.lit_value(p.maps(i, j)));
        match (hits.next(), hits.next()) {
            (Some(j), None) => map.push(j),
            _ => {
                return Err(Error::Internal(alloc::format!(
                    "row {} of the permutation matrix is not one-hot",
                    i + 1
                )))
            }
        }
    }
    Permutation::from_zero_based(map).map_err(|e| Error::Internal(alloc::format!("{e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_perm, graph_leq, is_min_under};
    use crate::oracle::{enumerate_models, Session, SolveResult};
    use crate::testutil::{project_all, TestOracle};

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    pub(crate) fn example3() -> Vec<Permutation> {
        alloc::vec![perm(&[2, 1, 3, 4]), perm(&[1, 3, 2, 4]), perm(&[1, 2, 4, 3])]
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = GraphAssignment> {
        (0..1u64 << num_positions(n)).map(move |i| GraphAssignment::from_index(n, i))
    }

    fn lits(vars: &[Var]) -> Vec<Lit> {
        vars.iter().map(|v| v.pos()).collect()
    }

    fn admitted(n: usize, build: impl FnOnce(&mut CnfFormula, &EdgeVars)) -> std::collections::BTreeSet<Vec<bool>> {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, n);
        build(&mut f, &a);
        let mut s = Session::with_formula(f, TestOracle::new());
        let mut out = std::collections::BTreeSet::new();
        enumerate_models(&mut s, a.vars(), None, |m| {
            out.insert(m.to_vec());
        })
        .unwrap();
        out
    }

    #[test]
    fn adjacency_layout() {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 4);
        assert_eq!((a.vars().len(), f.num_clauses()), (6, 0));
        assert_eq!(encode_adj(&mut CnfFormula::new(), 1).vars().len(), 0);
        assert_eq!(encode_adj(&mut CnfFormula::new(), 10).vars().len(), 45);
        assert_eq!(a.lit(2, 0), a.lit(0, 2));
    }

    #[test]
    fn permutation_matrix_models() {
        let mut f = CnfFormula::new();
        let p = encode_perm(&mut f, 3);
        let models = project_all(&f, &lits(p.vars()));
        assert_eq!(models.len(), 6);
        let mut f = CnfFormula::new();
        let p = encode_perm(&mut f, 1);
        assert_eq!(project_all(&f, &lits(p.vars())).len(), 1);
    }

    #[test]
    fn decode_fixed_permutations() {
        for pi in Permutation::all(3) {
            let mut f = CnfFormula::new();
            let p = encode_perm(&mut f, 3);
            p.fix(&mut f, &pi).unwrap();
            let mut s = Session::with_formula(f, TestOracle::new());
            let SolveResult::Sat(m) = s.solve(&[]).unwrap() else { panic!() };
            assert_eq!(decode_perm(&m, &p).unwrap(), pi);
        }
        // A hand-built model: P[1][2], P[2][1], P[3][3], P[4][4].
        let mut f = CnfFormula::new();
        let p = encode_perm(&mut f, 4);
        let mut values = alloc::vec![false; 16];
        for (from, to) in [(0, 1), (1, 0), (2, 2), (3, 3)] {
            values[p.maps(from, to).var().index()] = true;
        }
        assert_eq!(decode_perm(&Model::new(values.clone()), &p).unwrap(), perm(&[2, 1, 3, 4]));
        values[p.maps(0, 0).var().index()] = true;
        assert!(matches!(decode_perm(&Model::new(values), &p), Err(Error::Internal(_))));
    }

    #[test]
    fn iso_forces_b_to_be_the_relabeling() {
        for n in 1..=4 {
            let perms: Vec<_> = Permutation::all(n).collect();
            for g in all_graphs(n) {
                for pi in &perms {
                    let mut f = CnfFormula::new();
                    let a = encode_adj(&mut f, n);
                    let b = encode_adj(&mut f, n);
                    let p = encode_perm(&mut f, n);
                    encode_iso(&mut f, &a, &b, &p).unwrap();
                    a.fix(&mut f, &g).unwrap();
                    p.fix(&mut f, pi).unwrap();
                    let models = project_all(&f, &lits(b.vars()));
                    assert_eq!(models.len(), 1);
                    let only = models.into_iter().next().unwrap();
                    assert_eq!(only, apply_perm(pi, &g).unwrap().bits());
                }
            }
        }
    }

    #[test]
    fn iso_on_fig3() {
        let g = GraphAssignment::from_edges(4, &[(1, 4), (2, 3), (3, 4)]).unwrap();
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 4);
        let b = encode_adj(&mut f, 4);
        let p = encode_perm(&mut f, 4);
        encode_iso(&mut f, &a, &b, &p).unwrap();
        a.fix(&mut f, &g).unwrap();
        p.fix(&mut f, &perm(&[2, 1, 3, 4])).unwrap();
        let fig3b = GraphAssignment::from_edges(4, &[(1, 3), (2, 4), (3, 4)]).unwrap();
        let models = project_all(&f, &lits(b.vars()));
        assert_eq!(models.into_iter().collect::<Vec<_>>(), [fig3b.bits().to_vec()]);
    }

    #[test]
    fn iso_model_count_n3() {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 3);
        let b = encode_adj(&mut f, 3);
        let p = encode_perm(&mut f, 3);
        encode_iso(&mut f, &a, &b, &p).unwrap();
        let mut all = lits(a.vars());
        all.extend(lits(b.vars()));
        all.extend(lits(p.vars()));
        assert_eq!(project_all(&f, &all).len(), 48);
    }

    #[test]
    fn min_pi_of_example3_simplifies_as_expected() {
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 4);
        let v = |k: usize| a.position_lit(k);
        let pairs: Vec<_> = example3().iter().map(|p| leader_pair(&a, p).unwrap()).collect();
        // a..f are positions 0..5: (bc ⪯ de), (ae ⪯ bf), (bd ⪯ ce).
        assert_eq!(pairs[0], LexPair { xs: alloc::vec![v(1), v(2)], ys: alloc::vec![v(3), v(4)] });
        assert_eq!(pairs[1], LexPair { xs: alloc::vec![v(0), v(4)], ys: alloc::vec![v(1), v(5)] });
        assert_eq!(pairs[2], LexPair { xs: alloc::vec![v(1), v(3)], ys: alloc::vec![v(2), v(4)] });
        let before = f.num_clauses();
        encode_min_pi(&mut f, &a, &[Permutation::identity(4)]).unwrap();
        assert_eq!(f.num_clauses(), before);
    }

    #[test]
    fn min_pi_semantics_and_count() {
        let got = admitted(4, |f, a| encode_min_pi(f, a, &example3()).unwrap());
        assert_eq!(got.len(), 11);
        for g in all_graphs(4) {
            let expected = example3()
                .iter()
                .all(|p| graph_leq(&g, &apply_perm(p, &g).unwrap()).unwrap());
            assert_eq!(got.contains(g.bits()), expected);
        }
    }

    #[test]
    fn simplified_lex_equivalent_to_unsimplified() {
        for pi in Permutation::all(4) {
            let simplified = admitted(4, |f, a| encode_min_pi(f, a, core::slice::from_ref(&pi)).unwrap());
            let full = admitted(4, |f, a| {
                let q = edge_position_perm(&pi, 4).unwrap();
                let pair = LexPair {
                    xs: (0..6).map(|k| a.position_lit(k)).collect(),
                    ys: q.iter().map(|&k| a.position_lit(k)).collect(),
                };
                encode_lex_leq(f, &pair, false).unwrap();
            });
            assert_eq!(simplified, full, "{pi}");
        }
    }

    #[test]
    fn sb_lex_star_equals_min_over_transpositions() {
        for n in 2..=5 {
            let star = admitted(n, |f, a| encode_sb_lex_star(f, a).unwrap());
            let trans = admitted(n, |f, a| encode_min_pi(f, a, &Permutation::transpositions(n)).unwrap());
            assert_eq!(star, trans, "n = {n}");
            assert!(star.contains(&alloc::vec![false; num_positions(n)]));
            // Every canonical graph is admitted: the break is sound.
            for g in all_graphs(n) {
                if crate::graph::is_canonical_bruteforce(&g).unwrap() {
                    assert!(star.contains(g.bits()));
                }
            }
        }
    }

    #[test]
    fn alg1_examples() {
        let solve = |n: usize, perms: &[Permutation]| {
            let mut f = CnfFormula::new();
            build_alg1_formula(&mut f, n, &Predicate::True, perms, None).unwrap();
            Session::with_formula(f, TestOracle::new()).solve(&[]).unwrap()
        };
        assert!(solve(4, &example3()).is_unsat());
        assert!(solve(4, &[]).is_sat());
        assert!(solve(3, &Permutation::transpositions(3)).is_unsat());
        let SolveResult::Sat(_) = solve(3, &[perm(&[2, 1, 3])]) else { panic!() };
    }

    #[test]
    fn transpositions_canonize_three_vertices() {
        // Oracle for the example above: on all 8 graphs, minimality under
        // the transpositions coincides with minimality under S_3.
        let t = Permutation::transpositions(3);
        let all: Vec<_> = Permutation::all(3).collect();
        for g in all_graphs(3) {
            assert_eq!(is_min_under(&g, &t).unwrap(), is_min_under(&g, &all).unwrap());
        }
    }

    #[test]
    fn alg2_examples() {
        let solve = |perms: &[Permutation], pi: &Permutation| {
            let mut f = CnfFormula::new();
            build_alg2_formula(&mut f, 4, &Predicate::True, perms, pi).unwrap();
            Session::with_formula(f, TestOracle::new()).solve(&[]).unwrap()
        };
        assert!(solve(&example3(), &Permutation::identity(4)).is_unsat());
        assert!(solve(&example3(), &perm(&[2, 1, 4, 3])).is_unsat());
        let others = [perm(&[2, 1, 3, 4]), perm(&[1, 2, 4, 3])];
        let SolveResult::Sat(m) = solve(&others, &perm(&[1, 3, 2, 4])) else { panic!() };
        // The witness is a real violation.
        let mut f = CnfFormula::new();
        let a = encode_adj(&mut f, 4);
        let g = a.decode(&m);
        assert!(is_min_under(&g, &others).unwrap());
        assert!(!is_min_under(&g, &[perm(&[1, 3, 2, 4])]).unwrap());
        let mut f = CnfFormula::new();
        assert!(build_alg2_formula(&mut f, 4, &Predicate::True, &example3(), &example3()[0]).is_err());
    }

    #[test]
    fn brute_force_alg2_witness_exists() {
        // Independent check of the SAT-side claim above.
        let others = [perm(&[2, 1, 3, 4]), perm(&[1, 2, 4, 3])];
        let pi = perm(&[1, 3, 2, 4]);
        assert!(all_graphs(4).any(|g| is_min_under(&g, &others).unwrap() && !is_min_under(&g, core::slice::from_ref(&pi)).unwrap()));
    }
}
