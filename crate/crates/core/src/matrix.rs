//! Fully-interchangeable matrix models: rows and columns may be permuted
//! independently without affecting solutions.
//!
//! Matrices are compared by their row-major strings. A cell over symbols
//! `1..=q` is encoded one-hot and additionally by order bits
//! `t_w = [x ≥ w]` for `w = 2..=q`; comparing the concatenated order bits
//! lexicographically is the same as comparing the cells by value, so the
//! Boolean lex encoder serves every domain size.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::canonize::reduce_pairs;
use crate::cnf::{encode_exactly_k, encode_lex_leq, simplify_permuted_lex, CnfFormula, LexPair, Lit, Var};
use crate::oracle::{enumerate_models, Enumeration, Model, SatOracle, Session, SolveResult};
use crate::perm::Permutation;
use crate::problems::Feasibility;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixShape {
    pub rows: usize,
    pub cols: usize,
    /// Cells take values `1..=q`.
    pub q: usize,
}

impl MatrixShape {
    pub fn new(rows: usize, cols: usize, q: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || q == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions and domain size must be positive".to_string(),
            ));
        }
        Ok(MatrixShape { rows, cols, q })
    }

    pub fn num_cells(&self) -> usize {
        self.rows * self.cols
    }

    fn check(&self, other: &MatrixShape) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch {
                expected: self.num_cells(),
                found: other.num_cells(),
            });
        }
        Ok(())
    }
}

/// A concrete matrix with values in `1..=q`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    cells: Vec<usize>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("rows differ in length".to_string()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            cells: rows.concat(),
        })
    }

    pub fn from_cells(rows: usize, cols: usize, cells: Vec<usize>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: cells.len(),
            });
        }
        Ok(Matrix { rows, cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major values.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// 0-based access.
    pub fn get(&self, r: usize, c: usize) -> usize {
        self.cells[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }
}

impl fmt::Display for Matrix {
    /// One line per row, symbols separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for (k, v) in self.row(r).iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// A row permutation together with a column permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermPair {
    pub rows: Permutation,
    pub cols: Permutation,
}

impl PermPair {
    pub fn new(rows: Permutation, cols: Permutation) -> Self {
        PermPair { rows, cols }
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        PermPair::new(Permutation::identity(rows), Permutation::identity(cols))
    }

    pub fn is_identity(&self) -> bool {
        self.rows.is_identity() && self.cols.is_identity()
    }

    /// `self ∘ first`, componentwise.
    pub fn compose(&self, first: &PermPair) -> Result<PermPair> {
        Ok(PermPair::new(self.rows.compose(&first.rows)?, self.cols.compose(&first.cols)?))
    }

    fn fits(&self, rows: usize, cols: usize) -> Result<()> {
        if self.rows.len() != rows || self.cols.len() != cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: self.rows.len() * self.cols.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rows, self.cols)
    }
}

/// `result[σ(i)][τ(j)] = m[i][j]`.
pub fn mm_apply(pair: &PermPair, m: &Matrix) -> Result<Matrix> {
    pair.fits(m.rows, m.cols)?;
    let mut cells = alloc::vec![0; m.cells.len()];
    for i in 0..m.rows {
        for j in 0..m.cols {
            cells[pair.rows.apply(i) * m.cols + pair.cols.apply(j)] = m.get(i, j);
        }
    }
    Ok(Matrix {
        rows: m.rows,
        cols: m.cols,
        cells,
    })
}

/// Row-major lexicographic comparison.
pub fn matrix_leq(a: &Matrix, b: &Matrix) -> Result<bool> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::SizeMismatch {
            expected: a.cells.len(),
            found: b.cells.len(),
        });
    }
    Ok(a.cells <= b.cells)
}

/// The `(v − 1) + (c − 1)` adjacent row and column swaps whose leader
/// constraints order rows and columns lexicographically.
pub fn doublelex_pairs(v: usize, c: usize) -> Vec<PermPair> {
    let mut out = Vec::new();
    for i in 0..v.saturating_sub(1) {
        out.push(PermPair::new(Permutation::transposition(v, i, i + 1), Permutation::identity(c)));
    }
    for j in 0..c.saturating_sub(1) {
        out.push(PermPair::new(Permutation::identity(v), Permutation::transposition(c, j, j + 1)));
    }
    out
}

/// Whether `m` is least among all of its row/column relabelings. Exhaustive
/// over `v!·c!` pairs; intended for tiny shapes.
pub fn is_canonical_matrix_bruteforce(m: &Matrix) -> Result<bool> {
    for rp in Permutation::all(m.rows) {
        for cp in Permutation::all(m.cols) {
            if !matrix_leq(m, &mm_apply(&PermPair::new(rp.clone(), cp), m)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cell variables of a `rows × cols` matrix over `1..=q`.
#[derive(Debug, Clone)]
pub struct CellGrid {
    shape: MatrixShape,
    /// Per cell, `q` literals: literal `s − 1` is "cell = s".
    onehot: Vec<Vec<Lit>>,
    /// Per cell, `q − 1` literals: literal `w − 2` is "cell ≥ w".
    order: Vec<Vec<Lit>>,
}

impl CellGrid {
    /// Allocates the cells with their one-hot and order channeling.
    pub fn new(f: &mut CnfFormula, shape: MatrixShape) -> Self {
        let q = shape.q;
        let mut onehot = Vec::with_capacity(shape.num_cells());
        let mut order = Vec::with_capacity(shape.num_cells());
        for _ in 0..shape.num_cells() {
            match q {
                1 => {
                    let x = f.new_var().pos();
                    f.add_clause(&[x]);
                    onehot.push(alloc::vec![x]);
                    order.push(Vec::new());
                }
                2 => {
                    let b = f.new_var().pos();
                    onehot.push(alloc::vec![!b, b]);
                    order.push(alloc::vec![b]);
                }
                _ => {
                    let xs: Vec<Lit> = f.new_vars(q).into_iter().map(Var::pos).collect();
                    f.add_clause(&xs);
                    for (k, &a) in xs.iter().enumerate() {
                        for &b in &xs[k + 1..] {
                            f.add_clause(&[!a, !b]);
                        }
                    }
                    // t_q ↔ x_q, t_w ↔ x_w ∨ t_{w+1}.
                    let mut ts = alloc::vec![xs[q - 1]; q - 1];
                    for w in (2..q).rev() {
                        let t = f.new_var().pos();
                        let (x, above) = (xs[w - 1], ts[w - 1]);
                        f.add_clause(&[!x, t]);
                        f.add_clause(&[!above, t]);
                        f.add_clause(&[!t, x, above]);
                        ts[w - 2] = t;
                    }
                    onehot.push(xs);
                    order.push(ts);
                }
            }
        }
        CellGrid { shape, onehot, order }
    }

    /// Order bits only, for a copy matrix constrained through channeling.
    fn order_only(f: &mut CnfFormula, shape: MatrixShape) -> Self {
        let order = (0..shape.num_cells())
            .map(|_| f.new_vars(shape.q - 1).into_iter().map(Var::pos).collect())
            .collect();
        CellGrid {
            shape,
            onehot: Vec::new(),
            order,
        }
    }

    pub fn shape(&self) -> MatrixShape {
        self.shape
    }

    /// "cell (r, c) holds symbol s", 0-based cell, 1-based symbol.
    pub fn is(&self, r: usize, c: usize, s: usize) -> Lit {
        self.onehot[r * self.shape.cols + c][s - 1]
    }

    /// "cell (r, c) ≥ w" for `w` in `2..=q`.
    pub fn at_least(&self, r: usize, c: usize, w: usize) -> Lit {
        self.order[r * self.shape.cols + c][w - 2]
    }

    /// All variables that determine the matrix, for projection.
    pub fn projection(&self) -> Vec<Var> {
        self.order.iter().flatten().map(|l| l.var()).collect()
    }

    pub fn decode(&self, model: &Model) -> Matrix {
        let cells = self
            .order
            .iter()
            .map(|bits| 1 + bits.iter().filter(|&&l| model.lit_value(l)).count())
            .collect();
        Matrix {
            rows: self.shape.rows,
            cols: self.shape.cols,
            cells,
        }
    }

    /// Decodes a model projected onto [`CellGrid::projection`].
    pub fn decode_projected(&self, bits: &[bool]) -> Matrix {
        let w = self.shape.q - 1;
        let cells = (0..self.shape.num_cells())
            .map(|k| 1 + bits[k * w..(k + 1) * w].iter().filter(|&&b| b).count())
            .collect();
        Matrix {
            rows: self.shape.rows,
            cols: self.shape.cols,
            cells,
        }
    }

    pub fn fix(&self, f: &mut CnfFormula, m: &Matrix) -> Result<()> {
        self.shape.check(&MatrixShape {
            rows: m.rows,
            cols: m.cols,
            q: self.shape.q,
        })?;
        for (bits, &v) in self.order.iter().zip(&m.cells) {
            for (k, &l) in bits.iter().enumerate() {
                f.add_clause(&[if v >= k + 2 { l } else { !l }]);
            }
        }
        Ok(())
    }

    fn bits_of_cells(&self, cells: &[usize]) -> Vec<Lit> {
        cells.iter().flat_map(|&k| self.order[k].iter().copied()).collect()
    }
}

/// A matrix problem whose solutions are closed under row and column
/// permutations.
pub trait MatrixModel {
    fn shape(&self) -> MatrixShape;
    /// Appends the model constraints over `cells`.
    fn emit(&self, f: &mut CnfFormula, cells: &CellGrid) -> Result<Feasibility>;
    /// Direct check of a concrete matrix.
    fn holds(&self, m: &Matrix) -> bool;
    fn describe(&self) -> String;
}

/// Every matrix of the shape is a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unconstrained(pub MatrixShape);

impl MatrixModel for Unconstrained {
    fn shape(&self) -> MatrixShape {
        self.0
    }

    fn emit(&self, _: &mut CnfFormula, _: &CellGrid) -> Result<Feasibility> {
        Ok(Feasibility::Feasible)
    }

    fn holds(&self, m: &Matrix) -> bool {
        m.rows == self.0.rows && m.cols == self.0.cols && m.cells.iter().all(|&v| (1..=self.0.q).contains(&v))
    }

    fn describe(&self) -> String {
        alloc::format!("matrix:{}x{},q={}", self.0.rows, self.0.cols, self.0.q)
    }
}

/// `v` words of length `qλ` over symbols `1..=q`, each symbol exactly `λ`
/// times per word, every two words at Hamming distance exactly `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EfpaInstance {
    pub q: usize,
    pub lambda: usize,
    pub d: usize,
    pub v: usize,
}

impl EfpaInstance {
    pub fn new(q: usize, lambda: usize, d: usize, v: usize) -> Result<Self> {
        if q == 0 || lambda == 0 || v == 0 {
            return Err(Error::InvalidArgument("q, λ and v must be positive".to_string()));
        }
        if d > q * lambda {
            return Err(Error::InvalidArgument(alloc::format!(
                "distance {d} exceeds the word length {}",
                q * lambda
            )));
        }
        Ok(EfpaInstance { q, lambda, d, v })
    }

    pub fn word_len(&self) -> usize {
        self.q * self.lambda
    }
}

impl fmt::Display for EfpaInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.q, self.lambda, self.d, self.v)
    }
}

impl MatrixModel for EfpaInstance {
    fn shape(&self) -> MatrixShape {
        MatrixShape {
            rows: self.v,
            cols: self.word_len(),
            q: self.q,
        }
    }

    fn emit(&self, f: &mut CnfFormula, cells: &CellGrid) -> Result<Feasibility> {
        let c = self.word_len();
        let mut feas = Feasibility::Feasible;
        for r in 0..self.v {
            for s in 1..=self.q {
                let lits: Vec<Lit> = (0..c).map(|j| cells.is(r, j, s)).collect();
                feas = feas.and(encode_exactly_k(f, &lits, self.lambda).into());
            }
        }
        for u in 0..self.v {
            for w in u + 1..self.v {
                let mut diff = Vec::with_capacity(c);
                for j in 0..c {
                    // agree ↔ some symbol sits in both cells; cells are one-hot.
                    let agree = f.new_var().pos();
                    for s in 1..=self.q {
                        let (x, y) = (cells.is(u, j, s), cells.is(w, j, s));
                        f.add_clause(&[!x, !y, agree]);
                        f.add_clause(&[!agree, !x, y]);
                    }
                    diff.push(!agree);
                }
                feas = feas.and(encode_exactly_k(f, &diff, self.d).into());
            }
        }
        Ok(feas)
    }

    fn holds(&self, m: &Matrix) -> bool {
        if m.rows != self.v || m.cols != self.word_len() {
            return false;
        }
        let counts_ok = (0..m.rows).all(|r| (1..=self.q).all(|s| m.row(r).iter().filter(|&&x| x == s).count() == self.lambda));
        let dist_ok = (0..m.rows).all(|u| {
            (u + 1..m.rows).all(|w| m.row(u).iter().zip(m.row(w)).filter(|(a, b)| a != b).count() == self.d)
        });
        counts_ok && dist_ok
    }

    fn describe(&self) -> String {
        alloc::format!("efpa:q={},lambda={},d={},v={}", self.q, self.lambda, self.d, self.v)
    }
}

/// Simplified operands of `M ⪯ (σ, τ)(M)` over order bits.
pub fn mm_leader_pair(cells: &CellGrid, pair: &PermPair) -> Result<LexPair> {
    let MatrixShape { rows, cols, .. } = cells.shape;
    pair.fits(rows, cols)?;
    let (ri, ci) = (pair.rows.inverse(), pair.cols.inverse());
    let positions: Vec<usize> = (0..rows * cols).collect();
    let moved: Vec<usize> = positions
        .iter()
        .map(|&k| ri.apply(k / cols) * cols + ci.apply(k % cols))
        .collect();
    let kept = simplify_permuted_lex(&positions, &moved)?;
    let xs: Vec<usize> = kept.iter().map(|&(x, _)| x).collect();
    let ys: Vec<usize> = kept.iter().map(|&(_, y)| y).collect();
    Ok(LexPair {
        xs: cells.bits_of_cells(&xs),
        ys: cells.bits_of_cells(&ys),
    })
}

/// `M ⪯ (σ, τ)(M)` for every pair.
pub fn mm_encode_min_pi(f: &mut CnfFormula, cells: &CellGrid, pairs: &[PermPair]) -> Result<()> {
    for p in pairs {
        encode_lex_leq(f, &mm_leader_pair(cells, p)?, false)?;
    }
    Ok(())
}

/// An ordered set of non-identity permutation pairs for one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    rows: usize,
    cols: usize,
    entries: Vec<PermPair>,
    /// The model the set was computed for, if any.
    pub problem: Option<String>,
    complete: bool,
}

impl PairSet {
    pub fn new(rows: usize, cols: usize) -> Self {
        PairSet {
            rows,
            cols,
            entries: Vec::new(),
            problem: None,
            complete: true,
        }
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = PermPair>) -> Result<Self> {
        let mut s = PairSet::new(rows, cols);
        for p in pairs {
            s.push(p)?;
        }
        Ok(s)
    }

    /// Appends unless identity or duplicate; returns whether the set grew.
    pub fn push(&mut self, p: PermPair) -> Result<bool> {
        p.fits(self.rows, self.cols)?;
        if p.is_identity() || self.entries.contains(&p) {
            return Ok(false);
        }
        self.entries.push(p);
        Ok(true)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[PermPair] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn set_complete(&mut self, complete: bool) {
        self.complete = complete;
    }
}

struct MatrixAlg1 {
    m: CellGrid,
    sigma: Vec<Var>,
    tau: Vec<Var>,
}

fn one_hot_square(f: &mut CnfFormula, n: usize) -> Vec<Var> {
    let vars = f.new_vars(n * n);
    for i in 0..n {
        for line in [(0..n).map(|j| vars[i * n + j].pos()).collect::<Vec<_>>(), (0..n).map(|j| vars[j * n + i].pos()).collect()] {
            f.add_clause(&line);
            for (k, &a) in line.iter().enumerate() {
                for &b in &line[k + 1..] {
                    f.add_clause(&[!a, !b]);
                }
            }
        }
    }
    vars
}

fn decode_square(model: &Model, vars: &[Var], n: usize) -> Result<Permutation> {
    let mut map = Vec::with_capacity(n);
    for i in 0..n {
        let hit = (0..n).find(|&j| model.value(vars[i * n + j]));
        map.push(hit.ok_or_else(|| Error::Internal("permutation row has no true entry".to_string()))?);
    }
    Permutation::from_zero_based(map).map_err(|e| Error::Internal(alloc::format!("{e}")))
}

/// `model(M) ∧ min_P(M) ∧ M′ = (σ, τ)(M) ∧ M′ ≺ M`.
fn build_mm_alg1(f: &mut CnfFormula, model: &dyn MatrixModel, pairs: &[PermPair]) -> Result<(MatrixAlg1, Feasibility)> {
    let shape = model.shape();
    let MatrixShape { rows, cols, q } = shape;
    let m = CellGrid::new(f, shape);
    let feas = model.emit(f, &m)?;
    mm_encode_min_pi(f, &m, pairs)?;
    let copy = CellGrid::order_only(f, shape);
    let sigma = one_hot_square(f, rows);
    let tau = one_hot_square(f, cols);
    for i in 0..rows {
        for i2 in 0..rows {
            let s = sigma[i * rows + i2].pos();
            for j in 0..cols {
                for j2 in 0..cols {
                    let t = tau[j * cols + j2].pos();
                    for w in 2..=q {
                        let (x, y) = (m.at_least(i, j, w), copy.at_least(i2, j2, w));
                        f.add_clause(&[!s, !t, !x, y]);
                        f.add_clause(&[!s, !t, x, !y]);
                    }
                }
            }
        }
    }
    let all: Vec<usize> = (0..shape.num_cells()).collect();
    encode_lex_leq(
        f,
        &LexPair {
            xs: copy.bits_of_cells(&all),
            ys: m.bits_of_cells(&all),
        },
        true,
    )?;
    Ok((MatrixAlg1 { m, sigma, tau }, feas))
}

#[derive(Debug, Clone)]
pub struct MatrixComputation {
    pub set: PairSet,
    pub added: usize,
}

/// Extends `init` with counterexample pairs until every solution of the
/// model that is minimal under the set is lex-least in its orbit.
pub fn mm_compute_canonizing_set<O: SatOracle>(oracle: O, init: &PairSet, model: &dyn MatrixModel) -> Result<MatrixComputation> {
    let shape = model.shape();
    if (shape.rows, shape.cols) != (init.rows, init.cols) {
        return Err(Error::SizeMismatch {
            expected: shape.num_cells(),
            found: init.rows * init.cols,
        });
    }
    let mut set = init.clone();
    set.problem = Some(model.describe());
    set.complete = true;
    let mut session = Session::new(oracle);
    let (vars, _) = build_mm_alg1(session.formula_mut()?, model, &set.entries)?;
    let mut added = 0;
    loop {
        match session.solve(&[])? {
            SolveResult::Sat(m) => {
                let pair = PermPair::new(
                    decode_square(&m, &vars.sigma, shape.rows)?,
                    decode_square(&m, &vars.tau, shape.cols)?,
                );
                mm_encode_min_pi(session.formula_mut()?, &vars.m, core::slice::from_ref(&pair))?;
                if !set.push(pair)? {
                    return Err(Error::Internal("counterexample pair is already in the set".to_string()));
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
    Ok(MatrixComputation { set, added })
}

#[derive(Debug, Clone)]
pub struct MatrixReduction {
    pub set: PairSet,
    pub removed: Vec<PermPair>,
    /// `(pair, matrix)`: a solution minimal under the other kept pairs that
    /// `pair` maps to a strictly smaller matrix.
    pub witnesses: Vec<(PermPair, Matrix)>,
    pub fully_reduced: bool,
}

/// Drops every pair whose leader constraint is implied by the others on
/// the solutions of the model.
pub fn mm_reduce<O: SatOracle>(oracle: O, set: &PairSet, model: &dyn MatrixModel) -> Result<MatrixReduction> {
    let mut session = Session::new(oracle);
    let f = session.formula_mut()?;
    let cells = CellGrid::new(f, model.shape());
    model.emit(f, &cells)?;
    let pairs = set
        .entries
        .iter()
        .map(|p| mm_leader_pair(&cells, p))
        .collect::<Result<Vec<_>>>()?;
    let out = reduce_pairs(&mut session, &pairs)?;
    let mut kept = set.clone();
    kept.entries = out.kept.iter().map(|&i| set.entries[i].clone()).collect();
    let removed = (0..set.len())
        .filter(|i| !out.kept.contains(i))
        .map(|i| set.entries[i].clone())
        .collect();
    let witnesses = out
        .witnesses
        .into_iter()
        .map(|(i, m)| (set.entries[i].clone(), cells.decode(&m)))
        .collect();
    Ok(MatrixReduction {
        set: kept,
        removed,
        witnesses,
        fully_reduced: out.fully_reduced,
    })
}

/// Concrete re-check of a reduction witness against the final set.
pub fn mm_check_witness(model: &dyn MatrixModel, set: &PairSet, pair: &PermPair, m: &Matrix) -> Result<bool> {
    if !model.holds(m) {
        return Ok(false);
    }
    for other in set.entries.iter().filter(|p| *p != pair) {
        if !matrix_leq(m, &mm_apply(other, m)?)? {
            return Ok(false);
        }
    }
    Ok(!matrix_leq(m, &mm_apply(pair, m)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixVerdict {
    Canonizing,
    NotCanonizing { matrix: Matrix, pair: PermPair },
    Unknown,
}

/// One query of the counterexample formula.
pub fn mm_verify_canonizing<O: SatOracle>(oracle: O, set: &PairSet, model: &dyn MatrixModel) -> Result<MatrixVerdict> {
    let shape = model.shape();
    let mut session = Session::new(oracle);
    let (vars, _) = build_mm_alg1(session.formula_mut()?, model, &set.entries)?;
    Ok(match session.solve(&[])? {
        SolveResult::Unsat => MatrixVerdict::Canonizing,
        SolveResult::Timeout => MatrixVerdict::Unknown,
        SolveResult::Sat(m) => MatrixVerdict::NotCanonizing {
            matrix: vars.m.decode(&m),
            pair: PermPair::new(
                decode_square(&m, &vars.sigma, shape.rows)?,
                decode_square(&m, &vars.tau, shape.cols)?,
            ),
        },
    })
}

/// The formula `model(M) ∧ min_P(M)` and its cells.
pub fn build_mm_enumeration_formula(model: &dyn MatrixModel, pairs: &[PermPair]) -> Result<(CnfFormula, CellGrid)> {
    let mut f = CnfFormula::new();
    let cells = CellGrid::new(&mut f, model.shape());
    model.emit(&mut f, &cells)?;
    mm_encode_min_pi(&mut f, &cells, pairs)?;
    Ok((f, cells))
}

/// Enumerates the solutions of `model(M) ∧ min_P(M)`.
pub fn mm_enumerate<O: SatOracle>(
    oracle: O,
    model: &dyn MatrixModel,
    pairs: &[PermPair],
    limit: Option<usize>,
    mut on_matrix: impl FnMut(Matrix),
) -> Result<Enumeration> {
    let (f, cells) = build_mm_enumeration_formula(model, pairs)?;
    let projection = cells.projection();
    let mut session = Session::with_formula(f, oracle);
    Ok(enumerate_models(&mut session, &projection, limit, |bits| on_matrix(cells.decode_projected(bits)))?)
}
