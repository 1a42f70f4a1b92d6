//! Concrete simple graphs as upper-triangle bit strings, the lexicographic
//! order on them, and the brute-force canonicity oracle.
//!
//! Position `k` of the string is the `k`-th pair of the row-major upper
//! triangle: `(1,2), (1,3), …, (1,n), (2,3), …, (n−1,n)`. Every encoding in
//! the crate numbers edge variables in this order.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::perm::Permutation;
use crate::{Error, Result};

/// Largest `n` accepted by the exhaustive oracles (`n!` relabelings).
pub const BRUTE_FORCE_MAX_N: usize = 9;

/// Number of upper-triangle positions for `n` vertices.
#[inline]
pub const fn num_positions(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the unordered pair of distinct 0-based vertices `{a, b}`.
#[inline]
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < n && b < n);
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// A position of the upper-triangle string together with the vertex pair
/// (1-based, `i < j`) it denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgePosition {
    pub index: usize,
    pub i: usize,
    pub j: usize,
}

impl EdgePosition {
    pub fn from_pair(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::InvalidArgument(alloc::format!(
                "({i},{j}) is not a vertex pair of a graph on {n} vertices"
            )));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(EdgePosition {
            index: pair_index(n, i - 1, j - 1),
            i,
            j,
        })
    }

    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        if index >= num_positions(n) {
            return Err(Error::InvalidArgument(alloc::format!(
                "position {index} out of range for n = {n}"
            )));
        }
        let mut rest = index;
        let mut i = 0;
        while rest >= n - 1 - i {
            rest -= n - 1 - i;
            i += 1;
        }
        Ok(EdgePosition {
            index,
            i: i + 1,
            j: i + 2 + rest,
        })
    }

    /// All positions for `n` vertices in string order.
    pub fn all(n: usize) -> impl Iterator<Item = EdgePosition> {
        (0..n).flat_map(move |i| {
            (i + 1..n).map(move |j| EdgePosition {
                index: pair_index(n, i, j),
                i: i + 1,
                j: j + 1,
            })
        })
    }
}

/// A simple graph on vertices `1..=n`, stored as its upper-triangle string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphAssignment {
    n: usize,
    bits: Vec<bool>,
}

impl GraphAssignment {
    pub fn empty(n: usize) -> Self {
        GraphAssignment {
            n,
            bits: alloc::vec![false; num_positions(n)],
        }
    }

    pub fn complete(n: usize) -> Self {
        GraphAssignment {
            n,
            bits: alloc::vec![true; num_positions(n)],
        }
    }

    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != num_positions(n) {
            return Err(Error::SizeMismatch {
                expected: num_positions(n),
                found: bits.len(),
            });
        }
        Ok(GraphAssignment { n, bits })
    }

    /// Parses a `0`/`1` upper-triangle string such as `"001101"`.
    pub fn from_bit_str(n: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(alloc::format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(n, bits)
    }

    /// Graph with the given 1-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            let pos = EdgePosition::from_pair(n, u, v)?;
            g.bits[pos.index] = true;
        }
        Ok(g)
    }

    /// The `index`-th graph in the enumeration of all `2^(n(n−1)/2)` graphs,
    /// reading `index` as the string with position 0 as the most
    /// significant bit (so the enumeration follows the graph order).
    pub fn from_index(n: usize, index: u64) -> Self {
        let len = num_positions(n);
        let bits = (0..len).map(|k| (index >> (len - 1 - k)) & 1 == 1).collect();
        GraphAssignment { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Edge test on 1-based vertices. A vertex is never adjacent to itself.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adjacent(u - 1, v - 1)
    }

    /// Edge test on 0-based vertices.
    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.bits[pair_index(self.n, a, b)]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) -> Result<()> {
        let pos = EdgePosition::from_pair(self.n, u, v)?;
        self.bits[pos.index] = present;
        Ok(())
    }

    /// 1-based edges `(i, j)`, `i < j`, in string order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        EdgePosition::all(self.n)
            .filter(|p| self.bits[p.index])
            .map(|p| (p.i, p.j))
            .collect()
    }

    /// Degrees of vertices `1..=n`, in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|a| (0..self.n).filter(|&b| self.adjacent(a, b)).count())
            .collect()
    }

    /// Row-major upper-triangle string over `{0, 1}`.
    pub fn upper_tri_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    fn check_same_n(&self, other: usize) -> Result<()> {
        if self.n != other {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for GraphAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, self.upper_tri_string())
    }
}

/// `π(G)`: the graph with an edge `(π(u), π(v))` for every edge `(u, v)`.
pub fn apply_perm(p: &Permutation, g: &GraphAssignment) -> Result<GraphAssignment> {
    g.check_same_n(p.len())?;
    let n = g.n;
    let mut out = GraphAssignment::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if g.bits[pair_index(n, i, j)] {
                out.bits[pair_index(n, p.apply(i), p.apply(j))] = true;
            }
        }
    }
    Ok(out)
}

/// The position map induced by a vertex permutation: for every graph `g`,
/// `apply_perm(p, g).bits()[k] == g.bits()[q[k]]`.
pub fn edge_position_perm(p: &Permutation, n: usize) -> Result<Vec<usize>> {
    if p.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let inv = p.inverse();
    let mut q = Vec::with_capacity(num_positions(n));
    for i in 0..n {
        for j in i + 1..n {
            q.push(pair_index(n, inv.apply(i), inv.apply(j)));
        }
    }
    Ok(q)
}

/// `g1 ⪯ g2` in the lexicographic order of upper-triangle strings.
pub fn graph_leq(g1: &GraphAssignment, g2: &GraphAssignment) -> Result<bool> {
    g1.check_same_n(g2.n)?;
    Ok(g1.bits <= g2.bits)
}

/// Compares `g` with `p(g)` without materializing `p(g)`.
fn cmp_with_permuted(g: &GraphAssignment, q: &[usize]) -> Ordering {
    for (k, &src) in q.iter().enumerate() {
        match g.bits[k].cmp(&g.bits[src]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn check_brute_force_bound(n: usize) -> Result<()> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
            what: "brute-force canonicity",
        });
    }
    Ok(())
}

/// `min_Π(g)`: `g ⪯ π(g)` for every `π` in `perms`.
pub fn is_min_under(g: &GraphAssignment, perms: &[Permutation]) -> Result<bool> {
    for p in perms {
        let q = edge_position_perm(p, g.n)?;
        if cmp_with_permuted(g, &q) == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A permutation `π ∈ S_n` with `π(g) ≺ g`, if any (first in lexicographic
/// order of image tuples).
pub fn smaller_relabeling(g: &GraphAssignment) -> Result<Option<Permutation>> {
    check_brute_force_bound(g.n)?;
    for p in Permutation::all(g.n) {
        let q = edge_position_perm(&p, g.n)?;
        if cmp_with_permuted(g, &q) == Ordering::Greater {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// `min_{S_n}(g)`, checked over all `n!` relabelings.
pub fn is_canonical_bruteforce(g: &GraphAssignment) -> Result<bool> {
    Ok(smaller_relabeling(g)?.is_none())
}

/// The lexicographically least relabeling of `g`.
pub fn canonical_form_bruteforce(g: &GraphAssignment) -> Result<GraphAssignment> {
    check_brute_force_bound(g.n)?;
    let n = g.n;
    let mut best = g.bits.clone();
    let mut scratch = alloc::vec![false; best.len()];
    for p in Permutation::all(n) {
        let q = edge_position_perm(&p, n)?;
        for (k, &src) in q.iter().enumerate() {
            scratch[k] = g.bits[src];
        }
        if scratch < best {
            core::mem::swap(&mut scratch, &mut best);
        }
    }
    Ok(GraphAssignment { n, bits: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    /// Fig. 3(a): edges {1,4}, {2,3}, {3,4}.
    fn fig3a() -> GraphAssignment {
        GraphAssignment::from_edges(4, &[(1, 4), (2, 3), (3, 4)]).unwrap()
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = GraphAssignment> {
        (0..1u64 << num_positions(n)).map(move |i| GraphAssignment::from_index(n, i))
    }

    #[test]
    fn edge_positions_are_row_major() {
        let pairs: Vec<_> = EdgePosition::all(4).map(|p| (p.index, p.i, p.j)).collect();
        assert_eq!(
            pairs,
            [(0, 1, 2), (1, 1, 3), (2, 1, 4), (3, 2, 3), (4, 2, 4), (5, 3, 4)]
        );
        for n in 2..9 {
            for pos in EdgePosition::all(n) {
                assert_eq!(EdgePosition::from_index(n, pos.index).unwrap(), pos);
                assert_eq!(EdgePosition::from_pair(n, pos.j, pos.i).unwrap(), pos);
            }
        }
        assert!(EdgePosition::from_pair(4, 2, 2).is_err());
        assert!(EdgePosition::from_index(4, 6).is_err());
    }

    #[test]
    fn apply_perm_matches_fig3() {
        let g = fig3a();
        let pi1 = apply_perm(&perm(&[2, 1, 3, 4]), &g).unwrap();
        assert_eq!(
            pi1,
            GraphAssignment::from_edges(4, &[(2, 4), (1, 3), (3, 4)]).unwrap()
        );
        let pi2 = apply_perm(&perm(&[1, 3, 2, 4]), &g).unwrap();
        assert_eq!(
            pi2,
            GraphAssignment::from_edges(4, &[(1, 4), (3, 2), (2, 4)]).unwrap()
        );
        assert_eq!(apply_perm(&Permutation::identity(4), &g).unwrap(), g);
        assert!(apply_perm(&Permutation::identity(3), &g).is_err());
    }

    #[test]
    fn upper_triangle_strings() {
        assert_eq!(fig3a().upper_tri_string(), "001101");
        assert_eq!(GraphAssignment::empty(3).upper_tri_string(), "000");
        let fig3c = apply_perm(&perm(&[1, 3, 2, 4]), &fig3a()).unwrap();
        assert_eq!(fig3c.upper_tri_string(), "001110");
    }

    #[test]
    fn graph_order() {
        let a = GraphAssignment::from_bit_str(4, "001101").unwrap();
        let c = GraphAssignment::from_bit_str(4, "001110").unwrap();
        assert!(graph_leq(&a, &c).unwrap());
        assert!(graph_leq(&a, &a).unwrap());
        assert!(!graph_leq(&c, &a).unwrap());
        assert!(graph_leq(&a, &GraphAssignment::empty(3)).is_err());
    }

    #[test]
    fn graph_order_is_total_order_on_small_graphs() {
        let graphs: Vec<_> = all_graphs(4).collect();
        for a in &graphs {
            for b in &graphs {
                let ab = graph_leq(a, b).unwrap();
                let ba = graph_leq(b, a).unwrap();
                assert!(ab || ba);
                if ab && ba {
                    assert_eq!(a, b);
                }
                // Transitivity through a third graph sampled from a fixed stride.
                for c in graphs.iter().step_by(7) {
                    if ab && graph_leq(b, c).unwrap() {
                        assert!(graph_leq(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn canonicity_examples() {
        let g = fig3a();
        assert!(is_canonical_bruteforce(&g).unwrap());
        assert!(is_canonical_bruteforce(&GraphAssignment::complete(4)).unwrap());
        assert!(is_canonical_bruteforce(&GraphAssignment::empty(4)).unwrap());
        let fig3c = GraphAssignment::from_bit_str(4, "001110").unwrap();
        assert!(!is_canonical_bruteforce(&fig3c).unwrap());
        assert_eq!(canonical_form_bruteforce(&fig3c).unwrap(), g);
        assert_eq!(
            canonical_form_bruteforce(&GraphAssignment::empty(5)).unwrap(),
            GraphAssignment::empty(5)
        );
        assert!(is_canonical_bruteforce(&GraphAssignment::empty(10)).is_err());
    }

    #[test]
    fn c5_canonical_form() {
        // Oracle: minimum over all 120 relabelings, computed from scratch with
        // materialized graphs rather than position maps.
        let c5 = GraphAssignment::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let mut best: Option<GraphAssignment> = None;
        for p in Permutation::all(5) {
            let h = apply_perm(&p, &c5).unwrap();
            if best.as_ref().map_or(true, |b| h.bits < b.bits) {
                best = Some(h);
            }
        }
        let best = best.unwrap();
        assert_eq!(best.upper_tri_string(), "0011101100");
        assert_eq!(canonical_form_bruteforce(&c5).unwrap(), best);
    }

    #[test]
    fn exactly_eleven_canonical_graphs_on_four_vertices() {
        let count = all_graphs(4)
            .filter(|g| is_canonical_bruteforce(g).unwrap())
            .count();
        assert_eq!(count, 11);
    }

    #[test]
    fn position_perm_examples() {
        let letters = |q: &[usize]| -> String { q.iter().map(|&k| (b'a' + k as u8) as char).collect() };
        let q = edge_position_perm(&perm(&[2, 1, 3, 4]), 4).unwrap();
        assert_eq!(letters(&q), "adebcf");
        let q = edge_position_perm(&perm(&[1, 2, 4, 3]), 4).unwrap();
        assert_eq!(letters(&q), "acbedf");
        let q = edge_position_perm(&perm(&[1, 3, 2, 4]), 4).unwrap();
        assert_eq!(letters(&q), "bacdfe");
        let id = edge_position_perm(&Permutation::identity(5), 5).unwrap();
        assert_eq!(id, (0..10).collect::<Vec<_>>());
        assert!(edge_position_perm(&Permutation::identity(3), 4).is_err());
    }

    #[test]
    fn position_perm_coherent_with_apply_perm() {
        for n in 1..=5 {
            let perms: Vec<_> = Permutation::all(n).collect();
            for g in all_graphs(n) {
                for p in perms.iter().step_by(if n == 5 { 11 } else { 1 }) {
                    let q = edge_position_perm(p, n).unwrap();
                    let via_map: Vec<bool> = q.iter().map(|&k| g.bits()[k]).collect();
                    assert_eq!(via_map, apply_perm(p, &g).unwrap().bits());
                }
            }
        }
    }

    fn arb_graph_and_perms(n: usize) -> impl Strategy<Value = (GraphAssignment, Permutation, Permutation)> {
        let len = num_positions(n);
        (
            proptest::collection::vec(any::<bool>(), len),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(bits, a, b)| {
                (
                    GraphAssignment::from_bits(n, bits).unwrap(),
                    Permutation::from_zero_based(a).unwrap(),
                    Permutation::from_zero_based(b).unwrap(),
                )
            })
    }

    proptest! {
        #[test]
        fn apply_perm_is_an_action((g, p1, p2) in (1usize..=6).prop_flat_map(arb_graph_and_perms)) {
            let step = apply_perm(&p2, &apply_perm(&p1, &g).unwrap()).unwrap();
            let direct = apply_perm(&p2.compose(&p1).unwrap(), &g).unwrap();
            prop_assert_eq!(step, direct);
        }

        #[test]
        fn canonical_form_is_a_class_invariant((g, p, _q) in (1usize..=6).prop_flat_map(arb_graph_and_perms)) {
            let c = canonical_form_bruteforce(&g).unwrap();
            prop_assert!(is_canonical_bruteforce(&c).unwrap());
            prop_assert_eq!(c.degrees().iter().sum::<usize>(), g.degrees().iter().sum::<usize>());
            prop_assert_eq!(canonical_form_bruteforce(&apply_perm(&p, &g).unwrap()).unwrap(), c);
        }
    }
}
