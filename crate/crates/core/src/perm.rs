//! Permutations of `{1, …, n}`.
//!
//! Images are 1-based at the API boundary (`[π(1), …, π(n)]`, the tuple
//! notation used throughout) and 0-based internally.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from 1-based images, `images[i - 1] = π(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("image {img} out of range"),
                });
            }
            if core::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("image {img} repeated"),
                });
            }
            map.push(img - 1);
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from 0-based images.
    pub fn from_zero_based(map: Vec<usize>) -> Result<Self> {
        let images: Vec<usize> = map.iter().map(|&i| i.wrapping_add(1)).collect();
        Self::from_images(&images)
    }

    /// The transposition swapping the 0-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// 0-based image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_zero_based(&self) -> &[usize] {
        &self.map
    }

    /// 1-based images `[π(1), …, π(n)]`.
    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|&i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.map.len()];
        for (i, &p) in self.map.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Result<Self> {
        if self.len() != first.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found: first.len(),
            });
        }
        Ok(Permutation {
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    /// Advances to the next permutation in lexicographic order of image
    /// tuples. Returns `false` (leaving `self` unchanged) at the last one.
    pub fn advance(&mut self) -> bool {
        let m = &mut self.map;
        if m.len() < 2 {
            return false;
        }
        let Some(i) = (0..m.len() - 1).rev().find(|&i| m[i] < m[i + 1]) else {
            return false;
        };
        let j = (i + 1..m.len()).rev().find(|&j| m[j] > m[i]).unwrap();
        m.swap(i, j);
        m[i + 1..].reverse();
        true
    }

    /// All of `S_n` in lexicographic order of image tuples.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Permutation::identity(n)),
        }
    }

    /// The `n(n−1)/2` transpositions `(i j)`, `i < j`, in row-major order.
    pub fn transpositions(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(Permutation::transposition(n, i, j));
            }
        }
        out
    }
}

pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.advance() {
            self.next = Some(succ);
        }
        Some(current)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, &i) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
