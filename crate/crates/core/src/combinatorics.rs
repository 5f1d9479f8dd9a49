//! Exact combinatorial primitives: multiindices, permutations with sign, and
//! factorial products. Everything here is an immutable value backed by
//! arbitrary-precision integers where overflow is conceivable.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An n×n grid of nonnegative exponents α, indexing the monomial
/// X^α = ∏ X_ij^{α_ij}. Stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    n: usize,
    entries: Vec<u32>,
}

impl MultiIndex {
    /// Builds a multiindex from row-major entries.
    ///
    /// Panics if `n == 0` or the entry count is not n².
    pub fn new(n: usize, entries: Vec<u32>) -> Self {
        assert!(n >= 1, "multiindex order must be at least 1");
        assert_eq!(
            entries.len(),
            n * n,
            "order {n} needs {} entries, got {}",
            n * n,
            entries.len()
        );
        MultiIndex { n, entries }
    }

    /// Builds a multiindex from a slice of equal-length rows.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MultiIndexParse {
                reason: "no rows".into(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MultiIndexParse {
                    reason: format!("row {} has {} entries, expected {n}", i + 1, row.len()),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(MultiIndex { n, entries })
    }

    /// The zero multiindex (the constant monomial).
    pub fn zeros(n: usize) -> Self {
        MultiIndex::new(n, vec![0; n * n])
    }

    /// The all-ones multiindex, whose monomial is ∏ X_ij.
    pub fn all_ones(n: usize) -> Self {
        MultiIndex::new(n, vec![1; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry α_ij with 0-indexed row and column.
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.n + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// The rows, for serialization boundaries.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    /// |α|, the sum of all entries.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(|&e| e as u64).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.n];
        for (idx, &e) in self.entries.iter().enumerate() {
            sums[idx % self.n] += e as u64;
        }
        sums
    }
}

/// Parses the inline form `"a11,a12,…;a21,…"`: rows separated by `;`,
/// entries by `,`. Whitespace around tokens is ignored.
impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for row in s.split(';') {
            let mut entries = Vec::new();
            for tok in row.split(',') {
                let tok = tok.trim();
                let e: u32 = tok.parse().map_err(|_| Error::MultiIndexParse {
                    reason: format!("entry {tok:?} is not a nonnegative integer"),
                })?;
                entries.push(e);
            }
            rows.push(entries);
        }
        MultiIndex::from_rows(&rows)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .entries
            .chunks(self.n)
            .map(|row| row.iter().map(|e| e.to_string()).join(","))
            .join(";");
        f.write_str(&rows)
    }
}

/// A permutation of {1,…,n}, stored by its images: `image(i)` is σ(i) with
/// both sides 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Validates that `images` is a bijection of {1,…,n}.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation {
                reason: "empty image list".into(),
            });
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v < 1 || v > n {
                return Err(Error::InvalidPermutation {
                    reason: format!("image {v} outside 1..={n}"),
                });
            }
            if seen[v - 1] {
                return Err(Error::InvalidPermutation {
                    reason: format!("image {v} repeated"),
                });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be at least 1");
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Every permutation of {1,…,n} in lexicographic image order.
    pub fn all(n: usize) -> Vec<Permutation> {
        assert!(n >= 1, "permutation degree must be at least 1");
        (1..=n)
            .permutations(n)
            .map(Permutation::from_images_unchecked)
            .collect()
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// σ(i), 1-indexed on both sides.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.n(),
            other.n(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other.images.iter().map(|&v| self.images[v - 1]).collect(),
        }
    }

    /// The permutation matrix P_σ as a multiindex: α_{i,σ(i)} = 1.
    pub fn matrix_multiindex(&self) -> MultiIndex {
        let n = self.n();
        let mut entries = vec![0u32; n * n];
        for i in 1..=n {
            entries[(i - 1) * n + (self.image(i) - 1)] = 1;
        }
        MultiIndex::new(n, entries)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(","))
    }
}

/// m! as an exact integer.
pub fn factorial(m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for f in 2..=m {
        acc *= f;
    }
    acc
}

/// α! = ∏ α_ij! as an exact integer.
pub fn multi_factorial(alpha: &MultiIndex) -> BigInt {
    let mut acc = BigInt::one();
    for &e in alpha.entries() {
        acc *= factorial(e as u64);
    }
    acc
}

/// The exact integer k!(k+1)!⋯(k+n−1)! / (0!1!⋯(n−1)!).
///
/// Numerator and denominator are formed separately and divided once; the
/// division is asserted exact (anything else is an implementation bug).
pub fn factorial_ratio(n: u64, k: u64) -> BigInt {
    assert!(n >= 1, "factorial ratio needs order n >= 1");
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..n {
        num *= factorial(k + j);
        den *= factorial(j);
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "factorial ratio must divide exactly");
    q
}

/// sign(σ) = (−1)^{#inversions} ∈ {+1, −1}.
pub fn perm_sign(sigma: &Permutation) -> i32 {
    let im = sigma.images();
    let mut inversions = 0usize;
    for i in 0..im.len() {
        for j in i + 1..im.len() {
            if im[i] > im[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
