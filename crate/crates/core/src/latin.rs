//! Exhaustive signed enumeration of Latin squares.
//!
//! A Latin square of order n decomposes the all-ones matrix into n
//! permutation matrices P_{σ_1} + ⋯ + P_{σ_n}, where σ_i records the column
//! positions of symbol i. Its sign is
//!
//! > sign(σ⃗) = (−1)^{n(n−1)/2} ∏ᵢ sign(σᵢ),
//!
//! and the census splits the count L(n) into even and odd squares. The
//! signed difference equals the coefficient of ∏X_ij in
//! (−1)^{n(n−1)/2} det(X)^n, which [`signed_difference_via_coefficient`]
//! computes independently as a cross-check on the enumeration.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinatorics::{perm_sign, MultiIndex, Permutation};
use crate::detpow::{coefficient_with_fallback, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};

/// Hard ceiling for the exhaustive census; order 7 has ~6.1×10¹³ squares.
pub const MAX_CENSUS_ORDER: usize = 6;

/// Largest order for which every square can be materialized in memory.
pub const MAX_COLLECT_ORDER: usize = 5;

const MAX_N: usize = 6;

/// An n×n grid over {1,…,n} in which every row and column is a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Validates the defining property cell by cell.
    pub fn new(n: usize, cells: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLatinSquare {
                reason: "order must be at least 1".into(),
            });
        }
        if cells.len() != n * n {
            return Err(Error::InvalidLatinSquare {
                reason: format!("order {n} needs {} cells, got {}", n * n, cells.len()),
            });
        }
        for (idx, &v) in cells.iter().enumerate() {
            if v < 1 || v as usize > n {
                return Err(Error::InvalidLatinSquare {
                    reason: format!(
                        "cell ({},{}) holds {v}, outside 1..={n}",
                        idx / n + 1,
                        idx % n + 1
                    ),
                });
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = cells[i * n + j] as usize - 1;
                if row_seen[r] {
                    return Err(Error::InvalidLatinSquare {
                        reason: format!("row {} repeats symbol {}", i + 1, r + 1),
                    });
                }
                row_seen[r] = true;
                let c = cells[j * n + i] as usize - 1;
                if col_seen[c] {
                    return Err(Error::InvalidLatinSquare {
                        reason: format!("column {} repeats symbol {}", i + 1, c + 1),
                    });
                }
                col_seen[c] = true;
            }
        }
        Ok(LatinSquare { n, cells })
    }

    /// Builds a square from a slice of rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidLatinSquare {
                    reason: format!("expected {n} columns, got a row of {}", row.len()),
                });
            }
            cells.extend_from_slice(row);
        }
        LatinSquare::new(n, cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major cells, values in 1..=n.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.cells.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Entry at 0-indexed (row, col).
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.n + col]
    }

    /// The permutations (σ_1,…,σ_n) with σ_i(row) = column of symbol i in
    /// that row; their permutation matrices sum to the all-ones matrix.
    pub fn to_permutation_tuple(&self) -> Vec<Permutation> {
        let n = self.n;
        let mut images = vec![vec![0usize; n]; n];
        for r in 0..n {
            for c in 0..n {
                images[self.cells[r * n + c] as usize - 1][r] = c + 1;
            }
        }
        images
            .into_iter()
            .map(Permutation::from_images_unchecked)
            .collect()
    }
}

/// sign(σ⃗) = (−1)^{n(n−1)/2} ∏ᵢ sign(σᵢ), the global factor included.
pub fn square_sign(sq: &LatinSquare) -> i32 {
    let n = sq.n();
    let global = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    sq.to_permutation_tuple()
        .iter()
        .fold(global, |acc, sigma| acc * perm_sign(sigma))
}

/// Exact counts for one order: L(n), L_even(n), L_odd(n), and their signed
/// difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinCensus {
    pub n: usize,
    pub total: BigInt,
    pub even: BigInt,
    pub odd: BigInt,
    pub signed_difference: BigInt,
}

impl LatinCensus {
    /// Packages raw even/odd counts, e.g. re-aggregated from per-prefix
    /// checkpoint records.
    pub fn from_counts(n: usize, even: u64, odd: u64) -> Self {
        LatinCensus {
            n,
            total: BigInt::from(even + odd),
            even: BigInt::from(even),
            odd: BigInt::from(odd),
            signed_difference: BigInt::from(even) - BigInt::from(odd),
        }
    }
}

/// Shared backtracking kernel. Fills cells row-major from `idx` up to
/// `stop`, keeping per-row and per-column free-symbol bitmasks, trying
/// candidate symbols lowest first, and invokes `visit` on every completed
/// prefix of length `stop`.
struct Search {
    n: usize,
    cells: [u8; MAX_N * MAX_N],
    row_free: [u16; MAX_N],
    col_free: [u16; MAX_N],
}

impl Search {
    fn new(n: usize) -> Self {
        debug_assert!((1..=MAX_N).contains(&n));
        let full = (1u16 << n) - 1;
        Search {
            n,
            cells: [0; MAX_N * MAX_N],
            row_free: [full; MAX_N],
            col_free: [full; MAX_N],
        }
    }

    /// Places a symbol (1-indexed) at the cell `idx`, assuming it is free.
    fn place(&mut self, idx: usize, symbol: u8) {
        let bit = 1u16 << (symbol - 1);
        let (r, c) = (idx / self.n, idx % self.n);
        debug_assert!(self.row_free[r] & bit != 0 && self.col_free[c] & bit != 0);
        self.cells[idx] = symbol;
        self.row_free[r] &= !bit;
        self.col_free[c] &= !bit;
    }

    fn unplace(&mut self, idx: usize, symbol: u8) {
        let bit = 1u16 << (symbol - 1);
        self.cells[idx] = 0;
        self.row_free[idx / self.n] |= bit;
        self.col_free[idx % self.n] |= bit;
    }

    fn run(&mut self, idx: usize, stop: usize, visit: &mut impl FnMut(&[u8])) {
        if idx == stop {
            visit(&self.cells[..self.n * self.n]);
            return;
        }
        let (r, c) = (idx / self.n, idx % self.n);
        let mut free = self.row_free[r] & self.col_free[c];
        while free != 0 {
            let symbol = free.trailing_zeros() as u8 + 1;
            self.place(idx, symbol);
            self.run(idx + 1, stop, visit);
            self.unplace(idx, symbol);
            free &= free - 1;
        }
    }
}

/// The sign of a completed grid, computed at the leaf from the n column
/// position permutations by inversion counting.
fn leaf_sign(n: usize, cells: &[u8]) -> i32 {
    let mut pos = [[0u8; MAX_N]; MAX_N];
    for r in 0..n {
        for c in 0..n {
            pos[cells[r * n + c] as usize - 1][r] = c as u8;
        }
    }
    let mut sign = if (n * (n - 1) / 2) % 2 == 0 { 1i32 } else { -1 };
    for p in pos.iter().take(n) {
        let mut inversions = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                inversions += (p[i] > p[j]) as u32;
            }
        }
        if inversions & 1 == 1 {
            sign = -sign;
        }
    }
    sign
}

/// One unit of parallel census work: a fixed first-two-rows prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTask {
    /// Position in the deterministic lexicographic prefix order.
    pub id: usize,
    n: usize,
    prefix: Vec<u8>,
}

impl PrefixTask {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The fixed cells, row-major: two full rows.
    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }
}

/// Every first-two-rows prefix of an order-n square, in lexicographic cell
/// order. Requires 2 ≤ n ≤ 6.
pub fn prefix_tasks(n: usize) -> Result<Vec<PrefixTask>> {
    assert!(n >= 2, "prefixes need at least two rows");
    if n > MAX_CENSUS_ORDER {
        return Err(Error::CensusInfeasible { n });
    }
    let mut tasks = Vec::new();
    let mut search = Search::new(n);
    search.run(0, 2 * n, &mut |cells| {
        tasks.push(PrefixTask {
            id: tasks.len(),
            n,
            prefix: cells[..2 * n].to_vec(),
        });
    });
    Ok(tasks)
}

/// Counts the (even, odd) completions of one prefix.
pub fn count_prefix(task: &PrefixTask) -> (u64, u64) {
    let n = task.n;
    let mut search = Search::new(n);
    for (idx, &symbol) in task.prefix.iter().enumerate() {
        search.place(idx, symbol);
    }
    let mut even = 0u64;
    let mut odd = 0u64;
    search.run(2 * n, n * n, &mut |cells| {
        if leaf_sign(n, cells) == 1 {
            even += 1;
        } else {
            odd += 1;
        }
    });
    (even, odd)
}

/// The exact signed census of order n, by exhaustive backtracking.
///
/// Orders 3..=6 are partitioned over first-two-row prefixes and enumerated
/// in parallel; the counts are exact integers reduced commutatively, so the
/// result is identical for any worker count. Orders above 6 are refused.
pub fn census(n: usize) -> Result<LatinCensus> {
    assert!(n >= 1, "census needs order n >= 1");
    if n > MAX_CENSUS_ORDER {
        return Err(Error::CensusInfeasible { n });
    }
    if n <= 2 {
        let mut even = 0u64;
        let mut odd = 0u64;
        let mut search = Search::new(n);
        search.run(0, n * n, &mut |cells| {
            if leaf_sign(n, cells) == 1 {
                even += 1;
            } else {
                odd += 1;
            }
        });
        return Ok(LatinCensus::from_counts(n, even, odd));
    }
    let tasks = prefix_tasks(n)?;
    let (even, odd) = tasks
        .par_iter()
        .map(count_prefix)
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(LatinCensus::from_counts(n, even, odd))
}

/// Materializes every Latin square of order n (1 ≤ n ≤ 5).
pub fn all_squares(n: usize) -> Result<Vec<LatinSquare>> {
    assert!(n >= 1, "enumeration needs order n >= 1");
    if n > MAX_COLLECT_ORDER {
        return Err(Error::EnumerationTooLarge {
            n,
            limit: MAX_COLLECT_ORDER,
        });
    }
    let mut squares = Vec::new();
    let mut search = Search::new(n);
    search.run(0, n * n, &mut |cells| {
        squares.push(LatinSquare {
            n,
            cells: cells.to_vec(),
        });
    });
    Ok(squares)
}

/// L_even(n) − L_odd(n) as (−1)^{n(n−1)/2} times the coefficient of ∏X_ij
/// in det(X)^n — the identification the census must reproduce. Uses the
/// full expansion when it fits the budget and the finite-difference
/// extractor otherwise; n = 6 is out of reach for both (2^36 evaluations).
pub fn signed_difference_via_coefficient(n: usize) -> Result<BigInt> {
    signed_difference_via_coefficient_with_budget(n, DEFAULT_TERM_BUDGET)
}

/// [`signed_difference_via_coefficient`] under an explicit term budget.
pub fn signed_difference_via_coefficient_with_budget(n: usize, budget: u64) -> Result<BigInt> {
    assert!(n >= 1, "order must be at least 1");
    assert!(n <= 255, "det(X)^n keys store exponents in one byte");
    let c = coefficient_with_fallback(n, n as u32, &MultiIndex::all_ones(n), budget)?;
    if (n * (n - 1) / 2) % 2 == 0 {
        Ok(c)
    } else {
        Ok(-c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(rows: &[&[u8]]) -> LatinSquare {
        LatinSquare::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn validation_rejects_broken_grids() {
        assert!(LatinSquare::new(0, vec![]).is_err());
        assert!(LatinSquare::new(2, vec![1, 2, 2]).is_err());
        assert!(LatinSquare::new(2, vec![1, 2, 3, 1]).is_err());
        // row repeat
        assert!(LatinSquare::new(2, vec![1, 1, 2, 2]).is_err());
        // column repeat
        assert!(LatinSquare::new(2, vec![1, 2, 1, 2]).is_err());
        assert!(LatinSquare::new(2, vec![1, 2, 2, 1]).is_ok());
    }

    #[test]
    fn permutation_tuple_reads_off_symbol_positions() {
        let sq = square(&[&[1, 2], &[2, 1]]);
        let tuple = sq.to_permutation_tuple();
        assert_eq!(tuple[0].images(), &[1, 2]); // symbol 1 on the diagonal
        assert_eq!(tuple[1].images(), &[2, 1]); // symbol 2 off the diagonal

        let one = square(&[&[1]]);
        assert_eq!(one.to_permutation_tuple()[0].images(), &[1]);
    }

    #[test]
    fn permutation_matrices_sum_to_all_ones() {
        let sq = square(&[&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]);
        let mut sums = vec![0u32; 9];
        for sigma in sq.to_permutation_tuple() {
            for (idx, &e) in sigma.matrix_multiindex().entries().iter().enumerate() {
                sums[idx] += e;
            }
        }
        assert_eq!(sums, vec![1; 9]);
    }

    #[test]
    fn sign_examples() {
        // (−1)^1 · sign(12) · sign(21) = (−1)(+1)(−1) = +1
        assert_eq!(square_sign(&square(&[&[1, 2], &[2, 1]])), 1);
        assert_eq!(square_sign(&square(&[&[1]])), 1);
    }

    #[test]
    fn census_tiny_orders() {
        let c1 = census(1).unwrap();
        assert_eq!(
            (c1.total, c1.even, c1.odd, c1.signed_difference),
            (1.into(), 1.into(), 0.into(), 1.into())
        );
        // both order-2 squares are even
        let c2 = census(2).unwrap();
        assert_eq!(
            (c2.total, c2.even, c2.odd, c2.signed_difference),
            (2.into(), 2.into(), 0.into(), 2.into())
        );
    }

    #[test]
    fn census_small_orders_match_known_counts() {
        let c3 = census(3).unwrap();
        assert_eq!(c3.total, 12.into());
        assert_eq!(c3.even, c3.odd, "odd order forces an even/odd tie");

        let c4 = census(4).unwrap();
        assert_eq!(c4.total, 576.into());
        assert_eq!(c4.even, 576.into());
        assert_eq!(c4.odd, 0.into());
    }

    #[test]
    fn census_refuses_order_seven() {
        assert!(matches!(census(7), Err(Error::CensusInfeasible { n: 7 })));
    }

    #[test]
    fn leaf_sign_agrees_with_square_sign() {
        for n in 1..=4 {
            for sq in all_squares(n).unwrap() {
                assert_eq!(
                    leaf_sign(n, sq.cells()),
                    square_sign(&sq),
                    "fast and audit signs disagree on {:?}",
                    sq.rows()
                );
            }
        }
    }

    #[test]
    fn all_squares_counts_match_census() {
        for n in 1..=4usize {
            let squares = all_squares(n).unwrap();
            assert_eq!(BigInt::from(squares.len()), census(n).unwrap().total);
        }
        assert!(all_squares(6).is_err());
    }

    #[test]
    fn prefix_partition_reproduces_census() {
        for n in 2..=4usize {
            let tasks = prefix_tasks(n).unwrap();
            let mut even = 0u64;
            let mut odd = 0u64;
            for t in &tasks {
                let (e, o) = count_prefix(t);
                even += e;
                odd += o;
            }
            let c = census(n).unwrap();
            assert_eq!(BigInt::from(even), c.even, "n = {n}");
            assert_eq!(BigInt::from(odd), c.odd, "n = {n}");
        }
    }

    #[test]
    fn signed_difference_routes_agree_tiny() {
        for n in 1..=4usize {
            assert_eq!(
                signed_difference_via_coefficient(n).unwrap(),
                census(n).unwrap().signed_difference,
                "n = {n}"
            );
        }
    }
}
