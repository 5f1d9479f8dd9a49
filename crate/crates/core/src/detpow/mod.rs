//! det(X)^k as an exact sparse polynomial over the n² matrix entries, with
//! coefficient extraction and the identity relating squared coefficients to
//! a factorial ratio:
//!
//! > Σ_{|α| = kn} c_α² α! = k!(k+1)!⋯(k+n−1)! / (0!1!⋯(n−1)!)
//!
//! where c_α is the coefficient of X^α in det(X)^k. A polarization-based
//! extractor in [`finite_diff`] recovers single squarefree coefficients
//! without building the expansion, serving as an independent oracle.

mod finite_diff;

pub use finite_diff::{coefficient_by_finite_difference, MAX_SUPPORT};

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{factorial, factorial_ratio, perm_sign, MultiIndex, Permutation};
use crate::error::{Error, Result};

/// Default cap on the predicted support size of an expansion step.
pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// An exact sparse polynomial in the n² variables X_ij, canonically stored
/// as (key, coefficient) pairs sorted by key. Keys are the row-major
/// exponent vector packed one byte per exponent, so iteration order, equality
/// and serialization are deterministic regardless of how the terms were
/// produced. No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: Vec<(Vec<u8>, BigInt)>,
}

impl SparsePoly {
    /// The constant polynomial 1 (all-zero exponent key).
    pub fn constant_one(n: usize) -> Self {
        assert!(n >= 1, "polynomial order must be at least 1");
        SparsePoly {
            n,
            terms: vec![(vec![0u8; n * n], BigInt::one())],
        }
    }

    fn from_map(n: usize, map: HashMap<Vec<u8>, BigInt>) -> Self {
        let mut terms: Vec<(Vec<u8>, BigInt)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        SparsePoly { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic key order: (row-major exponents, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    /// The coefficient of X^α, or zero if the monomial is absent.
    pub fn coefficient(&self, alpha: &MultiIndex) -> BigInt {
        assert_eq!(
            alpha.n(),
            self.n,
            "multiindex order must match the polynomial"
        );
        if alpha.entries().iter().any(|&e| e > u8::MAX as u32) {
            // exponents above 255 cannot occur in any stored key
            return BigInt::zero();
        }
        let key: Vec<u8> = alpha.entries().iter().map(|&e| e as u8).collect();
        match self
            .terms
            .binary_search_by(|(k, _)| k.as_slice().cmp(&key[..]))
        {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Evaluates the polynomial at the given row-major integer values.
    pub fn evaluate(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.n * self.n, "need one value per variable");
        let mut acc = BigInt::zero();
        for (key, coeff) in self.terms() {
            let mut term = coeff.clone();
            for (v, &e) in values.iter().zip(key) {
                if e > 0 {
                    term *= v.pow(e as u32);
                }
            }
            acc += term;
        }
        acc
    }

    /// One line per term, `<coeff> <e11> <e12> … <enn>`, in lexicographic
    /// key order — the exchange format used to diff against oracles.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (key, coeff) in self.terms() {
            write!(out, "{coeff}").unwrap();
            for &e in key {
                write!(out, " {e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// The determinant of X as a sparse polynomial: one term per permutation σ,
/// key P_σ, coefficient sign(σ). Panics if `n == 0`.
pub fn det_poly(n: usize) -> SparsePoly {
    assert!(n >= 1, "determinant needs order n >= 1");
    let mut terms = Vec::new();
    for sigma in Permutation::all(n) {
        let mut key = vec![0u8; n * n];
        for i in 1..=n {
            key[(i - 1) * n + (sigma.image(i) - 1)] = 1;
        }
        terms.push((key, BigInt::from(perm_sign(&sigma))));
    }
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    SparsePoly { n, terms }
}

/// det(X)^k expanded exactly, under the default term budget.
pub fn det_power(n: usize, k: u32) -> Result<SparsePoly> {
    det_power_with_budget(n, k, DEFAULT_TERM_BUDGET)
}

/// det(X)^k by iterated sparse multiplication with det(X), combining like
/// monomials after each factor. Before every multiplication the support of
/// the product is predicted by the loose bound (current terms) × n!; if the
/// prediction exceeds `budget` the call is refused with that prediction.
pub fn det_power_with_budget(n: usize, k: u32, budget: u64) -> Result<SparsePoly> {
    assert!(n >= 1, "determinant needs order n >= 1");
    assert!(k <= 255, "exponents are stored one byte each, so k <= 255");
    if k == 0 {
        return Ok(SparsePoly::constant_one(n));
    }
    let n_factorial: u128 = (1..=n as u128).product();
    if n_factorial > budget as u128 {
        return Err(Error::TermBudget {
            n,
            k,
            predicted: n_factorial,
            budget,
        });
    }
    let base = det_poly(n);
    let mut acc = base.clone();
    for _ in 2..=k {
        let predicted = acc.term_count() as u128 * n_factorial;
        if predicted > budget as u128 {
            return Err(Error::TermBudget {
                n,
                k,
                predicted,
                budget,
            });
        }
        acc = mul_by_det(&acc, &base, k);
    }
    Ok(acc)
}

/// One sparse multiplication step: accumulate products in a hash map, then
/// re-canonicalize to the sorted representation. Any candidate monomial with
/// a row or column exponent sum above `k` cannot appear in det(X)^k and is
/// dropped on the spot.
fn mul_by_det(acc: &SparsePoly, det: &SparsePoly, k: u32) -> SparsePoly {
    let n = acc.n;
    let mut map: HashMap<Vec<u8>, BigInt> = HashMap::with_capacity(acc.term_count() * 2);
    let mut row_sums = vec![0u32; n];
    let mut col_sums = vec![0u32; n];
    for (ka, ca) in acc.terms() {
        'product: for (kb, cb) in det.terms() {
            let mut key = vec![0u8; n * n];
            row_sums.fill(0);
            col_sums.fill(0);
            for idx in 0..n * n {
                let e = ka[idx] as u32 + kb[idx] as u32;
                row_sums[idx / n] += e;
                col_sums[idx % n] += e;
                if row_sums[idx / n] > k || col_sums[idx % n] > k {
                    continue 'product;
                }
                key[idx] = e as u8;
            }
            let c = ca * cb;
            match map.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
            }
        }
    }
    SparsePoly::from_map(n, map)
}

/// Outcome of checking Σ c_α² α! against the factorial ratio for one (n, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    pub k: u32,
    /// Σ c_α² α! over every monomial of det(X)^k.
    pub lhs: BigInt,
    /// k!(k+1)!⋯(k+n−1)! / (0!⋯(n−1)!).
    pub rhs: BigInt,
    /// Number of monomials in the expansion.
    pub term_count: usize,
    pub equal: bool,
}

/// Expands det(X)^k and checks Σ c_α² α! = k!⋯(k+n−1)!/(0!⋯(n−1)!) exactly.
pub fn verify_identity(n: usize, k: u32) -> Result<IdentityReport> {
    verify_identity_with_budget(n, k, DEFAULT_TERM_BUDGET)
}

/// [`verify_identity`] under an explicit term budget.
pub fn verify_identity_with_budget(n: usize, k: u32, budget: u64) -> Result<IdentityReport> {
    let p = det_power_with_budget(n, k, budget)?;
    // factorials of exponents recur constantly; precompute 0!..k!
    let fact: Vec<BigInt> = (0..=k as u64).map(factorial).collect();
    let mut lhs = BigInt::zero();
    for (key, c) in p.terms() {
        let mut term = c * c;
        for &e in key {
            term *= &fact[e as usize];
        }
        lhs += term;
    }
    let rhs = factorial_ratio(n as u64, k as u64);
    Ok(IdentityReport {
        n,
        k,
        equal: lhs == rhs,
        lhs,
        rhs,
        term_count: p.term_count(),
    })
}

/// The coefficient of X^α in det(X)^k by whichever route is feasible: the
/// full expansion when it fits the budget, otherwise the finite-difference
/// extractor for squarefree α with small support. Errors with the budget
/// refusal when neither applies.
pub fn coefficient_with_fallback(
    n: usize,
    k: u32,
    alpha: &MultiIndex,
    budget: u64,
) -> Result<BigInt> {
    assert_eq!(alpha.n(), n, "multiindex order must match n");
    match det_power_with_budget(n, k, budget) {
        Ok(p) => Ok(p.coefficient(alpha)),
        Err(refusal @ Error::TermBudget { .. }) => {
            let squarefree = alpha.entries().iter().all(|&e| e <= 1);
            let support = alpha.entries().iter().filter(|&&e| e == 1).count();
            if squarefree && support <= MAX_SUPPORT {
                coefficient_by_finite_difference(n, k, alpha)
            } else {
                Err(refusal)
            }
        }
        Err(e) => Err(e),
    }
}
