//! Exact and Monte-Carlo monomial integrals over SU(n).
//!
//! For |α| = kn the exact value follows from the coefficient identity
//!
//! > c_α α! = (k!⋯(k+n−1)!/0!⋯(n−1)!) ∫_{SU(n)} U^α dU,
//!
//! so ∫ U^α dU = c_α α! / factorial_ratio(n, k) is an exact rational. The
//! integral vanishes unless |α| is a multiple of n and every row and column
//! sum of α equals |α|/n, and always obeys
//!
//! > |∫ U^α dU| ≤ ((0!⋯(n−1)!/k!⋯(k+n−1)!) · α!)^{1/2}.
//!
//! Trace powers come from the hook-length formula: ∫ tr(U)^{ℓn} dU is the
//! dimension of the irreducible S_{ℓn} representation of the n×ℓ rectangle.
//! A seeded Monte-Carlo harness cross-checks both families of exact values.

pub mod haar;

pub use haar::sample_haar_su;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{factorial, factorial_ratio, multi_factorial, MultiIndex};
use crate::detpow::{coefficient_with_fallback, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};

/// A monomial moment ∫ ∏ U_ij^{α_ij} dU to evaluate over SU(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSpec {
    n: usize,
    alpha: MultiIndex,
}

impl MomentSpec {
    pub fn new(alpha: MultiIndex) -> Self {
        MomentSpec {
            n: alpha.n(),
            alpha,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    /// |α|/n when it is an integer.
    pub fn k(&self) -> Option<u64> {
        let total = self.alpha.total();
        (total % self.n as u64 == 0).then(|| total / self.n as u64)
    }
}

/// True iff the integral is forced to zero: |α| is not a multiple of n, or
/// some row or column sum differs from |α|/n (the doubly-stochastic test on
/// (n/|α|)α).
pub fn moment_vanishes(spec: &MomentSpec) -> bool {
    let total = spec.alpha.total();
    let n = spec.n as u64;
    if total % n != 0 {
        return true;
    }
    let k = total / n;
    spec.alpha
        .row_sums()
        .iter()
        .chain(spec.alpha.col_sums().iter())
        .any(|&s| s != k)
}

/// ∫ U^α dU = c α!/factorial_ratio(n, k) for a known coefficient c of X^α
/// in det(X)^k. Panics if |α| is not a multiple of n.
pub fn moment_from_coefficient(alpha: &MultiIndex, c: &BigInt) -> BigRational {
    let n = alpha.n() as u64;
    let total = alpha.total();
    assert!(total % n == 0, "|alpha| must be a multiple of n");
    let k = total / n;
    BigRational::new(c * multi_factorial(alpha), factorial_ratio(n, k))
}

/// The exact rational value of ∫ U^α dU under the default term budget.
pub fn exact_moment(spec: &MomentSpec) -> Result<BigRational> {
    exact_moment_with_budget(spec, DEFAULT_TERM_BUDGET)
}

/// [`exact_moment`] under an explicit term budget. Vanishing patterns short
/// out before any expansion is attempted; |α| not a multiple of n is an
/// error because no exponent k exists.
pub fn exact_moment_with_budget(spec: &MomentSpec, budget: u64) -> Result<BigRational> {
    let n = spec.n;
    let total = spec.alpha.total();
    if total % n as u64 != 0 {
        return Err(Error::DegreeNotMultiple { total, n });
    }
    if moment_vanishes(spec) {
        return Ok(BigRational::zero());
    }
    let k = total / n as u64;
    assert!(k <= 255, "exponents are stored one byte each, so k <= 255");
    let c = coefficient_with_fallback(n, k as u32, &spec.alpha, budget)?;
    Ok(moment_from_coefficient(&spec.alpha, &c))
}

/// The square of the closing bound, (0!⋯(n−1)!/k!⋯(k+n−1)!) · α!, kept
/// rational so comparisons against |exact|² stay exact.
pub fn moment_bound_squared(spec: &MomentSpec) -> Result<BigRational> {
    let n = spec.n;
    let total = spec.alpha.total();
    if total % n as u64 != 0 {
        return Err(Error::DegreeNotMultiple { total, n });
    }
    let k = total / n as u64;
    Ok(BigRational::new(
        multi_factorial(&spec.alpha),
        factorial_ratio(n as u64, k),
    ))
}

/// ((0!⋯(n−1)!/k!⋯(k+n−1)!) · α!)^{1/2} as a real number, computed through
/// an integer square root carrying 64 fractional bits so enormous factorial
/// ratios cannot corrupt the value on the way to a double.
pub fn moment_bound(spec: &MomentSpec) -> Result<f64> {
    let squared = moment_bound_squared(spec)?;
    let scaled: BigInt = (squared.numer() << 128u32) / squared.denom();
    let root = scaled.sqrt();
    Ok(BigRational::new(root, BigInt::one() << 64u32)
        .to_f64()
        .expect("ratio of positive bigints converts"))
}

/// The rectangular partition (ℓ, …, ℓ) with exactly n parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectangularPartition {
    pub n: usize,
    pub ell: u32,
}

/// dim of the irreducible S_{ℓn} representation of the n×ℓ rectangle via
/// the closed factorial form (ℓn)! · 0!⋯(n−1)! / (ℓ!⋯(ℓ+n−1)!). The
/// division is asserted exact.
pub fn rect_dimension(p: RectangularPartition) -> BigInt {
    assert!(p.n >= 1, "partition needs at least one part");
    let (n, ell) = (p.n as u64, p.ell as u64);
    let mut num = factorial(ell * n);
    let mut den = BigInt::one();
    for j in 0..n {
        num *= factorial(j);
        den *= factorial(ell + j);
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "hook-length dimension must divide exactly");
    q
}

/// The same dimension from first principles: (ℓn)! over the product of the
/// hook lengths (n−i) + (ℓ−j) + 1 of the n×ℓ rectangle.
pub fn rect_dimension_by_hooks(p: RectangularPartition) -> BigInt {
    assert!(p.n >= 1, "partition needs at least one part");
    let (n, ell) = (p.n as u64, p.ell as u64);
    let mut hooks = BigInt::one();
    for i in 1..=n {
        for j in 1..=ell {
            hooks *= (n - i) + (ell - j) + 1;
        }
    }
    let (q, r) = factorial(ell * n).div_rem(&hooks);
    assert!(
        r.is_zero(),
        "hook product must divide the factorial exactly"
    );
    q
}

/// ∫ tr(U)^{ℓn} dU over SU(n): exactly the rectangle dimension above.
pub fn trace_power_moment_exact(n: usize, ell: u32) -> BigInt {
    rect_dimension(RectangularPartition { n, ell })
}

/// A Monte-Carlo estimate of one complex moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: Complex64,
    /// Sample standard deviation over √samples.
    pub std_error: f64,
    pub samples: u64,
}

/// Samples are drawn in fixed batches of this size, one RNG substream per
/// batch, so estimates depend only on (seed, samples) — not worker count.
const MC_BATCH: u64 = 16_384;

fn mc_estimate<F>(n: usize, samples: u64, seed: u64, f: F) -> MomentEstimate
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    assert!(samples >= 1, "need at least one sample");
    let batches = samples.div_ceil(MC_BATCH);
    let partials: Vec<(Complex64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut sum = Complex64::ZERO;
            let mut sum_sq = 0.0f64;
            for _ in 0..count {
                let u = sample_haar_su(n, &mut rng);
                let z = f(&u);
                sum += z;
                sum_sq += z.norm_sqr();
            }
            (sum, sum_sq)
        })
        .collect();
    // reduce sequentially in batch order: bit-identical for any worker count
    let mut sum = Complex64::ZERO;
    let mut sum_sq = 0.0f64;
    for (s, q) in partials {
        sum += s;
        sum_sq += q;
    }
    let mean = sum / samples as f64;
    let variance = if samples > 1 {
        ((sum_sq - samples as f64 * mean.norm_sqr()) / (samples - 1) as f64).max(0.0)
    } else {
        0.0
    };
    MomentEstimate {
        mean,
        std_error: (variance / samples as f64).sqrt(),
        samples,
    }
}

/// Empirical mean of ∏ U_ij^{α_ij} over Haar samples from SU(n).
/// Deterministic for a given (seed, samples) pair regardless of threading.
pub fn mc_moment(spec: &MomentSpec, samples: u64, seed: u64) -> MomentEstimate {
    let alpha = spec.alpha.clone();
    let n = spec.n;
    mc_estimate(n, samples, seed, move |u| {
        let mut z = Complex64::ONE;
        for (idx, &e) in alpha.entries().iter().enumerate() {
            if e > 0 {
                z *= u[idx].powu(e);
            }
        }
        z
    })
}

/// Empirical mean of tr(U)^{ℓn} over Haar samples from SU(n).
pub fn mc_trace_power(n: usize, ell: u32, samples: u64, seed: u64) -> MomentEstimate {
    let power = ell * n as u32;
    mc_estimate(n, samples, seed, move |u| {
        let mut tr = Complex64::ZERO;
        for i in 0..n {
            tr += u[i * n + i];
        }
        tr.powu(power)
    })
}
