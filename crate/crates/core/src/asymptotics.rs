//! Growth of the factorial ratio and the resulting coefficient bounds.
//!
//! With L(n) = n!⋯(2n−1)!/0!⋯(n−1)! (the k = n factorial ratio),
//!
//! > log L(n) = n² log n − (3/2 − log 4)·n² + o(n²),
//!
//! so the root-mean-square of the multi-factorial-weighted coefficients of
//! det(X)^n is governed by n² log n to leading order. For comparison, the
//! number of Latin squares satisfies log L_Σ(n) = n² log n − 2n²(1 + o(1)).
//! The mean-square identity packages into two printable constants: the RMS
//! coefficient scale grows like (2e^{1/4})^{n²} times lower-order factors
//! against a ceiling of (4/√e)^{n²}.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::latin::census;

/// Natural log of n!⋯(2n−1)!/0!⋯(n−1)!, summed in compensated (Kahan)
/// double precision directly from log L(n) = Σ_{a=1}^{n} Σ_{b=a}^{a+n−1} ln b.
pub fn log_factorial_ratio(n: u64) -> f64 {
    assert!((1..=10_000).contains(&n), "supported range is 1..=10000");
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for a in 1..=n {
        for b in a..a + n {
            let y = (b as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    sum
}

/// The same quantity grouped the other way: Σ log (n+j)! − Σ log j! with
/// running log-factorials. An independent route for cross-checking.
pub fn log_factorial_ratio_by_prefix(n: u64) -> f64 {
    assert!((1..=10_000).contains(&n), "supported range is 1..=10000");
    // log j! for j = 0..2n−1, built incrementally
    let mut log_fact = Vec::with_capacity(2 * n as usize);
    let mut acc = 0.0f64;
    log_fact.push(0.0);
    for j in 1..2 * n {
        acc += (j as f64).ln();
        log_fact.push(acc);
    }
    let mut sum = 0.0f64;
    for j in 0..n as usize {
        sum += log_fact[n as usize + j] - log_fact[j];
    }
    sum
}

/// (log L(n) − n² log n)/n² + (3/2 − log 4): the o(1) remainder after the
/// two known terms of the expansion are stripped. Empirically ≈ 0.3/n².
pub fn asymptotic_residual(n: u64) -> f64 {
    assert!(n >= 2, "the residual is meaningful from n = 2");
    let n2 = (n * n) as f64;
    (log_factorial_ratio(n) - n2 * (n as f64).ln()) / n2 + (1.5 - 4.0f64.ln())
}

/// van Lint–Wilson style leading estimate log L_Σ(n) ≈ n² log n − 2n² for
/// the log of the Latin square count.
pub fn vlw_log_estimate(n: u64) -> f64 {
    let n2 = (n * n) as f64;
    n2 * (n as f64).ln() - 2.0 * n2
}

/// The two constants that summarize the mean-square identity: the RMS
/// growth base 2e^{1/4} and the max-coefficient ceiling base 4/√e.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryConstants {
    /// 2e^{1/4} ≈ 2.56805 — base of the RMS coefficient growth.
    pub rms_base: f64,
    /// 4/√e ≈ 2.42612 — base of the uniform coefficient ceiling.
    pub ceiling_base: f64,
}

pub fn corollary_constants() -> CorollaryConstants {
    let rms_base = 2.0 * 0.25f64.exp();
    let ceiling_base = 4.0 / 0.5f64.exp();
    debug_assert_eq!(format!("{rms_base:.5}"), "2.56805");
    debug_assert_eq!(format!("{ceiling_base:.5}"), "2.42612");
    debug_assert!(ceiling_base < rms_base);
    CorollaryConstants {
        rms_base,
        ceiling_base,
    }
}

/// Natural log of a positive big integer, exact to double rounding: take
/// the top 53 bits as a mantissa and add (bits − 53)·ln 2.
pub fn log_of_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log of a non-positive integer");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in 53 bits").ln();
    }
    let top: BigInt = x >> (bits - 53);
    let mantissa = top.to_f64().expect("exactly 53 bits");
    mantissa.ln() + (bits - 53) as f64 * std::f64::consts::LN_2
}

/// One row of the growth ledger comparing the factorial ratio against its
/// asymptotic main term and the Latin-square count estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundLedgerRow {
    pub n: u64,
    /// log L(n), exact to double rounding.
    pub log_factorial_ratio: f64,
    /// n² log n.
    pub main_term: f64,
    /// −(3/2 − log 4)·n².
    pub correction: f64,
    /// n² log n − 2n², the Latin-square count estimate.
    pub vlw_log_l: f64,
    /// log |L_even − L_odd| − ½ log L(n) where the census is feasible and
    /// the signed difference is nonzero; None otherwise.
    pub ratio_log: Option<f64>,
}

/// Ledger rows for n = 1..=n_max (capped at 1000). Signed-difference data
/// is filled in from the census for the handful of orders where full
/// enumeration is cheap.
pub fn bound_ledger(n_max: u64) -> Vec<BoundLedgerRow> {
    assert!((1..=1000).contains(&n_max), "ledger range is 1..=1000");
    (1..=n_max)
        .map(|n| {
            let n2 = (n * n) as f64;
            let lfr = log_factorial_ratio(n);
            let ratio_log = if n <= 5 {
                let c = census(n as usize).expect("census feasible for n <= 5");
                let diff = c.signed_difference.abs();
                (!diff.is_zero()).then(|| log_of_bigint(&diff) - 0.5 * lfr)
            } else {
                None
            };
            BoundLedgerRow {
                n,
                log_factorial_ratio: lfr,
                main_term: n2 * (n as f64).ln(),
                correction: -(1.5 - 4.0f64.ln()) * n2,
                vlw_log_l: vlw_log_estimate(n),
                ratio_log,
            }
        })
        .collect()
}
