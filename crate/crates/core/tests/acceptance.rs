//! The acceptance gate: one test per numbered criterion, each printing a
//! single pass/fail line. Run with `--nocapture` to watch the lines appear:
//!
//! ```text
//! cargo test -p latin-parity --test acceptance -- --nocapture
//! ```
//!
//! Criteria serialize on a shared gate so wall-clock budgets are measured
//! with the machine to themselves.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use latin_parity::{
    asymptotic_residual, census, coefficient_by_finite_difference, corollary_constants, det_power,
    exact_moment, factorial_ratio, log_factorial_ratio, log_of_bigint, mc_moment, mc_trace_power,
    moment_bound_squared, moment_from_coefficient, moment_vanishes, rect_dimension,
    signed_difference_via_coefficient, trace_power_moment_exact, verify_identity, MomentSpec,
    MultiIndex, RectangularPartition,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static GATE: Mutex<()> = Mutex::new(());

fn criterion<F>(number: u32, body: F)
where
    F: FnOnce() -> String,
{
    let _gate: MutexGuard<'_, ()> = GATE.lock().unwrap_or_else(|e| e.into_inner());
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("acceptance criterion {number}: PASS — {detail}"),
        Err(cause) => {
            println!("acceptance criterion {number}: FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}

#[test]
fn criterion_1_census_ground_truth() {
    criterion(1, || {
        let small_start = Instant::now();
        let c4 = census(4).unwrap();
        assert_eq!(c4.even, BigInt::from(576));
        assert_eq!(c4.odd, BigInt::zero());
        let c5 = census(5).unwrap();
        assert_eq!(c5.odd, BigInt::from(80_640));
        assert_eq!(c5.even, BigInt::from(80_640));
        let small = small_start.elapsed();
        assert!(small < Duration::from_secs(1), "n ≤ 5 took {small:?}");

        let big_start = Instant::now();
        let c6 = census(6).unwrap();
        assert_eq!(c6.total, BigInt::from(812_851_200u64));
        let big = big_start.elapsed();
        assert!(big < Duration::from_secs(900), "n = 6 took {big:?}");
        format!("census exact at n = 4, 5, 6 (n ≤ 5 in {small:.2?}, n = 6 in {big:.2?})")
    });
}

#[test]
fn criterion_2_identity_grid() {
    criterion(2, || {
        let start = Instant::now();
        let grid: &[(usize, u32)] = &[
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (4, 1),
            (4, 2),
            (4, 3),
            (5, 1),
            (5, 2),
        ];
        for &(n, k) in grid {
            let report = verify_identity(n, k).unwrap();
            assert!(report.equal, "identity failed at (n, k) = ({n}, {k})");
            assert_eq!(report.lhs, report.rhs, "(n, k) = ({n}, {k})");
        }
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(120), "grid took {elapsed:?}");
        format!(
            "squared-coefficient identity exact on all {} grid points in {elapsed:.2?}",
            grid.len()
        )
    });
}

#[test]
fn criterion_3_cross_method_oracle() {
    criterion(3, || {
        for n in 1..=5usize {
            let from_counting = census(n).unwrap().signed_difference;
            let from_coefficient = signed_difference_via_coefficient(n).unwrap();
            assert_eq!(
                from_counting, from_coefficient,
                "signed-difference routes disagree at n = {n}"
            );
        }
        // the two extractors on the order-4 permanent-style pattern
        let alpha = MultiIndex::all_ones(4);
        let fd = coefficient_by_finite_difference(4, 4, &alpha).unwrap();
        let expansion = det_power(4, 4).unwrap().coefficient(&alpha);
        assert_eq!(fd, expansion);
        assert_eq!(fd, BigInt::from(576));
        "signed difference agrees census vs coefficient for n = 1..5; \
         finite difference matches expansion at n = k = 4"
            .to_string()
    });
}

#[test]
fn criterion_4_exact_vs_monte_carlo() {
    criterion(4, || {
        let start = Instant::now();
        const SAMPLES: u64 = 1_000_000;
        const SEED: u64 = 2026;
        let battery: &[(usize, &[u32])] = &[
            (2, &[1, 0, 0, 1]),
            (2, &[0, 1, 1, 0]),
            (3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]),
            (2, &[2, 0, 0, 2]),
        ];
        for &(n, entries) in battery {
            let spec = MomentSpec::new(MultiIndex::new(n, entries.to_vec()));
            let exact = exact_moment(&spec)
                .unwrap()
                .to_f64()
                .expect("small rational");
            let est = mc_moment(&spec, SAMPLES, SEED);
            let gap = (est.mean - Complex64::new(exact, 0.0)).norm();
            assert!(
                gap <= 4.0 * est.std_error,
                "n = {n}: |mc − exact| = {gap:.3e} > 4σ = {:.3e}",
                4.0 * est.std_error
            );
            assert!(
                est.std_error <= 5e-3,
                "n = {n}: std error {:.3e} too large",
                est.std_error
            );
        }
        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(120),
            "battery took {elapsed:?}"
        );
        format!("4-moment battery within 4σ of exact values at 10⁶ samples in {elapsed:.2?}")
    });
}

#[test]
fn criterion_5_trace_moments() {
    criterion(5, || {
        const SAMPLES: u64 = 1_000_000;
        const SEED: u64 = 314;
        let battery: &[(usize, u32, u64)] = &[(2, 1, 1), (2, 2, 2), (3, 1, 1)];
        for &(n, ell, expected) in battery {
            let exact = trace_power_moment_exact(n, ell);
            assert_eq!(exact, BigInt::from(expected), "(n, ℓ) = ({n}, {ell})");
            let est = mc_trace_power(n, ell, SAMPLES, SEED);
            let gap = (est.mean - Complex64::new(expected as f64, 0.0)).norm();
            assert!(
                gap <= 4.0 * est.std_error,
                "(n, ℓ) = ({n}, {ell}): gap {gap:.3e} > 4σ"
            );
        }
        "trace-power moments match hook-length dimensions within 4σ at 10⁶ samples".to_string()
    });
}

#[test]
fn criterion_6_bound_and_vanishing_suites() {
    criterion(6, || {
        // bound suite: |∫|² ≤ bound² in exact rational arithmetic over the
        // complete support of every expansion with n ≤ 4, k ≤ 3
        let mut checked = 0u64;
        for n in 1..=4usize {
            for k in 0..=3u32 {
                let p = det_power(n, k).unwrap();
                for (key, c) in p.terms() {
                    let alpha = MultiIndex::new(n, key.iter().map(|&e| e as u32).collect());
                    let moment = moment_from_coefficient(&alpha, c);
                    let bound2 = moment_bound_squared(&MomentSpec::new(alpha)).unwrap();
                    assert!(
                        &moment * &moment <= bound2,
                        "bound violated at (n,k)=({n},{k})"
                    );
                    checked += 1;
                }
            }
        }

        // vanishing suite: 20 random non-doubly-balanced patterns per order
        let mut rng = ChaCha8Rng::seed_from_u64(4096);
        let mut vanished = 0u64;
        for n in 2..=4usize {
            let powers: Vec<_> = (0..=3u32).map(|k| det_power(n, k).unwrap()).collect();
            let mut found = 0;
            while found < 20 {
                let k = rng.random_range(1..=3u32);
                let mut entries = vec![0u32; n * n];
                for _ in 0..k as u64 * n as u64 {
                    entries[rng.random_range(0..n * n)] += 1;
                }
                let alpha = MultiIndex::new(n, entries);
                let spec = MomentSpec::new(alpha.clone());
                if !moment_vanishes(&spec) {
                    continue; // accidentally balanced; draw again
                }
                assert!(
                    powers[k as usize].coefficient(&alpha).is_zero(),
                    "nonzero coefficient on unbalanced α at n = {n}, k = {k}"
                );
                assert!(exact_moment(&spec).unwrap().is_zero());
                found += 1;
                vanished += 1;
            }
        }
        format!("{checked} support monomials obey the bound; {vanished} unbalanced patterns vanish")
    });
}

#[test]
fn criterion_7_asymptotic_ledger() {
    criterion(7, || {
        // strict decrease of the residual along the growth grid
        let grid = [10u64, 20, 50, 100, 200, 500, 1000];
        let residuals: Vec<f64> = grid.iter().map(|&n| asymptotic_residual(n).abs()).collect();
        for pair in residuals.windows(2) {
            assert!(
                pair[0] > pair[1],
                "residuals not strictly decreasing: {residuals:?}"
            );
        }

        // float route vs exact big-integer logs for every n ≤ 300, with the
        // ratio maintained incrementally: L(n+1) = L(n)·(2n)!(2n+1)!/(n!)²
        let mut ratio = BigInt::one(); // L(1)
        let mut fact_n = BigInt::one(); // n!   at n = 1
        let mut fact_2n = BigInt::from(2); // (2n)! at n = 1
        assert_eq!(log_factorial_ratio(1), 0.0);
        for n in 1..300u64 {
            let fact_2n1 = &fact_2n * BigInt::from(2 * n + 1); // (2n+1)!
            let numerator = &ratio * &fact_2n * &fact_2n1;
            let (next, remainder) = numerator.div_rem(&(&fact_n * &fact_n));
            assert!(remainder.is_zero(), "ratio increment must divide exactly");
            ratio = next;
            fact_n *= BigInt::from(n + 1);
            fact_2n = &fact_2n1 * BigInt::from(2 * n + 2);

            let exact = log_of_bigint(&ratio);
            let fast = log_factorial_ratio(n + 1);
            assert!(
                (fast - exact).abs() <= 1e-9 * exact.max(1.0),
                "log mismatch at n = {}: {fast} vs {exact}",
                n + 1
            );
        }

        // the two printable constants
        let c = corollary_constants();
        assert_eq!(format!("{:.5}", c.rms_base), "2.56805");
        assert_eq!(format!("{:.5}", c.ceiling_base), "2.42612");
        "residual strictly decreasing on the grid; float and exact logs agree \
         to 1e−9 through n = 300; constants print as 2.56805 and 2.42612"
            .to_string()
    });
}

// The eighth item in the gate is structural: the headline square-root bound
// on the signed census has an unquantified o(1) exponent, so no finite n
// tests it directly. Criteria 2, 3 and 6 verify every exact identity the
// argument rests on, and criterion 7 pins the asymptotic scale; nothing
// further is executable. A sanity check that the known censuses do respect
// the square-root scale at reachable orders lives below.
#[test]
fn criterion_8_headline_scale_sanity() {
    criterion(8, || {
        // |L_even − L_odd| ≤ √L(n) for every order with a full census,
        // using exact integer arithmetic: diff² ≤ ratio
        for n in 1..=5usize {
            let diff = census(n).unwrap().signed_difference;
            let ratio = factorial_ratio(n as u64, n as u64);
            assert!(
                &diff * &diff <= ratio,
                "square-root scale violated at n = {n}"
            );
        }
        // dim check that rect_dimension backs the trace moments used above
        assert_eq!(
            rect_dimension(RectangularPartition { n: 2, ell: 4 }),
            BigInt::from(14)
        );
        "signed census within the square-root envelope at every enumerable order".to_string()
    });
}
