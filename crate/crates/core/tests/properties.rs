//! Cross-cutting invariants checked through independent routes: a
//! fraction-free elimination oracle for determinants, exhaustive agreement
//! between the two coefficient extractors, symmetry laws of the expansion
//! and of Latin-square signs, and bit-level determinism across thread pools.

use latin_parity::{
    all_squares, census, coefficient_by_finite_difference, det_power, mc_moment, perm_sign,
    square_sign, LatinSquare, MomentSpec, MultiIndex, Permutation,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Determinant by Bareiss fraction-free elimination: exact integer
/// arithmetic, every interior division exact. Shares no code with the
/// library's expansion or subset-sum routes.
fn bareiss_det(n: usize, entries: &[BigInt]) -> BigInt {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return BigInt::one();
    }
    let mut a = entries.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for p in 0..n - 1 {
        if a[p * n + p].is_zero() {
            let Some(r) = (p + 1..n).find(|&r| !a[r * n + p].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                a.swap(p * n + c, r * n + c);
            }
            sign = -sign;
        }
        for r in p + 1..n {
            for c in p + 1..n {
                let num = &a[r * n + c] * &a[p * n + p] - &a[r * n + p] * &a[p * n + c];
                a[r * n + c] = num / &prev;
            }
            a[r * n + p] = BigInt::zero();
        }
        prev = a[p * n + p].clone();
    }
    let d = a[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[test]
fn bareiss_oracle_known_values() {
    let m: Vec<BigInt> = [3, 1, 2, 2].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(bareiss_det(2, &m), BigInt::from(4));
    let id: Vec<BigInt> = (0..9).map(|i| BigInt::from(u8::from(i % 4 == 0))).collect();
    assert_eq!(bareiss_det(3, &id), BigInt::one());
    // singular matrix (equal rows)
    let s: Vec<BigInt> = [1, 2, 1, 2].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(bareiss_det(2, &s), BigInt::zero());
    // zero leading pivot forces the row-swap path
    let p: Vec<BigInt> = [0, 1, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(bareiss_det(2, &p), BigInt::from(-1));
}

#[test]
fn expansion_evaluates_like_eliminated_determinant_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in 1..=4usize {
        for k in 0..=3u32 {
            let p = det_power(n, k).unwrap();
            for _ in 0..20 {
                let entries: Vec<BigInt> = (0..n * n)
                    .map(|_| BigInt::from(rng.random_range(-3..=3)))
                    .collect();
                let direct = bareiss_det(n, &entries).pow(k);
                assert_eq!(p.evaluate(&entries), direct, "(n,k) = ({n},{k})");
            }
        }
    }
}

#[test]
fn extractors_agree_on_every_binary_exponent_pattern() {
    // every 0/1 multi-index up to n = 4, every k up to 4: the
    // finite-difference route must reproduce the expansion coefficient
    for n in 2..=4usize {
        let powers: Vec<_> = (0..=4u32).map(|k| det_power(n, k).unwrap()).collect();
        for mask in 0u32..1 << (n * n) {
            let entries: Vec<u32> = (0..n * n).map(|i| (mask >> i) & 1).collect();
            let alpha = MultiIndex::new(n, entries);
            for (k, p) in powers.iter().enumerate() {
                let fd = coefficient_by_finite_difference(n, k as u32, &alpha).unwrap();
                assert_eq!(
                    fd,
                    p.coefficient(&alpha),
                    "mismatch at n = {n}, k = {k}, alpha = {alpha}"
                );
            }
        }
    }
}

#[test]
fn row_permutation_scales_coefficients_by_sign_power() {
    // permuting the rows of α multiplies c_α by sign(τ)^k
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for n in 2..=4usize {
        for k in 1..=3u32 {
            let p = det_power(n, k).unwrap();
            let mut images: Vec<usize> = (1..=n).collect();
            images.shuffle(&mut rng);
            let tau = Permutation::new(images).unwrap();
            let tau_sign = BigInt::from(perm_sign(&tau).pow(k));
            for (key, c) in p.terms() {
                let mut permuted = vec![0u32; n * n];
                for row in 0..n {
                    let target = tau.image(row + 1) - 1;
                    for col in 0..n {
                        permuted[target * n + col] = key[row * n + col] as u32;
                    }
                }
                let moved = p.coefficient(&MultiIndex::new(n, permuted));
                assert_eq!(moved, c * &tau_sign, "n = {n}, k = {k}");
            }
        }
    }
}

fn swap_columns(square: &LatinSquare, c1: usize, c2: usize) -> LatinSquare {
    let mut rows = square.rows();
    for row in rows.iter_mut() {
        row.swap(c1, c2);
    }
    LatinSquare::from_rows(&rows).unwrap()
}

#[test]
fn column_swap_flips_sign_by_order_parity() {
    // swapping two columns multiplies the square's sign by (−1)^n
    for n in 2..=4usize {
        let flip = if n % 2 == 0 { 1 } else { -1 };
        for square in all_squares(n).unwrap() {
            let swapped = swap_columns(&square, 0, 1);
            assert_eq!(square_sign(&swapped), flip * square_sign(&square));
        }
    }
    // order 5 is large, so spot-check a deterministic sample
    let squares = all_squares(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let square = &squares[rng.random_range(0..squares.len())];
        let c1 = rng.random_range(0..5);
        let c2 = (c1 + 1 + rng.random_range(0..4)) % 5;
        let swapped = swap_columns(square, c1, c2);
        assert_eq!(square_sign(&swapped), -square_sign(square));
    }
}

#[test]
fn census_is_identical_across_thread_pools() {
    let lone = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    for n in 1..=5usize {
        let a = lone.install(|| census(n)).unwrap();
        let b = wide.install(|| census(n)).unwrap();
        assert_eq!((a.total, a.even, a.odd), (b.total, b.even, b.odd));
        assert_eq!(a.signed_difference, b.signed_difference);
    }
}

#[test]
fn monte_carlo_is_bit_identical_across_thread_pools() {
    let spec = MomentSpec::new(MultiIndex::new(2, vec![1, 0, 0, 1]));
    let lone = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    // 50k samples spans multiple batches, exercising the merge order
    let a = lone.install(|| mc_moment(&spec, 50_000, 9));
    let b = wide.install(|| mc_moment(&spec, 50_000, 9));
    assert_eq!(a.mean, b.mean);
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
}
