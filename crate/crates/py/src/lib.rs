//! Python bindings: the census, the coefficient identity, and SU(n) moments
//! with exact values surfacing as Python ints and fractions-as-tuples.
//!
//! Resource refusals (term budgets, infeasible enumerations) raise
//! `RuntimeError`; malformed inputs raise `ValueError`.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latin_parity as core;
use latin_parity::{Error, LatinSquare, MomentSpec, MultiIndex, Permutation};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::TermBudget { .. }
        | Error::CensusInfeasible { .. }
        | Error::EnumerationTooLarge { .. }
        | Error::SupportTooLarge { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn multi_index(alpha: Vec<Vec<u32>>) -> PyResult<MultiIndex> {
    MultiIndex::from_rows(&alpha).map_err(to_py_err)
}

fn latin_square(rows: Vec<Vec<u8>>) -> PyResult<LatinSquare> {
    LatinSquare::from_rows(&rows).map_err(to_py_err)
}

/// The exact signed census of one order.
#[pyclass(frozen, get_all)]
struct Census {
    n: usize,
    total: BigInt,
    even: BigInt,
    odd: BigInt,
    signed_difference: BigInt,
}

#[pymethods]
impl Census {
    fn __repr__(&self) -> String {
        format!(
            "Census(n={}, total={}, even={}, odd={}, signed_difference={})",
            self.n, self.total, self.even, self.odd, self.signed_difference
        )
    }
}

/// Both sides of the squared-coefficient identity for one (n, k).
#[pyclass(frozen, get_all)]
struct IdentityReport {
    n: usize,
    k: u32,
    lhs: BigInt,
    rhs: BigInt,
    term_count: usize,
    equal: bool,
}

#[pymethods]
impl IdentityReport {
    fn __repr__(&self) -> String {
        format!(
            "IdentityReport(n={}, k={}, lhs={}, rhs={}, term_count={}, equal={})",
            self.n, self.k, self.lhs, self.rhs, self.term_count, self.equal
        )
    }
}

/// A seeded Monte-Carlo mean with its standard error.
#[pyclass(frozen, get_all)]
struct MomentEstimate {
    mean: Complex64,
    std_error: f64,
    samples: u64,
}

#[pymethods]
impl MomentEstimate {
    fn __repr__(&self) -> String {
        format!(
            "MomentEstimate(mean={}, std_error={:.3e}, samples={})",
            self.mean, self.std_error, self.samples
        )
    }
}

impl From<core::MomentEstimate> for MomentEstimate {
    fn from(est: core::MomentEstimate) -> Self {
        MomentEstimate {
            mean: est.mean,
            std_error: est.std_error,
            samples: est.samples,
        }
    }
}

/// Exact signed census of Latin squares of order n (n <= 6).
#[pyfunction]
fn census(n: usize) -> PyResult<Census> {
    let c = core::census(n).map_err(to_py_err)?;
    Ok(Census {
        n: c.n,
        total: c.total,
        even: c.even,
        odd: c.odd,
        signed_difference: c.signed_difference,
    })
}

/// Check sum(c^2 * alpha!) == k!(k+1)!...(k+n-1)!/0!...(n-1)! for det(X)^k.
#[pyfunction]
#[pyo3(signature = (n, k, term_budget=None))]
fn verify_identity(n: usize, k: u32, term_budget: Option<u64>) -> PyResult<IdentityReport> {
    let budget = term_budget.unwrap_or(core::DEFAULT_TERM_BUDGET);
    let report = core::verify_identity_with_budget(n, k, budget).map_err(to_py_err)?;
    Ok(IdentityReport {
        n: report.n,
        k: report.k,
        lhs: report.lhs,
        rhs: report.rhs,
        term_count: report.term_count,
        equal: report.equal,
    })
}

/// Full expansion of det(X)^k: a list of (row-major exponents, coefficient).
#[pyfunction]
#[pyo3(signature = (n, k, term_budget=None))]
fn det_power_terms(
    n: usize,
    k: u32,
    term_budget: Option<u64>,
) -> PyResult<Vec<(Vec<u32>, BigInt)>> {
    let budget = term_budget.unwrap_or(core::DEFAULT_TERM_BUDGET);
    let p = core::det_power_with_budget(n, k, budget).map_err(to_py_err)?;
    Ok(p.terms()
        .map(|(key, c)| (key.iter().map(|&e| e as u32).collect(), c.clone()))
        .collect())
}

/// Coefficient of X^alpha in det(X)^k: expansion first, finite differences
/// when the expansion would exceed the term budget.
#[pyfunction]
#[pyo3(signature = (n, k, alpha, term_budget=None))]
fn coefficient(
    n: usize,
    k: u32,
    alpha: Vec<Vec<u32>>,
    term_budget: Option<u64>,
) -> PyResult<BigInt> {
    let alpha = multi_index(alpha)?;
    if alpha.n() != n {
        return Err(PyValueError::new_err("alpha shape does not match n"));
    }
    let budget = term_budget.unwrap_or(core::DEFAULT_TERM_BUDGET);
    core::coefficient_with_fallback(n, k, &alpha, budget).map_err(to_py_err)
}

/// Coefficient of a 0/1 pattern via 2^m signed evaluations (m <= 30).
#[pyfunction]
fn coefficient_by_finite_difference(n: usize, k: u32, alpha: Vec<Vec<u32>>) -> PyResult<BigInt> {
    let alpha = multi_index(alpha)?;
    if alpha.n() != n {
        return Err(PyValueError::new_err("alpha shape does not match n"));
    }
    core::coefficient_by_finite_difference(n, k, &alpha).map_err(to_py_err)
}

/// L_even(n) - L_odd(n) from the determinant coefficient route.
#[pyfunction]
#[pyo3(signature = (n, term_budget=None))]
fn signed_difference_via_coefficient(n: usize, term_budget: Option<u64>) -> PyResult<BigInt> {
    let budget = term_budget.unwrap_or(core::DEFAULT_TERM_BUDGET);
    core::signed_difference_via_coefficient_with_budget(n, budget).map_err(to_py_err)
}

/// Sign of a Latin square given as rows over symbols 1..=n.
#[pyfunction]
fn square_sign(rows: Vec<Vec<u8>>) -> PyResult<i32> {
    Ok(core::square_sign(&latin_square(rows)?))
}

/// The n symbol-position permutations of a Latin square, as image lists.
#[pyfunction]
fn to_permutation_tuple(rows: Vec<Vec<u8>>) -> PyResult<Vec<Vec<usize>>> {
    Ok(latin_square(rows)?
        .to_permutation_tuple()
        .iter()
        .map(|p| p.images().to_vec())
        .collect())
}

/// Sign of a permutation given as its image list (1-indexed).
#[pyfunction]
fn perm_sign(images: Vec<usize>) -> PyResult<i32> {
    Ok(core::perm_sign(
        &Permutation::new(images).map_err(to_py_err)?,
    ))
}

#[pyfunction]
fn factorial(m: u64) -> BigInt {
    core::factorial(m)
}

/// alpha! = product of the entrywise factorials.
#[pyfunction]
fn multi_factorial(alpha: Vec<Vec<u32>>) -> PyResult<BigInt> {
    Ok(core::multi_factorial(&multi_index(alpha)?))
}

/// k!(k+1)!...(k+n-1)! / 0!1!...(n-1)!.
#[pyfunction]
fn factorial_ratio(n: u64, k: u64) -> BigInt {
    core::factorial_ratio(n, k)
}

/// Exact integral of U^alpha over SU(n) as a (numerator, denominator) pair.
#[pyfunction]
#[pyo3(signature = (alpha, term_budget=None))]
fn exact_moment(alpha: Vec<Vec<u32>>, term_budget: Option<u64>) -> PyResult<(BigInt, BigInt)> {
    let spec = MomentSpec::new(multi_index(alpha)?);
    let budget = term_budget.unwrap_or(core::DEFAULT_TERM_BUDGET);
    let value = core::exact_moment_with_budget(&spec, budget).map_err(to_py_err)?;
    Ok((value.numer().clone(), value.denom().clone()))
}

/// True when the integral is structurally zero (degree or balance).
#[pyfunction]
fn moment_vanishes(alpha: Vec<Vec<u32>>) -> PyResult<bool> {
    Ok(core::moment_vanishes(&MomentSpec::new(multi_index(alpha)?)))
}

/// The closing upper bound sqrt(alpha! / factorial_ratio).
#[pyfunction]
fn moment_bound(alpha: Vec<Vec<u32>>) -> PyResult<f64> {
    core::moment_bound(&MomentSpec::new(multi_index(alpha)?)).map_err(to_py_err)
}

/// Dimension of the irreducible S_{ln} representation of the n-by-l rectangle.
#[pyfunction]
fn rect_dimension(n: usize, l: u32) -> BigInt {
    core::rect_dimension(core::RectangularPartition { n, ell: l })
}

/// Exact E[tr(U)^{ln}] over SU(n): the rectangle dimension.
#[pyfunction]
fn trace_power_moment_exact(n: usize, l: u32) -> BigInt {
    core::trace_power_moment_exact(n, l)
}

/// Seeded Monte-Carlo estimate of the monomial moment.
#[pyfunction]
fn mc_moment(alpha: Vec<Vec<u32>>, samples: u64, seed: u64) -> PyResult<MomentEstimate> {
    if samples == 0 {
        return Err(PyValueError::new_err("need at least one sample"));
    }
    let spec = MomentSpec::new(multi_index(alpha)?);
    Ok(core::mc_moment(&spec, samples, seed).into())
}

/// Seeded Monte-Carlo estimate of E[tr(U)^{ln}].
#[pyfunction]
fn mc_trace_power(n: usize, l: u32, samples: u64, seed: u64) -> PyResult<MomentEstimate> {
    if samples == 0 {
        return Err(PyValueError::new_err("need at least one sample"));
    }
    if n == 0 {
        return Err(PyValueError::new_err("order must be at least 1"));
    }
    Ok(core::mc_trace_power(n, l, samples, seed).into())
}

/// One Haar sample from SU(n), as a nested list of complex entries.
#[pyfunction]
fn sample_haar_su(n: usize, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    if n == 0 {
        return Err(PyValueError::new_err("order must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flat = core::sample_haar_su(n, &mut rng);
    Ok(flat.chunks(n).map(|row| row.to_vec()).collect())
}

/// Natural log of the factorial ratio at k = n, in double precision.
#[pyfunction]
fn log_factorial_ratio(n: u64) -> PyResult<f64> {
    if !(1..=10_000).contains(&n) {
        return Err(PyValueError::new_err("supported range is 1..=10000"));
    }
    Ok(core::log_factorial_ratio(n))
}

/// Remainder of log L(n)/n^2 after the two leading asymptotic terms.
#[pyfunction]
fn asymptotic_residual(n: u64) -> PyResult<f64> {
    if !(2..=10_000).contains(&n) {
        return Err(PyValueError::new_err("supported range is 2..=10000"));
    }
    Ok(core::asymptotic_residual(n))
}

/// Leading estimate n^2 log n - 2 n^2 for the log Latin-square count.
#[pyfunction]
fn vlw_log_estimate(n: u64) -> f64 {
    core::vlw_log_estimate(n)
}

/// (2e^{1/4}, 4/sqrt(e)): the RMS growth base and the coefficient ceiling base.
#[pyfunction]
fn corollary_constants() -> (f64, f64) {
    let c = core::corollary_constants();
    (c.rms_base, c.ceiling_base)
}

#[pymodule]
fn latin_parity_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Census>()?;
    m.add_class::<IdentityReport>()?;
    m.add_class::<MomentEstimate>()?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(det_power_terms, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_by_finite_difference, m)?)?;
    m.add_function(wrap_pyfunction!(signed_difference_via_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(square_sign, m)?)?;
    m.add_function(wrap_pyfunction!(to_permutation_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(perm_sign, m)?)?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(multi_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(factorial_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(exact_moment, m)?)?;
    m.add_function(wrap_pyfunction!(moment_vanishes, m)?)?;
    m.add_function(wrap_pyfunction!(moment_bound, m)?)?;
    m.add_function(wrap_pyfunction!(rect_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(trace_power_moment_exact, m)?)?;
    m.add_function(wrap_pyfunction!(mc_moment, m)?)?;
    m.add_function(wrap_pyfunction!(mc_trace_power, m)?)?;
    m.add_function(wrap_pyfunction!(sample_haar_su, m)?)?;
    m.add_function(wrap_pyfunction!(log_factorial_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_residual, m)?)?;
    m.add_function(wrap_pyfunction!(vlw_log_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_constants, m)?)?;
    Ok(())
}
