//! Exact arithmetic connecting three classical objects: the coefficients of
//! det(X)^k as a polynomial in matrix entries, the signed census of Latin
//! squares, and monomial integrals over SU(n).
//!
//! The central identity says the multi-factorial-weighted sum of squared
//! coefficients of det(X)^k collapses to a ratio of factorials:
//!
//! > Σ_α c_α² α! = k!(k+1)!⋯(k+n−1)! / 0!1!⋯(n−1)!
//!
//! Specializing k = n, the coefficient of ∏ X_ij is (up to sign) the
//! difference between the numbers of even and odd Latin squares — the
//! Alon–Tarsi difference — and dividing by the same factorial ratio turns
//! any coefficient into an exact SU(n) moment.
//!
//! The crate keeps every such quantity exact (big integers and rationals),
//! backs them with independently-computed cross-checks, and adds a seeded,
//! thread-count-independent Monte-Carlo harness for the unitary-group side.
//!
//! Modules:
//! - [`combinatorics`]: multi-indices, permutations, factorial ratios.
//! - [`detpow`]: sparse expansion of det(X)^k and coefficient extraction,
//!   including a finite-difference route that needs no expansion.
//! - [`latin`]: Latin squares, their signs, and the exhaustive signed census.
//! - [`su_moments`]: exact rational SU(n) monomial integrals, hook-length
//!   trace moments, and the Monte-Carlo estimator.
//! - [`asymptotics`]: growth of the factorial ratio and the printable
//!   constants 2e^{1/4} and 4/√e.

pub mod asymptotics;
pub mod combinatorics;
pub mod detpow;
mod error;
pub mod latin;
pub mod su_moments;

pub use asymptotics::{
    asymptotic_residual, bound_ledger, corollary_constants, log_factorial_ratio, log_of_bigint,
    vlw_log_estimate, BoundLedgerRow, CorollaryConstants,
};
pub use combinatorics::{
    factorial, factorial_ratio, multi_factorial, perm_sign, MultiIndex, Permutation,
};
pub use detpow::{
    coefficient_by_finite_difference, coefficient_with_fallback, det_power, det_power_with_budget,
    verify_identity, verify_identity_with_budget, IdentityReport, SparsePoly, DEFAULT_TERM_BUDGET,
    MAX_SUPPORT,
};
pub use error::{Error, Result};
pub use latin::{
    all_squares, census, count_prefix, prefix_tasks, signed_difference_via_coefficient,
    signed_difference_via_coefficient_with_budget, square_sign, LatinCensus, LatinSquare,
    PrefixTask, MAX_CENSUS_ORDER,
};
pub use su_moments::{
    exact_moment, exact_moment_with_budget, mc_moment, mc_trace_power, moment_bound,
    moment_bound_squared, moment_from_coefficient, moment_vanishes, rect_dimension,
    rect_dimension_by_hooks, sample_haar_su, trace_power_moment_exact, MomentEstimate, MomentSpec,
    RectangularPartition,
};
