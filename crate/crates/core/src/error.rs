use thiserror::Error;

/// Errors a caller can legitimately trigger: resource refusals and invalid
/// input. Violations of internal mathematical contracts (inexact divisions,
/// malformed state produced by the library itself) panic instead — they
/// indicate bugs, not recoverable conditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The predicted support of det(X)^k exceeds the configured term budget.
    #[error(
        "det(X)^{k} at order {n} refused: next product predicted at {predicted} terms, \
         budget is {budget}; for a single 0/1 coefficient use the finite-difference extractor"
    )]
    TermBudget {
        n: usize,
        k: u32,
        predicted: u128,
        budget: u64,
    },

    /// Exhaustive signed enumeration is only feasible through order 6.
    #[error(
        "census of order {n} refused: order 7 alone has ~6.1e13 Latin squares, \
         far beyond exhaustive enumeration; orders above 6 are not supported"
    )]
    CensusInfeasible { n: usize },

    /// Materializing every square in memory is capped below the census limit.
    #[error(
        "collecting all Latin squares of order {n} refused: supported only up to order {limit}"
    )]
    EnumerationTooLarge { n: usize, limit: usize },

    /// The finite-difference extractor only handles squarefree monomials.
    #[error(
        "finite-difference extraction needs a 0/1 exponent pattern; found an entry of {found}"
    )]
    NonBinaryExponent { found: u32 },

    /// The finite-difference extractor evaluates 2^m determinants.
    #[error("finite-difference extraction refused: {m} support cells means 2^{m} evaluations (limit 2^{max})")]
    SupportTooLarge { m: usize, max: usize },

    /// No integer k with |alpha| = kn exists.
    #[error("|alpha| = {total} is not a multiple of the order {n}")]
    DegreeNotMultiple { total: u64, n: usize },

    #[error("invalid permutation: {reason}")]
    InvalidPermutation { reason: String },

    #[error("invalid Latin square: {reason}")]
    InvalidLatinSquare { reason: String },

    #[error("cannot parse multiindex: {reason}")]
    MultiIndexParse { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
