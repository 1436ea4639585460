//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Composition enumeration needs at least one part.
    #[error("composition parts must be at least 1")]
    EmptyParts,

    /// A moment specification violated its invariants.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Estimated work exceeds the configured budget. The estimate is in
    /// kernel evaluations (one evaluation = one sub-permanent vector).
    #[error("estimated work of {estimate} kernel evaluations exceeds budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u64 },

    /// The requested ensemble has no realizations (e.g. regularity above n).
    #[error("infeasible ensemble: {0}")]
    InfeasibleEnsemble(String),

    /// The operation does not support the requested measure.
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),

    /// A surplus interpolation node disagrees with the fitted polynomial,
    /// i.e. the data is not polynomial of the claimed degree.
    #[error("surplus node n={node} disagrees with fit: expected {expected}, got {actual}")]
    SurplusMismatch {
        node: i64,
        expected: String,
        actual: String,
    },

    /// No rational function within the degree bounds fits all sample points.
    #[error("no rational model within the degree bounds is consistent with the data")]
    NoConsistentModel,

    /// The hypotheses of the log-factorial lemma do not hold.
    #[error("hypotheses violated: {0}")]
    HypothesisViolated(String),

    /// The factorization remainder vanishes identically on the grid, so no
    /// order can be measured (the product moment factorizes exactly).
    #[error("remainder is identically zero on the grid (exact factorization)")]
    DegenerateRemainder,

    #[error("not enough points: need {need}, got {got}")]
    NotEnoughPoints { need: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
