//! Error type shared by every expansion operation.

use thiserror::Error;

/// Failure modes of constructing or combining Laurent expansions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    /// An expansion needs at least one retained coefficient.
    #[error("an expansion needs at least one coefficient")]
    EmptyCoefficients,
    /// The expansion was flagged pivotal but its leading coefficient is zero.
    #[error("expansion is flagged pivotal but its leading coefficient is zero")]
    PivotalZeroLead,
    /// A remainder bound violates `0 < delta <= 1`, `G >= 0` or `eps_max > 0`.
    #[error("invalid remainder bound: {0}")]
    InvalidBound(String),
    /// Two representations of the same function disagree on shared coefficients.
    #[error("representations disagree at order {order}: {left} vs {right}")]
    InconsistentRepresentations {
        /// Power of epsilon where the disagreement was found.
        order: i64,
        /// Coefficient of the first representation.
        left: String,
        /// Coefficient of the second representation.
        right: String,
    },
    /// Reciprocal and division need a divisor whose leading coefficient is known nonzero.
    #[error("divisor is not pivotal")]
    NotPivotal,
    /// `sum_many` / `prod_many` were called with no operands.
    #[error("operation needs at least one operand")]
    EmptySequence,
    /// `downgrade_delta` was asked for a larger exponent than the bound carries.
    #[error("requested delta {requested} exceeds the bound's delta {available}")]
    DeltaTooLarge {
        /// The requested delta.
        requested: String,
        /// The delta carried by the bound.
        available: String,
    },
    /// The operation needs a remainder bound, but the expansion carries none.
    #[error("expansion carries no remainder bound")]
    MissingBound,
    /// Expansions can only be evaluated at positive epsilon.
    #[error("epsilon must be positive, got {0}")]
    NonpositiveEpsilon(String),
}
