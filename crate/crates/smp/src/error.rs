//! Error type of the semi-Markov layer.

use laurent::ExpansionError;
use thiserror::Error;

use crate::model::State;
use crate::stationary::StationaryReport;

/// Failures of model construction, reduction, stationary analysis and the oracle.
#[derive(Debug, Clone, Error)]
pub enum SmpError {
    /// A state id does not belong to the model.
    #[error("state {0} is not part of the model")]
    UnknownState(State),
    /// `ε_0` must lie in `(0, 1]`.
    #[error("eps0 = {0} is outside (0, 1]")]
    BadEpsilon0(String),
    /// Reduction needs at least two states.
    #[error("a one-state model cannot be reduced further")]
    SingleState,
    /// An elimination order is not a permutation of the other states.
    #[error("invalid elimination order: {0}")]
    BadPermutation(String),
    /// Pair hitting needs two distinct states.
    #[error("pair hitting needs two distinct states, got {0} twice")]
    SameState(State),
    /// `row_sum` needs a nonempty subset of the transition set.
    #[error("row sum over an empty set of states")]
    EmptySubset,
    /// A transition `(i, j)` the computation relies on is missing.
    #[error("transition ({0}, {1}) is missing")]
    MissingTransition(State, State),
    /// The non-absorption probability of an eliminated state is not positive.
    #[error("non-absorption probability of state {state} has non-positive lead: {expansion}")]
    NonAbsorptionNotPositive {
        /// Eliminated state.
        state: State,
        /// Offending expansion.
        expansion: String,
    },
    /// Structural identities of the stationary expansions failed.
    #[error("stationary expansions violate {} structural identities", .0.violations.len())]
    InvariantViolation(Box<StationaryReport>),
    /// Oracle evaluation point outside `(0, ε_0]`.
    #[error("epsilon {eps} is outside (0, {eps0}]")]
    EpsilonOutOfRange {
        /// Requested point.
        eps: String,
        /// Upper end of the validity interval.
        eps0: String,
    },
    /// The linear system of the oracle is singular at this ε.
    #[error("singular linear system at epsilon {0}")]
    SingularSystem(String),
    /// An expansion operation failed.
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}
