//! Asymptotic expansions for nonlinearly perturbed semi-Markov processes.
//!
//! A [`PerturbedSmp`] holds Laurent expansions of the transition
//! probabilities `p_ij(ε)` and sojourn expectations `e_ij(ε)`.  Eliminating
//! states one at a time ([`reduce_state`]) preserves hitting times, so
//! reducing to a single state `i` yields the expected return time `E_ii(ε)`,
//! and the stationary distribution follows as `π_i(ε) = e_i(ε) / E_ii(ε)`.
//! The [`oracle`] module solves the same model exactly at fixed `ε` for
//! cross-checks.
//!
//! ```
//! use std::collections::BTreeMap;
//! use laurent::{make, Rational};
//! use smp::{stationary_distribution, Mode, PerturbedSmp};
//!
//! let r = |n: i64| Rational::from_integer(n.into());
//! let mut p = BTreeMap::new();
//! p.insert((1, 2), make(0, vec![r(1), r(0)], true, None).unwrap());
//! p.insert((2, 1), make(1, vec![r(1), r(0)], true, None).unwrap());
//! p.insert((2, 2), make(0, vec![r(1), r(-1)], true, None).unwrap());
//! let model = PerturbedSmp::discrete_time(2, Rational::new(1.into(), 10.into()), Mode::Plain, p).unwrap();
//!
//! let report = stationary_distribution(&model, false).unwrap();
//! // π_2(ε) = 1 − ε + O(ε²): the chain sits in state 2 almost always.
//! assert_eq!(report.state(2).unwrap().pi.coeffs(), &[r(1), r(-1)]);
//! ```

pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod stationary;
pub mod validate;

pub use error::SmpError;
pub use model::{row_sum, Mode, PerturbedSmp, State};
pub use reduction::{
    best_order_hitting, default_order, hitting_expectation, hitting_expectation_trace, non_absorption, pair_hitting,
    reduce_sequence, reduce_state, PairHitting, ReductionTrace,
};
pub use stationary::{sojourn, stationary_distribution, StateStationary, StationaryReport, StationaryViolation};
pub use validate::{row_sum_class, row_sum_diagnostic, validate, Condition, RowSumClass, ValidationReport, Violation};
