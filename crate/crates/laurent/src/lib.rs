//! Exact arithmetic on Laurent asymptotic expansions with certified remainder
//! bounds.
//!
//! A Laurent asymptotic expansion of a function `A(ε)` as `ε → 0` is
//!
//! ```text
//! A(ε) = a_h ε^h + a_{h+1} ε^{h+1} + … + a_k ε^k + o(ε^k),
//! ```
//!
//! where `h ≤ k` may be negative.  When the remainder is additionally known to
//! satisfy `|o(ε^k)| ≤ G·ε^{k+δ}` for `0 < ε ≤ ε_max`, the expansion carries a
//! [`RemainderBound`] `(δ, G, ε_max)`.
//!
//! The crate provides the closed set of operations needed to push such
//! expansions through rational computations — scaling, sums, products,
//! reciprocals, quotients and merging of two representations of the same
//! function — each propagating both the coefficients and, when available,
//! the remainder bound.
//!
//! Coefficients are exact: the expansion type is generic over any
//! [`Coefficient`] (an exact ordered field such as [`BigRational`] or
//! [`Rational64`](num_rational::Rational64)); bound constants are always
//! arbitrary-precision rationals with outward rounding.
//!
//! ```
//! use laurent::{div, make, Rational};
//!
//! let r = |n: i64| Rational::from_integer(n.into());
//! // (1 + ε) / (1 − ε) = 1 + 2ε + o(ε)
//! let a = make(0, vec![r(1), r(1)], true, None).unwrap();
//! let b = make(0, vec![r(1), r(-1)], true, None).unwrap();
//! let q = div(&a, &b).unwrap();
//! assert_eq!(q.coeffs(), &[r(1), r(2)]);
//! ```

mod bound;
mod error;
mod expansion;
mod ops;
pub mod rational;
mod scalar;
pub mod serial;

pub use num_rational::BigRational;

pub use bound::{MonomialSum, RemainderBound};
pub use error::ExpansionError;
pub use expansion::LaurentExpansion;
pub use ops::{
    add, constant, constant_on, div, downgrade_delta, evaluate, make, merge, mul, normalize_bound, prod_many,
    reciprocal, scale, sub, sum_many,
};
pub use rational::{parse_rational, pow_down, pow_up, round_down, round_up};
pub use scalar::Coefficient;

/// Arbitrary-precision rational, the default coefficient type.
pub type Rational = BigRational;

/// Expansion with arbitrary-precision rational coefficients.
pub type Expansion = LaurentExpansion<Rational>;

/// Expansion with machine-word rational coefficients (panics on overflow).
pub type Expansion64 = LaurentExpansion<num_rational::Rational64>;
