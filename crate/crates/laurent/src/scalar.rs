//! Exact scalar types usable as expansion coefficients.
//!
//! Coefficients must support exact field arithmetic, because equality of
//! expansions (and therefore every algebraic identity the crate relies on)
//! has to be decidable.  Floating-point types are deliberately not
//! implemented.  Remainder-bound constants are always arbitrary-precision
//! rationals, so every coefficient type converts losslessly into one.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed};

/// An exact ordered field element that can serve as an expansion coefficient.
pub trait Coefficient: Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// Lossless conversion into an arbitrary-precision rational.
    fn to_rational(&self) -> BigRational;

    /// Conversion from an arbitrary-precision rational, if representable.
    fn from_rational(value: &BigRational) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }
}

impl Coefficient for Rational64 {
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        use num_traits::ToPrimitive;
        let numer = value.numer().to_i64()?;
        let denom = value.denom().to_i64()?;
        Some(Rational64::new(numer, denom))
    }
}
