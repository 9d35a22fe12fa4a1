//! Remainder bounds and the monomial sums used to evaluate them.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ExpansionError;
use crate::rational::{pow_up, round_up};

/// Certificate `|o(ε^k)| ≤ G·ε^{k+δ}` valid for `0 < ε ≤ eps_max`.
///
/// `G = 0` is accepted and means the remainder is identically zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RemainderBound {
    delta: BigRational,
    g: BigRational,
    eps_max: BigRational,
}

impl RemainderBound {
    /// Validates and builds a bound; requires `0 < delta ≤ 1`, `g ≥ 0`, `eps_max > 0`.
    pub fn new(delta: BigRational, g: BigRational, eps_max: BigRational) -> Result<Self, ExpansionError> {
        if !delta.is_positive() || delta > BigRational::one() {
            return Err(ExpansionError::InvalidBound(format!("delta = {delta} is outside (0, 1]")));
        }
        if g.is_negative() {
            return Err(ExpansionError::InvalidBound(format!("G = {g} is negative")));
        }
        if !eps_max.is_positive() {
            return Err(ExpansionError::InvalidBound(format!("eps_max = {eps_max} is not positive")));
        }
        Ok(Self { delta, g, eps_max })
    }

    /// The bound `(δ = 1, G = 0, eps_max)` of an identically vanishing remainder.
    pub fn exact(eps_max: BigRational) -> Self {
        Self::new(BigRational::one(), BigRational::zero(), eps_max).expect("exact bound is valid")
    }

    /// Exponent gap `δ ∈ (0, 1]`.
    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    /// Bound constant `G ≥ 0`.
    pub fn g(&self) -> &BigRational {
        &self.g
    }

    /// Upper end `ε_max` of the validity range.
    pub fn eps_max(&self) -> &BigRational {
        &self.eps_max
    }

    /// Value of the certified remainder bound `G·ε^{k+δ}` at `eps`, rounded up.
    pub fn remainder_at(&self, k: i64, eps: &BigRational) -> BigRational {
        if self.g.is_zero() {
            return BigRational::zero();
        }
        let exponent = BigRational::from_integer(k.into()) + &self.delta;
        round_up(&(&self.g * pow_up(eps, &exponent)))
    }
}

impl fmt::Display for RemainderBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(delta={}, G={}, eps_max={})", self.delta, self.g, self.eps_max)
    }
}

/// A finite sum `Σ c·ε^x` of non-negative coefficients over rational exponents.
///
/// Bound constants are assembled symbolically as such sums and evaluated at
/// the end, so contributions from different inputs combine exactly and the
/// final constant does not depend on the order in which operands were given.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonomialSum {
    terms: BTreeMap<BigRational, BigRational>,
}

impl MonomialSum {
    /// The empty sum.
    pub fn new() -> Self {
        Self::default()
    }

    /// The single monomial `coefficient·ε^exponent`.
    pub fn monomial(coefficient: BigRational, exponent: BigRational) -> Self {
        let mut sum = Self::new();
        sum.add_term(coefficient, exponent);
        sum
    }

    /// Adds `coefficient·ε^exponent`; zero coefficients are dropped.
    pub fn add_term(&mut self, coefficient: BigRational, exponent: BigRational) {
        debug_assert!(!coefficient.is_negative(), "monomial sums hold non-negative terms");
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert_with(BigRational::zero);
        *slot += coefficient;
    }

    /// Adds every term of `other`.
    pub fn add_sum(&mut self, other: &MonomialSum) {
        for (exponent, coefficient) in &other.terms {
            self.add_term(coefficient.clone(), exponent.clone());
        }
    }

    /// Multiplies every term by `factor·ε^shift`.
    pub fn scaled(&self, factor: &BigRational, shift: &BigRational) -> MonomialSum {
        let mut out = MonomialSum::new();
        for (exponent, coefficient) in &self.terms {
            out.add_term(coefficient * factor, exponent + shift);
        }
        out
    }

    /// Product of two sums.
    pub fn product(&self, other: &MonomialSum) -> MonomialSum {
        let mut out = MonomialSum::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ca * cb, ea + eb);
            }
        }
        out
    }

    /// Terms as `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    /// True when no term is present.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent present, if any.
    pub fn min_exponent(&self) -> Option<&BigRational> {
        self.terms.keys().next()
    }

    /// Upper bound on the sum at `eps > 0`.
    ///
    /// Every exponent must be non-negative: the sum is then non-decreasing in
    /// `ε`, so its value at `eps` bounds it on the whole interval `(0, eps]`.
    ///
    /// # Panics
    /// Panics if a negative exponent is present.
    pub fn evaluate_up(&self, eps: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (exponent, coefficient) in &self.terms {
            assert!(!exponent.is_negative(), "bound assembly produced a negative exponent {exponent}");
            total += coefficient * pow_up(eps, exponent);
        }
        round_up(&total)
    }
}
