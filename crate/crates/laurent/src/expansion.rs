//! The Laurent asymptotic expansion type.

use std::fmt;

use num_rational::BigRational;

use crate::bound::RemainderBound;
use crate::error::ExpansionError;
use crate::scalar::Coefficient;

/// A Laurent asymptotic expansion
/// `A(ε) = a_h ε^h + … + a_k ε^k + o(ε^k)` with exact coefficients.
///
/// The expansion optionally carries a [`RemainderBound`] certifying
/// `|o(ε^k)| ≤ G·ε^{k+δ}` for `0 < ε ≤ ε_max`.  A *pivotal* expansion is one
/// whose leading coefficient `a_h` is known to be nonzero.
///
/// Values are immutable; every operation returns a new expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentExpansion<T: Coefficient = BigRational> {
    h: i64,
    coeffs: Vec<T>,
    pivotal: bool,
    bound: Option<RemainderBound>,
}

impl<T: Coefficient> LaurentExpansion<T> {
    /// Builds a validated expansion with `k = h + coeffs.len() − 1`.
    pub fn new(h: i64, coeffs: Vec<T>, pivotal: bool, bound: Option<RemainderBound>) -> Result<Self, ExpansionError> {
        if coeffs.is_empty() {
            return Err(ExpansionError::EmptyCoefficients);
        }
        if pivotal && coeffs[0].is_zero() {
            return Err(ExpansionError::PivotalZeroLead);
        }
        Ok(Self { h, coeffs, pivotal, bound })
    }

    /// Internal constructor for operation results: the pivotal flag is set
    /// exactly when the leading coefficient is nonzero.
    pub(crate) fn from_parts(h: i64, coeffs: Vec<T>, bound: Option<RemainderBound>) -> Self {
        debug_assert!(!coeffs.is_empty());
        let pivotal = !coeffs[0].is_zero();
        Self { h, coeffs, pivotal, bound }
    }

    /// Lowest retained power `h`.
    pub fn h(&self) -> i64 {
        self.h
    }

    /// Highest retained power `k`.
    pub fn k(&self) -> i64 {
        self.h + self.coeffs.len() as i64 - 1
    }

    /// Window length `w = k − h`.
    pub fn width(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Retained coefficients `a_h, …, a_k`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient `a_l` of `ε^l`: zero below the window, `None` above it.
    pub fn coeff(&self, l: i64) -> Option<T> {
        if l < self.h {
            Some(T::zero())
        } else {
            self.coeffs.get((l - self.h) as usize).cloned()
        }
    }

    /// Coefficient `a_l` for `h ≤ l ≤ k`, zero below the window.
    ///
    /// # Panics
    /// Panics if `l > k`.
    pub(crate) fn at(&self, l: i64) -> T {
        self.coeff(l).unwrap_or_else(|| panic!("order {l} lies above the window ({}, {})", self.h, self.k()))
    }

    /// Leading coefficient `a_h`.
    pub fn lead(&self) -> &T {
        &self.coeffs[0]
    }

    /// Whether the leading coefficient is known to be nonzero.
    pub fn is_pivotal(&self) -> bool {
        self.pivotal
    }

    /// Remainder certificate, if any.
    pub fn bound(&self) -> Option<&RemainderBound> {
        self.bound.as_ref()
    }

    /// Same expansion with the given certificate.
    pub fn with_bound(mut self, bound: Option<RemainderBound>) -> Self {
        self.bound = bound;
        self
    }

    /// Same expansion without a certificate.
    pub fn without_bound(self) -> Self {
        self.with_bound(None)
    }

    /// Same coefficients and certificate, with the pivotal flag set from the lead.
    pub fn with_decided_pivot(mut self) -> Self {
        self.pivotal = !self.coeffs[0].is_zero();
        self
    }

    /// True when coefficients, window and pivotality agree (bounds ignored).
    pub fn same_terms(&self, other: &Self) -> bool {
        self.h == other.h && self.coeffs == other.coeffs && self.pivotal == other.pivotal
    }

    /// Exact partial sum `Σ_{l=h}^{k} a_l ε^l`.
    pub fn evaluate(&self, eps: &T) -> Result<T, ExpansionError> {
        if !eps.is_positive() {
            return Err(ExpansionError::NonpositiveEpsilon(eps.to_string()));
        }
        // Horner scheme on the window, then shift by ε^h.
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * eps.clone() + c.clone();
        }
        let shift = if self.h >= 0 {
            num_traits::pow(eps.clone(), self.h as usize)
        } else {
            T::one() / num_traits::pow(eps.clone(), (-self.h) as usize)
        };
        Ok(acc * shift)
    }

    /// Converts the coefficients into another exact scalar type.
    pub fn convert<U: Coefficient>(&self) -> Option<LaurentExpansion<U>> {
        let coeffs = self.coeffs.iter().map(|c| U::from_rational(&c.to_rational())).collect::<Option<Vec<U>>>()?;
        Some(LaurentExpansion { h: self.h, coeffs, pivotal: self.pivotal, bound: self.bound.clone() })
    }

    /// Human-readable series such as `eps^-1 + 1 + o(1)`.
    pub fn to_series_string(&self) -> String {
        let mut out = String::new();
        for (offset, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = self.h + offset as i64;
            let negative = c.is_negative();
            let magnitude = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let monomial = match power {
                0 => String::new(),
                1 => "eps".to_string(),
                p => format!("eps^{p}"),
            };
            if monomial.is_empty() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{magnitude}*{monomial}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        let remainder = match self.k() {
            0 => "o(1)".to_string(),
            1 => "o(eps)".to_string(),
            k => format!("o(eps^{k})"),
        };
        format!("{out} + {remainder}")
    }
}

impl<T: Coefficient> fmt::Display for LaurentExpansion<T> {
    /// Compact form `(h,k):[a_h, …, a_k]`, followed by the bound if present.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):[", self.h, self.k())?;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")?;
        if let Some(bound) = &self.bound {
            write!(f, " {bound}")?;
        }
        Ok(())
    }
}
