//! Exact rational helpers: parsing, formatting and outward-rounded powers.
//!
//! Remainder-bound constants are exact rationals, but powers `ε^δ` with a
//! fractional `δ` are generally irrational.  They are enclosed by dyadic
//! rationals `M·2^E` whose correctness is verified with exact big-integer
//! arithmetic, so every certificate derived from them stays sound.  Results
//! are also compacted to a 64-bit mantissa whenever exact values would grow
//! unwieldy, always in the direction that keeps the certificate valid.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Mantissa width used when compacting rationals.
const MANTISSA_BITS: u64 = 64;

/// Exact values whose numerator and denominator together exceed this many bits
/// are compacted by [`round_up`] / [`round_down`].
const COMPACT_THRESHOLD_BITS: u64 = 160;

/// Fractional exponents with denominators above this are moved onto the
/// `1/MAX_ROOT_DEGREE` grid (in the safe direction) before root extraction.
const MAX_ROOT_DEGREE: u64 = 64;

/// Error returned when a string is not a valid rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is not a rational number (expected p/q, an integer or a decimal)", self.input)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p/q"`, integers, decimals (`"0.25"`) and scientific notation (`"1e-3"`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let fail = || ParseRationalError { input: text.to_string() };
    let s = text.trim();
    if s.is_empty() {
        return Err(fail());
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let numer = BigInt::from_str(numer.trim()).map_err(|_| fail())?;
        let denom = BigInt::from_str(denom.trim()).map_err(|_| fail())?;
        if denom.is_zero() {
            return Err(fail());
        }
        return Ok(BigRational::new(numer, denom));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp = i64::from_str(&s[pos + 1..]).map_err(|_| fail())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(fail());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| fail())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Canonical text form of a rational: `"p/q"`, or `"p"` for integers.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Approximate base-2 logarithm of a positive big integer.
fn log2_int(value: &BigInt) -> f64 {
    let bits = value.bits();
    if bits <= 64 {
        return value.to_f64().unwrap_or(f64::MAX).log2();
    }
    let shift = bits - 64;
    let top: BigInt = value >> shift;
    top.to_f64().unwrap_or(f64::MAX).log2() + shift as f64
}

/// Approximate base-2 logarithm of a positive rational.
pub fn log2_approx(value: &BigRational) -> f64 {
    debug_assert!(value.is_positive());
    log2_int(value.numer()) - log2_int(value.denom())
}

/// `2^exp` as an exact rational.
fn pow2(exp: i64) -> BigRational {
    let two = BigInt::from(2u32);
    if exp >= 0 {
        BigRational::from_integer(num_traits::pow(two, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(two, (-exp) as usize))
    }
}

/// Dyadic enclosure of a positive rational with a 64-bit mantissa.
fn dyadic_positive(value: &BigRational, up: bool) -> BigRational {
    let numer = value.numer();
    let denom = value.denom();
    let exp = numer.bits() as i64 - denom.bits() as i64 - MANTISSA_BITS as i64;
    // value / 2^exp = numer * 2^-exp / denom
    let (n, d) =
        if exp >= 0 { (numer.clone(), denom << (exp as u64)) } else { (numer << ((-exp) as u64), denom.clone()) };
    let (q, r) = n.div_rem(&d);
    let mantissa = if up && !r.is_zero() { q + 1u32 } else { q };
    BigRational::from_integer(mantissa) * pow2(exp)
}

fn compact(value: &BigRational, up: bool) -> BigRational {
    if value.is_zero() || value.numer().bits() + value.denom().bits() <= COMPACT_THRESHOLD_BITS {
        return value.clone();
    }
    if value.is_positive() {
        dyadic_positive(value, up)
    } else {
        -dyadic_positive(&-value, !up)
    }
}

/// Returns a rational `≥ value`, compacted to a 64-bit mantissa when the exact
/// value has grown large; small values are returned unchanged.
pub fn round_up(value: &BigRational) -> BigRational {
    compact(value, true)
}

/// Returns a rational `≤ value`, compacted to a 64-bit mantissa when the exact
/// value has grown large; small values are returned unchanged.
pub fn round_down(value: &BigRational) -> BigRational {
    compact(value, false)
}

/// Upper bound on `base^exponent` for `base > 0` and any rational exponent.
///
/// # Panics
/// Panics if `base` is not positive.
pub fn pow_up(base: &BigRational, exponent: &BigRational) -> BigRational {
    pow_bound(base, exponent, true)
}

/// Lower bound on `base^exponent` for `base > 0` and any rational exponent.
/// The result is always positive.
///
/// # Panics
/// Panics if `base` is not positive.
pub fn pow_down(base: &BigRational, exponent: &BigRational) -> BigRational {
    pow_bound(base, exponent, false)
}

fn pow_bound(base: &BigRational, exponent: &BigRational, up: bool) -> BigRational {
    assert!(base.is_positive(), "pow_up/pow_down need a positive base, got {base}");
    if exponent.is_zero() || base.is_one() {
        return BigRational::one();
    }
    if exponent.is_negative() {
        // b^-x = 1 / b^x: an upper bound needs a lower bound of the denominator.
        let inner = pow_bound(base, &-exponent, !up);
        return compact(&inner.recip(), up);
    }

    // base^x is increasing in base for x > 0, so compact the base outward.
    let base = compact(base, up);
    let base_above_one = base > BigRational::one();

    let mut exponent = exponent.clone();
    if exponent.denom() > &BigInt::from(MAX_ROOT_DEGREE) {
        // Snap onto the 1/64 grid: for base > 1 a larger exponent gives a
        // larger power, for base < 1 a smaller one.
        let scaled = &exponent * BigRational::from_integer(BigInt::from(MAX_ROOT_DEGREE));
        let snapped = if up == base_above_one { scaled.ceil() } else { scaled.floor() };
        exponent = snapped / BigRational::from_integer(BigInt::from(MAX_ROOT_DEGREE));
    }

    let whole = exponent.floor();
    let fraction = &exponent - &whole;
    let whole = whole.to_integer().to_usize().expect("exponent too large for pow_up/pow_down");

    let mut result = num_traits::pow(base.clone(), whole);
    result = compact(&result, up);
    if !fraction.is_zero() {
        let root = fractional_power(&base, &fraction, up);
        result = compact(&(result * root), up);
    }
    result
}

/// Encloses `base^(p/q)` with `0 < p/q < 1` by a dyadic `M·2^E`.
fn fractional_power(base: &BigRational, fraction: &BigRational, up: bool) -> BigRational {
    let p = fraction.numer().to_u32().expect("small fractional numerator");
    let q = fraction.denom().to_u32().expect("small fractional denominator");

    let estimate = log2_approx(base) * f64::from(p) / f64::from(q);
    let exp = estimate.floor() as i64 - 61;
    let mantissa_f = (estimate - exp as f64).exp2();
    let mut mantissa = BigInt::from(mantissa_f as u64);
    let mut step: BigInt = (&mantissa >> 40u32).max(BigInt::one());

    // Exact check of candidate M·2^exp against base^(p/q):
    // (M·2^exp)^q vs (a/c)^p  ⇔  M^q·2^(exp·q)·c^p vs a^p.
    let a_p = num_traits::pow(base.numer().clone(), p as usize);
    let c_p = num_traits::pow(base.denom().clone(), p as usize);
    let shift = exp * i64::from(q);
    let satisfies = |m: &BigInt| -> bool {
        if m.sign() != Sign::Plus {
            return !up;
        }
        let mut lhs = num_traits::pow(m.clone(), q as usize) * &c_p;
        let mut rhs = a_p.clone();
        if shift >= 0 {
            lhs <<= shift as u64;
        } else {
            rhs <<= (-shift) as u64;
        }
        if up {
            lhs >= rhs
        } else {
            lhs <= rhs
        }
    };
    while !satisfies(&mantissa) {
        if up {
            mantissa += &step;
        } else {
            mantissa -= &step;
        }
        step <<= 1u32;
    }
    if !up && mantissa.sign() != Sign::Plus {
        // Degenerate underflow guard: fall back to the trivially valid bound
        // min(1, base) ≤ base^(p/q) for 0 < p/q < 1.
        return base.clone().min(BigRational::one());
    }
    BigRational::from_integer(mantissa) * pow2(exp)
}
