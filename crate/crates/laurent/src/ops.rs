//! Operational rules for Laurent asymptotic expansions.
//!
//! Every operation computes the coefficients of its result first and then,
//! when all operands carry remainder bounds, assembles the bound constant of
//! the result as a [`MonomialSum`] evaluated at the result's `ε_max`.  A
//! result carries a bound only if every operand does.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bound::{MonomialSum, RemainderBound};
use crate::error::ExpansionError;
use crate::expansion::LaurentExpansion;
use crate::rational::{pow_down, pow_up, round_down, round_up};
use crate::scalar::Coefficient;

fn int(value: i64) -> BigRational {
    BigRational::from_integer(value.into())
}

fn abs_r<T: Coefficient>(value: &T) -> BigRational {
    value.to_rational().abs()
}

fn min_r(a: &BigRational, b: &BigRational) -> BigRational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Bounds of every operand, or `None` if any operand lacks one.
fn all_bounds<'a, T: Coefficient>(
    items: impl IntoIterator<Item = &'a LaurentExpansion<T>>,
) -> Option<Vec<&'a RemainderBound>> {
    items.into_iter().map(|e| e.bound()).collect()
}

/// Validated construction; see [`LaurentExpansion::new`].
pub fn make<T: Coefficient>(
    h: i64,
    coeffs: Vec<T>,
    pivotal: bool,
    bound: Option<RemainderBound>,
) -> Result<LaurentExpansion<T>, ExpansionError> {
    LaurentExpansion::new(h, coeffs, pivotal, bound)
}

/// Rewrites a bound with arbitrary `δ > 0` into the equivalent form with
/// `δ′ ∈ (0, 1]`, padding the window with zero coefficients:
/// `k′ = k + ⌊δ⌋ − I(δ ∈ ℤ)`, `δ′ = δ − ⌊δ⌋ + I(δ ∈ ℤ)`.
pub fn normalize_bound<T: Coefficient>(
    h: i64,
    coeffs: Vec<T>,
    delta: BigRational,
    g: BigRational,
    eps_max: BigRational,
) -> Result<LaurentExpansion<T>, ExpansionError> {
    if !delta.is_positive() {
        return Err(ExpansionError::InvalidBound(format!("delta = {delta} is not positive")));
    }
    if coeffs.is_empty() {
        return Err(ExpansionError::EmptyCoefficients);
    }
    let floor = delta.floor();
    let integral = floor == delta;
    let mut extra: i64 = i64::try_from(floor.to_integer()).expect("delta fits in i64");
    let mut reduced = &delta - &floor;
    if integral {
        extra -= 1;
        reduced += BigRational::one();
    }
    let mut coeffs = coeffs;
    coeffs.extend((0..extra).map(|_| T::zero()));
    let bound = RemainderBound::new(reduced, g, eps_max)?;
    let pivotal = !coeffs[0].is_zero();
    LaurentExpansion::new(h, coeffs, pivotal, Some(bound))
}

/// Combines two representations of the same function into the most
/// informative one: `h = h′ ∨ h″`, `k = k′ ∨ k″`.
///
/// Coefficients of the representation with the lower `h` must vanish below
/// the larger `h`, and both must agree on their common window.  The bound of
/// the representation with the larger `k` is kept; on equal `k` the larger
/// `δ` wins, and on equal `δ` the result takes `(δ, G′ ∧ G″, ε′ ∧ ε″)`.
pub fn merge<T: Coefficient>(
    a: &LaurentExpansion<T>,
    b: &LaurentExpansion<T>,
) -> Result<LaurentExpansion<T>, ExpansionError> {
    let h = a.h().max(b.h());
    let k = a.k().max(b.k());
    let common_top = a.k().min(b.k());
    for l in a.h().min(b.h())..=common_top {
        let left = a.at(l);
        let right = b.at(l);
        let conflict = if l < h { !left.is_zero() || !right.is_zero() } else { left != right };
        if conflict {
            return Err(ExpansionError::InconsistentRepresentations {
                order: l,
                left: left.to_string(),
                right: right.to_string(),
            });
        }
    }
    let longer = if a.k() >= b.k() { a } else { b };
    let coeffs: Vec<T> = (h..=k).map(|l| longer.at(l)).collect();

    let bound = if a.k() != b.k() {
        longer.bound().cloned()
    } else {
        match (a.bound(), b.bound()) {
            (Some(x), Some(y)) => Some(if x.delta() > y.delta() {
                x.clone()
            } else if y.delta() > x.delta() {
                y.clone()
            } else {
                RemainderBound::new(x.delta().clone(), min_r(x.g(), y.g()), min_r(x.eps_max(), y.eps_max()))?
            }),
            (Some(x), None) => Some(x.clone()),
            (None, Some(y)) => Some(y.clone()),
            (None, None) => None,
        }
    };
    Ok(LaurentExpansion::from_parts(h, coeffs, bound))
}

/// `c·A`, with bound `(δ_A, |c|·G_A, ε_A)`.
pub fn scale<T: Coefficient>(c: &T, a: &LaurentExpansion<T>) -> LaurentExpansion<T> {
    let coeffs = a.coeffs().iter().map(|x| c.clone() * x.clone()).collect();
    let bound = a.bound().map(|bd| {
        RemainderBound::new(bd.delta().clone(), abs_r(c) * bd.g(), bd.eps_max().clone())
            .expect("scaled bound stays valid")
    });
    LaurentExpansion::from_parts(a.h(), coeffs, bound)
}

/// `A + B`; equivalent to `sum_many(&[A, B])`.
pub fn add<T: Coefficient>(a: &LaurentExpansion<T>, b: &LaurentExpansion<T>) -> LaurentExpansion<T> {
    sum_many(&[a.clone(), b.clone()]).expect("two operands")
}

/// `A − B`.
pub fn sub<T: Coefficient>(a: &LaurentExpansion<T>, b: &LaurentExpansion<T>) -> LaurentExpansion<T> {
    add(a, &scale(&-T::one(), b))
}

/// Sum of a nonempty sequence: `h = min h_i`, `k = min k_i`.
///
/// The bound is the one-shot form
/// `G = Σ_i (G_i ε^{k_i+δ_i−k−δ} + Σ_{k<j≤k_i} |a_ij| ε^{j−k−δ})`, where
/// `δ` is the smallest `δ_i` among the operands attaining `k_i = k`; it does
/// not depend on the order of the operands.
pub fn sum_many<T: Coefficient>(terms: &[LaurentExpansion<T>]) -> Result<LaurentExpansion<T>, ExpansionError> {
    if terms.is_empty() {
        return Err(ExpansionError::EmptySequence);
    }
    let h = terms.iter().map(|t| t.h()).min().expect("nonempty");
    let k = terms.iter().map(|t| t.k()).min().expect("nonempty");
    let coeffs: Vec<T> = (h..=k).map(|l| terms.iter().fold(T::zero(), |acc, t| acc + t.at(l))).collect();

    let bound = all_bounds(terms).map(|bounds| {
        let delta = terms
            .iter()
            .zip(&bounds)
            .filter(|(t, _)| t.k() == k)
            .map(|(_, b)| b.delta().clone())
            .min()
            .expect("some operand attains k");
        let eps = bounds.iter().map(|b| b.eps_max().clone()).min().expect("nonempty");
        let base = int(k) + &delta;
        let mut g = MonomialSum::new();
        for (t, b) in terms.iter().zip(&bounds) {
            g.add_term(b.g().clone(), int(t.k()) + b.delta() - &base);
            for j in (k + 1)..=t.k() {
                g.add_term(abs_r(&t.at(j)), int(j) - &base);
            }
        }
        RemainderBound::new(delta, g.evaluate_up(&eps), eps).expect("sum bound is valid")
    });
    Ok(LaurentExpansion::from_parts(h, coeffs, bound))
}

/// Truncated product coefficients `c_r = Σ_{i≤r} a_i b_{r−i}`, `r ≤ len − 1`.
fn convolve<T: Coefficient>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    (0..len)
        .map(|r| {
            (0..=r).fold(T::zero(), |acc, i| match (a.get(i), b.get(r - i)) {
                (Some(x), Some(y)) => acc + x.clone() * y.clone(),
                _ => acc,
            })
        })
        .collect()
}

/// `Σ_l |a_l| ε^l` over the window of `a`.
fn abs_terms<T: Coefficient>(a: &LaurentExpansion<T>) -> MonomialSum {
    let mut sum = MonomialSum::new();
    for (offset, c) in a.coeffs().iter().enumerate() {
        sum.add_term(abs_r(c), int(a.h() + offset as i64));
    }
    sum
}

/// `A·B`: `h = h_A + h_B`, `k = (h_A + k_B) ∧ (h_B + k_A)`.
///
/// Bound constant (all powers evaluated at `ε = ε_A ∧ ε_B`):
/// `Σ_{i+j>k} |a_i||b_j| ε^{i+j−k−δ} + G_A Σ_j |b_j| ε^{j+k_A+δ_A−k−δ}
///  + G_B Σ_i |a_i| ε^{i+k_B+δ_B−k−δ} + G_A G_B ε^{k_A+k_B+δ_A+δ_B−k−δ}`,
/// with `δ = δ_A` when `k = h_B + k_A < h_A + k_B`, `δ = δ_B` in the mirrored
/// case and `δ_A ∧ δ_B` on a tie.
pub fn mul<T: Coefficient>(a: &LaurentExpansion<T>, b: &LaurentExpansion<T>) -> LaurentExpansion<T> {
    let h = a.h() + b.h();
    let from_a = b.h() + a.k();
    let from_b = a.h() + b.k();
    let k = from_a.min(from_b);
    let coeffs = convolve(a.coeffs(), b.coeffs(), (k - h + 1) as usize);

    let bound = match (a.bound(), b.bound()) {
        (Some(ba), Some(bb)) => {
            let delta = if from_a < from_b {
                ba.delta().clone()
            } else if from_b < from_a {
                bb.delta().clone()
            } else {
                min_r(ba.delta(), bb.delta())
            };
            let eps = min_r(ba.eps_max(), bb.eps_max());
            let base = int(k) + &delta;
            let mut g = MonomialSum::new();
            for i in a.h()..=a.k() {
                for j in b.h()..=b.k() {
                    if i + j > k {
                        g.add_term(abs_r(&a.at(i)) * abs_r(&b.at(j)), int(i + j) - &base);
                    }
                }
            }
            g.add_sum(&abs_terms(b).scaled(ba.g(), &(int(a.k()) + ba.delta() - &base)));
            g.add_sum(&abs_terms(a).scaled(bb.g(), &(int(b.k()) + bb.delta() - &base)));
            g.add_term(ba.g() * bb.g(), int(a.k() + b.k()) + ba.delta() + bb.delta() - &base);
            Some(RemainderBound::new(delta, g.evaluate_up(&eps), eps).expect("product bound is valid"))
        }
        _ => None,
    };
    LaurentExpansion::from_parts(h, coeffs, bound)
}

/// Product of a nonempty sequence: `h = Σ h_i`,
/// `k = min_l (k_l + Σ_{r≠l} h_r)`, `δ` the smallest `δ_l` over the
/// minimising `l`.
///
/// The bound is the one-shot form
/// `Σ_{Σl_i>k} Π|a_{i,l_i}| ε^{Σl_i−k−δ} + Σ_j [Π_{i≠j} (Σ_l |a_il| ε^l + G_i ε^{k_i+δ_i})] G_j ε^{k_j+δ_j−k−δ}`,
/// which does not depend on the order of the factors.
pub fn prod_many<T: Coefficient>(factors: &[LaurentExpansion<T>]) -> Result<LaurentExpansion<T>, ExpansionError> {
    if factors.is_empty() {
        return Err(ExpansionError::EmptySequence);
    }
    let h: i64 = factors.iter().map(|f| f.h()).sum();
    let reach = |f: &LaurentExpansion<T>| h + f.width();
    let k = factors.iter().map(reach).min().expect("nonempty");
    let len = (k - h + 1) as usize;
    let mut coeffs = vec![T::one()];
    for f in factors {
        coeffs = convolve(&coeffs, f.coeffs(), len);
    }

    let bound = all_bounds(factors).map(|bounds| {
        let delta = factors
            .iter()
            .zip(&bounds)
            .filter(|(f, _)| reach(f) == k)
            .map(|(_, b)| b.delta().clone())
            .min()
            .expect("some factor attains k");
        let eps = bounds.iter().map(|b| b.eps_max().clone()).min().expect("nonempty");
        let base = int(k) + &delta;
        let mut g = MonomialSum::new();

        // Full product of |coefficients|, keeping the powers beyond k.
        let mut full = MonomialSum::monomial(BigRational::one(), BigRational::zero());
        for f in factors {
            full = full.product(&abs_terms(f));
        }
        let cutoff = int(k);
        let neg_base = -base.clone();
        let mut tail = MonomialSum::new();
        for (exponent, coefficient) in full_terms(&full) {
            if exponent > cutoff {
                tail.add_term(coefficient, exponent);
            }
        }
        g.add_sum(&tail.scaled(&BigRational::one(), &neg_base));

        // Remainder contributions, one per factor.
        let envelopes: Vec<MonomialSum> = factors
            .iter()
            .zip(&bounds)
            .map(|(f, b)| {
                let mut env = abs_terms(f);
                env.add_term(b.g().clone(), int(f.k()) + b.delta());
                env
            })
            .collect();
        for (j, (f, b)) in factors.iter().zip(&bounds).enumerate() {
            if b.g().is_zero() {
                continue;
            }
            let mut others = MonomialSum::monomial(BigRational::one(), BigRational::zero());
            for (i, env) in envelopes.iter().enumerate() {
                if i != j {
                    others = others.product(env);
                }
            }
            g.add_sum(&others.scaled(b.g(), &(int(f.k()) + b.delta() - &base)));
        }
        RemainderBound::new(delta, g.evaluate_up(&eps), eps).expect("product bound is valid")
    });
    Ok(LaurentExpansion::from_parts(h, coeffs, bound))
}

fn full_terms(sum: &MonomialSum) -> Vec<(BigRational, BigRational)> {
    sum.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
}

/// Radius `(|b_h|/2) / (Σ_{h<i≤k} |b_i| ε^{i−h−1} + G ε^{k+δ−h−1})` (or
/// `(|b_h| / 2G)^{1/δ}` when `h = k`) below which `|B(ε)| ≥ |b_h| ε^h / 2`,
/// rounded down.  `None` stands for an unlimited radius.
fn lower_bound_radius<T: Coefficient>(b: &LaurentExpansion<T>, bound: &RemainderBound) -> Option<BigRational> {
    let half_lead = abs_r(b.lead()) / int(2);
    let eps = bound.eps_max();
    if b.h() == b.k() {
        if bound.g().is_zero() {
            return None;
        }
        let ratio = &half_lead / bound.g();
        return Some(round_down(&pow_down(&ratio, &bound.delta().recip())));
    }
    let mut denom = BigRational::zero();
    for i in (b.h() + 1)..=b.k() {
        let c = abs_r(&b.at(i));
        if !c.is_zero() {
            denom += c * pow_up(eps, &int(i - b.h() - 1));
        }
    }
    if !bound.g().is_zero() {
        denom += bound.g() * pow_up(eps, &(int(b.k() - b.h() - 1) + bound.delta()));
    }
    if denom.is_zero() {
        return None;
    }
    Some(round_down(&(half_lead / round_up(&denom))))
}

/// `1/B` for pivotal `B`: `h = −h_B`, `k = k_B − 2h_B`, coefficients by
/// `c_{h} = 1/b_{h_B}`, `c_{h+r} = −b_{h_B}^{-1} Σ_{1≤i≤r} b_{h_B+i} c_{h+r−i}`.
///
/// Bound: `δ = δ_B`, `ε = ε_B ∧ radius(B)` and
/// `G = (|b_{h_B}|/2)^{-1} (Σ_{i+j>k_B−h_B} |b_i||c_j| ε^{i+j−k_B+h_B−δ_B}
///  + G_B Σ_j |c_j| ε^{j+h_B})`.
pub fn reciprocal<T: Coefficient>(b: &LaurentExpansion<T>) -> Result<LaurentExpansion<T>, ExpansionError> {
    if !b.is_pivotal() {
        return Err(ExpansionError::NotPivotal);
    }
    let lead = b.lead().clone();
    let hc = -b.h();
    let width = b.coeffs().len();
    let mut coeffs: Vec<T> = Vec::with_capacity(width);
    coeffs.push(T::one() / lead.clone());
    for r in 1..width {
        let acc = (1..=r).fold(T::zero(), |acc, i| acc + b.coeffs()[i].clone() * coeffs[r - i].clone());
        coeffs.push(-acc / lead.clone());
    }

    let bound = b.bound().map(|bb| {
        let eps = match lower_bound_radius(b, bb) {
            Some(radius) => min_r(bb.eps_max(), &radius),
            None => bb.eps_max().clone(),
        };
        let result = LaurentExpansion::from_parts(hc, coeffs.clone(), None);
        let top = b.k() - b.h();
        let base = int(top) + bb.delta();
        let mut g = MonomialSum::new();
        for i in b.h()..=b.k() {
            for j in result.h()..=result.k() {
                if i + j > top {
                    g.add_term(abs_r(&b.at(i)) * abs_r(&result.at(j)), int(i + j) - &base);
                }
            }
        }
        g.add_sum(&abs_terms(&result).scaled(bb.g(), &int(b.h())));
        let factor = int(2) / abs_r(&lead);
        let g_value = round_up(&(factor * g.evaluate_up(&eps)));
        RemainderBound::new(bb.delta().clone(), g_value, eps).expect("reciprocal bound is valid")
    });
    Ok(LaurentExpansion::from_parts(hc, coeffs, bound))
}

/// `A/B` for pivotal `B`, by the direct recurrence
/// `d_{h+r} = b_{h_B}^{-1} (a_{h_A+r} − Σ_{1≤i≤r} b_{h_B+i} d_{h+r−i})`,
/// with `h = h_A − h_B` and `k = (k_A − h_B) ∧ (h_A + k_B − 2h_B)`.
///
/// Bound, with `K = k + h_B`, `ε = ε_A ∧ ε_B ∧ radius(B)`:
/// `G = (|b_{h_B}|/2)^{-1} (Σ_{K<i≤k_A} |a_i| ε^{i−K−δ}
///  + Σ_{i+j>K} |b_i||d_j| ε^{i+j−K−δ} + G_A ε^{k_A+δ_A−K−δ}
///  + G_B Σ_j |d_j| ε^{j+k_B+δ_B−K−δ})`.
pub fn div<T: Coefficient>(
    a: &LaurentExpansion<T>,
    b: &LaurentExpansion<T>,
) -> Result<LaurentExpansion<T>, ExpansionError> {
    if !b.is_pivotal() {
        return Err(ExpansionError::NotPivotal);
    }
    let lead = b.lead().clone();
    let hd = a.h() - b.h();
    let from_a = a.k() - b.h();
    let from_b = a.h() + b.k() - 2 * b.h();
    let kd = from_a.min(from_b);
    let len = (kd - hd + 1) as usize;
    let mut coeffs: Vec<T> = Vec::with_capacity(len);
    for r in 0..len {
        let acc = (1..=r).fold(T::zero(), |acc, i| acc + b.coeffs()[i].clone() * coeffs[r - i].clone());
        coeffs.push((a.coeffs()[r].clone() - acc) / lead.clone());
    }

    let bound = match (a.bound(), b.bound()) {
        (Some(ba), Some(bb)) => {
            let delta = if from_a < from_b {
                ba.delta().clone()
            } else if from_b < from_a {
                bb.delta().clone()
            } else {
                min_r(ba.delta(), bb.delta())
            };
            let mut eps = min_r(ba.eps_max(), bb.eps_max());
            if let Some(radius) = lower_bound_radius(b, bb) {
                eps = min_r(&eps, &radius);
            }
            let result = LaurentExpansion::from_parts(hd, coeffs.clone(), None);
            let top = kd + b.h();
            let base = int(top) + &delta;
            let mut g = MonomialSum::new();
            for i in (top + 1)..=a.k() {
                g.add_term(abs_r(&a.at(i)), int(i) - &base);
            }
            for i in b.h()..=b.k() {
                for j in hd..=kd {
                    if i + j > top {
                        g.add_term(abs_r(&b.at(i)) * abs_r(&result.at(j)), int(i + j) - &base);
                    }
                }
            }
            g.add_term(ba.g().clone(), int(a.k()) + ba.delta() - &base);
            g.add_sum(&abs_terms(&result).scaled(bb.g(), &(int(b.k()) + bb.delta() - &base)));
            let factor = int(2) / abs_r(&lead);
            let g_value = round_up(&(factor * g.evaluate_up(&eps)));
            Some(RemainderBound::new(delta, g_value, eps).expect("quotient bound is valid"))
        }
        _ => None,
    };
    Ok(LaurentExpansion::from_parts(hd, coeffs, bound))
}

/// The `(0, n)`-expansion `[value, 0, …, 0]` of a constant.  Its remainder is
/// identically zero, certified by `(δ = 1, G = 0, ε_max = 1)`.
pub fn constant<T: Coefficient>(value: T, n: u32) -> LaurentExpansion<T> {
    constant_on(value, n, BigRational::one())
}

/// [`constant`] with an explicit validity range `ε_max`.
pub fn constant_on<T: Coefficient>(value: T, n: u32, eps_max: BigRational) -> LaurentExpansion<T> {
    let mut coeffs = vec![value];
    coeffs.extend((0..n).map(|_| T::zero()));
    LaurentExpansion::from_parts(0, coeffs, Some(RemainderBound::exact(eps_max)))
}

/// Rewrites the bound with a smaller exponent gap `δ* ≤ δ`:
/// `G* = G·ε^{δ−δ*}`, rounded up.
pub fn downgrade_delta<T: Coefficient>(
    a: &LaurentExpansion<T>,
    delta_star: &BigRational,
) -> Result<LaurentExpansion<T>, ExpansionError> {
    let bound = a.bound().ok_or(ExpansionError::MissingBound)?;
    if !delta_star.is_positive() {
        return Err(ExpansionError::InvalidBound(format!("delta = {delta_star} is not positive")));
    }
    if delta_star > bound.delta() {
        return Err(ExpansionError::DeltaTooLarge {
            requested: delta_star.to_string(),
            available: bound.delta().to_string(),
        });
    }
    if delta_star == bound.delta() {
        return Ok(a.clone());
    }
    let factor = pow_up(bound.eps_max(), &(bound.delta() - delta_star));
    let g = round_up(&(bound.g() * factor));
    let new_bound = RemainderBound::new(delta_star.clone(), g, bound.eps_max().clone())?;
    Ok(a.clone().with_bound(Some(new_bound)))
}

/// Exact partial sum `Σ_{l=h}^{k} a_l ε^l` (remainder excluded).
pub fn evaluate<T: Coefficient>(a: &LaurentExpansion<T>, eps: &T) -> Result<T, ExpansionError> {
    a.evaluate(eps)
}

impl<T: Coefficient> std::ops::Add for &LaurentExpansion<T> {
    type Output = LaurentExpansion<T>;

    fn add(self, rhs: Self) -> LaurentExpansion<T> {
        add(self, rhs)
    }
}

impl<T: Coefficient> std::ops::Sub for &LaurentExpansion<T> {
    type Output = LaurentExpansion<T>;

    fn sub(self, rhs: Self) -> LaurentExpansion<T> {
        sub(self, rhs)
    }
}

impl<T: Coefficient> std::ops::Mul for &LaurentExpansion<T> {
    type Output = LaurentExpansion<T>;

    fn mul(self, rhs: Self) -> LaurentExpansion<T> {
        mul(self, rhs)
    }
}

impl<T: Coefficient> std::ops::Neg for &LaurentExpansion<T> {
    type Output = LaurentExpansion<T>;

    fn neg(self) -> LaurentExpansion<T> {
        scale(&-T::one(), self)
    }
}
