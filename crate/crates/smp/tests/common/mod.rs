//! Shared fixtures: hand-checked small models and a seeded random corpus of
//! valid polynomial models.

#![allow(dead_code)]

use std::collections::BTreeMap;

use laurent::{Expansion, Rational, RemainderBound};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smp::{Mode, PerturbedSmp, State};

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Pivotal expansion with integer coefficients.
pub fn x(h: i64, coeffs: &[i64]) -> Expansion {
    Expansion::new(h, coeffs.iter().map(|&c| r(c)).collect(), true, None).unwrap()
}

/// Pivotal expansion with rational coefficients.
pub fn xq(h: i64, coeffs: &[Rational]) -> Expansion {
    Expansion::new(h, coeffs.to_vec(), true, None).unwrap()
}

pub fn eps0() -> Rational {
    q(1, 10)
}

fn exact(x: Expansion) -> Expansion {
    x.with_bound(Some(RemainderBound::exact(eps0())))
}

/// Two-state chain `p_12 = 1`, `p_21 = ε`, `p_22 = 1 − ε` (discrete time),
/// with `p_21` written to order two so every closed-form window is reached.
/// All expansions are exact polynomials carrying zero-remainder bounds.
pub fn two_state() -> PerturbedSmp {
    let mut p = BTreeMap::new();
    p.insert((1, 2), exact(x(0, &[1, 0])));
    p.insert((2, 1), exact(x(1, &[1, 0])));
    p.insert((2, 2), exact(x(0, &[1, -1])));
    PerturbedSmp::discrete_time(2, eps0(), Mode::Bounded, p).unwrap().with_polynomial_exact(true)
}

/// The same chain with `p_21 = (1,1):[1]`, in plain mode.
pub fn two_state_short() -> PerturbedSmp {
    let mut p = BTreeMap::new();
    p.insert((1, 2), x(0, &[1, 0]));
    p.insert((2, 1), x(1, &[1]));
    p.insert((2, 2), x(0, &[1, -1]));
    PerturbedSmp::discrete_time(2, eps0(), Mode::Plain, p).unwrap().with_polynomial_exact(true)
}

/// Three-state chain `1 → 2 → 3 → 1` with slow exits from states 2 and 3:
/// `p_12 = 1`, `p_22 = 1 − ε`, `p_23 = ε`, `p_33 = (1 − ε)²`, `p_31 = p_32 = ε − ε²/2`.
pub fn three_state() -> PerturbedSmp {
    let mut p = BTreeMap::new();
    p.insert((1, 2), exact(x(0, &[1, 0, 0])));
    p.insert((2, 2), exact(x(0, &[1, -1, 0])));
    p.insert((2, 3), exact(x(1, &[1, 0])));
    p.insert((3, 3), exact(x(0, &[1, -2, 1])));
    p.insert((3, 1), exact(xq(1, &[r(1), q(-1, 2)])));
    p.insert((3, 2), exact(xq(1, &[r(1), q(-1, 2)])));
    PerturbedSmp::discrete_time(3, eps0(), Mode::Bounded, p).unwrap().with_polynomial_exact(true)
}

/// A model of the random corpus.
pub struct Case {
    pub seed: u64,
    pub model: PerturbedSmp,
}

/// Random polynomial `ε^l (c + a ε + b ε²)` truncated to degree two, positive
/// on `(0, ε_0]`: `c ≥ 1/8` dominates `|a| ε_0 + |b| ε_0² ≤ 33/400`.
fn positive_poly(rng: &mut ChaCha8Rng, low: i64, high_degree: i64, scale: i64) -> (Vec<Rational>, Rational) {
    let width = (high_degree - low + 1) as usize;
    let mut coeffs = vec![Rational::zero(); width];
    let c = q(rng.gen_range(1..=scale), 2 * scale);
    let mut envelope = c.clone();
    let eps0 = eps0();
    let mut power = Rational::one();
    coeffs[0] = c.clone();
    for slot in coeffs.iter_mut().skip(1) {
        power = &power * &eps0;
        let a = q(rng.gen_range(-3..=3), 4);
        // Keep the tail well inside the lead: |a| ε_0^m ≤ 3/40.
        envelope += a.abs() * &power;
        *slot = a;
    }
    (coeffs, envelope)
}

fn random_bound(rng: &mut ChaCha8Rng) -> RemainderBound {
    let delta = [q(1, 2), r(1)][rng.gen_range(0..2)].clone();
    let g = [r(0), q(1, 100), q(1, 3), r(1)][rng.gen_range(0..4)].clone();
    RemainderBound::new(delta, g, eps0()).unwrap()
}

/// Valid random model on `n` states.  Every `p_ij` and `e_ij` is a polynomial
/// of degree at most two represented on the window `(h, 2)` or `(h, h + 2)`
/// (width at most three), so the model is exact; in bounded mode each
/// expansion carries a (valid, possibly loose) random certificate.
pub fn random_model(seed: u64, n: usize, bounded: bool) -> PerturbedSmp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: BTreeMap<(State, State), Expansion> = BTreeMap::new();
    for i in 1..=n {
        let next = i % n + 1;
        let mut targets: Vec<State> = vec![next];
        for j in 1..=n {
            if j != next && rng.gen_bool(0.35) {
                targets.push(j);
            }
        }
        // The "main" entry absorbs the remaining probability mass.
        let main = if rng.gen_bool(0.65) { i } else { *targets.choose(&mut rng).unwrap() };
        if !targets.contains(&main) {
            targets.push(main);
        }
        let others: Vec<State> = targets.iter().copied().filter(|&j| j != main).collect();
        let mut total = vec![Rational::zero(); 3];
        let mut envelope = Rational::zero();
        for &j in &others {
            let low = rng.gen_range(0..=2);
            let (coeffs, env) = positive_poly(&mut rng, low, 2, 4);
            let coeffs: Vec<Rational> = coeffs.into_iter().map(|c| c / r(others.len() as i64)).collect();
            envelope += env / r(others.len() as i64);
            for (m, c) in coeffs.iter().enumerate() {
                total[low as usize + m] += c;
            }
            p.insert((i, j), xq(low, &coeffs));
        }
        // Main entry 1 − Σ others: lead ≥ 1/2 at ε = 0 and positive on (0, ε_0].
        assert!(envelope <= q(4, 5));
        let mut main_coeffs: Vec<Rational> = total.iter().map(|c| -c.clone()).collect();
        main_coeffs[0] += r(1);
        p.insert((i, main), xq(0, &main_coeffs));
    }

    let discrete = rng.gen_bool(0.4);
    let mut e = BTreeMap::new();
    for &(i, j) in p.keys() {
        let value = if discrete {
            p[&(i, j)].clone()
        } else {
            let low = rng.gen_range(-1..=1);
            let (coeffs, _) = positive_poly(&mut rng, 0, 2, 4);
            let coeffs: Vec<Rational> = coeffs.into_iter().map(|c| c * r(4)).collect();
            xq(low, &coeffs)
        };
        e.insert((i, j), value);
    }
    if bounded {
        for v in p.values_mut().chain(e.values_mut()) {
            *v = v.clone().with_bound(Some(random_bound(&mut rng)));
        }
    }
    let mode = if bounded { Mode::Bounded } else { Mode::Plain };
    PerturbedSmp::new(n, eps0(), mode, p, e).unwrap().with_polynomial_exact(true)
}

/// The standard corpus: `count` models cycling through 3, 4 and 5 states.
pub fn corpus(count: usize, bounded: bool) -> Vec<Case> {
    (0..count as u64)
        .map(|k| {
            let seed = 0x5eed_0000 + k;
            Case { seed, model: random_model(seed, 3 + (k % 3) as usize, bounded) }
        })
        .collect()
}

/// Coefficients agree on every order both expansions retain (zero below a
/// window's lowest power).
pub fn agree_on_shared_window(a: &Expansion, b: &Expansion) -> bool {
    let top = a.k().min(b.k());
    (a.h().min(b.h())..=top).all(|l| a.coeff(l) == b.coeff(l))
}
