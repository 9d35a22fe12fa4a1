//! Phase-space reduction: eliminating states one at a time.
//!
//! Removing a state `r` yields the process observed only at visits to the
//! remaining states.  Its transition probabilities and sojourn expectations
//! are
//!
//! ```text
//! _r p_ij = p_ij + p_ir · p_rj / (1 − p_rr)
//! _r e_ij = e_ij + e_ir · p_rj / (1 − p_rr)
//!               + e_rr · p_ir / (1 − p_rr) · p_rj / (1 − p_rr)
//!               + e_rj · p_ir / (1 − p_rr)
//! ```
//!
//! where each term is present only when the corresponding transitions are,
//! and hitting times of the remaining states are preserved.  Eliminating all
//! states but `i` leaves a one-state model whose sojourn expectation is the
//! expected return time `E_ii`.

use std::collections::{BTreeMap, BTreeSet};

use laurent::{add, constant_on, div, merge, mul, sub, sum_many, Expansion, Rational, RemainderBound};
use num_traits::{One, Signed};

use crate::error::SmpError;
use crate::model::{PerturbedSmp, State};

/// Expansion of the non-absorption probability `1 − p_rr(ε)` of state `r`.
///
/// With a self-loop, two representations are available — `1 − p_rr` and
/// `Σ_{j≠r} p_rj` — and they are merged into the most informative one.
/// Without a self-loop the probability is identically one, represented to
/// order `max_j k_rj`.
pub fn non_absorption(model: &PerturbedSmp, r: State) -> Result<Expansion, SmpError> {
    model.require(r)?;
    let ys = model.transition_set(r);
    let result = match model.p(r, r) {
        Some(prr) => {
            let one = constant_on(Rational::one(), prr.k().max(0) as u32, model.eps0().clone());
            let complement = sub(&one, prr);
            let others: Vec<Expansion> =
                ys.iter().filter(|&&j| j != r).map(|&j| model.p_of(r, j).cloned()).collect::<Result<_, _>>()?;
            if others.is_empty() {
                complement
            } else {
                merge(&complement, &sum_many(&others)?)?
            }
        }
        None => {
            let order = ys.iter().map(|&j| model.p_of(r, j).map(|p| p.k())).collect::<Result<Vec<_>, _>>()?;
            let order = order.into_iter().max().unwrap_or(0).max(0) as u32;
            constant_on(Rational::one(), order, model.eps0().clone())
        }
    };
    if !result.is_pivotal() || !result.lead().is_positive() {
        return Err(SmpError::NonAbsorptionNotPositive { state: r, expansion: result.to_string() });
    }
    Ok(result)
}

/// Removes state `r`, returning the reduced model on the remaining states.
pub fn reduce_state(model: &PerturbedSmp, r: State) -> Result<PerturbedSmp, SmpError> {
    model.require(r)?;
    if model.n_states() < 2 {
        return Err(SmpError::SingleState);
    }
    let self_loop = model.p(r, r).is_some();
    let exits: BTreeSet<State> = model.transition_set(r).into_iter().filter(|&j| j != r).collect();
    let nonabs = if self_loop { Some(non_absorption(model, r)?) } else { None };

    // p_rj / (1 − p_rr) for every exit j of r.
    let mut tilde: BTreeMap<State, Expansion> = BTreeMap::new();
    for &j in &exits {
        let prj = model.p_of(r, j)?;
        let value = match &nonabs {
            Some(d) => div(prj, d)?,
            None => prj.clone(),
        };
        tilde.insert(j, value);
    }

    let mut p = BTreeMap::new();
    let mut e = BTreeMap::new();
    for &i in model.states().iter().filter(|&&i| i != r) {
        let ys = model.transition_set(i);
        let through_r = ys.contains(&r);
        // p_ir / (1 − p_rr), needed only when r is reachable from i.
        let hat = if through_r {
            let pir = model.p_of(i, r)?;
            Some(match &nonabs {
                Some(d) => div(pir, d)?,
                None => pir.clone(),
            })
        } else {
            None
        };
        let direct: BTreeSet<State> = ys.iter().copied().filter(|&j| j != r).collect();
        let via: BTreeSet<State> = if through_r { exits.clone() } else { BTreeSet::new() };
        for &j in direct.union(&via) {
            let key = (i, j);
            if !via.contains(&j) {
                p.insert(key, model.p_of(i, j)?.clone());
                e.insert(key, model.e_of(i, j)?.clone());
                continue;
            }
            let hat_i = hat.as_ref().expect("r is reachable from i");
            let tilde_j = &tilde[&j];
            let detour = mul(model.p_of(i, r)?, tilde_j);
            let mut terms = vec![mul(model.e_of(i, r)?, tilde_j)];
            if self_loop {
                terms.push(mul(model.e_of(r, r)?, &mul(hat_i, tilde_j)));
            }
            terms.push(mul(model.e_of(r, j)?, hat_i));
            let extra_time = sum_many(&terms)?;
            if direct.contains(&j) {
                p.insert(key, add(model.p_of(i, j)?, &detour));
                e.insert(key, add(model.e_of(i, j)?, &extra_time));
            } else {
                p.insert(key, detour);
                e.insert(key, extra_time);
            }
        }
    }
    let states = model.states().iter().copied().filter(|&s| s != r).collect();
    Ok(model.derived(states, p, e))
}

/// Record of a sequential reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace {
    /// Eliminated states in order.
    pub order: Vec<State>,
    /// Model after each elimination (same length as `order`).
    pub models: Vec<PerturbedSmp>,
}

impl ReductionTrace {
    /// The final reduced model.
    pub fn last(&self) -> Option<&PerturbedSmp> {
        self.models.last()
    }
}

/// Eliminates `order` in sequence, keeping every intermediate model when
/// `keep` is set (otherwise only the final one).
pub fn reduce_sequence(model: &PerturbedSmp, order: &[State], keep: bool) -> Result<ReductionTrace, SmpError> {
    let mut current = model.clone();
    let mut models = Vec::new();
    for (step, &r) in order.iter().enumerate() {
        current = reduce_state(&current, r)?;
        if keep || step + 1 == order.len() {
            models.push(current.clone());
        }
    }
    Ok(ReductionTrace { order: order.to_vec(), models })
}

/// Default elimination order: every state except `keep`, ascending.
pub fn default_order(model: &PerturbedSmp, keep: &[State]) -> Vec<State> {
    model.states().iter().copied().filter(|s| !keep.contains(s)).collect()
}

fn check_order(model: &PerturbedSmp, keep: &[State], order: &[State]) -> Result<(), SmpError> {
    let expected: BTreeSet<State> = default_order(model, keep).into_iter().collect();
    let given: BTreeSet<State> = order.iter().copied().collect();
    if given.len() != order.len() || given != expected {
        return Err(SmpError::BadPermutation(format!(
            "expected a permutation of {:?}, got {:?}",
            expected.into_iter().collect::<Vec<_>>(),
            order
        )));
    }
    Ok(())
}

/// Expansion of the expected return time `E_ii(ε)`, obtained by eliminating
/// every other state (in `order`, or ascending by default) and reading the
/// sojourn expectation of the remaining one-state model.
pub fn hitting_expectation(model: &PerturbedSmp, i: State, order: Option<&[State]>) -> Result<Expansion, SmpError> {
    Ok(hitting_expectation_trace(model, i, order, false)?.0)
}

/// [`hitting_expectation`] together with the reduction trace.
pub fn hitting_expectation_trace(
    model: &PerturbedSmp,
    i: State,
    order: Option<&[State]>,
    keep: bool,
) -> Result<(Expansion, ReductionTrace), SmpError> {
    model.require(i)?;
    let order = match order {
        Some(o) => {
            check_order(model, &[i], o)?;
            o.to_vec()
        }
        None => default_order(model, &[i]),
    };
    let trace = reduce_sequence(model, &order, keep)?;
    let last = trace.last().unwrap_or(model);
    let eii = last.e_of(i, i)?.clone();
    Ok((eii, trace))
}

/// Among all elimination orders, the one whose `E_ii` certificate is
/// tightest: larger `δ`, then smaller `G`, then larger `ε_max`.  Orders are
/// compared only when bounds are present; otherwise the default order wins.
pub fn best_order_hitting(model: &PerturbedSmp, i: State) -> Result<(Vec<State>, Expansion), SmpError> {
    let base = default_order(model, &[i]);
    let mut best: Option<(Vec<State>, Expansion)> = None;
    for order in permutations(&base) {
        let candidate = hitting_expectation(model, i, Some(&order))?;
        let better = match &best {
            None => true,
            Some((_, current)) => tighter(candidate.bound(), current.bound()),
        };
        if better {
            best = Some((order, candidate));
        }
    }
    Ok(best.expect("at least one order"))
}

fn tighter(a: Option<&RemainderBound>, b: Option<&RemainderBound>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a.delta(), -a.g().clone(), a.eps_max()) > (b.delta(), -b.g().clone(), b.eps_max()),
        (Some(_), None) => true,
        _ => false,
    }
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations(items: &[State]) -> Vec<Vec<State>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(idx);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Expected hitting times between two states `i ≠ j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairHitting {
    /// First state.
    pub i: State,
    /// Second state.
    pub j: State,
    /// `E_ij`: expected time to reach `j` from `i`.
    pub e_ij: Expansion,
    /// `E_ji`: expected time to reach `i` from `j`.
    pub e_ji: Expansion,
    /// `E_ii`: expected return time to `i`.
    pub e_ii: Expansion,
    /// `E_jj`: expected return time to `j`.
    pub e_jj: Expansion,
}

/// Reduces the model to `{i, j}` and solves the two-state hitting system:
/// with `e_s = e_si + e_sj`,
/// `E_ij = e_i / p_ij` and `E_jj = e_j + e_i · p_ji / p_ij` (and symmetrically).
pub fn pair_hitting(model: &PerturbedSmp, i: State, j: State) -> Result<PairHitting, SmpError> {
    model.require(i)?;
    model.require(j)?;
    if i == j {
        return Err(SmpError::SameState(i));
    }
    let order = default_order(model, &[i, j]);
    let trace = reduce_sequence(model, &order, false)?;
    let two = trace.last().unwrap_or(model);

    let sojourn = |s: State| -> Result<Expansion, SmpError> {
        let terms: Vec<Expansion> = [i, j].iter().filter_map(|&t| two.e(s, t).cloned()).collect();
        if terms.is_empty() {
            return Err(SmpError::MissingTransition(s, s));
        }
        Ok(sum_many(&terms)?)
    };
    let (ei, ej) = (sojourn(i)?, sojourn(j)?);
    let (pij, pji) = (two.p_of(i, j)?, two.p_of(j, i)?);
    Ok(PairHitting {
        i,
        j,
        e_ij: div(&ei, pij)?,
        e_ji: div(&ej, pji)?,
        e_ii: add(&ei, &mul(&ej, &div(pij, pji)?)),
        e_jj: add(&ej, &mul(&ei, &div(pji, pij)?)),
    })
}
