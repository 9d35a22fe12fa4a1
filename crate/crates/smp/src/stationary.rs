//! Expansions of the stationary distribution `π_i(ε) = e_i(ε) / E_ii(ε)`.

use std::collections::BTreeSet;

use laurent::{div, sum_many, Expansion, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::SmpError;
use crate::model::{Mode, PerturbedSmp, State};
use crate::reduction::hitting_expectation;

/// Expected sojourn time `e_i(ε) = Σ_{j∈Y_i} e_ij(ε)` in state `i`.
pub fn sojourn(model: &PerturbedSmp, i: State) -> Result<Expansion, SmpError> {
    model.require(i)?;
    let terms =
        model.transition_set(i).into_iter().map(|j| model.e_of(i, j).cloned()).collect::<Result<Vec<_>, _>>()?;
    if terms.is_empty() {
        return Err(SmpError::MissingTransition(i, i));
    }
    Ok(sum_many(&terms)?)
}

/// Expansions describing one state of the stationary distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct StateStationary {
    /// State.
    pub state: State,
    /// Expected sojourn time `e_i`.
    pub sojourn: Expansion,
    /// Expected return time `E_ii`.
    pub return_time: Expansion,
    /// Stationary probability `π_i`.
    pub pi: Expansion,
    /// Limit `π_i(0)`.
    pub limit_at_zero: Rational,
}

impl StateStationary {
    /// Lowest order `n_i^-` of `π_i`.
    pub fn n_minus(&self) -> i64 {
        self.pi.h()
    }

    /// Highest order `n_i^+` of `π_i`.
    pub fn n_plus(&self) -> i64 {
        self.pi.k()
    }
}

/// Failed structural identity of the stationary expansions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StationaryViolation {
    /// Identity that failed.
    pub identity: String,
    /// Affected state, if the identity is per state.
    pub state: Option<State>,
    /// Explanation.
    pub message: String,
}

/// Stationary expansions together with their structural diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryReport {
    /// Per-state expansions in state order.
    pub states: Vec<StateStationary>,
    /// States with `n_i^- = 0` (positive limiting probability).
    pub x0: BTreeSet<State>,
    /// `n^+ = min_i n_i^+`.
    pub n_plus: i64,
    /// `Σ_i c_i[l] − I(l = 0)` for `l = 0, …, n^+`.
    pub residuals: Vec<Rational>,
    /// Smallest remainder exponent gap over all inputs (bounded mode).
    pub delta_floor: Option<Rational>,
    /// Failed identities; empty for a consistent model.
    pub violations: Vec<StationaryViolation>,
}

impl StationaryReport {
    /// Entry of a given state.
    pub fn state(&self, state: State) -> Option<&StateStationary> {
        self.states.iter().find(|s| s.state == state)
    }

    /// True when no identity failed.
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Smallest `δ` over the remainder bounds of all `p_ij` and `e_ij`, or
/// `None` if some expansion carries no bound.
pub fn delta_floor(model: &PerturbedSmp) -> Option<Rational> {
    model
        .p_entries()
        .values()
        .chain(model.e_entries().values())
        .map(|x| x.bound().map(|b| b.delta().clone()))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .min()
}

/// Computes `π_i = e_i / E_ii` for every state and checks the structural
/// identities `n_i^- ≥ 0`, `min_i n_i^- = 0`, `c_i[n_i^-] > 0`,
/// `Σ_i c_i[0] = 1` and `Σ_i c_i[l] = 0` for `0 < l ≤ n^+`
/// (plus, in bounded mode, `δ*_i ≥` the smallest input `δ`).
///
/// Fails with [`SmpError::InvariantViolation`] when an identity does not
/// hold, unless `force` is set, in which case the report is returned with
/// the violations attached.
pub fn stationary_distribution(model: &PerturbedSmp, force: bool) -> Result<StationaryReport, SmpError> {
    let mut states = Vec::with_capacity(model.n_states());
    for &i in model.states() {
        let e_i = sojourn(model, i)?;
        let e_ii = hitting_expectation(model, i, None)?;
        let pi = div(&e_i, &e_ii)?;
        let limit_at_zero = if pi.h() == 0 { pi.lead().clone() } else { Rational::zero() };
        states.push(StateStationary { state: i, sojourn: e_i, return_time: e_ii, pi, limit_at_zero });
    }

    let mut violations = Vec::new();
    let mut flag = |identity: &str, state: Option<State>, message: String| {
        violations.push(StationaryViolation { identity: identity.to_string(), state, message })
    };
    for s in &states {
        if s.n_minus() < 0 {
            flag("n_minus_nonnegative", Some(s.state), format!("n^- = {} is negative", s.n_minus()));
        }
        if !s.pi.lead().is_positive() {
            flag("leading_coefficient_positive", Some(s.state), format!("c[n^-] = {} is not positive", s.pi.lead()));
        }
    }
    let min_minus = states.iter().map(StateStationary::n_minus).min().unwrap_or(0);
    if min_minus != 0 {
        flag("min_n_minus_zero", None, format!("min n_i^- = {min_minus}, expected 0"));
    }
    let n_plus = states.iter().map(StateStationary::n_plus).min().unwrap_or(0);
    let mut residuals = Vec::new();
    for l in 0..=n_plus {
        let total = states.iter().fold(Rational::zero(), |acc, s| acc + s.pi.coeff(l).expect("l ≤ n^+"));
        let expected = if l == 0 { Rational::one() } else { Rational::zero() };
        let residual = total - expected;
        if !residual.is_zero() {
            flag("coefficient_sums", None, format!("order {l}: coefficients sum with residual {residual}"));
        }
        residuals.push(residual);
    }

    let floor = if model.mode() == Mode::Bounded { delta_floor(model) } else { None };
    if let Some(floor) = &floor {
        for s in &states {
            match s.pi.bound() {
                Some(b) if b.delta() >= floor => {}
                Some(b) => flag(
                    "delta_floor",
                    Some(s.state),
                    format!("delta* = {} is below the input floor {floor}", b.delta()),
                ),
                None => flag("delta_floor", Some(s.state), "no remainder bound was produced".into()),
            }
        }
    }

    let x0 = states.iter().filter(|s| s.n_minus() == 0).map(|s| s.state).collect();
    let report = StationaryReport { states, x0, n_plus, residuals, delta_floor: floor, violations };
    if !report.is_consistent() && !force {
        return Err(SmpError::InvariantViolation(Box::new(report)));
    }
    Ok(report)
}
