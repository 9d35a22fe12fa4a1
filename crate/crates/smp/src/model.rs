//! Perturbed semi-Markov process described by expansions of its transition
//! probabilities `p_ij(ε)` and sojourn expectations `e_ij(ε)`.

use std::collections::{BTreeMap, BTreeSet};

use laurent::{div, sum_many, Expansion, Rational};
use num_traits::{One, Signed};

use crate::error::SmpError;

/// State identifier.  States are numbered from 1; reduced models keep the
/// identifiers of the states that remain.
pub type State = usize;

/// Whether every expansion is expected to carry a remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every expansion carries a `(δ, G, ε_max)` certificate.
    Bounded,
    /// Coefficients only.
    Plain,
}

impl Mode {
    /// Name used in model files.
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bounded => "bounded",
            Mode::Plain => "plain",
        }
    }
}

/// A nonlinearly perturbed semi-Markov process on a finite phase space.
///
/// For every transition `(i, j)` with `j ∈ Y_i` the model stores the
/// expansion of the transition probability `p_ij(ε)` of the embedded chain
/// and of the sojourn expectation `e_ij(ε) = E[κ_1; η_1 = j | η_0 = i]`.
/// Construction only checks that every key refers to a known state; the
/// structural conditions are checked by [`validate`](crate::validate::validate).
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedSmp {
    states: Vec<State>,
    names: BTreeMap<State, String>,
    eps0: Rational,
    mode: Mode,
    polynomial_exact: bool,
    p: BTreeMap<(State, State), Expansion>,
    e: BTreeMap<(State, State), Expansion>,
}

impl PerturbedSmp {
    /// Model on the states `1..=n_states`.
    pub fn new(
        n_states: usize,
        eps0: Rational,
        mode: Mode,
        p: BTreeMap<(State, State), Expansion>,
        e: BTreeMap<(State, State), Expansion>,
    ) -> Result<Self, SmpError> {
        Self::with_states((1..=n_states).collect(), eps0, mode, p, e)
    }

    /// Model on an explicit set of state identifiers.
    pub fn with_states(
        states: Vec<State>,
        eps0: Rational,
        mode: Mode,
        p: BTreeMap<(State, State), Expansion>,
        e: BTreeMap<(State, State), Expansion>,
    ) -> Result<Self, SmpError> {
        if !eps0.is_positive() || eps0 > Rational::one() {
            return Err(SmpError::BadEpsilon0(eps0.to_string()));
        }
        let set: BTreeSet<State> = states.iter().copied().collect();
        for &(i, j) in p.keys().chain(e.keys()) {
            for s in [i, j] {
                if !set.contains(&s) {
                    return Err(SmpError::UnknownState(s));
                }
            }
        }
        Ok(Self {
            states: set.into_iter().collect(),
            names: BTreeMap::new(),
            eps0,
            mode,
            polynomial_exact: false,
            p,
            e,
        })
    }

    /// Discrete-time model (a perturbed Markov chain): every sojourn lasts one
    /// step, so `e_ij = p_ij`.
    pub fn discrete_time(
        n_states: usize,
        eps0: Rational,
        mode: Mode,
        p: BTreeMap<(State, State), Expansion>,
    ) -> Result<Self, SmpError> {
        let e = p.clone();
        Self::new(n_states, eps0, mode, p, e)
    }

    /// Continuous-time Markov model with exit rates `λ_i(ε)`:
    /// `e_ij = p_ij / λ_i`.
    pub fn continuous_time(
        n_states: usize,
        eps0: Rational,
        mode: Mode,
        p: BTreeMap<(State, State), Expansion>,
        rates: &BTreeMap<State, Expansion>,
    ) -> Result<Self, SmpError> {
        let mut e = BTreeMap::new();
        for (&(i, j), pij) in &p {
            let rate = rates.get(&i).ok_or(SmpError::UnknownState(i))?;
            e.insert((i, j), div(pij, rate)?);
        }
        Self::new(n_states, eps0, mode, p, e)
    }

    /// Attaches display names to states.
    pub fn with_names(mut self, names: BTreeMap<State, String>) -> Self {
        self.names = names;
        self
    }

    /// Declares whether the expansions are exact polynomials (zero remainders).
    pub fn with_polynomial_exact(mut self, exact: bool) -> Self {
        self.polynomial_exact = exact;
        self
    }

    /// Same model in another mode.
    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Same model with every remainder bound dropped (and plain mode).
    pub fn without_bounds(&self) -> Self {
        let strip =
            |m: &BTreeMap<(State, State), Expansion>| m.iter().map(|(k, v)| (*k, v.clone().without_bound())).collect();
        Self { p: strip(&self.p), e: strip(&self.e), mode: Mode::Plain, ..self.clone() }
    }

    /// State identifiers in increasing order.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// Number of states.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// True if `state` belongs to the model.
    pub fn contains(&self, state: State) -> bool {
        self.states.binary_search(&state).is_ok()
    }

    /// Display name of a state (its number if unnamed).
    pub fn name(&self, state: State) -> String {
        self.names.get(&state).cloned().unwrap_or_else(|| state.to_string())
    }

    /// All display names.
    pub fn names(&self) -> &BTreeMap<State, String> {
        &self.names
    }

    /// Upper end `ε_0` of the perturbation interval.
    pub fn eps0(&self) -> &Rational {
        &self.eps0
    }

    /// Declared mode.
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Whether the expansions were declared exact polynomials.
    pub fn polynomial_exact(&self) -> bool {
        self.polynomial_exact
    }

    /// Transition set `Y_i = {j : p_ij > 0}`.
    pub fn transition_set(&self, i: State) -> BTreeSet<State> {
        self.p.range((i, 0)..=(i, State::MAX)).map(|(&(_, j), _)| j).collect()
    }

    /// Expansion of `p_ij`, if `j ∈ Y_i`.
    pub fn p(&self, i: State, j: State) -> Option<&Expansion> {
        self.p.get(&(i, j))
    }

    /// Expansion of `e_ij`, if present.
    pub fn e(&self, i: State, j: State) -> Option<&Expansion> {
        self.e.get(&(i, j))
    }

    /// All transition-probability expansions keyed by `(i, j)`.
    pub fn p_entries(&self) -> &BTreeMap<(State, State), Expansion> {
        &self.p
    }

    /// All sojourn-expectation expansions keyed by `(i, j)`.
    pub fn e_entries(&self) -> &BTreeMap<(State, State), Expansion> {
        &self.e
    }

    pub(crate) fn require(&self, state: State) -> Result<(), SmpError> {
        if self.contains(state) {
            Ok(())
        } else {
            Err(SmpError::UnknownState(state))
        }
    }

    pub(crate) fn p_of(&self, i: State, j: State) -> Result<&Expansion, SmpError> {
        self.p(i, j).ok_or(SmpError::MissingTransition(i, j))
    }

    pub(crate) fn e_of(&self, i: State, j: State) -> Result<&Expansion, SmpError> {
        self.e(i, j).ok_or(SmpError::MissingTransition(i, j))
    }

    /// Model on a subset of states with new expansions, keeping the metadata.
    pub(crate) fn derived(
        &self,
        states: Vec<State>,
        p: BTreeMap<(State, State), Expansion>,
        e: BTreeMap<(State, State), Expansion>,
    ) -> Self {
        let names = self.names.iter().filter(|(s, _)| states.contains(s)).map(|(s, n)| (*s, n.clone())).collect();
        Self { states, names, p, e, ..self.clone() }
    }
}

/// Sum of the transition probabilities `p_ij` over `j ∈ subset`.
pub fn row_sum(model: &PerturbedSmp, i: State, subset: &BTreeSet<State>) -> Result<Expansion, SmpError> {
    model.require(i)?;
    if subset.is_empty() {
        return Err(SmpError::EmptySubset);
    }
    let terms = subset.iter().map(|&j| model.p_of(i, j).cloned()).collect::<Result<Vec<_>, _>>()?;
    Ok(sum_many(&terms)?)
}
