//! Structural conditions on a perturbed semi-Markov model.
//!
//! * **A** — every transition set `Y_i` is nonempty, the sojourn
//!   expectations are given exactly on the transitions, and the transition
//!   graph is strongly connected.
//! * **B** — every `p_ij` has `h ≥ 0` and a positive (known nonzero) lead.
//! * **C** — the coefficients of each row sum to the indicator `I(l = 0)`
//!   through order `min_j k_ij`.
//! * **F** — every `e_ij` has a positive (known nonzero) lead.
//! * **B′ / F′** — in bounded mode every expansion carries a remainder bound
//!   whose range does not exceed `ε_0`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use laurent::{Expansion, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::model::{row_sum, Mode, PerturbedSmp, State};

/// Structural condition a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// Communication structure.
    A,
    /// Transition-probability orders and leads.
    B,
    /// Transition-probability remainder bounds.
    #[serde(rename = "B'")]
    BPrime,
    /// Row-sum consistency of coefficients.
    C,
    /// Sojourn-expectation leads.
    F,
    /// Sojourn-expectation remainder bounds.
    #[serde(rename = "F'")]
    FPrime,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Condition::A => "A",
            Condition::B => "B",
            Condition::BPrime => "B'",
            Condition::C => "C",
            Condition::F => "F",
            Condition::FPrime => "F'",
        };
        f.write_str(text)
    }
}

/// Where in the model a violation was found.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    /// The model as a whole.
    Model,
    /// A single state.
    State(State),
    /// A transition `(i, j)`.
    Pair(State, State),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Model => write!(f, "model"),
            Location::State(i) => write!(f, "state {i}"),
            Location::Pair(i, j) => write!(f, "transition ({i},{j})"),
        }
    }
}

/// A single failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Condition that failed.
    pub condition: Condition,
    /// Location of the failure.
    pub location: Location,
    /// Explanation.
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.condition, self.location, self.message)
    }
}

/// Outcome of [`validate`]; the model is accepted iff there are no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Failed checks in a deterministic order.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// True when every check passed.
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violations of one condition.
    pub fn of(&self, condition: Condition) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.condition == condition)
    }
}

/// Checks conditions A, B, C, F and, in bounded mode, B′ and F′.
pub fn validate(model: &PerturbedSmp) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |condition, location, message: String| violations.push(Violation { condition, location, message });

    // Condition A: nonempty transition sets, matching sojourn data, communication.
    for &i in model.states() {
        if model.transition_set(i).is_empty() {
            push(Condition::A, Location::State(i), "transition set is empty".into());
        }
    }
    for &(i, j) in model.e_entries().keys() {
        if model.p(i, j).is_none() {
            push(Condition::A, Location::Pair(i, j), "sojourn expectation given for a transition with p_ij = 0".into());
        }
    }
    for &i in unreachable_states(model).iter() {
        push(Condition::A, Location::State(i), "state does not communicate with every other state".into());
    }

    // Condition B / B'.
    for (&(i, j), p) in model.p_entries() {
        if p.h() < 0 {
            push(Condition::B, Location::Pair(i, j), format!("lowest order {} is negative", p.h()));
        }
        if !p.is_pivotal() {
            push(Condition::B, Location::Pair(i, j), "expansion is not pivotal".into());
        } else if !p.lead().is_positive() {
            push(Condition::B, Location::Pair(i, j), format!("leading coefficient {} is not positive", p.lead()));
        }
        if model.mode() == Mode::Bounded {
            if let Some(message) = bound_problem(p, model.eps0()) {
                push(Condition::BPrime, Location::Pair(i, j), message);
            }
        }
    }

    // Condition C.
    for &i in model.states() {
        let ys = model.transition_set(i);
        if ys.is_empty() {
            continue;
        }
        let sum = row_sum(model, i, &ys).expect("transition set entries exist");
        for l in 0..=sum.k() {
            let value = sum.coeff(l).expect("within window");
            let expected = if l == 0 { Rational::one() } else { Rational::zero() };
            if value != expected {
                push(
                    Condition::C,
                    Location::State(i),
                    format!("coefficients of order {l} sum to {value}, expected {expected}"),
                );
            }
        }
    }

    // Condition F / F'.
    for &(i, j) in model.p_entries().keys() {
        match model.e(i, j) {
            None => push(Condition::F, Location::Pair(i, j), "sojourn expectation is missing".into()),
            Some(e) => {
                if !e.is_pivotal() {
                    push(Condition::F, Location::Pair(i, j), "expansion is not pivotal".into());
                } else if !e.lead().is_positive() {
                    push(
                        Condition::F,
                        Location::Pair(i, j),
                        format!("leading coefficient {} is not positive", e.lead()),
                    );
                }
                if model.mode() == Mode::Bounded {
                    if let Some(message) = bound_problem(e, model.eps0()) {
                        push(Condition::FPrime, Location::Pair(i, j), message);
                    }
                }
            }
        }
    }

    violations.sort_by(|a, b| (a.condition, &a.location).cmp(&(b.condition, &b.location)));
    ValidationReport { violations }
}

fn bound_problem(expansion: &Expansion, eps0: &Rational) -> Option<String> {
    match expansion.bound() {
        None => Some("remainder bound is missing".into()),
        Some(b) if b.eps_max() > eps0 => Some(format!("bound range {} exceeds eps0 = {eps0}", b.eps_max())),
        Some(_) => None,
    }
}

/// States that are not mutually reachable with the first state.
fn unreachable_states(model: &PerturbedSmp) -> BTreeSet<State> {
    let Some(&start) = model.states().first() else {
        return BTreeSet::new();
    };
    let mut forward: BTreeMap<State, Vec<State>> = BTreeMap::new();
    let mut backward: BTreeMap<State, Vec<State>> = BTreeMap::new();
    for &(i, j) in model.p_entries().keys() {
        forward.entry(i).or_default().push(j);
        backward.entry(j).or_default().push(i);
    }
    let reach = |graph: &BTreeMap<State, Vec<State>>| {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for &t in graph.get(&s).into_iter().flatten() {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    };
    let (out, back) = (reach(&forward), reach(&backward));
    model.states().iter().copied().filter(|s| !out.contains(s) || !back.contains(s)).collect()
}

/// Sign pattern of a partial row sum `Σ_{j∈Z} p_ij(ε)`, which must not
/// exceed one for small `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSumClass {
    /// The sum vanishes as `ε → 0` (`h > 0`).
    Vanishing,
    /// The sum tends to a limit below one.
    BelowOne,
    /// The limit is one and the first nonzero correction is negative.
    DecreasingToOne,
    /// The limit is one and every retained correction vanishes; the sign of
    /// the remainder decides, which coefficients alone cannot check.
    RemainderDecides,
    /// The coefficients force the sum above one for small `ε`.
    ExceedsOne,
}

/// Classifies the partial row sum over `subset` (a diagnostic only).
pub fn row_sum_class(model: &PerturbedSmp, i: State, subset: &BTreeSet<State>) -> Option<RowSumClass> {
    let sum = row_sum(model, i, subset).ok()?;
    Some(classify(&sum))
}

fn classify(sum: &Expansion) -> RowSumClass {
    if sum.h() > 0 {
        return RowSumClass::Vanishing;
    }
    if sum.h() < 0 {
        return if sum.lead().is_negative() { RowSumClass::BelowOne } else { RowSumClass::ExceedsOne };
    }
    let one = Rational::one();
    let a0 = sum.lead();
    if a0 < &one {
        return RowSumClass::BelowOne;
    }
    if a0 > &one {
        return RowSumClass::ExceedsOne;
    }
    for c in &sum.coeffs()[1..] {
        if c.is_negative() {
            return RowSumClass::DecreasingToOne;
        }
        if c.is_positive() {
            return RowSumClass::ExceedsOne;
        }
    }
    RowSumClass::RemainderDecides
}

/// Classes of every partial row sum `Z ⊆ Y_i` for states with at most
/// `max_set` transitions (the number of subsets grows as `2^|Y_i|`).
pub fn row_sum_diagnostic(model: &PerturbedSmp, max_set: usize) -> Vec<(State, BTreeSet<State>, RowSumClass)> {
    let mut out = Vec::new();
    for &i in model.states() {
        let ys: Vec<State> = model.transition_set(i).into_iter().collect();
        if ys.is_empty() || ys.len() > max_set {
            continue;
        }
        for mask in 1u64..(1u64 << ys.len()) {
            let subset: BTreeSet<State> =
                ys.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &s)| s).collect();
            if let Some(class) = row_sum_class(model, i, &subset) {
                out.push((i, subset, class));
            }
        }
    }
    out
}
