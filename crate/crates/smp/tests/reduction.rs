//! State elimination, return times and pair hitting times.

mod common;

use std::collections::BTreeSet;

use common::{agree_on_shared_window, corpus, eps0, q, r, random_model, three_state, two_state, two_state_short, x};
use laurent::constant;
use num_traits::Signed;
use smp::oracle::{instantiate, numeric_hitting};
use smp::reduction::permutations;
use smp::{
    best_order_hitting, default_order, hitting_expectation, hitting_expectation_trace, non_absorption, pair_hitting,
    reduce_sequence, reduce_state, validate, Mode, PerturbedSmp, SmpError,
};

#[test]
fn non_absorption_merges_both_representations() {
    // 1 − p_22 = (0,1):[0,1] loses its lead; p_21 = (1,1):[1] keeps it.
    let model = two_state_short();
    assert!(non_absorption(&model, 2).unwrap().same_terms(&x(1, &[1])));
    // With p_21 written to order two the merged window is (1,2).
    assert!(non_absorption(&two_state(), 2).unwrap().same_terms(&x(1, &[1, 0])));
}

#[test]
fn non_absorption_without_self_loop_is_one() {
    let a = non_absorption(&two_state(), 1).unwrap();
    assert!(a.same_terms(&constant(r(1), 1)));
}

#[test]
fn non_absorption_keeps_the_order_the_subtraction_loses() {
    // 1 − (1 − ε)² = (0,2):[0,2,−1], while p_31 + p_32 = (1,2):[2,−1].
    let a = non_absorption(&three_state(), 3).unwrap();
    assert_eq!(a.h(), 1);
    assert!(a.same_terms(&x(1, &[2, -1])));
}

#[test]
fn non_absorption_rejects_absorbing_states() {
    let mut p = std::collections::BTreeMap::new();
    p.insert((1, 1), x(0, &[1]));
    p.insert((2, 1), x(0, &[1]));
    let model = PerturbedSmp::discrete_time(2, eps0(), Mode::Plain, p).unwrap();
    assert!(matches!(non_absorption(&model, 1), Err(SmpError::NonAbsorptionNotPositive { state: 1, .. })));
}

#[test]
fn eliminating_the_slow_state() {
    let reduced = reduce_state(&two_state_short(), 2).unwrap();
    assert_eq!(reduced.states(), &[1]);
    assert!(reduced.p(1, 1).unwrap().same_terms(&x(0, &[1])));

    let reduced = reduce_state(&two_state(), 2).unwrap();
    // _2e_11 = ε^-1 + 1: the one-state model's sojourn is the return time.
    assert!(reduced.e(1, 1).unwrap().same_terms(&x(-1, &[1, 1])));
    // Nonnegative orders in the input, negative order after reduction.
    assert!(two_state().e_entries().values().all(|e| e.h() >= 0));
    assert_eq!(reduced.e(1, 1).unwrap().h(), -1);
}

#[test]
fn transitions_not_through_the_eliminated_state_are_unchanged() {
    let model = three_state();
    let reduced = reduce_state(&model, 3).unwrap();
    assert_eq!(reduced.p(1, 2), model.p(1, 2));
    assert_eq!(reduced.e(1, 2), model.e(1, 2));
}

#[test]
fn reduced_transition_sets_follow_the_set_identity() {
    for model in [three_state(), random_model(7, 4, false), random_model(11, 5, true)] {
        for &r in model.states() {
            let reduced = reduce_state(&model, r).unwrap();
            for &i in reduced.states() {
                let ys = model.transition_set(i);
                let mut expected: BTreeSet<usize> = ys.iter().copied().filter(|&j| j != r).collect();
                if ys.contains(&r) {
                    expected.extend(model.transition_set(r).into_iter().filter(|&j| j != r));
                }
                assert_eq!(reduced.transition_set(i), expected, "eliminating {r}, row {i}");
            }
            assert!(validate(&reduced).is_ok(), "eliminating {r}: {:?}", validate(&reduced));
        }
    }
}

#[test]
fn single_state_cannot_be_reduced() {
    let one = reduce_state(&two_state(), 2).unwrap();
    assert!(matches!(reduce_state(&one, 1), Err(SmpError::SingleState)));
    assert!(matches!(reduce_state(&two_state(), 3), Err(SmpError::UnknownState(3))));
}

#[test]
fn return_times_of_the_two_state_chain() {
    let model = two_state();
    assert!(hitting_expectation(&model, 1, None).unwrap().same_terms(&x(-1, &[1, 1])));
    assert!(hitting_expectation(&model, 2, None).unwrap().same_terms(&x(0, &[1, 1])));
}

#[test]
fn elimination_orders_must_be_permutations() {
    let model = three_state();
    assert!(matches!(hitting_expectation(&model, 1, Some(&[2])), Err(SmpError::BadPermutation(_))));
    assert!(matches!(hitting_expectation(&model, 1, Some(&[2, 2])), Err(SmpError::BadPermutation(_))));
    assert!(matches!(hitting_expectation(&model, 1, Some(&[1, 2])), Err(SmpError::BadPermutation(_))));
    assert!(hitting_expectation(&model, 1, Some(&[3, 2])).is_ok());
}

#[test]
fn return_times_do_not_depend_on_the_order() {
    for seed in 0..6 {
        let model = random_model(1000 + seed, 4, seed % 2 == 0);
        for &i in model.states() {
            let reference = hitting_expectation(&model, i, None).unwrap();
            let orders = permutations(&default_order(&model, &[i]));
            assert_eq!(orders.len(), 6);
            for order in orders {
                let other = hitting_expectation(&model, i, Some(&order)).unwrap();
                assert!(other.same_terms(&reference), "seed {seed}, E_{i}{i}, order {order:?}");
            }
        }
    }
}

#[test]
fn trace_keeps_every_intermediate_model() {
    let model = random_model(3, 5, true);
    let (e, trace) = hitting_expectation_trace(&model, 4, None, true).unwrap();
    assert_eq!(trace.order, vec![1, 2, 3, 5]);
    assert_eq!(trace.models.len(), 4);
    for (step, m) in trace.models.iter().enumerate() {
        assert_eq!(m.n_states(), 4 - step);
        assert!(validate(m).is_ok());
    }
    assert_eq!(trace.last().unwrap().e(4, 4), Some(&e));
    let short = reduce_sequence(&model, &[1, 2], false).unwrap();
    assert_eq!(short.models.len(), 1);
    assert_eq!(short.last(), Some(&trace.models[1]));
}

#[test]
fn best_order_is_at_least_as_tight_as_the_default() {
    let model = random_model(21, 4, true);
    let (order, best) = best_order_hitting(&model, 2).unwrap();
    assert_eq!(order.len(), 3);
    let default = hitting_expectation(&model, 2, None).unwrap();
    assert!(best.same_terms(&default));
    let (b, d) = (best.bound().unwrap(), default.bound().unwrap());
    assert!((b.delta(), -b.g().clone()) >= (d.delta(), -d.g().clone()));
}

#[test]
fn pair_hitting_of_the_two_state_chain() {
    let pair = pair_hitting(&two_state(), 1, 2).unwrap();
    // E_12 = 1 exactly; the division keeps the window (0,1).
    assert!(pair.e_ij.same_terms(&x(0, &[1, 0])));
    assert!(agree_on_shared_window(&pair.e_ij, &x(0, &[1])));
    // E_21 = 1/ε.
    assert!(pair.e_ji.same_terms(&x(-1, &[1, 0])));
    assert!(pair.e_ii.same_terms(&hitting_expectation(&two_state(), 1, None).unwrap()));
    assert!(pair.e_jj.same_terms(&hitting_expectation(&two_state(), 2, None).unwrap()));
    assert!(matches!(pair_hitting(&two_state(), 1, 1), Err(SmpError::SameState(1))));
}

#[test]
fn pair_hitting_matches_the_exact_solve() {
    // 1 → 2 → 3 with state 2 eliminated; E_13 = ε^-1 + 1 exactly.
    let model = three_state();
    let pair = pair_hitting(&model, 1, 3).unwrap();
    assert!(pair.e_ij.same_terms(&x(-1, &[1, 1])));
    let eps = q(1, 1000);
    let num = instantiate(&model, &eps, true).unwrap();
    let exact = numeric_hitting(&num, 3).unwrap();
    assert_eq!(exact[0], r(1001));
    assert_eq!(pair.e_ij.evaluate(&eps).unwrap(), exact[0]);
    // E_31 carries a remainder; the certificate covers the gap.
    let to_one = numeric_hitting(&num, 1).unwrap();
    let gap = (pair.e_ji.evaluate(&eps).unwrap() - &to_one[2]).abs();
    let bound = pair.e_ji.bound().unwrap();
    assert!(eps <= *bound.eps_max());
    assert!(gap <= bound.remainder_at(pair.e_ji.k(), &eps), "gap {gap}");
}

#[test]
fn pair_hitting_agrees_with_return_times() {
    for model in [three_state(), random_model(5, 4, true)] {
        for &i in model.states() {
            let e_ii = hitting_expectation(&model, i, None).unwrap();
            for &j in model.states().iter().filter(|&&j| j != i) {
                let pair = pair_hitting(&model, i, j).unwrap();
                assert!(agree_on_shared_window(&pair.e_ii, &e_ii), "E_{i}{i} via pair ({i},{j})");
            }
        }
    }
}

#[test]
fn pair_hitting_survives_eliminating_a_third_state() {
    for case in corpus(9, false) {
        let model = &case.model;
        for &r in model.states() {
            let reduced = reduce_state(model, r).unwrap();
            for &i in reduced.states() {
                for &j in reduced.states().iter().filter(|&&j| j > i) {
                    let (a, b) = (pair_hitting(model, i, j).unwrap(), pair_hitting(&reduced, i, j).unwrap());
                    assert!(a.e_ij.same_terms(&b.e_ij) && a.e_ji.same_terms(&b.e_ji), "seed {:#x}", case.seed);
                }
            }
        }
    }
}
