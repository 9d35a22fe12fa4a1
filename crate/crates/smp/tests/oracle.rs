//! Exact solves at fixed ε and comparison against the expansions.

mod common;

use std::collections::BTreeMap;

use common::{corpus, q, r, random_model, three_state, two_state, x};
use laurent::{Expansion, RemainderBound};
use smp::io::comparison_to_value;
use smp::oracle::{
    compare, compare_against, default_grid, instantiate, numeric_embedded_stationary, numeric_hitting,
    numeric_stationary, solve,
};
use smp::{hitting_expectation, stationary_distribution, PerturbedSmp, SmpError};

#[test]
fn instantiate_evaluates_every_entry() {
    let num = instantiate(&two_state(), &q(1, 10), true).unwrap();
    assert_eq!(num.p, vec![vec![r(0), r(1)], vec![q(1, 10), q(9, 10)]]);
    assert_eq!(num.e, num.p);
    assert!(num.row_residuals.is_empty());
    assert!(num.negative_entries.is_empty());
    assert_eq!(num.sojourns(), vec![r(1), r(1)]);
}

#[test]
fn instantiate_rejects_points_outside_the_interval() {
    for eps in [r(2), q(1, 5), r(0), q(-1, 10)] {
        assert!(matches!(instantiate(&two_state(), &eps, true), Err(SmpError::EpsilonOutOfRange { .. })));
    }
}

#[test]
fn instantiate_flags_truncated_rows() {
    // Dropping the ε-term of p_22 leaves row 2 summing to 1 + ε.
    let mut p = BTreeMap::new();
    p.insert((1, 2), x(0, &[1]));
    p.insert((2, 1), x(1, &[1]));
    p.insert((2, 2), x(0, &[1]));
    let model = PerturbedSmp::discrete_time(2, q(1, 10), smp::Mode::Plain, p).unwrap();
    let num = instantiate(&model, &q(1, 10), false).unwrap();
    assert_eq!(num.row_residuals, vec![(2, q(1, 10))]);
}

#[test]
fn stationary_solve_of_the_two_state_chain() {
    let num = instantiate(&two_state(), &q(1, 10), true).unwrap();
    let rho = numeric_embedded_stationary(&num).unwrap();
    let pi = numeric_stationary(&num).unwrap();
    assert_eq!(rho, vec![q(1, 11), q(10, 11)]);
    assert_eq!(pi, vec![q(1, 11), q(10, 11)]);
    assert_eq!(pi.iter().sum::<laurent::Rational>(), r(1));

    let report = stationary_distribution(&two_state(), false).unwrap();
    let partial = report.state(1).unwrap().pi.evaluate(&q(1, 10)).unwrap();
    assert_eq!(partial, q(9, 100));
    assert_eq!(&pi[0] - &partial, q(1, 1100));
}

#[test]
fn hitting_solve_of_the_two_state_chain() {
    let num = instantiate(&two_state(), &q(1, 10), true).unwrap();
    assert_eq!(numeric_hitting(&num, 1).unwrap(), vec![r(11), r(10)]);
    let e11 = hitting_expectation(&two_state(), 1, None).unwrap();
    assert_eq!(e11.evaluate(&q(1, 10)).unwrap(), r(11));
}

#[test]
fn stationary_and_hitting_solves_agree() {
    for model in [two_state(), three_state(), random_model(42, 5, false)] {
        for eps in [q(1, 10), q(1, 300)] {
            let num = instantiate(&model, &eps, true).unwrap();
            let pi = numeric_stationary(&num).unwrap();
            let sojourns = num.sojourns();
            for (idx, &i) in num.states.iter().enumerate() {
                let hitting = numeric_hitting(&num, i).unwrap();
                assert_eq!(pi[idx], &sojourns[idx] / &hitting[idx], "state {i} at {eps}");
            }
        }
    }
}

#[test]
fn solve_detects_singular_systems() {
    let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
    assert_eq!(solve(a, vec![r(1), r(1)]), None);
    let a = vec![vec![r(0), r(2)], vec![r(3), r(1)]];
    assert_eq!(solve(a, vec![r(2), r(4)]), Some(vec![r(1), r(1)]));
    let a = vec![vec![4i64, 2], vec![1, 3]];
    let b = vec![10i64, 10];
    assert_eq!(solve(a, b), Some(vec![1, 3]));
}

#[test]
fn comparison_passes_on_the_two_state_chain() {
    let grid = [q(1, 10), q(1, 100), q(1, 1000)];
    let report = compare(&two_state(), &grid).unwrap();
    assert!(report.pass(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(report.oracle_exact);
    let labels: Vec<&str> = report.quantities.iter().map(|c| c.quantity.as_str()).collect();
    assert_eq!(labels, ["pi[1]", "E[1,1]", "pi[2]", "E[2,2]", "E[1,2]", "E[2,1]"]);
    // Return times are exact rational functions reproduced to full order.
    let e11 = &report.quantities[1];
    assert!(e11.points.iter().all(|p| p.error == "0"));
    assert_eq!(e11.slope, None);

    let value = comparison_to_value(&report);
    assert_eq!(value["format_version"], 1);
    assert_eq!(value["pass"], true);
    assert_eq!(value["quantities"][0]["points"][0]["oracle"], "1/11");
}

fn loosened(x: &Expansion) -> Expansion {
    let b = x.bound().unwrap();
    let g = b.g() * r(100);
    x.clone().with_bound(Some(RemainderBound::new(b.delta().clone(), g, b.eps_max().clone()).unwrap()))
}

#[test]
fn loosened_certificates_still_pass() {
    for case in corpus(6, true) {
        let model = &case.model;
        let grid = default_grid(model);
        assert!(compare(model, &grid).unwrap().pass(), "seed {:#x}", case.seed);

        let p = model.p_entries().iter().map(|(k, v)| (*k, loosened(v))).collect();
        let e = model.e_entries().iter().map(|(k, v)| (*k, loosened(v))).collect();
        let loose = PerturbedSmp::new(model.n_states(), model.eps0().clone(), model.mode(), p, e).unwrap();
        assert!(compare_against(&loose, model, &grid).unwrap().pass(), "seed {:#x}", case.seed);
    }
}

#[test]
fn corrupted_coefficient_fails_the_slope_test() {
    // Predictions from p_21 = 2ε (and p_22 = 1 − 2ε) against the true chain.
    let truth = two_state();
    let mut p = truth.p_entries().clone();
    p.insert((2, 1), x(1, &[2, 0]));
    p.insert((2, 2), x(0, &[1, -2]));
    let corrupted = PerturbedSmp::discrete_time(2, q(1, 10), smp::Mode::Plain, p).unwrap();
    let report = compare_against(&corrupted, &truth, &[q(1, 100), q(1, 1000), q(1, 10000)]).unwrap();
    assert!(!report.pass());
    let pi1 = report.quantities.iter().find(|c| c.quantity == "pi[1]").unwrap();
    assert!(!pi1.slope_pass);
    assert!(pi1.slope.unwrap() < 1.1);
}

#[test]
fn default_grid_respects_the_smallest_range() {
    assert_eq!(default_grid(&two_state()), vec![q(1, 10), q(1, 100), q(1, 1000), q(1, 10000)]);
    let mut p = two_state().p_entries().clone();
    let narrow = RemainderBound::new(r(1), r(0), q(1, 50)).unwrap();
    p.insert((1, 2), x(0, &[1, 0]).with_bound(Some(narrow)));
    let model = PerturbedSmp::discrete_time(2, q(1, 10), smp::Mode::Bounded, p).unwrap();
    assert_eq!(default_grid(&model), vec![q(1, 100), q(1, 1000), q(1, 10000)]);
}
