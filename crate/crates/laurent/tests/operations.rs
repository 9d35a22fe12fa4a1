//! Worked examples for every expansion operation.

use laurent::{
    add, constant, div, downgrade_delta, evaluate, make, merge, mul, normalize_bound, pow_down, prod_many, reciprocal,
    scale, sum_many, Expansion, ExpansionError, Rational, RemainderBound,
};

fn q(text: &str) -> Rational {
    laurent::parse_rational(text).unwrap()
}

/// Expansion with the given lowest power and coefficients; pivotal iff the lead is nonzero.
fn x(h: i64, coeffs: &[&str]) -> Expansion {
    let coeffs: Vec<Rational> = coeffs.iter().map(|c| q(c)).collect();
    let pivotal = coeffs[0] != q("0");
    make(h, coeffs, pivotal, None).unwrap()
}

fn bound(delta: &str, g: &str, eps: &str) -> RemainderBound {
    RemainderBound::new(q(delta), q(g), q(eps)).unwrap()
}

fn xb(h: i64, coeffs: &[&str], b: RemainderBound) -> Expansion {
    x(h, coeffs).with_bound(Some(b))
}

fn assert_terms(actual: &Expansion, h: i64, coeffs: &[&str]) {
    let expected: Vec<Rational> = coeffs.iter().map(|c| q(c)).collect();
    assert_eq!((actual.h(), actual.coeffs()), (h, expected.as_slice()), "got {actual}");
}

// ---- make ----

#[test]
fn make_constant_one() {
    let a = make(0, vec![q("1")], true, None).unwrap();
    assert_eq!((a.h(), a.k()), (0, 0));
    assert!(a.is_pivotal());
}

#[test]
fn make_laurent_pole() {
    let a = make(-1, vec![q("1"), q("1")], true, None).unwrap();
    assert_eq!((a.h(), a.k(), a.width()), (-1, 0, 1));
    assert_eq!(a.to_series_string(), "eps^-1 + 1 + o(1)");
}

#[test]
fn make_zero_lead_non_pivotal() {
    let a = make(0, vec![q("0"), q("2")], false, None).unwrap();
    assert!(!a.is_pivotal());
    assert_eq!(a.k(), 1);
}

#[test]
fn make_rejects_bad_input() {
    assert_eq!(make::<Rational>(0, vec![], false, None), Err(ExpansionError::EmptyCoefficients));
    assert_eq!(make(0, vec![q("0")], true, None), Err(ExpansionError::PivotalZeroLead));
    assert!(matches!(RemainderBound::new(q("3/2"), q("1"), q("1")), Err(ExpansionError::InvalidBound(_))));
    assert!(matches!(RemainderBound::new(q("0"), q("1"), q("1")), Err(ExpansionError::InvalidBound(_))));
    assert!(matches!(RemainderBound::new(q("1"), q("-1"), q("1")), Err(ExpansionError::InvalidBound(_))));
    assert!(matches!(RemainderBound::new(q("1"), q("1"), q("0")), Err(ExpansionError::InvalidBound(_))));
}

// ---- normalize_bound ----

#[test]
fn normalize_fractional_delta() {
    let a = normalize_bound(0, vec![q("1")], q("3/2"), q("2"), q("1/2")).unwrap();
    assert_terms(&a, 0, &["1", "0"]);
    assert_eq!(a.bound(), Some(&bound("1/2", "2", "1/2")));
}

#[test]
fn normalize_unit_delta_is_identity() {
    let a = normalize_bound(0, vec![q("1")], q("1"), q("5"), q("1/10")).unwrap();
    assert_terms(&a, 0, &["1"]);
    assert_eq!(a.bound(), Some(&bound("1", "5", "1/10")));
}

#[test]
fn normalize_integer_delta() {
    let a = normalize_bound(-2, vec![q("3")], q("2"), q("1"), q("1/10")).unwrap();
    assert_terms(&a, -2, &["3", "0"]);
    assert_eq!(a.k(), -1);
    assert_eq!(a.bound().unwrap().delta(), &q("1"));
}

// ---- merge ----

#[test]
fn merge_longer_representation_wins() {
    let short = xb(0, &["1", "2"], bound("1", "10", "1/10"));
    let long = xb(0, &["1", "2", "5"], bound("1/2", "3", "1/10"));
    let m = merge(&short, &long).unwrap();
    assert_terms(&m, 0, &["1", "2", "5"]);
    assert_eq!(m.bound(), long.bound());
}

#[test]
fn merge_equal_orders_takes_smaller_constants() {
    let a = xb(0, &["1", "2"], bound("1/2", "3", "1/10"));
    let b = xb(0, &["1", "2"], bound("1/2", "1", "1/5"));
    let m = merge(&a, &b).unwrap();
    assert_eq!(m.bound(), Some(&bound("1/2", "1", "1/10")));
    assert_eq!(merge(&b, &a).unwrap(), m);
}

#[test]
fn merge_equal_orders_prefers_larger_delta() {
    let a = xb(0, &["1", "2"], bound("1/2", "1", "1/10"));
    let b = xb(0, &["1", "2"], bound("1", "7", "1/20"));
    assert_eq!(merge(&a, &b).unwrap().bound(), Some(&bound("1", "7", "1/20")));
}

#[test]
fn merge_detects_conflict() {
    let err = merge(&x(0, &["1", "2"]), &x(0, &["1", "3"])).unwrap_err();
    assert!(matches!(err, ExpansionError::InconsistentRepresentations { order: 1, .. }));
}

#[test]
fn merge_raises_the_lowest_order() {
    // 1 − (1 − ε) written as (0,1):[0,1] and as ε exactly: (1,1):[1].
    let m = merge(&x(0, &["0", "1"]), &x(1, &["1"])).unwrap();
    assert_terms(&m, 1, &["1"]);
    assert!(m.is_pivotal());
    let err = merge(&x(0, &["2", "1"]), &x(1, &["1"])).unwrap_err();
    assert!(matches!(err, ExpansionError::InconsistentRepresentations { order: 0, .. }));
}

// ---- scale ----

#[test]
fn scale_examples() {
    assert_terms(&scale(&q("2"), &x(0, &["1"])), 0, &["2"]);
    assert_terms(&scale(&q("-1"), &x(-1, &["1", "2"])), -1, &["-1", "-2"]);
    let zero = scale(&q("0"), &xb(0, &["1", "1"], bound("1", "4", "1/10")));
    assert_terms(&zero, 0, &["0", "0"]);
    assert!(!zero.is_pivotal());
    assert_eq!(zero.bound().unwrap().g(), &q("0"));
}

// ---- add ----

#[test]
fn add_examples() {
    assert_terms(&add(&x(0, &["1", "1"]), &x(0, &["1", "-1"])), 0, &["2", "0"]);
    assert_terms(&add(&x(-1, &["1", "1"]), &x(0, &["1", "1", "1"])), -1, &["1", "2"]);
    let cancel = add(&x(0, &["1", "1"]), &x(0, &["-1", "1"]));
    assert_terms(&cancel, 0, &["0", "2"]);
    assert!(!cancel.is_pivotal());
}

#[test]
fn add_bound_counts_dropped_terms() {
    // (1 + ε + 3ε²) + (1 + ε) exactly: the 3ε² term is dropped into the remainder.
    let a = xb(0, &["1", "1", "3"], bound("1", "0", "1/10"));
    let b = xb(0, &["1", "1"], bound("1", "0", "1/10"));
    let c = add(&a, &b);
    assert_terms(&c, 0, &["2", "2"]);
    assert_eq!(c.bound(), Some(&bound("1", "3", "1/10")));
}

// ---- mul ----

#[test]
fn mul_examples() {
    assert_terms(&mul(&x(0, &["1", "1"]), &x(0, &["1", "-1"])), 0, &["1", "0"]);
    assert_terms(&mul(&x(-1, &["1"]), &x(1, &["1"])), 0, &["1"]);
    assert_terms(&mul(&x(0, &["1", "2"]), &x(0, &["3"])), 0, &["3"]);
}

#[test]
fn mul_without_bounds_has_no_bound() {
    let a = xb(0, &["1"], bound("1", "1", "1/2"));
    assert!(mul(&a, &x(0, &["1"])).bound().is_none());
    assert!(mul(&a, &a).bound().is_some());
}

// ---- reciprocal ----

#[test]
fn reciprocal_examples() {
    assert_terms(&reciprocal(&x(0, &["1", "-1"])).unwrap(), 0, &["1", "1"]);
    assert_terms(&reciprocal(&x(1, &["2"])).unwrap(), -1, &["1/2"]);
    assert_terms(&reciprocal(&x(0, &["1", "1", "1"])).unwrap(), 0, &["1", "-1", "0"]);
}

#[test]
fn reciprocal_requires_pivotal() {
    assert_eq!(reciprocal(&x(0, &["0", "1"])), Err(ExpansionError::NotPivotal));
}

#[test]
fn reciprocal_radius_limits_validity() {
    // B = 1 − ε exactly; |B| ≥ 1/2 needs ε ≤ 1/2.
    let b = xb(0, &["1", "-1"], bound("1", "0", "1"));
    let c = reciprocal(&b).unwrap();
    assert_eq!(c.bound().unwrap().eps_max(), &q("1/2"));
}

// ---- div ----

#[test]
fn div_examples() {
    assert_terms(&div(&x(1, &["1", "1"]), &x(1, &["1"])).unwrap(), 0, &["1"]);
    assert_terms(&div(&x(0, &["1", "1"]), &x(0, &["1", "-1"])).unwrap(), 0, &["1", "2"]);
    let a = x(0, &["2", "3"]);
    assert_terms(&div(&a, &a).unwrap(), 0, &["1", "0"]);
}

#[test]
fn div_requires_pivotal_divisor() {
    assert_eq!(div(&x(0, &["1"]), &x(0, &["0", "1"])), Err(ExpansionError::NotPivotal));
}

// ---- sum_many ----

#[test]
fn sum_many_examples() {
    let terms = vec![x(0, &["1", "0"]), x(1, &["2", "0"]), x(0, &["0", "1", "5"])];
    assert_terms(&sum_many(&terms).unwrap(), 0, &["1", "3"]);
    let single = x(-2, &["4", "5"]);
    assert_eq!(sum_many(std::slice::from_ref(&single)).unwrap(), single);
    assert_eq!(sum_many::<Rational>(&[]), Err(ExpansionError::EmptySequence));
}

#[test]
fn sum_many_is_permutation_invariant_with_bounds() {
    let terms = vec![
        xb(0, &["1", "0"], bound("1/2", "2", "1/10")),
        xb(1, &["2", "0"], bound("1", "1", "1/5")),
        xb(0, &["0", "1", "5"], bound("1/3", "4", "1/10")),
    ];
    let reference = sum_many(&terms).unwrap();
    assert!(reference.bound().is_some());
    for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let permuted: Vec<Expansion> = perm.iter().map(|&i| terms[i].clone()).collect();
        assert_eq!(sum_many(&permuted).unwrap(), reference);
    }
}

// ---- prod_many ----

#[test]
fn prod_many_examples() {
    let f = x(0, &["1", "1"]);
    assert_terms(&prod_many(&[f.clone(), f.clone(), f]).unwrap(), 0, &["1", "3"]);
    assert_terms(&prod_many(&[x(1, &["2"]), x(-1, &["3"])]).unwrap(), 0, &["6"]);
    assert_eq!(prod_many::<Rational>(&[]), Err(ExpansionError::EmptySequence));
}

#[test]
fn prod_many_is_permutation_invariant_with_bounds() {
    let factors = vec![
        xb(0, &["1", "1"], bound("1/2", "1", "1/10")),
        xb(0, &["1", "1"], bound("1", "3", "1/20")),
        xb(-1, &["2", "1", "1"], bound("1/4", "2", "1/10")),
    ];
    let reference = prod_many(&factors).unwrap();
    assert!(reference.bound().is_some());
    for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let permuted: Vec<Expansion> = perm.iter().map(|&i| factors[i].clone()).collect();
        assert_eq!(prod_many(&permuted).unwrap(), reference);
    }
}

// ---- constant ----

#[test]
fn constant_examples() {
    let c = constant(q("1"), 2);
    assert_terms(&c, 0, &["1", "0", "0"]);
    assert_eq!(c.bound().unwrap().g(), &q("0"));
    assert_terms(&constant(q("1"), 0), 0, &["1"]);
    let z = constant(q("0"), 1);
    assert_terms(&z, 0, &["0", "0"]);
    assert!(!z.is_pivotal());
}

// ---- downgrade_delta ----

#[test]
fn downgrade_delta_examples() {
    let a = xb(0, &["1"], bound("1", "2", "1/2"));
    let d = downgrade_delta(&a, &q("1/2")).unwrap();
    let g = d.bound().unwrap().g().clone();
    // G* = 2·(1/2)^{1/2} = √2, rounded up.
    assert!(&g * &g >= q("2"));
    assert!(g < q("14142136/10000000"));
    assert_eq!(d.bound().unwrap().delta(), &q("1/2"));
    assert_eq!(d.bound().unwrap().eps_max(), &q("1/2"));

    assert_eq!(downgrade_delta(&a, &q("1")).unwrap(), a);
    let half = xb(0, &["1"], bound("1/2", "2", "1/2"));
    assert!(matches!(downgrade_delta(&half, &q("1")), Err(ExpansionError::DeltaTooLarge { .. })));
    assert_eq!(downgrade_delta(&x(0, &["1"]), &q("1/2")), Err(ExpansionError::MissingBound));
}

#[test]
fn fractional_root_helpers_bracket() {
    let lower = pow_down(&q("1/2"), &q("1/2"));
    assert!(&lower * &lower <= q("1/2"));
}

// ---- evaluate ----

#[test]
fn evaluate_examples() {
    // ε^-1 + 2ε at ε = 1/2.
    assert_eq!(evaluate(&x(-1, &["1", "0", "2"]), &q("1/2")).unwrap(), q("3"));
    assert_eq!(evaluate(&constant(q("1"), 3), &q("7/9")).unwrap(), q("1"));
    assert_eq!(evaluate(&x(0, &["0", "2"]), &q("1/4")).unwrap(), q("1/2"));
    assert!(matches!(evaluate(&x(0, &["1"]), &q("0")), Err(ExpansionError::NonpositiveEpsilon(_))));
}

// ---- generic coefficients ----

#[test]
fn machine_word_rationals_agree_with_big_rationals() {
    use num_rational::Rational64;
    let a = x(-1, &["2", "3", "-1"]);
    let b = x(0, &["1", "1/2", "1/3"]);
    let a64 = a.convert::<Rational64>().unwrap();
    let b64 = b.convert::<Rational64>().unwrap();
    let big = div(&a, &b).unwrap();
    let small = div(&a64, &b64).unwrap();
    assert_eq!(small.convert::<Rational>().unwrap(), big);
    assert_eq!(mul(&a64, &b64).convert::<Rational>().unwrap(), mul(&a, &b));
}

// ---- serialization ----

#[test]
fn json_round_trip_is_exact() {
    let a = xb(-1, &["1/3", "-2", "0"], bound("1/2", "7/3", "1/10"));
    let text = serde_json::to_string(&a).unwrap();
    assert!(text.contains("\"G\":\"7/3\""), "{text}");
    assert!(text.contains("\"coeffs\":[\"1/3\",\"-2\",\"0\"]"), "{text}");
    let back: Expansion = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
}

#[test]
fn json_rejects_inconsistent_window() {
    let text = r#"{"h":0,"k":3,"coeffs":["1","2"],"pivotal":true}"#;
    assert!(serde_json::from_str::<Expansion>(text).is_err());
}
