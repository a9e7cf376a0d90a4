use num_bigint::BigUint;

use super::*;
use crate::fixtures;
use crate::fixtures::trefoil_tables;

fn table_trefoil() -> KnotCode {
    let (s, a, p, t) = trefoil_tables();
    KnotCode::from_tables(s, a, p, t).unwrap()
}

fn exact_pair(code: &KnotCode) -> (BigUint, BigUint) {
    let p = invariants(code, EvalMode::Exact).unwrap();
    (p.exact_at_minus1.unwrap(), p.exact_at_i_norm.unwrap())
}

fn big(x: u32) -> BigUint {
    BigUint::from(x)
}

#[test]
fn table_trefoil_values() {
    let m = build_matrix(&table_trefoil());
    assert_eq!((m.n_rows, m.n_cols), (3, 5));
    let sq = delete_columns(&m);
    assert_eq!(sq.n, 3);
    assert_eq!(eval_exact(&sq, EvalPoint::MinusOne), big(3));
    assert_eq!(eval_exact(&sq, EvalPoint::I), big(1));
    assert!((eval_log_abs(&sq, EvalPoint::MinusOne).unwrap() - 3f64.ln()).abs() < 1e-9);
    assert!(eval_log_abs(&sq, EvalPoint::I).unwrap().abs() < 1e-9);
}

#[test]
fn geometric_trefoil_matches_table() {
    let code = fixtures::trefoil();
    assert_eq!(code.crossings(), 3);
    assert_eq!(exact_pair(&code), (big(3), big(1)));
}

#[test]
fn figure_eight_values() {
    let code = fixtures::figure_eight();
    assert_eq!(code.crossings(), 4);
    // |Δ(i)| = 3, so the squared modulus is 9.
    assert_eq!(exact_pair(&code), (big(5), big(9)));
    let p = invariants(&code, EvalMode::Float).unwrap();
    assert!((p.log_abs_at_minus1 - 5f64.ln()).abs() < 1e-9);
    assert!((p.log_abs_at_i - 3f64.ln()).abs() < 1e-9);
}

#[test]
fn unknot_diagrams() {
    assert_eq!(exact_pair(&KnotCode::empty()), (big(1), big(1)));
    let sq = delete_columns(&build_matrix(&fixtures::kink()));
    assert_eq!(sq.n, 1);
    assert_eq!(eval_exact(&sq, EvalPoint::MinusOne), big(1));
    assert_eq!(exact_pair(&fixtures::kink()), (big(1), big(1)));
}

#[test]
fn connected_sums_multiply() {
    let t = fixtures::trefoil();
    let e = fixtures::figure_eight();
    assert_eq!(exact_pair(&fixtures::connected_sum(&t, &t)), (big(9), big(1)));
    assert_eq!(exact_pair(&fixtures::connected_sum(&t, &e)), (big(15), big(9)));
    assert_eq!(exact_pair(&fixtures::connected_sum(&e, &e)), (big(25), big(81)));
}

#[test]
fn any_neighbouring_pair_gives_same_magnitude() {
    for code in [
        table_trefoil(),
        fixtures::figure_eight(),
        fixtures::connected_sum(&fixtures::trefoil(), &fixtures::figure_eight()),
    ] {
        let m = build_matrix(&code);
        let (labels, _) = code.faces();
        let reference =
            (eval_exact(&delete_columns(&m), EvalPoint::MinusOne), eval_exact(&delete_columns(&m), EvalPoint::I));
        for u in 0..code.half_edges() {
            let pair = [labels[u], labels[code.alpha()[u] as usize]];
            let sq = delete_pair(&m, pair);
            assert_eq!((eval_exact(&sq, EvalPoint::MinusOne), eval_exact(&sq, EvalPoint::I)), reference);
        }
    }
}

#[test]
fn rows_vanish_at_one_and_touch_at_most_four_faces() {
    let code = fixtures::connected_sum(&fixtures::figure_eight(), &fixtures::trefoil());
    let m = build_matrix(&code);
    for r in 0..m.n_rows as u32 {
        let row: Vec<_> = m.entries.iter().filter(|e| e.0 == r).collect();
        assert!(row.len() <= 4);
        let at_one: i64 = row.iter().map(|e| e.2.a + e.2.b).sum();
        assert_eq!(at_one, 0);
    }
}

#[test]
fn mirrored_convention_is_wrong() {
    // Walking the corners clockwise keeps |Δ(-1)| but breaks |Δ(i)| of the
    // figure-eight.
    let code = fixtures::figure_eight();
    let mirrored = build_with_corners(&code, [Linear::T, Linear::MINUS_ONE, Linear::ONE, Linear::MINUS_T]);
    let sq = delete_columns(&mirrored);
    assert_eq!(eval_exact(&sq, EvalPoint::MinusOne), big(5));
    assert_ne!(eval_exact(&sq, EvalPoint::I), big(9));
}

#[test]
fn known_knots_pin_the_corner_convention() {
    // Of the 24 assignments of {t, -t, 1, -1} to the corners only the chosen
    // one, its negation, and the two with the roles of t and 1 exchanged give
    // the right values on the trefoil, figure-eight and their sum.
    let base = [Linear::T, Linear::MINUS_T, Linear::ONE, Linear::MINUS_ONE];
    let codes = [
        fixtures::trefoil(),
        fixtures::figure_eight(),
        fixtures::connected_sum(&fixtures::trefoil(), &fixtures::figure_eight()),
    ];
    let expected = [(big(3), big(1)), (big(5), big(9)), (big(15), big(9))];
    let mut passing = Vec::new();
    for perm in 0..256usize {
        let p = [perm & 3, (perm >> 2) & 3, (perm >> 4) & 3, perm >> 6];
        if (0..4).any(|i| (i + 1..4).any(|j| p[i] == p[j])) {
            continue;
        }
        let corners = p.map(|i| base[i]);
        let ok = codes.iter().zip(&expected).all(|(k, e)| {
            let sq = delete_columns(&build_with_corners(k, corners));
            (eval_exact(&sq, EvalPoint::MinusOne), eval_exact(&sq, EvalPoint::I)) == *e
        });
        if ok {
            passing.push(p);
        }
    }
    passing.sort_unstable();
    assert_eq!(passing, vec![[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]);
}

#[test]
fn ln_big_matches_float() {
    assert!((ln_big(&big(3)) - 3f64.ln()).abs() < 1e-15);
    let huge = BigUint::from(3u32).pow(200);
    assert!((ln_big(&huge) - 200.0 * 3f64.ln()).abs() < 1e-9);
}
