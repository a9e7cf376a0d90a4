use num_bigint::BigUint;
use proptest::prelude::*;
use tricolour_knots::alexander::{invariants, EvalMode};
use tricolour_knots::diagram::{
    build_code, build_code_from_points, detect_crossings, detect_crossings_brute_force, KnotCode,
};
use tricolour_knots::fixtures;
use tricolour_knots::percolation::CubeSize;
use tricolour_knots::pipeline::{generate, SampleConfig};
use tricolour_knots::simplify::{
    apply_r1, apply_r2, apply_r3, find_faces_of_degree, find_monogons, is_admissible_trigon, simplify, InvalidMove,
    SimplifyConfig,
};

fn raw_code(n: u32, seed: u64) -> KnotCode {
    let cfg = SampleConfig::new(CubeSize::new(n).unwrap(), EvalMode::Exact, 0);
    generate(&cfg, seed).unwrap().raw
}

fn exact(code: &KnotCode) -> (BigUint, BigUint) {
    let p = invariants(code, EvalMode::Exact).unwrap();
    (p.exact_at_minus1.unwrap(), p.exact_at_i_norm.unwrap())
}

fn polyline_code(pts: &[[f64; 3]]) -> KnotCode {
    let crossings = detect_crossings_brute_force(pts).unwrap();
    let mut closed = pts.to_vec();
    closed.push(pts[0]);
    build_code_from_points(&closed, &crossings).unwrap().to_block_form()
}

/// A straight strand with a second strand dipping across it twice at the
/// given heights (the straight strand is at height 0).
fn two_crossing_loop(first: f64, second: f64) -> KnotCode {
    polyline_code(&[
        [-2.0, 0.0, 0.0],
        [2.0, 0.0, 0.0],
        [2.0, 2.0, 0.5],
        [1.0, 1.0, 2.0 * first - second],
        [0.0, -1.0, second],
        [-1.0, 1.0, second],
        [-2.0, 2.0, 0.5],
    ])
}

fn sorted_degrees(code: &KnotCode) -> Vec<usize> {
    let mut d = code.face_degrees();
    d.sort_unstable();
    d
}

#[test]
fn poke_bigon_unknots() {
    let poke = two_crossing_loop(1.0, 1.0);
    assert_eq!(poke.crossings(), 2);
    let bigons = find_faces_of_degree(&poke, 2);
    assert_eq!(bigons.len(), 1);
    assert!(apply_r2(&poke, bigons[0]).unwrap().is_empty());
}

#[test]
fn clasp_bigon_is_rejected() {
    let clasp = two_crossing_loop(1.0, -1.0);
    assert_eq!(clasp.crossings(), 2);
    let bigons = find_faces_of_degree(&clasp, 2);
    assert_eq!(bigons.len(), 1);
    assert!(matches!(apply_r2(&clasp, bigons[0]), Err(InvalidMove::Clasp(_))));
}

#[test]
fn double_kink_needs_two_moves() {
    let code = fixtures::connected_sum(&fixtures::kink(), &fixtures::kink()).to_block_form();
    assert_eq!(code.crossings(), 2);
    let once = apply_r1(&code, find_monogons(&code)[0]).unwrap();
    assert_eq!(once.crossings(), 1);
    assert!(apply_r1(&once, find_monogons(&once)[0]).unwrap().is_empty());
}

#[test]
fn trefoil_is_irreducible() {
    let code = fixtures::trefoil().to_block_form();
    let simple = simplify(&code, &SimplifyConfig { shake_rounds: 20, ..SimplifyConfig::default() });
    assert_eq!(simple.crossings(), 3);
}

#[test]
fn third_move_undoes_itself() {
    let mut tried = 0;
    for seed in 0..30 {
        let code = raw_code(6, seed).to_block_form();
        for f in find_faces_of_degree(&code, 3).into_iter().filter(|&f| is_admissible_trigon(&code, f)) {
            let moved = apply_r3(&code, f).unwrap();
            assert_eq!(moved.crossings(), code.crossings());
            assert_eq!(sorted_degrees(&moved).len(), sorted_degrees(&code).len());
            let back = apply_r3(&moved, f ^ 2).unwrap();
            assert_eq!(back.alpha(), code.alpha(), "seed {seed} face {f}");
            assert_eq!(sorted_degrees(&back), sorted_degrees(&code));
            tried += 1;
        }
    }
    assert!(tried > 20, "only {tried} trigons");
}

#[test]
fn moves_preserve_exact_invariants() {
    for seed in 0..100 {
        let code = simplify(
            &raw_code(10, seed).to_block_form(),
            &SimplifyConfig { shake_rounds: 3, ..SimplifyConfig::default() },
        );
        let reference = exact(&code);
        if let Some(f) = find_faces_of_degree(&code, 3).into_iter().find(|&f| is_admissible_trigon(&code, f)) {
            let moved = apply_r3(&code, f).unwrap();
            moved.validate().unwrap();
            assert_eq!(exact(&moved), reference, "seed {seed}");
        }
    }
    for seed in 0..100 {
        let code = raw_code(6, seed).to_block_form();
        let reference = exact(&code);
        if let Some(&u) = find_monogons(&code).first() {
            let moved = apply_r1(&code, u).unwrap();
            moved.validate().unwrap();
            assert_eq!(exact(&moved), reference, "seed {seed}");
        }
        if let Some(moved) = find_faces_of_degree(&code, 2).into_iter().find_map(|f| apply_r2(&code, f).ok()) {
            moved.validate().unwrap();
            assert_eq!(exact(&moved), reference, "seed {seed}");
        }
    }
}

/// Cycles of `alpha . sigma^2` as lengths.
fn strand_cycles(code: &KnotCode) -> Vec<usize> {
    let (s, a) = (code.sigma(), code.alpha());
    let mut seen = vec![false; code.half_edges()];
    let mut out = Vec::new();
    for start in 0..code.half_edges() {
        let mut len = 0;
        let mut u = start;
        while !seen[u] {
            seen[u] = true;
            len += 1;
            u = a[s[s[u] as usize] as usize] as usize;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_codes_are_well_formed(n in 3u32..9, seed in any::<u64>()) {
        let cfg = SampleConfig::new(CubeSize::new(n).unwrap(), EvalMode::Float, 0);
        let knot = generate(&cfg, seed).unwrap();
        let code = &knot.raw;
        prop_assert!(code.validate().is_ok());
        if !code.is_empty() {
            let c = code.crossings();
            prop_assert_eq!(code.faces().1, c + 2);
            prop_assert_eq!(strand_cycles(code), vec![2 * c, 2 * c]);
            for k in 0..c {
                let ups = (0..4).filter(|&j| code.tau()[4 * k + j] > 0).count();
                prop_assert_eq!(ups, 2);
            }
        }
        let again = build_code(&knot.curve, &detect_crossings(&knot.curve).unwrap()).unwrap();
        prop_assert_eq!(&again, code);
    }

    #[test]
    fn simplification_is_monotone_and_stable(n in 3u32..9, seed in any::<u64>(), rounds in 0u32..6) {
        let code = raw_code(n, seed);
        let cfg = SimplifyConfig { shake_rounds: rounds, rng_seed: seed, ..SimplifyConfig::default() };
        let once = simplify(&code, &cfg);
        prop_assert!(once.validate().is_ok());
        prop_assert!(once.crossings() <= code.crossings());
        prop_assert!(find_monogons(&once).is_empty());
        prop_assert!(find_faces_of_degree(&once, 2).into_iter().all(|f| apply_r2(&once, f).is_err()));
        let still = SimplifyConfig { shake_rounds: 0, ..cfg };
        let fixed = simplify(&once, &still);
        prop_assert_eq!(&simplify(&fixed, &still), &fixed);
        if rounds == 0 {
            prop_assert_eq!(&fixed, &once);
        }
        prop_assert_eq!(exact(&once), exact(&code));
    }
}
