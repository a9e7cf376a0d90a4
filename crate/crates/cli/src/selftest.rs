//! Built-in consistency checks run by the `selftest` command.

use num_bigint::BigUint;
use tricolour_knots::alexander::{invariants, ln_big, EvalMode};
use tricolour_knots::diagram::KnotCode;
use tricolour_knots::fixtures;
use tricolour_knots::percolation::CubeSize;
use tricolour_knots::pipeline::{generate, sample_seed, simplify_config, SampleConfig};
use tricolour_knots::simplify::{apply_r3, find_faces_of_degree, is_admissible_trigon, simplify};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn exact(code: &KnotCode) -> Result<(BigUint, BigUint), String> {
    let p = invariants(code, EvalMode::Exact).map_err(|e| e.to_string())?;
    Ok((p.exact_at_minus1.unwrap_or_default(), p.exact_at_i_norm.unwrap_or_default()))
}

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn expect_pair(code: &KnotCode, want: (u32, u32)) -> Result<String, String> {
    let got = exact(code)?;
    let want = (BigUint::from(want.0), BigUint::from(want.1));
    if got == want {
        Ok(format!("|D(-1)| = {}, |D(i)|^2 = {}", got.0, got.1))
    } else {
        Err(format!("got ({}, {}), expected ({}, {})", got.0, got.1, want.0, want.1))
    }
}

fn table_trefoil() -> Result<String, String> {
    let (s, a, p, t) = fixtures::trefoil_tables();
    let code = KnotCode::from_tables(s, a, p, t).map_err(|e| e.to_string())?;
    let faces = code.faces().1;
    if faces != 5 {
        return Err(format!("{faces} faces"));
    }
    expect_pair(&code, (3, 1)).map(|d| format!("valid, 5 faces, {d}"))
}

fn reidemeister_invariance(samples: u64) -> Result<String, String> {
    let cfg = SampleConfig::new(CubeSize::new(10).expect("valid size"), EvalMode::Exact, 5);
    let mut moves = 0usize;
    for k in 0..samples {
        let seed = sample_seed(0x5e1f, k);
        let raw = generate(&cfg, seed).map_err(|e| e.to_string())?.raw;
        let reference = exact(&raw)?;
        let simple = simplify(&raw, &simplify_config(&cfg, seed));
        if exact(&simple)? != reference {
            return Err(format!("sample {k}: simplification changed the invariants"));
        }
        moves += raw.crossings() - simple.crossings();
        if let Some(f) = find_faces_of_degree(&raw, 3).into_iter().find(|&f| is_admissible_trigon(&raw, f)) {
            let moved = apply_r3(&raw, f).map_err(|e| e.to_string())?;
            if exact(&moved)? != reference {
                return Err(format!("sample {k}: triangle move changed the invariants"));
            }
        }
    }
    Ok(format!("{samples} codes, {moves} crossings removed"))
}

fn float_matches_exact(samples: u64) -> Result<String, String> {
    let cfg = SampleConfig::new(CubeSize::new(12).expect("valid size"), EvalMode::Both, 5);
    let mut worst = 0f64;
    for k in 0..samples {
        let seed = sample_seed(0xf10a7, k);
        let raw = generate(&cfg, seed).map_err(|e| e.to_string())?.raw;
        let simple = simplify(&raw, &simplify_config(&cfg, seed));
        let p = invariants(&simple, EvalMode::Both).map_err(|e| e.to_string())?;
        let tol = 1e-6 * simple.crossings().max(1) as f64;
        let d1 = (p.log_abs_at_minus1 - ln_big(p.exact_at_minus1.as_ref().expect("exact value"))).abs();
        let d2 = (p.log_abs_at_i - 0.5 * ln_big(p.exact_at_i_norm.as_ref().expect("exact value"))).abs();
        if d1.max(d2) > tol {
            return Err(format!("sample {k}: difference {:.3e} above {tol:.1e}", d1.max(d2)));
        }
        worst = worst.max(d1.max(d2) / tol);
    }
    Ok(format!("{samples} codes, worst difference {worst:.2e} of tolerance"))
}

fn connected_sums() -> Result<String, String> {
    let t = fixtures::trefoil();
    let e = fixtures::figure_eight();
    expect_pair(&fixtures::connected_sum(&t, &t), (9, 1))?;
    expect_pair(&fixtures::connected_sum(&t, &e), (15, 9))?;
    expect_pair(&fixtures::connected_sum(&e, &e), (25, 81))?;
    Ok("3#3, 3#4_1, 4_1#4_1 multiply".into())
}

pub fn run() -> Vec<Check> {
    vec![
        check("trefoil encoding table", table_trefoil()),
        check("trefoil invariants", expect_pair(&fixtures::trefoil(), (3, 1))),
        check("figure-eight invariants", expect_pair(&fixtures::figure_eight(), (5, 9))),
        check("connected sums", connected_sums()),
        check("Reidemeister invariance", reidemeister_invariance(50)),
        check("float and exact agree", float_matches_exact(50)),
    ]
}
