//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Sample counts default to the pinned values. `TRICOLOUR_ACCEPTANCE_SAMPLES`
//! lowers the large-run count for quick local checks; the run then reports
//! itself as reduced and cannot pass.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use tricolour_cli::{default_workers, write_samples, RunConfig};
use tricolour_knots::alexander::{
    build_matrix, delete_columns, eval_exact, invariants, ln_big, EvalMode, EvalPoint, InvariantPair,
};
use tricolour_knots::diagram::KnotCode;
use tricolour_knots::fixtures;
use tricolour_knots::percolation::CubeSize;
use tricolour_knots::pipeline::{generate, sample_seed, simplify_config, SampleConfig};
use tricolour_knots::simplify::{simplify, SimplifyConfig, DEFAULT_SHAKE_ROUNDS};
use tricolour_knots::stats::{
    divisibility_table, ecdf_distance, length_limit_survival, summarize, unknot_candidate_fraction, EcdfTable,
    SampleRecord,
};

const BASE_SEED: u64 = 20_260_101;
const FULL_SAMPLES: u64 = 10_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn size(n: u32) -> CubeSize {
    CubeSize::new(n).expect("valid size")
}

fn sample_run(n: u32, samples: u64, mode: EvalMode, workers: usize) -> Vec<u8> {
    let config = RunConfig {
        size: size(n),
        samples,
        base_seed: BASE_SEED,
        workers,
        mode,
        shake_rounds: DEFAULT_SHAKE_ROUNDS,
        timing: false,
        allow_large_exact: false,
    };
    let mut out = Vec::new();
    write_samples(&config, &mut out).expect("sampling run");
    out
}

fn records(n: u32, samples: u64, mode: EvalMode) -> Vec<SampleRecord> {
    let start = Instant::now();
    let bytes = sample_run(n, samples, mode, default_workers());
    let recs: Vec<SampleRecord> = String::from_utf8(bytes)
        .expect("utf-8 output")
        .lines()
        .skip(1)
        .map(|l| serde_json::from_str(l).expect("record"))
        .collect();
    eprintln!("  sampled N={n} M={samples} {mode:?} in {:.1} s", start.elapsed().as_secs_f64());
    recs
}

fn exact_pair(p: &InvariantPair) -> (BigUint, BigUint) {
    (p.exact_at_minus1.clone().unwrap_or_default(), p.exact_at_i_norm.clone().unwrap_or_default())
}

fn known_knots() -> Outcome {
    let start = Instant::now();
    let cases: [(&str, KnotCode, u32, u32); 4] = [
        ("trefoil", fixtures::trefoil(), 3, 1),
        ("figure-eight", fixtures::figure_eight(), 5, 3),
        ("unknot (kink)", fixtures::kink(), 1, 1),
        ("unknot (empty)", KnotCode::empty(), 1, 1),
    ];
    let mut failures = Vec::new();
    for (name, code, at_minus1, at_i) in &cases {
        let exact = invariants(code, EvalMode::Exact).expect("regular matrix");
        if exact_pair(&exact) != (BigUint::from(*at_minus1), BigUint::from(at_i * at_i)) {
            failures.push(format!("{name}: exact {:?}", exact_pair(&exact)));
        }
        let float = invariants(code, EvalMode::Float).expect("regular matrix");
        let err = (float.log_abs_at_minus1 - (*at_minus1 as f64).ln())
            .abs()
            .max((float.log_abs_at_i - (*at_i as f64).ln()).abs());
        if err > 1e-9 {
            failures.push(format!("{name}: float log error {err:.2e}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {:.2} s", elapsed.as_secs_f64()));
    }
    if failures.is_empty() {
        outcome(true, "3/1, 5/3, 1/1 exact; float logs within 1e-9")
    } else {
        outcome(false, failures.join("; "))
    }
}

fn code_invariants() -> Outcome {
    let start = Instant::now();
    let cfg = SampleConfig::new(size(20), EvalMode::Float, 0);
    let mut bad = Vec::new();
    let mut crossings = 0usize;
    for k in 0..1000u64 {
        let code = match generate(&cfg, sample_seed(BASE_SEED, k)) {
            Ok(knot) => knot.raw,
            Err(e) => {
                bad.push(format!("sample {k}: {e}"));
                continue;
            }
        };
        crossings += code.crossings();
        if let Err(e) = code.validate() {
            bad.push(format!("sample {k}: {e}"));
        } else if !code.is_empty() && code.faces().1 != code.crossings() + 2 {
            bad.push(format!("sample {k}: {} faces for {} crossings", code.faces().1, code.crossings()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = bad.is_empty() && elapsed < 60.0;
    let detail = format!("1000 codes, {crossings} crossings, {} failures, {elapsed:.1} s", bad.len());
    outcome(passed, bad.first().map_or(detail.clone(), |b| format!("{detail}; first: {b}")))
}

fn at_minus_one(code: &KnotCode) -> BigUint {
    if code.is_empty() {
        return BigUint::from(1u32);
    }
    eval_exact(&delete_columns(&build_matrix(code)), EvalPoint::MinusOne)
}

fn reidemeister_invariance() -> Outcome {
    let start = Instant::now();
    let cfg = SampleConfig::new(size(15), EvalMode::Exact, 5);
    let mut bad = Vec::new();
    let mut removed = 0usize;
    for k in 0..200u64 {
        let seed = sample_seed(BASE_SEED, k);
        let raw = generate(&cfg, seed).expect("sample").raw;
        let reduced = simplify(&raw, &SimplifyConfig { shake_rounds: 0, ..simplify_config(&cfg, seed) });
        let shaken = simplify(&raw, &simplify_config(&cfg, seed));
        let values = [at_minus_one(&raw), at_minus_one(&reduced), at_minus_one(&shaken)];
        if values[0] != values[1] || values[0] != values[2] {
            bad.push(format!("sample {k}: {values:?}"));
        }
        removed += raw.crossings() - shaken.crossings();
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = bad.is_empty() && elapsed < 300.0;
    outcome(passed, format!("200 samples, {removed} crossings removed, {} mismatches, {elapsed:.1} s", bad.len()))
}

fn float_exact_agreement(recs: &[SampleRecord]) -> Outcome {
    let mut worst = 0f64;
    let mut bad = 0usize;
    for r in recs {
        let tol = 1e-6 * r.crossings_simplified.max(1) as f64;
        let (Some(a), Some(b)) = (&r.exact_minus1, &r.exact_i_norm) else {
            bad += 1;
            continue;
        };
        let err = (r.log_abs_minus1 - ln_big(a)).abs().max((r.log_abs_i - 0.5 * ln_big(b)).abs());
        worst = worst.max(err / tol);
        if err > tol {
            bad += 1;
        }
    }
    outcome(
        bad == 0 && recs.len() >= 200,
        format!("{} samples at N=40, worst error {worst:.2e} of tolerance, {bad} failures", recs.len()),
    )
}

fn fraction_check(n: u32, recs: &[SampleRecord], target: f64, tol: f64) -> (bool, String) {
    let f = unknot_candidate_fraction(recs);
    let ok = (f.fraction - target).abs() <= tol;
    (ok, format!("N={n}: {:.4} ± {:.4} ({}/{}) vs {target} ± {tol}", f.fraction, f.std_error, f.count, f.total))
}

fn unknot_fractions(n30: &[SampleRecord], n40: &[SampleRecord]) -> Outcome {
    let (a, da) = fraction_check(30, n30, 0.305, 0.020);
    let (b, db) = fraction_check(40, n40, 0.157, 0.015);
    outcome(a && b, format!("{da}; {db}"))
}

fn scaling(recs: &[SampleRecord]) -> Outcome {
    let s = match summarize(recs) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (Some(len), Some(cross)) = (&s.length_exponent, &s.crossing_exponent) else {
        return outcome(false, "exponents missing");
    };
    let means: Vec<String> = s.sizes.iter().map(|z| format!("{}:{:.3}", z.size, z.log_abs_minus1.mean)).collect();
    let passed =
        (2.7..=3.3).contains(&len.exponent) && (3.6..=4.4).contains(&cross.exponent) && s.log_minus1_increasing;
    outcome(
        passed,
        format!(
            "length exponent {:.3}, crossing exponent {:.3}, E[log|D(-1)|] by size {}",
            len.exponent,
            cross.exponent,
            means.join(" ")
        ),
    )
}

fn length_law(recs: &[SampleRecord]) -> Outcome {
    let table = EcdfTable::normalized(recs.iter().map(|r| r.length as f64).collect()).expect("lengths");
    let d = ecdf_distance(&table, length_limit_survival);
    outcome(d <= 0.05, format!("sup distance {d:.4} on {} samples at N=40", table.len()))
}

fn divisibility(recs: &[SampleRecord]) -> Outcome {
    let rows = divisibility_table(recs, &[3, 5]);
    let total = rows[0].total;
    let ok3 = (rows[0].fraction - 0.542).abs() <= 0.030;
    let ok5 = (rows[1].fraction - 0.291).abs() <= 0.025;
    outcome(
        ok3 && ok5 && total >= 5000,
        format!(
            "{total} exact samples: by 3 {:.4} (0.542 ± 0.030), by 5 {:.4} (0.291 ± 0.025)",
            rows[0].fraction, rows[1].fraction
        ),
    )
}

fn parity(runs: &[&[SampleRecord]]) -> Outcome {
    let values: Vec<&BigUint> = runs.iter().flat_map(|r| r.iter()).filter_map(|r| r.exact_minus1.as_ref()).collect();
    let even = values.iter().filter(|v| !v.bit(0)).count();
    outcome(even == 0 && !values.is_empty(), format!("{} exact values, {even} even", values.len()))
}

fn determinism() -> Outcome {
    let runs: Vec<Vec<u8>> = [1, 4, 8].iter().map(|&w| sample_run(10, 100, EvalMode::Both, w)).collect();
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    outcome(same, format!("N=10, 100 samples, workers 1/4/8: {} bytes each, identical = {same}", runs[0].len()))
}

fn main() -> ExitCode {
    let samples =
        std::env::var("TRICOLOUR_ACCEPTANCE_SAMPLES").ok().and_then(|v| v.parse().ok()).unwrap_or(FULL_SAMPLES);
    let reduced = samples < FULL_SAMPLES;
    if reduced {
        eprintln!("reduced run: {samples} samples per large set instead of {FULL_SAMPLES}");
    }
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut record = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!("{} [{id}] {name}: {} ({secs:.1} s)", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o, secs));
    };

    record(1, "known knots", &mut known_knots);
    record(2, "code invariants at N=20", &mut code_invariants);
    record(3, "Reidemeister invariance at N=15", &mut reidemeister_invariance);

    let n40 = records(40, samples, EvalMode::Both);
    let mut sized: Vec<SampleRecord> = Vec::new();
    for n in [10, 15, 20, 25, 30] {
        sized.extend(records(n, samples, EvalMode::Float));
    }
    let n30: Vec<SampleRecord> = sized.iter().filter(|r| r.size == 30).cloned().collect();

    record(4, "float/exact agreement", &mut || float_exact_agreement(&n40));
    record(5, "unknot-candidate fractions", &mut || unknot_fractions(&n30, &n40));
    record(6, "scaling over N=10..30", &mut || scaling(&sized));
    record(7, "normalized length law at N=40", &mut || length_law(&n40));
    record(8, "divisibility at N=40", &mut || divisibility(&n40));
    record(9, "parity of exact values", &mut || parity(&[&n40]));
    record(10, "worker-count determinism", &mut determinism);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if reduced {
        println!("FAIL reduced sample count; large-sample criteria were not run at their pinned size");
        return ExitCode::FAILURE;
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
