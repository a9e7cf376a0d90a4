//! One sample end to end: colouring, curve, projection, code, simplification
//! and invariants.

use std::time::Instant;

use thiserror::Error;

use crate::alexander::{invariants, EvalMode, SingularMatrix};
use crate::diagram::{build_code, detect_crossings, DegeneracyError, KnotCode, ValidationError};
use crate::interface::{trace_curve, FacePerturber, Perturbation, TopologyError, TricolourCurve};
use crate::percolation::{Boundary, ColouringGrid, CubeSize};
use crate::rng::mix;
use crate::simplify::{simplify, SimplifyConfig};
use crate::stats::SampleRecord;

/// Fresh perturbations tried after a degenerate projection.
pub const MAX_RETRIES: u32 = 8;

/// Stream tags separating the derived seeds of one sample.
const PERTURB_TAG: u64 = 0x7065_7274;
const SHAKE_TAG: u64 = 0x7368_616b;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub size: CubeSize,
    pub mode: EvalMode,
    pub shake_rounds: u32,
    pub shake_probability: f64,
    pub perturbation: Perturbation,
}

impl SampleConfig {
    pub fn new(size: CubeSize, mode: EvalMode, shake_rounds: u32) -> Self {
        Self { size, mode, shake_rounds, shake_probability: 0.5, perturbation: Perturbation::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("projection stayed degenerate after {MAX_RETRIES} retries: {0}")]
    Degenerate(DegeneracyError),
    #[error(transparent)]
    Code(#[from] ValidationError),
    #[error(transparent)]
    Singular(#[from] SingularMatrix),
}

/// Intermediate objects of one sample, for inspection.
#[derive(Debug, Clone)]
pub struct Knot {
    pub seed: u64,
    pub curve: TricolourCurve,
    pub raw: KnotCode,
    pub retries: u32,
}

/// Seed of sample `index` in a run with `base_seed`.
pub fn sample_seed(base_seed: u64, index: u64) -> u64 {
    mix(base_seed, index)
}

/// Colouring, curve and unsimplified code. A degenerate projection is
/// redrawn with a new perturbation seed; the colouring is kept.
pub fn generate(config: &SampleConfig, seed: u64) -> Result<Knot, SampleError> {
    let grid = ColouringGrid::sample(config.size, Boundary::Dobrushin, seed);
    let mut last = None;
    for retry in 0..=MAX_RETRIES {
        let perturber = FacePerturber::new(config.size, mix(seed ^ PERTURB_TAG, retry as u64), config.perturbation);
        let curve = trace_curve(&grid, &perturber)?;
        match detect_crossings(&curve) {
            Ok(crossings) => {
                let raw = build_code(&curve, &crossings)?;
                return Ok(Knot { seed, curve, raw, retries: retry });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(SampleError::Degenerate(last.expect("at least one attempt")))
}

pub fn simplify_config(config: &SampleConfig, seed: u64) -> SimplifyConfig {
    SimplifyConfig {
        shake_probability: config.shake_probability,
        shake_rounds: config.shake_rounds,
        rng_seed: mix(seed, SHAKE_TAG),
    }
}

/// Runs sample `index` of a run and summarizes it.
pub fn run_sample(
    config: &SampleConfig,
    base_seed: u64,
    index: u64,
    timing: bool,
) -> Result<SampleRecord, SampleError> {
    let start = Instant::now();
    let seed = sample_seed(base_seed, index);
    let knot = generate(config, seed)?;
    let simple = simplify(&knot.raw, &simplify_config(config, seed));
    let inv = invariants(&simple, config.mode)?;
    Ok(SampleRecord {
        size: config.size.n(),
        index,
        seed,
        length: knot.curve.length() as u64,
        crossings_raw: knot.raw.crossings() as u64,
        crossings_simplified: simple.crossings() as u64,
        retries: knot.retries,
        log_abs_minus1: inv.log_abs_at_minus1,
        log_abs_i: inv.log_abs_at_i,
        exact_minus1: inv.exact_at_minus1,
        exact_i_norm: inv.exact_at_i_norm,
        elapsed_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}
