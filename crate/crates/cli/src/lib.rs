//! Sampling runs, analysis of stored runs, single-knot reports and the
//! embedded self-test.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tricolour_knots::alexander::{invariants, EvalMode};
use tricolour_knots::diagram::KnotCode;
use tricolour_knots::percolation::CubeSize;
use tricolour_knots::pipeline::{generate, run_sample, simplify_config, SampleConfig, SampleError};
use tricolour_knots::simplify::simplify;
use tricolour_knots::stats::{csv_tables, summarize, SampleRecord, StatsError};

pub mod selftest;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest size at which exact mode runs without an explicit override.
pub const EXACT_SIZE_LIMIT: u32 = 50;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "TRICOLOUR_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("sample {index} failed: {source}")]
    Sample { index: u64, source: SampleError },
    #[error("schema error in {path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("no records in input")]
    EmptyInput,
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CliError {
    fn io(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub size: CubeSize,
    pub samples: u64,
    pub base_seed: u64,
    pub workers: usize,
    pub mode: EvalMode,
    pub shake_rounds: u32,
    /// Store per-sample wall time; makes output depend on scheduling.
    pub timing: bool,
    /// Permit exact mode above [`EXACT_SIZE_LIMIT`].
    pub allow_large_exact: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples == 0 {
            return Err(CliError::Config("at least one sample is required".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("at least one worker is required".into()));
        }
        if self.mode.exact() && self.size.n() > EXACT_SIZE_LIMIT && !self.allow_large_exact {
            return Err(CliError::Config(format!("exact mode above N = {EXACT_SIZE_LIMIT} needs --allow-large-exact")));
        }
        Ok(())
    }

    fn sample_config(&self) -> SampleConfig {
        SampleConfig::new(self.size, self.mode, self.shake_rounds)
    }
}

/// First line of every run file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunHeader {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub size: u32,
    #[serde(rename = "M")]
    pub samples: u64,
    pub base_seed: u64,
    pub mode: EvalMode,
    pub shake_rounds: u32,
}

/// Default worker count: the environment variable, else the number of CPUs.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs all samples and streams them to `out` in index order.
pub fn write_samples(config: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    config.validate()?;
    let header = RunHeader {
        schema_version: SCHEMA_VERSION,
        size: config.size.n(),
        samples: config.samples,
        base_seed: config.base_seed,
        mode: config.mode,
        shake_rounds: config.shake_rounds,
    };
    let io_err = |e: io::Error| CliError::Io { path: PathBuf::from("<output>"), source: e };
    writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io_err)?;

    let sample_cfg = config.sample_config();
    let next = AtomicU64::new(0);
    let (tx, rx) = mpsc::channel::<(u64, Result<SampleRecord, SampleError>)>();
    std::thread::scope(|scope| -> Result<(), CliError> {
        for _ in 0..config.workers {
            let tx = tx.clone();
            let next = &next;
            let cfg = &sample_cfg;
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= config.samples {
                    break;
                }
                let r = run_sample(cfg, config.base_seed, k, config.timing);
                let failed = r.is_err();
                if tx.send((k, r)).is_err() || failed {
                    // Stop handing out work after a failure.
                    next.store(config.samples, Ordering::Relaxed);
                    break;
                }
            });
        }
        drop(tx);
        let mut pending: BTreeMap<u64, SampleRecord> = BTreeMap::new();
        let mut written = 0u64;
        let mut first_error: Option<CliError> = None;
        for (k, r) in rx {
            match r {
                Ok(rec) => {
                    pending.insert(k, rec);
                }
                Err(source) => {
                    next.store(config.samples, Ordering::Relaxed);
                    if first_error.as_ref().is_none_or(|e| matches!(e, CliError::Sample { index, .. } if *index > k)) {
                        first_error = Some(CliError::Sample { index: k, source });
                    }
                }
            }
            while let Some(rec) = pending.remove(&written) {
                if first_error.is_none() {
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes")).map_err(io_err)?;
                }
                written += 1;
            }
        }
        match first_error {
            Some(e) => Err(e),
            None => Ok(()),
        }
    })?;
    out.flush().map_err(io_err)
}

/// `sample`: writes a run file.
pub fn cmd_sample(config: &RunConfig, path: &Path) -> Result<(), CliError> {
    config.validate()?;
    let file = File::create(path).map_err(CliError::io(path))?;
    let mut w = BufWriter::new(file);
    write_samples(config, &mut w).map_err(|e| match e {
        CliError::Io { source, .. } => CliError::Io { path: path.to_path_buf(), source },
        other => other,
    })
}

/// Reads one run file: header and records.
pub fn read_run(path: &Path) -> Result<(RunHeader, Vec<SampleRecord>), CliError> {
    let file = File::open(path).map_err(CliError::io(path))?;
    let mut lines = BufReader::new(file).lines();
    let schema = |message: String| CliError::Schema { path: path.to_path_buf(), message };
    let first = lines.next().ok_or_else(|| schema("missing header".into()))?.map_err(CliError::io(path))?;
    let header: RunHeader = serde_json::from_str(&first).map_err(|e| schema(format!("bad header: {e}")))?;
    if header.schema_version != SCHEMA_VERSION {
        return Err(schema(format!("schema version {} (expected {SCHEMA_VERSION})", header.schema_version)));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(CliError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SampleRecord = serde_json::from_str(&line).map_err(|e| schema(format!("line {}: {e}", i + 2)))?;
        if rec.size != header.size {
            return Err(schema(format!("line {}: size {} differs from header {}", i + 2, rec.size, header.size)));
        }
        records.push(rec);
    }
    Ok((header, records))
}

/// `analyze`: writes the CSV tables and `summary.json` to `out_dir`.
pub fn cmd_analyze(out_dir: &Path, inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut records = Vec::new();
    for p in inputs {
        records.extend(read_run(p)?.1);
    }
    if records.is_empty() {
        return Err(CliError::EmptyInput);
    }
    let tables = csv_tables(&records)?;
    let summary = summarize(&records)?;
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let mut written = Vec::new();
    for (name, body) in tables {
        let p = out_dir.join(name);
        fs::write(&p, body).map_err(CliError::io(&p))?;
        written.push(p);
    }
    let p = out_dir.join("summary.json");
    fs::write(&p, serde_json::to_string_pretty(&summary).expect("summary serializes")).map_err(CliError::io(&p))?;
    written.push(p);
    Ok(written)
}

/// `knot`: human-readable report for one sample.
pub fn cmd_knot(size: CubeSize, seed: u64, mode: EvalMode, shake_rounds: u32) -> Result<String, CliError> {
    use std::fmt::Write as _;
    let cfg = SampleConfig::new(size, mode, shake_rounds);
    let sample = |e| CliError::Sample { index: 0, source: e };
    let knot = generate(&cfg, seed).map_err(sample)?;
    let simple = simplify(&knot.raw, &simplify_config(&cfg, seed));
    let inv = invariants(&simple, mode).map_err(|e| sample(e.into()))?;
    let mut out = String::new();
    writeln!(out, "size            {}", size.n()).unwrap();
    writeln!(out, "seed            {seed}").unwrap();
    writeln!(out, "curve length    {}", knot.curve.length()).unwrap();
    writeln!(out, "retries         {}", knot.retries).unwrap();
    writeln!(out, "crossings raw   {}", knot.raw.crossings()).unwrap();
    writeln!(out, "crossings final {}", simple.crossings()).unwrap();
    for (name, code) in [("raw", &knot.raw), ("final", &simple)] {
        writeln!(out, "encoding {name:<6} {}", check_line(code)).unwrap();
    }
    writeln!(out, "ln|D(-1)|       {}", inv.log_abs_at_minus1).unwrap();
    writeln!(out, "ln|D(i)|        {}", inv.log_abs_at_i).unwrap();
    if let (Some(a), Some(b)) = (&inv.exact_at_minus1, &inv.exact_at_i_norm) {
        writeln!(out, "|D(-1)|         {a}").unwrap();
        writeln!(out, "|D(i)|^2        {b}").unwrap();
    }
    writeln!(out, "code (u sigma alpha phi tau)").unwrap();
    out.push_str(&simple.dump());
    Ok(out)
}

fn check_line(code: &KnotCode) -> String {
    let items = match code.validate() {
        Ok(()) => "all encoding checks OK".to_string(),
        Err(e) => format!("FAILED check {}: {e}", e.item()),
    };
    let faces = code.faces().1;
    let expected = if code.is_empty() { faces } else { code.crossings() + 2 };
    let face_check =
        if faces == expected { "faces = n+2 OK".to_string() } else { format!("faces {faces} != n+2 FAILED") };
    format!("{items}; {face_check}")
}
