//! Aggregation of per-sample records: scaling fits, survival functions,
//! normalized laws, unknot-candidate fractions and divisibility tables.
//!
//! Standard errors are plain CLT estimates (sample standard deviation over
//! the square root of the count).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One knot sample. Big integers are stored as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub size: u32,
    pub index: u64,
    pub seed: u64,
    /// Segments of the open interface curve.
    pub length: u64,
    pub crossings_raw: u64,
    pub crossings_simplified: u64,
    /// Perturbations redrawn after degenerate projections.
    pub retries: u32,
    pub log_abs_minus1: f64,
    pub log_abs_i: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal")]
    pub exact_minus1: Option<BigUint>,
    /// Squared modulus `|Δ(i)|^2`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal")]
    pub exact_i_norm: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("bad integer {s:?}"))))
            .transpose()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no records")]
    EmptyInput,
}

/// Mean and CLT standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub count: usize,
    pub mean: f64,
    pub std_error: f64,
}

pub fn estimate(values: impl IntoIterator<Item = f64>) -> Estimate {
    let v: Vec<f64> = values.into_iter().collect();
    let n = v.len();
    if n == 0 {
        return Estimate { count: 0, mean: f64::NAN, std_error: f64::NAN };
    }
    let mean = v.iter().sum::<f64>() / n as f64;
    let var = if n > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
    Estimate { count: n, mean, std_error: (var / n as f64).sqrt() }
}

/// Sorted sample with its mean, for survival functions `G(x) = P(X > x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfTable {
    values: Vec<f64>,
    mean: f64,
}

impl EcdfTable {
    pub fn new(mut values: Vec<f64>) -> Result<Self, StatsError> {
        if values.is_empty() {
            return Err(StatsError::EmptyInput);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::Domain("non-finite sample".into()));
        }
        values.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self { values, mean })
    }

    /// Values divided by their own mean, so the result has mean 1.
    pub fn normalized(values: Vec<f64>) -> Result<Self, StatsError> {
        let t = Self::new(values)?;
        if t.mean <= 0.0 {
            return Err(StatsError::Domain("normalization needs a positive mean".into()));
        }
        let m = t.mean;
        Self::new(t.values.into_iter().map(|v| v / m).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Empirical `P(X > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        let above = self.values.len() - self.values.partition_point(|&v| v <= x);
        above as f64 / self.values.len() as f64
    }

    /// Distinct sample points with `P(X >= x)` and `P(X > x)`.
    fn steps(&self) -> Vec<(f64, f64, f64)> {
        let n = self.values.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.values.len() {
            let x = self.values[i];
            let mut j = i;
            while j < self.values.len() && self.values[j] == x {
                j += 1;
            }
            out.push((x, (self.values.len() - i) as f64 / n, (self.values.len() - j) as f64 / n));
            i = j;
        }
        out
    }
}

/// Sup distance between the empirical survival function and a continuous
/// reference, checked on both sides of every jump.
pub fn ecdf_distance(ecdf: &EcdfTable, reference: impl Fn(f64) -> f64) -> f64 {
    ecdf.steps()
        .into_iter()
        .map(|(x, left, right)| {
            let r = reference(x);
            (left - r).abs().max((right - r).abs())
        })
        .fold(0.0, f64::max)
}

/// Limit law of the normalized curve length, `(1 - x/2)` on `(0, 2)`.
pub fn length_limit_survival(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < 2.0 {
        1.0 - x / 2.0
    } else {
        0.0
    }
}

/// Cutoff `b = (2 - α)/(1 - α)` beyond which `h(·, α)` vanishes.
pub fn repartition_cutoff(alpha: f64) -> f64 {
    (2.0 - alpha) / (1.0 - alpha)
}

/// Survival function of the density `C x^(-α)` on `(0, b_α)`, which has mean 1.
pub fn h_repartition(x: f64, alpha: f64) -> Result<f64, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::Domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(StatsError::Domain(format!("x = {x} is not a non-negative number")));
    }
    Ok(1.0 - ((1.0 - alpha) * x / (2.0 - alpha)).powf(1.0 - alpha).min(1.0))
}

/// Grid of α values searched by [`fit_alpha`].
pub fn alpha_grid() -> impl Iterator<Item = f64> {
    (1..100).map(|k| k as f64 / 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaFit {
    pub alpha: f64,
    pub distance: f64,
}

/// α on the 0.01 grid minimizing the sup distance to `h(·, α)`. Negative
/// samples are compared at 0.
pub fn fit_alpha(ecdf: &EcdfTable) -> AlphaFit {
    let steps = ecdf.steps();
    let mut best = AlphaFit { alpha: f64::NAN, distance: f64::INFINITY };
    for alpha in alpha_grid() {
        let d = steps
            .iter()
            .map(|&(x, left, right)| {
                let r = h_repartition(x.max(0.0), alpha).expect("grid inside domain");
                (left - r).abs().max((right - r).abs())
            })
            .fold(0.0, f64::max);
        if d < best.distance {
            best = AlphaFit { alpha, distance: d };
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
}

/// Least squares of `ln(mean)` on `ln(N)`.
pub fn fit_scaling_exponent(pairs: &[(f64, f64)]) -> Result<ScalingFit, StatsError> {
    let mut sizes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(StatsError::Domain("need at least three distinct sizes".into()));
    }
    if pairs.iter().any(|&(n, m)| n <= 0.0 || m <= 0.0) {
        return Err(StatsError::Domain("sizes and means must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(n, m)| (n.ln(), m.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(ScalingFit { exponent: slope, prefactor: (my - slope * mx).exp() })
}

/// Float tolerance on `ln|Δ|` for calling an invariant equal to 1.
pub const UNKNOT_LOG_TOLERANCE: f64 = 1e-6;

/// Whether both invariants equal 1: exactly when exact values are present,
/// otherwise within [`UNKNOT_LOG_TOLERANCE`] in log.
pub fn is_unknot_candidate(r: &SampleRecord) -> bool {
    match (&r.exact_minus1, &r.exact_i_norm) {
        (Some(a), Some(b)) => a.is_one() && b.is_one(),
        _ => r.log_abs_minus1.abs() < UNKNOT_LOG_TOLERANCE && r.log_abs_i.abs() < UNKNOT_LOG_TOLERANCE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub count: usize,
    pub total: usize,
    pub fraction: f64,
    pub std_error: f64,
}

impl Fraction {
    pub fn new(count: usize, total: usize) -> Self {
        let f = if total == 0 { f64::NAN } else { count as f64 / total as f64 };
        Self { count, total, fraction: f, std_error: (f * (1.0 - f) / total as f64).sqrt() }
    }
}

pub fn unknot_candidate_fraction(records: &[SampleRecord]) -> Fraction {
    Fraction::new(records.iter().filter(|r| is_unknot_candidate(r)).count(), records.len())
}

/// Products of small powers of 3 and 5 tracked for `|Δ(-1)|`.
pub const DIVISORS: [u32; 19] = [3, 5, 9, 15, 25, 27, 45, 75, 125, 81, 135, 225, 375, 625, 243, 405, 675, 1875, 3125];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityRow {
    pub divisor: u32,
    pub count: usize,
    pub total: usize,
    pub fraction: f64,
    /// `fraction * divisor`: 1 for uniformly random integers.
    pub excess: f64,
}

/// Divisibility frequencies over the records that carry an exact value.
pub fn divisibility_table(records: &[SampleRecord], divisors: &[u32]) -> Vec<DivisibilityRow> {
    let values: Vec<&BigUint> = records.iter().filter_map(|r| r.exact_minus1.as_ref()).collect();
    divisors
        .iter()
        .map(|&d| {
            let count = values.iter().filter(|v| (**v % d).is_zero()).count();
            let fraction = count as f64 / values.len() as f64;
            DivisibilityRow { divisor: d, count, total: values.len(), fraction, excess: fraction * d as f64 }
        })
        .collect()
}

/// Records grouped by cube size.
pub fn by_size(records: &[SampleRecord]) -> BTreeMap<u32, Vec<SampleRecord>> {
    let mut map: BTreeMap<u32, Vec<SampleRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.size).or_default().push(r.clone());
    }
    for v in map.values_mut() {
        v.sort_by_key(|r| r.index);
    }
    map
}

/// Per-size summary written into the analysis JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub size: u32,
    pub count: usize,
    pub length: Estimate,
    pub crossings_raw: Estimate,
    pub crossings_simplified: Estimate,
    pub log_abs_minus1: Estimate,
    pub log_abs_i: Estimate,
    pub unknot_candidates: Fraction,
    /// Sup distance of the normalized length to `(1 - x/2)` on `(0, 2)`.
    pub length_limit_distance: f64,
    pub alpha_minus1: Option<AlphaFit>,
    pub alpha_i: Option<AlphaFit>,
    pub exact_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub sizes: Vec<SizeSummary>,
    pub length_exponent: Option<ScalingFit>,
    pub crossing_exponent: Option<ScalingFit>,
    pub log_minus1_exponent: Option<ScalingFit>,
    pub log_i_exponent: Option<ScalingFit>,
    pub log_minus1_increasing: bool,
    pub standard_errors: String,
}

/// Minimum sample count before fitting α.
pub const ALPHA_FIT_MIN_SAMPLES: usize = 100;

fn size_summary(size: u32, recs: &[SampleRecord]) -> Result<SizeSummary, StatsError> {
    let length = EcdfTable::normalized(recs.iter().map(|r| r.length as f64).collect())?;
    let fit = |vals: Vec<f64>| -> Option<AlphaFit> {
        if vals.len() < ALPHA_FIT_MIN_SAMPLES {
            return None;
        }
        EcdfTable::normalized(vals).ok().map(|t| fit_alpha(&t))
    };
    Ok(SizeSummary {
        size,
        count: recs.len(),
        length: estimate(recs.iter().map(|r| r.length as f64)),
        crossings_raw: estimate(recs.iter().map(|r| r.crossings_raw as f64)),
        crossings_simplified: estimate(recs.iter().map(|r| r.crossings_simplified as f64)),
        log_abs_minus1: estimate(recs.iter().map(|r| r.log_abs_minus1)),
        log_abs_i: estimate(recs.iter().map(|r| r.log_abs_i)),
        unknot_candidates: unknot_candidate_fraction(recs),
        length_limit_distance: ecdf_distance(&length, length_limit_survival),
        alpha_minus1: fit(recs.iter().map(|r| r.log_abs_minus1).collect()),
        alpha_i: fit(recs.iter().map(|r| r.log_abs_i).collect()),
        exact_count: recs.iter().filter(|r| r.exact_minus1.is_some()).count(),
    })
}

pub fn summarize(records: &[SampleRecord]) -> Result<Summary, StatsError> {
    if records.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let groups = by_size(records);
    let sizes: Vec<SizeSummary> = groups.iter().map(|(&n, r)| size_summary(n, r)).collect::<Result<_, _>>()?;
    let fit = |f: &dyn Fn(&SizeSummary) -> f64| -> Option<ScalingFit> {
        fit_scaling_exponent(&sizes.iter().map(|s| (s.size as f64, f(s))).collect::<Vec<_>>()).ok()
    };
    let increasing = sizes.windows(2).all(|w| w[1].log_abs_minus1.mean > w[0].log_abs_minus1.mean);
    Ok(Summary {
        length_exponent: fit(&|s| s.length.mean),
        crossing_exponent: fit(&|s| s.crossings_raw.mean),
        log_minus1_exponent: fit(&|s| s.log_abs_minus1.mean),
        log_i_exponent: fit(&|s| s.log_abs_i.mean),
        log_minus1_increasing: sizes.len() >= 2 && increasing,
        sizes,
        standard_errors: "CLT: sample standard deviation / sqrt(count)".into(),
    })
}

const SE_NOTE: &str = "# standard errors: sample standard deviation / sqrt(count)\n";

/// Named CSV tables, one per observable.
pub fn csv_tables(records: &[SampleRecord]) -> Result<Vec<(&'static str, String)>, StatsError> {
    if records.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let groups = by_size(records);
    let mut length = format!("{SE_NOTE}N,count,mean_length,stderr\n");
    let mut ecdf =
        String::from("# survival function of the normalized length; reference (1-x/2) on (0,2)\nN,x,G,reference\n");
    let mut crossings = format!("{SE_NOTE}N,count,mean_raw,stderr_raw,mean_simplified,stderr_simplified\n");
    let mut unknot = format!("{SE_NOTE}N,total,candidates,fraction,stderr\n");
    let mut divis = String::from("N,d,count,total,fraction,excess\n");
    let mut loginv = format!("{SE_NOTE}N,count,mean_log_minus1,stderr_minus1,mean_log_i,stderr_i\n");
    let mut ecdf_inv = String::from(
        "# survival functions of normalized log-invariants with fitted h(x, alpha)\nN,invariant,x,G,h_fit\n",
    );
    for (n, recs) in &groups {
        let l = estimate(recs.iter().map(|r| r.length as f64));
        writeln!(length, "{n},{},{},{}", l.count, l.mean, l.std_error).unwrap();
        let t = EcdfTable::normalized(recs.iter().map(|r| r.length as f64).collect())?;
        for (x, _, right) in t.steps() {
            writeln!(ecdf, "{n},{x},{right},{}", length_limit_survival(x)).unwrap();
        }
        let cr = estimate(recs.iter().map(|r| r.crossings_raw as f64));
        let cs = estimate(recs.iter().map(|r| r.crossings_simplified as f64));
        writeln!(crossings, "{n},{},{},{},{},{}", cr.count, cr.mean, cr.std_error, cs.mean, cs.std_error).unwrap();
        let u = unknot_candidate_fraction(recs);
        writeln!(unknot, "{n},{},{},{},{}", u.total, u.count, u.fraction, u.std_error).unwrap();
        if recs.iter().any(|r| r.exact_minus1.is_some()) {
            for row in divisibility_table(recs, &DIVISORS) {
                writeln!(divis, "{n},{},{},{},{},{}", row.divisor, row.count, row.total, row.fraction, row.excess)
                    .unwrap();
            }
        }
        let ym = estimate(recs.iter().map(|r| r.log_abs_minus1));
        let yi = estimate(recs.iter().map(|r| r.log_abs_i));
        writeln!(loginv, "{n},{},{},{},{},{}", ym.count, ym.mean, ym.std_error, yi.mean, yi.std_error).unwrap();
        for (name, vals) in [
            ("minus1", recs.iter().map(|r| r.log_abs_minus1).collect::<Vec<_>>()),
            ("i", recs.iter().map(|r| r.log_abs_i).collect()),
        ] {
            let Ok(t) = EcdfTable::normalized(vals) else {
                continue;
            };
            let alpha = fit_alpha(&t).alpha;
            for (x, _, right) in t.steps() {
                let h = h_repartition(x.max(0.0), alpha).expect("grid inside domain");
                writeln!(ecdf_inv, "{n},{name},{x},{right},{h}").unwrap();
            }
        }
    }
    Ok(vec![
        ("length.csv", length),
        ("length_ecdf.csv", ecdf),
        ("crossings.csv", crossings),
        ("unknot_fraction.csv", unknot),
        ("divisibility.csv", divis),
        ("log_invariants.csv", loginv),
        ("log_invariant_ecdf.csv", ecdf_inv),
    ])
}

/// Inverse of `h(·, α)` on `(0, 1)`: maps a uniform variate to a sample.
pub fn h_quantile(u: f64, alpha: f64) -> f64 {
    // Survival s = 1 - ((1-α)x/(2-α))^(1-α).
    (1.0 - u).powf(1.0 / (1.0 - alpha)) * (2.0 - alpha) / (1.0 - alpha)
}
