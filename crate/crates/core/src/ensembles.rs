//! Gallager LDPC ensembles and the robustness survey.
//!
//! A sample is `j` horizontal strips of `n/r` rows each. Strip 0 is the
//! block-diagonal pattern where row `t` covers columns `t·r .. (t+1)·r`;
//! strip `s > 0` applies a uniformly random column permutation to strip 0.
//! Randomness comes from ChaCha8 keyed by the ensemble seed, with the sample
//! index as the stream number, so every sample can be regenerated on its own
//! and results do not depend on the number of worker threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{distance, is_robust, ClassicalCode, RobustVerdict, RobustnessCertificate};
use crate::f2::{BitMatrix, BitVec};

/// Identifier of the pseudorandom construction, recorded in every report.
pub const GENERATOR_ID: &str = "chacha8-stream-v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnsembleError {
    #[error("column weight must be at least 2 (got {0})")]
    ColumnWeight(usize),
    #[error("row weight {r} must be between 1 and n = {n}")]
    RowWeight { r: usize, n: usize },
    #[error("n = {n} must be divisible by the row weight {r}")]
    Divisibility { n: usize, r: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Deterministic generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub col_weight: usize,
    pub row_weight: usize,
    pub samples: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), EnsembleError> {
        let (n, j, r) = (self.n, self.col_weight, self.row_weight);
        if j < 2 {
            return Err(EnsembleError::ColumnWeight(j));
        }
        if r == 0 || r > n {
            return Err(EnsembleError::RowWeight { r, n });
        }
        if n % r != 0 {
            return Err(EnsembleError::Divisibility { n, r });
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.col_weight * self.n / self.row_weight
    }
}

/// Sample `index` of the ensemble.
pub fn gallager(spec: &EnsembleSpec, index: u64) -> Result<ClassicalCode, EnsembleError> {
    spec.validate()?;
    let (n, r) = (spec.n, spec.row_weight);
    let per_strip = n / r;
    let mut rng = stream_rng(spec.seed, index);
    let mut rows = Vec::with_capacity(spec.rows());
    let identity: Vec<usize> = (0..n).collect();
    for strip in 0..spec.col_weight {
        let mut perm = identity.clone();
        if strip > 0 {
            perm.shuffle(&mut rng);
        }
        for t in 0..per_strip {
            rows.push(BitVec::from_indices(
                n,
                perm[t * r..(t + 1) * r].iter().copied(),
            ));
        }
    }
    let h = BitMatrix::from_rows(rows, n).map_err(|e| EnsembleError::Internal(e.to_string()))?;
    Ok(ClassicalCode::from_parity_check(h).with_name(format!(
        "gallager(n={n},j={},r={r},seed={},index={index})",
        spec.col_weight, spec.seed
    )))
}

/// A dense random code: `m` and `n` uniform in `1..=max_n`, entries fair coins.
pub fn random_code(seed: u64, index: u64, max_n: usize) -> ClassicalCode {
    let mut rng = stream_rng(seed, index);
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_n);
    let rows = (0..m)
        .map(|_| BitVec::from_bools((0..n).map(|_| rng.gen_bool(0.5))))
        .collect();
    ClassicalCode::from_parity_check(BitMatrix::from_rows(rows, n).expect("rows of length n"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceStatus {
    Computed,
    /// `k = 0`: there are no nonzero codewords.
    ZeroDimension,
    /// `2^k` exceeded the distance limit.
    OverLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub index: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub distance: Option<usize>,
    pub distance_status: DistanceStatus,
    pub robust: RobustVerdict,
    pub undecided: bool,
    /// Passes the `d >= 3 and k <= n/2` filter.
    pub included: bool,
    pub certificate: RobustnessCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyAggregate {
    pub samples: usize,
    pub included: usize,
    pub robust: usize,
    pub not_robust: usize,
    pub undecided: usize,
    pub distance_uncomputed: usize,
    /// `robust / included`, absent when nothing passed the filter.
    pub robust_fraction: Option<f64>,
}

impl SurveyAggregate {
    pub fn from_records(records: &[SurveyRecord]) -> Self {
        let included: Vec<&SurveyRecord> = records.iter().filter(|r| r.included).collect();
        let robust = included
            .iter()
            .filter(|r| !r.undecided && r.robust == RobustVerdict::Robust)
            .count();
        let undecided = included.iter().filter(|r| r.undecided).count();
        Self {
            samples: records.len(),
            included: included.len(),
            robust,
            not_robust: included.len() - robust - undecided,
            undecided,
            distance_uncomputed: records
                .iter()
                .filter(|r| r.distance_status == DistanceStatus::OverLimit)
                .count(),
            robust_fraction: (!included.is_empty()).then(|| robust as f64 / included.len() as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub spec: EnsembleSpec,
    pub generator: String,
    pub distance_limit: u64,
    pub records: Vec<SurveyRecord>,
    pub aggregate: SurveyAggregate,
}

#[derive(Serialize)]
struct CsvRow {
    index: u64,
    n: usize,
    m: usize,
    k: usize,
    distance: String,
    robust: &'static str,
    undecided: bool,
    included: bool,
}

impl SurveyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One line per record: `index,n,m,k,distance,robust,undecided,included`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(CsvRow {
                index: r.index,
                n: r.n,
                m: r.m,
                k: r.k,
                distance: r
                    .distance
                    .map_or_else(|| "uncomputed".to_string(), |d| d.to_string()),
                robust: match r.robust {
                    RobustVerdict::Robust => "robust",
                    RobustVerdict::NotRobust => "not_robust",
                },
                undecided: r.undecided,
                included: r.included,
            })
            .expect("in-memory writer");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }

    /// Re-checks every robustness certificate and the aggregate.
    pub fn verify(&self) -> Result<(), String> {
        for r in &self.records {
            let code = gallager(&self.spec, r.index).map_err(|e| e.to_string())?;
            r.certificate
                .verify(&code)
                .map_err(|e| format!("sample {}: {e}", r.index))?;
            if r.certificate.verdict != r.robust {
                return Err(format!(
                    "sample {}: verdict differs from certificate",
                    r.index
                ));
            }
        }
        if SurveyAggregate::from_records(&self.records) != self.aggregate {
            return Err("aggregate does not match the records".into());
        }
        Ok(())
    }
}

fn survey_one(
    spec: &EnsembleSpec,
    index: u64,
    distance_limit: u64,
) -> Result<SurveyRecord, EnsembleError> {
    let code = gallager(spec, index)?;
    let (n, k) = (code.n(), code.k());
    let d = distance(&code, distance_limit);
    let distance_status = match (d, k) {
        (Some(_), _) => DistanceStatus::Computed,
        (None, 0) => DistanceStatus::ZeroDimension,
        (None, _) => DistanceStatus::OverLimit,
    };
    let certificate = is_robust(&code).map_err(|e| EnsembleError::Internal(e.to_string()))?;
    Ok(SurveyRecord {
        index,
        n,
        m: code.m(),
        k,
        distance: d,
        distance_status,
        robust: certificate.verdict,
        undecided: false,
        included: d.is_some_and(|d| d >= 3) && 2 * k <= n,
        certificate,
    })
}

/// Samples the ensemble, decides robustness for each code and aggregates
/// over the codes with `d >= 3` and `k <= n/2`.
pub fn survey(spec: &EnsembleSpec, distance_limit: u64) -> Result<SurveyReport, EnsembleError> {
    spec.validate()?;
    let records = (0..spec.samples as u64)
        .into_par_iter()
        .map(|i| survey_one(spec, i, distance_limit))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SurveyReport {
        spec: *spec,
        generator: GENERATOR_ID.to_string(),
        distance_limit,
        aggregate: SurveyAggregate::from_records(&records),
        records,
    })
}
