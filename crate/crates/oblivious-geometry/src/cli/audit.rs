//! Trace-equality audits and trace-length benchmarks.

use std::sync::Arc;

use serde::Serialize;

use super::workload::{Algorithm, RunParams, Workload};
use super::CliError;
use crate::rng::SeededRng;
use crate::trace::{PackedTrace, Tracer};

const DATA_STREAM: u64 = 0x5eed_da7a_0000_0000;

/// Random generator for the input of trial `t` (the reference input is `t = 0`).
pub fn data_rng(seed: u64, t: u64) -> SeededRng {
    SeededRng::new(seed ^ DATA_STREAM).derive(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub seed: u64,
    pub pairs_compared: usize,
    /// 1 when every compared trace equals the reference.
    pub verdict: u8,
    pub trace_length: u64,
    /// Summed over all runs.
    pub restarts: u32,
    /// Trials whose trace differs, with the first differing step.
    pub mismatches: Vec<(usize, u64)>,
}

/// Runs `alg` on `base`, then on `trials` random inputs of the same size,
/// and compares each trace with the first. `keep` returns the reference.
pub fn audit(
    alg: Algorithm,
    base: &Workload,
    trials: usize,
    params: &RunParams,
    keep: bool,
) -> Result<(AuditReport, Option<Arc<PackedTrace>>), CliError> {
    let n = base.len();
    if n < alg.min_size() {
        return Err(CliError::TooSmall { n, min: alg.min_size() });
    }
    let rec = Tracer::recording();
    let mut restarts = alg.execute(base, &rec, params)?;
    let summary = rec.finish();
    drop(rec);
    let reference = Arc::new(summary.trace.unwrap_or_default());
    let mut mismatches = Vec::new();
    for t in 1..=trials {
        let w = alg.random_workload(n, params.grid_bits, &mut data_rng(params.seed, t as u64))?;
        let tracer = Tracer::verifying(reference.clone());
        restarts += alg.execute(&w, &tracer, params)?;
        let s = tracer.finish();
        if s.verdict != Some(true) {
            mismatches.push((t, s.first_mismatch.unwrap_or(0)));
        }
    }
    let report = AuditReport {
        algorithm: alg,
        n,
        seed: params.seed,
        pairs_compared: trials,
        verdict: mismatches.is_empty() as u8,
        trace_length: summary.len,
        restarts,
        mismatches,
    };
    Ok((report, keep.then_some(reference)))
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub trace_length: u64,
    /// `L(n) / (n log2^2 n)`.
    pub ratio: f64,
    /// `L(n) / L(n / 2)`, absent on the first row.
    pub doubling: Option<f64>,
    /// `2 (log^2 n / log^2 (n / 2)) * 1.15`.
    pub doubling_bound: Option<f64>,
    pub restarts: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSeries {
    pub algorithm: Algorithm,
    pub rows: Vec<BenchRow>,
    /// Least-squares `c` in `L(n) = c n log2^2 n`.
    pub fitted_c: f64,
    /// Every doubling ratio is within its bound.
    pub within_bound: bool,
}

pub const DOUBLING_SLACK: f64 = 1.15;

pub fn doubling_bound(n: usize) -> f64 {
    let l2 = |m: usize| (m as f64).log2().powi(2);
    2.0 * (l2(n) / l2(n / 2)) * DOUBLING_SLACK
}

fn model(n: usize) -> f64 {
    n as f64 * (n as f64).log2().powi(2)
}

/// Trace lengths of `alg` for `n` in `sizes`, each on a fresh random input.
pub fn bench(alg: Algorithm, sizes: &[usize], params: &RunParams) -> Result<BenchSeries, CliError> {
    let mut rows: Vec<BenchRow> = Vec::with_capacity(sizes.len());
    for (k, &n) in sizes.iter().enumerate() {
        let w = alg.random_workload(n, params.grid_bits, &mut data_rng(params.seed, k as u64))?;
        let tracer = Tracer::counting();
        let restarts = alg.execute(&w, &tracer, params)?;
        let len = tracer.len();
        let prev = rows.last().filter(|r| r.n * 2 == n);
        rows.push(BenchRow {
            n,
            trace_length: len,
            ratio: len as f64 / model(n),
            doubling: prev.map(|r| len as f64 / r.trace_length as f64),
            doubling_bound: prev.map(|_| doubling_bound(n)),
            restarts,
        });
    }
    let (num, den) = rows.iter().fold((0.0, 0.0), |(a, b), r| {
        let m = model(r.n);
        (a + m * r.trace_length as f64, b + m * m)
    });
    let within_bound = rows.iter().all(|r| match (r.doubling, r.doubling_bound) {
        (Some(d), Some(b)) => d <= b,
        _ => true,
    });
    Ok(BenchSeries { algorithm: alg, rows, fitted_c: if den > 0.0 { num / den } else { 0.0 }, within_bound })
}
