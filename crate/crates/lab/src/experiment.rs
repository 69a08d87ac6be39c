//! Monte Carlo sweeps over the `c`-grid with a frozen CSV schema.
//!
//! Columns, in order:
//!
//! | column | trial rows | aggregate rows |
//! |---|---|---|
//! | `kind` | `trial` | `aggregate` |
//! | `c`, `ell` | grid point | grid point |
//! | `trial`, `seed` | trial index, derived seed | empty |
//! | `mode` | `pipeline` or `solver` | same |
//! | `success` | `1` or `0` | empty |
//! | `stage`, `detail` | failure stage and reason | empty |
//! | `sparse_size`, `retained`, `sparse_attempts` | pipeline statistics | empty |
//! | `clusters`, `fallbacks`, `routes` | cluster count, fallbacks used, `route:count;…` | empty |
//! | `nodes` | search nodes | empty |
//! | `trials`, `successes`, `rate`, `wilson_lo`, `wilson_hi` | empty | per grid point |
//! | `wall_ms` | only with `timing = true` | empty |

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Workload};
use crate::error::{LabError, Result};
use crate::trial::{run_trial, TrialRecord};

pub const CSV_COLUMNS: [&str; 22] = [
    "kind", "c", "ell", "trial", "seed", "mode", "success", "stage", "detail", "sparse_size", "retained",
    "sparse_attempts", "clusters", "fallbacks", "routes", "nodes", "trials", "successes", "rate", "wilson_lo",
    "wilson_hi", "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub c: f64,
    pub ell: usize,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl Aggregate {
    pub fn from_records(c: f64, ell: usize, records: &[TrialRecord]) -> Self {
        let successes = records.iter().filter(|r| r.outcome.is_success()).count();
        let (wilson_lo, wilson_hi) = wilson(successes, records.len());
        Aggregate {
            c,
            ell,
            trials: records.len(),
            successes,
            rate: successes as f64 / records.len().max(1) as f64,
            wilson_lo,
            wilson_hi,
        }
    }
}

/// Wilson score 95% interval for `successes` out of `trials`.
pub fn wilson(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<Aggregate>,
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| LabError::Config(format!("cannot start {jobs} worker threads: {e}")))
}

/// Runs all trials at one grid point. Trials run in parallel; results come
/// back in trial order.
pub(crate) fn run_point(
    w: &Workload,
    cfg: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    probe: u64,
    c: f64,
) -> Result<(Vec<TrialRecord>, Aggregate)> {
    let records: Vec<TrialRecord> =
        pool.install(|| (0..cfg.trials as u64).into_par_iter().map(|t| run_trial(w, cfg, t, probe, c)).collect::<Result<_>>())?;
    let agg = Aggregate::from_records(c, w.ell_for(c), &records);
    Ok((records, agg))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let w = cfg.workload()?;
    let pool = thread_pool(cfg.jobs)?;
    let mut records = Vec::with_capacity(w.grid.len() * cfg.trials);
    let mut aggregates = Vec::with_capacity(w.grid.len());
    for (probe, &c) in w.grid.iter().enumerate() {
        let (mut recs, agg) = run_point(&w, cfg, &pool, probe as u64, c)?;
        records.append(&mut recs);
        aggregates.push(agg);
    }
    Ok(ExperimentResult { config: cfg.clone(), records, aggregates })
}

#[derive(Serialize)]
struct Row<'a> {
    kind: &'a str,
    c: f64,
    ell: usize,
    trial: Option<u64>,
    seed: Option<u64>,
    mode: &'a str,
    success: Option<u8>,
    stage: Option<&'a str>,
    detail: Option<&'a str>,
    sparse_size: Option<usize>,
    retained: Option<usize>,
    sparse_attempts: Option<usize>,
    clusters: Option<usize>,
    fallbacks: Option<usize>,
    routes: Option<String>,
    nodes: Option<u64>,
    trials: Option<usize>,
    successes: Option<usize>,
    rate: Option<f64>,
    wilson_lo: Option<f64>,
    wilson_hi: Option<f64>,
    wall_ms: Option<f64>,
}

/// Writes trial rows for each grid point followed by that point's
/// aggregate row.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    wtr.write_record(CSV_COLUMNS)?;
    let mode = result.config.mode.as_str();
    let mut records = result.records.iter().peekable();
    for (probe, agg) in result.aggregates.iter().enumerate() {
        while let Some(r) = records.next_if(|r| r.probe == probe as u64) {
            let (stage, detail) = match &r.outcome {
                crate::trial::Outcome::Success => (None, None),
                crate::trial::Outcome::Failure { stage, detail } => (Some(stage.as_str()), Some(detail.as_str())),
            };
            wtr.serialize(Row {
                kind: "trial",
                c: r.c,
                ell: r.ell,
                trial: Some(r.trial),
                seed: Some(r.seed),
                mode,
                success: Some(r.outcome.is_success() as u8),
                stage,
                detail,
                sparse_size: r.sparse_size,
                retained: r.retained,
                sparse_attempts: r.sparse_attempts,
                clusters: Some(r.clusters.len()),
                fallbacks: Some(r.fallbacks()),
                routes: Some(r.route_summary()),
                nodes: Some(r.nodes),
                trials: None,
                successes: None,
                rate: None,
                wilson_lo: None,
                wilson_hi: None,
                wall_ms: r.wall_ms,
            })?;
        }
        wtr.serialize(Row {
            kind: "aggregate",
            c: agg.c,
            ell: agg.ell,
            trial: None,
            seed: None,
            mode,
            success: None,
            stage: None,
            detail: None,
            sparse_size: None,
            retained: None,
            sparse_attempts: None,
            clusters: None,
            fallbacks: None,
            routes: None,
            nodes: None,
            trials: Some(agg.trials),
            successes: Some(agg.successes),
            rate: Some(agg.rate),
            wilson_lo: Some(agg.wilson_lo),
            wilson_hi: Some(agg.wilson_hi),
            wall_ms: None,
        })?;
    }
    wtr.flush().map_err(|e| LabError::Io { path: "<csv>".into(), source: e })?;
    Ok(())
}

pub fn csv_string(result: &ExperimentResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// JSON mirror of the CSV: config, trial records (without colorings) and
/// aggregates.
pub fn json_string(result: &ExperimentResult) -> Result<String> {
    let mut slim = result.clone();
    for r in &mut slim.records {
        r.coloring = None;
    }
    Ok(serde_json::to_string_pretty(&slim)?)
}
