//! One seeded trial: build the instance, color it, record what happened.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use sparsecolor_core::dense::Route;
use sparsecolor_core::listcolor::{solve_direct, validate_coloring, SearchConfig, SolveOutcome};
use sparsecolor_core::palette::make_palette;
use sparsecolor_core::pipeline::{run_pipeline, trial_lists, ClusterSummary};
use sparsecolor_core::seed::{mix64, salt};
use sparsecolor_core::{Color, Graph, ListSample, PaletteMode, PaletteSystem};

use crate::config::{ExperimentConfig, Mode, Workload};
use crate::error::Result;

/// Seed of trial `trial` at grid point or probe `probe`.
pub fn trial_seed(master: u64, trial: u64, probe: u64) -> u64 {
    mix64(master, &[trial, probe])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDesc {
    pub family: String,
    pub n: usize,
    pub d: usize,
    /// Generator seed, for families drawn per trial.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure { stage: String, detail: String },
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub probe: u64,
    pub master_seed: u64,
    pub seed: u64,
    pub graph: GraphDesc,
    pub palette_mode: PaletteMode,
    pub gamma_size: usize,
    pub c: f64,
    pub ell: usize,
    pub mode: Mode,
    pub outcome: Outcome,
    /// `|V*|`, pipeline mode only.
    pub sparse_size: Option<usize>,
    /// Retained vertices of the accepted sparse attempt, pipeline mode only.
    pub retained: Option<usize>,
    pub sparse_attempts: Option<usize>,
    pub clusters: Vec<ClusterSummary>,
    pub nodes: u64,
    pub wall_ms: Option<f64>,
    /// Validated coloring on success.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<Color>>,
}

impl TrialRecord {
    pub fn fallbacks(&self) -> usize {
        self.clusters.iter().filter(|c| c.fallback_used).count()
    }

    /// Cluster routes as `route:count` joined by `;`, in route order.
    pub fn route_summary(&self) -> String {
        let mut counts: BTreeMap<u8, (&str, usize)> = BTreeMap::new();
        for c in &self.clusters {
            let (k, name) = match c.route {
                Route::Direct => (0, "direct"),
                Route::Process => (1, "process"),
                Route::Hall => (2, "hall"),
                Route::Staged => (3, "staged"),
            };
            counts.entry(k).or_insert((name, 0)).1 += 1;
        }
        counts.values().map(|(name, k)| format!("{name}:{k}")).collect::<Vec<_>>().join(";")
    }
}

/// The graph, palette and lists a trial sees.
pub struct Instance {
    pub graph: Graph,
    pub palette: PaletteSystem,
    pub lists: ListSample,
    pub graph_seed: Option<u64>,
}

pub fn build_instance(w: &Workload, cfg: &ExperimentConfig, seed: u64, ell: usize) -> Result<Instance> {
    let graph_seed = w.spec.as_ref().map(|_| mix64(seed, &[salt::GRAPH]));
    let graph = w.graph(graph_seed.unwrap_or(0))?.into_owned();
    let palette = make_palette(&graph, cfg.palette_mode, w.gamma_size, mix64(seed, &[salt::PALETTE]))?;
    let lists = trial_lists(&palette, ell, seed)?;
    Ok(Instance { graph, palette, lists, graph_seed })
}

/// Runs trial `trial` at grid point `probe` with `c`. Algorithmic failure
/// is recorded in the outcome; only configuration problems are errors.
pub fn run_trial(w: &Workload, cfg: &ExperimentConfig, trial: u64, probe: u64, c: f64) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = trial_seed(cfg.seed, trial, probe);
    let ell = w.ell_for(c);
    let inst = build_instance(w, cfg, seed, ell)?;
    let mut record = TrialRecord {
        trial,
        probe,
        master_seed: cfg.seed,
        seed,
        graph: GraphDesc { family: w.label.clone(), n: inst.graph.n(), d: w.d, seed: inst.graph_seed },
        palette_mode: cfg.palette_mode,
        gamma_size: w.gamma_size,
        c,
        ell,
        mode: cfg.mode,
        outcome: Outcome::Success,
        sparse_size: None,
        retained: None,
        sparse_attempts: None,
        clusters: Vec::new(),
        nodes: 0,
        wall_ms: None,
        coloring: None,
    };
    let coloring = match cfg.mode {
        Mode::Pipeline => {
            let report = run_pipeline(&inst.graph, &inst.palette, ell, seed, &cfg.pipeline_config()?)?;
            debug_assert_eq!(report.lists, inst.lists);
            record.sparse_size = Some(report.sparse_size);
            record.retained = Some(report.retained);
            record.sparse_attempts = Some(report.sparse_attempts);
            record.clusters = report.clusters;
            record.nodes = report.nodes;
            report.outcome.map_err(|f| Outcome::Failure { stage: f.stage.as_str().into(), detail: f.detail })
        }
        Mode::Solver => {
            let search = SearchConfig { strategy: cfg.sparse_strategy, ..SearchConfig::default() };
            let (out, nodes) = solve_direct(&inst.graph, &inst.lists.lists, &search, mix64(seed, &[salt::SOLVER]));
            record.nodes = nodes;
            match out {
                SolveOutcome::Success(c) => Ok(c),
                SolveOutcome::ProvenUnsat => {
                    Err(Outcome::Failure { stage: "solver".into(), detail: "unsatisfiable".into() })
                }
                SolveOutcome::Inconclusive => {
                    Err(Outcome::Failure { stage: "solver".into(), detail: "inconclusive: budget exhausted".into() })
                }
            }
        }
    };
    match coloring {
        Ok(c) => {
            assert!(validate_coloring(&inst.graph, &inst.lists.lists, &c), "successful trials must validate");
            record.coloring = Some(c);
        }
        Err(outcome) => record.outcome = outcome,
    }
    if cfg.timing {
        record.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_share_the_instance() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("graph = random-regular\nn = 200\nd = 6\ntrials = 1\n").unwrap();
        let w = cfg.workload().unwrap();
        let a = run_trial(&w, &cfg, 3, 0, 1.5).unwrap();
        cfg.mode = Mode::Solver;
        let b = run_trial(&w, &cfg, 3, 0, 1.5).unwrap();
        assert_eq!((a.seed, a.ell, a.graph.seed), (b.seed, b.ell, b.graph.seed));
        assert!(b.outcome.is_success());
        assert!(b.sparse_size.is_none() && a.sparse_size.is_some());
        let inst = build_instance(&w, &cfg, a.seed, a.ell).unwrap();
        if let Some(c) = &a.coloring {
            assert!(validate_coloring(&inst.graph, &inst.lists.lists, c));
        }
    }

    #[test]
    fn failure_is_data() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("graph = cliques\nm = 1\nd = 2\nell = 1\nmode = solver\n").unwrap();
        let w = cfg.workload().unwrap();
        let outcomes: Vec<bool> = (0..50).map(|t| run_trial(&w, &cfg, t, 0, w.grid[0]).unwrap().outcome.is_success()).collect();
        assert!(outcomes.contains(&true) && outcomes.contains(&false));
    }
}
