//! End-to-end coloring: regularize, decompose, sample lists, color the
//! sparse part, then each cluster in turn.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decomposition::decompose;
use crate::dense::{cluster_context, color_cluster, trim_lists, Route};
use crate::error::{Error, Result};
use crate::graph::{regularize, Graph};
use crate::listcolor::{first_violation, SearchConfig};
use crate::palette::{sample_lists, ListSample, PaletteSystem, Params};
use crate::seed::{mix64, salt};
use crate::sparse::{assign_from, complete_sparse, retained_set};
use crate::Color;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub params: Params,
    pub sparse_search: SearchConfig,
    /// Extra redraws of `(τ, ξ)` after a failed sparse completion.
    pub sparse_retries: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { params: Params::default(), sparse_search: SearchConfig::default(), sparse_retries: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Stage {
    Sparse,
    Dense,
    Validate,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Sparse => "sparse",
            Stage::Dense => "dense",
            Stage::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StageFailure {
    pub stage: Stage,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterSummary {
    pub size: usize,
    pub route: Route,
    pub zeta: f64,
    pub fallback_used: bool,
    pub trim_flagged: usize,
    pub process_succeeded: Option<bool>,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineReport {
    pub n: usize,
    /// Vertex count after regularization.
    pub n_regular: usize,
    pub d: usize,
    pub ell: usize,
    pub sparse_size: usize,
    /// `|T ∩ V*|` in the accepted (or last) sparse attempt.
    pub retained: usize,
    pub sparse_attempts: usize,
    pub clusters: Vec<ClusterSummary>,
    pub nodes: u64,
    /// Lists drawn for the original vertices.
    pub lists: ListSample,
    /// Colors of the original vertices, or the first failure.
    pub outcome: core::result::Result<Vec<Color>, StageFailure>,
}

impl PipelineReport {
    pub fn succeeded(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// The lists a trial with this seed uses, for the original graph.
pub fn trial_lists(p: &PaletteSystem, ell: usize, seed: u64) -> Result<ListSample> {
    sample_lists(p, ell, mix64(seed, &[salt::LISTS]), None)
}

pub fn run_pipeline(g: &Graph, p: &PaletteSystem, ell: usize, seed: u64, config: &PipelineConfig) -> Result<PipelineReport> {
    config.params.validate()?;
    p.validate()?;
    if p.n() != g.n() {
        return Err(Error::Parameter(format!("palette covers {} vertices, graph has {}", p.n(), g.n())));
    }
    let d = p.d;
    if ell == 0 || ell > d + 1 {
        return Err(Error::Parameter(format!("list size must lie in [1, D+1] = [1, {}], got {ell}", d + 1)));
    }
    if g.observed_max_degree() > d {
        return Err(Error::Parameter(format!("graph degree exceeds palette degree D = {d}")));
    }
    let n = g.n();
    let gr = if g.is_regular(d) { g.clone() } else { regularize(g, d)? };
    let pr = p.padded(gr.n());
    let (dec, _) = decompose(&gr, config.params.eps)?;
    let lists = sample_lists(&pr, ell, mix64(seed, &[salt::LISTS]), None)?;
    let log_n = libm::log(gr.n().max(2) as f64);
    let in_sparse = dec.in_sparse(gr.n());

    let mut report = PipelineReport {
        n,
        n_regular: gr.n(),
        d,
        ell,
        sparse_size: dec.sparse.len(),
        retained: 0,
        sparse_attempts: 0,
        clusters: Vec::new(),
        nodes: 0,
        lists: ListSample { ell, seed: lists.seed, lists: lists.lists[..n].to_vec() },
        outcome: Err(StageFailure { stage: Stage::Sparse, detail: String::new() }),
    };

    // sparse part
    let mut sigma: Vec<Option<Color>> = vec![None; gr.n()];
    let mut sparse_done = false;
    let mut detail = String::new();
    for attempt in 0..=config.sparse_retries {
        report.sparse_attempts = attempt + 1;
        let ta = assign_from(&gr, &pr, &lists.lists, mix64(seed, &[salt::TENTATIVE, attempt as u64]));
        let rc = retained_set(&gr, &ta).restricted(&in_sparse);
        report.retained = rc.t.len();
        let comp_seed = mix64(seed, &[salt::COMPLETION, attempt as u64]);
        match complete_sparse(&gr, &ta, &rc, &lists, &dec.sparse, &config.sparse_search, comp_seed) {
            Ok(done) => {
                report.nodes += done.nodes;
                sigma.clone_from(&rc.sigma);
                for (v, c) in done.coloring {
                    sigma[v] = Some(c);
                }
                sparse_done = true;
                break;
            }
            Err(f) => {
                report.nodes += f.nodes;
                detail = format!(
                    "vertex {} with {} residual colors ({}) after {} attempts",
                    f.vertex,
                    f.residual_size,
                    if f.proven { "proven" } else { "search gave up" },
                    attempt + 1
                );
            }
        }
    }
    if !sparse_done {
        report.outcome = Err(StageFailure { stage: Stage::Sparse, detail });
        return Ok(report);
    }

    // clusters, one at a time
    for (index, cluster) in dec.clusters.iter().enumerate() {
        let ctx = cluster_context(&gr, &pr, &sigma, cluster)?;
        let local: Vec<Vec<Color>> = ctx.cluster.iter().map(|&v| lists.lists[v].clone()).collect();
        let trimmed = trim_lists(&ctx, &local, config.params.delta, log_n);
        let out = color_cluster(&ctx, &trimmed.lists, &config.params, log_n);
        report.clusters.push(ClusterSummary {
            size: ctx.len(),
            route: out.route,
            zeta: ctx.zeta,
            fallback_used: out.fallback_used,
            trim_flagged: trimmed.flagged.len(),
            process_succeeded: out.process.as_ref().map(|s| s.succeeded()),
            success: out.succeeded(),
        });
        match out.result {
            Ok(assignment) => {
                for (v, c) in assignment {
                    sigma[v] = Some(c);
                }
            }
            Err(f) => {
                report.outcome = Err(StageFailure {
                    stage: Stage::Dense,
                    detail: format!(
                        "cluster {index} ({:?} route, fallback {}): Hall deficiency {} at {:?}",
                        f.route,
                        if f.fallback_tried { "failed" } else { "not applicable" },
                        f.deficiency,
                        f.witness
                    ),
                });
                return Ok(report);
            }
        }
    }

    let Some(coloring) = sigma.iter().copied().collect::<Option<Vec<Color>>>() else {
        let v = sigma.iter().position(Option::is_none).unwrap_or(0);
        report.outcome = Err(StageFailure { stage: Stage::Validate, detail: format!("vertex {v} left uncolored") });
        return Ok(report);
    };
    if let Some((u, w)) = first_violation(&gr, &lists.lists, &coloring) {
        report.outcome = Err(StageFailure { stage: Stage::Validate, detail: format!("violation at {u} {w:?}") });
        return Ok(report);
    }
    report.outcome = Ok(coloring[..n].to_vec());
    Ok(report)
}
