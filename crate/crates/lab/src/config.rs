//! Experiment configuration: `key = value` files with command-line
//! overrides applied on top through the same [`ExperimentConfig::set`].

use std::path::{Path, PathBuf};

use serde::Serialize;
use sparsecolor_core::generators::{GeneratorSpec, GraphFamily};
use sparsecolor_core::listcolor::{SearchConfig, SearchStrategy};
use sparsecolor_core::pipeline::PipelineConfig;
use sparsecolor_core::{Graph, PaletteMode, Params};

use crate::error::{LabError, Result};
use crate::formats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The two-phase decomposition pipeline.
    Pipeline,
    /// Direct list-coloring search on the same instance.
    Solver,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Pipeline => "pipeline",
            Mode::Solver => "solver",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSource {
    Cliques,
    RandomRegular,
    Hybrid,
    File(PathBuf),
}

impl GraphSource {
    fn parse(s: &str) -> GraphSource {
        match s {
            "cliques" | "disjoint-cliques" => GraphSource::Cliques,
            "random-regular" | "regular" => GraphSource::RandomRegular,
            "hybrid" => GraphSource::Hybrid,
            path => GraphSource::File(PathBuf::from(path.strip_prefix("file:").unwrap_or(path))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphSource::Cliques => "cliques".into(),
            GraphSource::RandomRegular => "random-regular".into(),
            GraphSource::Hybrid => "hybrid".into(),
            GraphSource::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    /// Vertex count for the random and hybrid families.
    pub n: usize,
    pub d: usize,
    /// Clique count for the clique and hybrid families.
    pub m: usize,
    pub palette_mode: PaletteMode,
    /// Defaults to `D+1`, `2(D+1)` or `10(D+1)` by palette mode.
    pub gamma_size: Option<usize>,
    pub delta: f64,
    pub eps: f64,
    /// Grid of `c` in `ℓ = c·ln n`, strictly increasing.
    pub c_grid: Vec<f64>,
    /// Fixed `ℓ`; replaces the grid by the single point `ℓ / ln n`.
    pub ell: Option<usize>,
    pub trials: usize,
    pub mode: Mode,
    pub jobs: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub sparse_strategy: SearchStrategy,
    /// Record wall time per trial. Off by default so output is reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: GraphSource::RandomRegular,
            n: 1000,
            d: 20,
            m: 10,
            palette_mode: PaletteMode::Identical,
            gamma_size: None,
            delta: 1.0,
            eps: 0.1,
            c_grid: vec![2.0],
            ell: None,
            trials: 20,
            mode: Mode::Pipeline,
            jobs: 1,
            seed: 0,
            out: None,
            sparse_strategy: SearchStrategy::Restart,
            timing: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| LabError::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(LabError::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

pub fn parse_palette_mode(value: &str) -> Result<PaletteMode> {
    match value {
        "identical" => Ok(PaletteMode::Identical),
        "windows" => Ok(PaletteMode::Windows),
        "random-wide" | "random" => Ok(PaletteMode::RandomWide),
        _ => Err(LabError::Config(format!("palette_mode: unknown mode {value:?}"))),
    }
}

fn parse_strategy(value: &str) -> Result<SearchStrategy> {
    match value {
        "greedy" => Ok(SearchStrategy::Greedy),
        "backtrack" => Ok(SearchStrategy::Backtrack),
        "restart" => Ok(SearchStrategy::Restart),
        _ => Err(LabError::Config(format!("sparse_strategy: unknown strategy {value:?}"))),
    }
}

impl ExperimentConfig {
    /// Applies one `key = value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "graph" => self.graph = GraphSource::parse(value),
            "n" => self.n = parse_num(key, value)?,
            "d" | "d_degree" => self.d = parse_num(key, value)?,
            "m" | "m_cliques" => self.m = parse_num(key, value)?,
            "palette_mode" => self.palette_mode = parse_palette_mode(value)?,
            "gamma_size" => self.gamma_size = Some(parse_num(key, value)?),
            "delta" => self.delta = parse_num(key, value)?,
            "eps" => self.eps = parse_num(key, value)?,
            "ell_factor" | "c_grid" => {
                self.c_grid = value
                    .split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?
            }
            "ell" => self.ell = Some(parse_num(key, value)?),
            "trials" => self.trials = parse_num(key, value)?,
            "mode" => {
                self.mode = match value {
                    "pipeline" => Mode::Pipeline,
                    "solver" => Mode::Solver,
                    _ => return Err(LabError::Config(format!("mode: expected pipeline or solver, got {value:?}"))),
                }
            }
            "jobs" => self.jobs = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "sparse_strategy" => self.sparse_strategy = parse_strategy(value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            other => return Err(LabError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v).map_err(|e| LabError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(&formats::read_file(path)?)?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<Params> {
        Ok(Params::new(self.delta, self.eps)?)
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig> {
        Ok(PipelineConfig {
            params: self.params()?,
            sparse_search: SearchConfig { strategy: self.sparse_strategy, ..SearchConfig::default() },
            ..PipelineConfig::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.trials == 0 {
            return Err(LabError::Config("trials must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(LabError::Config("jobs must be at least 1".into()));
        }
        if self.ell.is_none() {
            if self.c_grid.is_empty() {
                return Err(LabError::Config("the c-grid is empty".into()));
            }
            if self.c_grid.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
                return Err(LabError::Config("c-grid values must be positive".into()));
            }
            if !self.c_grid.windows(2).all(|w| w[0] < w[1]) {
                return Err(LabError::Config("c-grid must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    /// Loads or describes the graph family once per experiment.
    pub fn workload(&self) -> Result<Workload> {
        self.validate()?;
        let fixed = match &self.graph {
            GraphSource::File(p) => Some(formats::parse_graph(&formats::read_file(p)?)?),
            GraphSource::Cliques => Some(sparsecolor_core::generators::gen_disjoint_cliques(self.m, self.d)?),
            _ => None,
        };
        let spec = match self.graph {
            GraphSource::RandomRegular => Some(GeneratorSpec::random_regular(self.n, self.d, 0)),
            GraphSource::Hybrid => {
                let s = self.n.checked_sub(self.m * (self.d + 1)).ok_or_else(|| {
                    LabError::Config(format!("{} cliques of size {} exceed n = {}", self.m, self.d + 1, self.n))
                })?;
                Some(GeneratorSpec::hybrid(self.m, s, self.d, 0))
            }
            _ => None,
        };
        let (n, d) = match (&fixed, &spec) {
            (Some(g), _) => (g.n(), g.degree_bound()),
            (None, Some(s)) => (s.n, s.d),
            (None, None) => unreachable!("every source is fixed or generated"),
        };
        let gamma_size = self.gamma_size.unwrap_or(match self.palette_mode {
            PaletteMode::Identical => d + 1,
            PaletteMode::Windows => 2 * (d + 1),
            PaletteMode::RandomWide => 10 * (d + 1),
        });
        let grid = match self.ell {
            Some(ell) => vec![ell as f64 / ln(n)],
            None => self.c_grid.clone(),
        };
        Ok(Workload { label: self.graph.label(), fixed, spec, n, d, gamma_size, grid })
    }
}

pub(crate) fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

/// The resolved graph family of an experiment.
#[derive(Debug, Clone)]
pub struct Workload {
    pub label: String,
    /// Graph shared by all trials (files and clique unions).
    pub fixed: Option<Graph>,
    /// Generator re-seeded per trial.
    pub spec: Option<GeneratorSpec>,
    pub n: usize,
    pub d: usize,
    pub gamma_size: usize,
    pub grid: Vec<f64>,
}

impl Workload {
    /// `ℓ = round(c·ln n)`, clamped to `[1, D+1]`.
    pub fn ell_for(&self, c: f64) -> usize {
        ((c * ln(self.n)).round().max(1.0) as usize).min(self.d + 1)
    }

    pub fn graph(&self, seed: u64) -> Result<std::borrow::Cow<'_, Graph>> {
        match (&self.fixed, &self.spec) {
            (Some(g), _) => Ok(std::borrow::Cow::Borrowed(g)),
            (None, Some(s)) => Ok(std::borrow::Cow::Owned(s.clone().with_seed(seed).generate()?)),
            (None, None) => unreachable!("every source is fixed or generated"),
        }
    }

    pub fn family(&self) -> Option<GraphFamily> {
        self.spec.as_ref().map(|s| s.family)
    }
}
