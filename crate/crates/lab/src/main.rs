use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparsecolor_core::listcolor::exact_list_colorable;
use sparsecolor_core::{decompose, verify_decomposition};
use sparsecolor_lab::config::ExperimentConfig;
use sparsecolor_lab::error::{LabError, Result};
use sparsecolor_lab::{build_instance, csv_string, estimate_threshold, formats, json_string, run_experiment, run_trial, trial_seed};

#[derive(Parser)]
#[command(name = "sparsecolor", version, about = "Palette-sparsified list coloring experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (and optionally its palette) in the text format.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Also write the palette of the first trial here.
        #[arg(long)]
        palette_out: Option<PathBuf>,
    },
    /// Decompose a graph into sparse vertices and clusters.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Run a single trial and print its record as JSON.
    Color {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Run the c-grid sweep and write CSV (or JSON).
    Experiment {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Estimate the smallest c reaching a target success rate.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
    },
    /// Decide list-colorability exactly for one trial's lists (small instances).
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Lists file; when absent the lists of trial 0 are used.
        #[arg(long)]
        lists: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct Common {
    /// `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cliques, random-regular, hybrid, or a graph file path.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    palette_mode: Option<String>,
    #[arg(long)]
    gamma_size: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d_degree: Option<usize>,
    #[arg(long)]
    m_cliques: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Comma-separated c-grid for ℓ = c·ln n.
    #[arg(long)]
    ell_factor: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// pipeline or solver.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sparse_strategy: Option<String>,
    /// Record wall time per trial.
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(k, &v));
        set("graph", self.graph.clone())?;
        set("palette_mode", self.palette_mode.clone())?;
        set("gamma_size", self.gamma_size.map(|x| x.to_string()))?;
        set("n", self.n.map(|x| x.to_string()))?;
        set("d", self.d_degree.map(|x| x.to_string()))?;
        set("m", self.m_cliques.map(|x| x.to_string()))?;
        set("ell", self.ell.map(|x| x.to_string()))?;
        set("ell_factor", self.ell_factor.clone())?;
        set("delta", self.delta.map(|x| x.to_string()))?;
        set("eps", self.eps.map(|x| x.to_string()))?;
        set("trials", self.trials.map(|x| x.to_string()))?;
        set("seed", self.seed.map(|x| x.to_string()))?;
        set("mode", self.mode.clone())?;
        set("jobs", self.jobs.map(|x| x.to_string()))?;
        set("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        set("sparse_strategy", self.sparse_strategy.clone())?;
        if self.timing {
            cfg.set("timing", "true")?;
        }
        Ok(cfg)
    }
}

fn emit(cfg: &ExperimentConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => formats::write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| LabError::Io { path: "<stdout>".into(), source: e }),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { common, palette_out } => {
            let cfg = common.config()?;
            let w = cfg.workload()?;
            let inst = build_instance(&w, &cfg, trial_seed(cfg.seed, 0, 0), w.ell_for(w.grid[0]))?;
            if let Some(p) = palette_out {
                formats::write_file(&p, &formats::write_palette(&inst.palette))?;
            }
            emit(&cfg, &formats::write_graph(&inst.graph))
        }
        Command::Decompose { common } => {
            let cfg = common.config()?;
            let w = cfg.workload()?;
            let g = w.graph(sparsecolor_core::seed::mix64(trial_seed(cfg.seed, 0, 0), &[sparsecolor_core::seed::salt::GRAPH]))?;
            let g = if g.is_regular(g.degree_bound()) {
                g.into_owned()
            } else {
                sparsecolor_core::graph::regularize(&g, g.degree_bound())?
            };
            let (dec, _) = decompose(&g, cfg.eps)?;
            let audit = verify_decomposition(&g, &dec, cfg.eps)?;
            eprintln!(
                "{} sparse vertices, {} clusters, audit {}",
                dec.sparse.len(),
                dec.clusters.len(),
                if audit.passes() { "passed" } else { "failed" }
            );
            emit(&cfg, &formats::write_decomposition(&dec))
        }
        Command::Color { common, trial } => {
            let cfg = common.config()?;
            let w = cfg.workload()?;
            let rec = run_trial(&w, &cfg, trial, 0, w.grid[0])?;
            emit(&cfg, &(serde_json::to_string_pretty(&rec)? + "\n"))
        }
        Command::Experiment { common, format } => {
            let cfg = common.config()?;
            let res = run_experiment(&cfg)?;
            let text = match format.as_str() {
                "csv" => csv_string(&res)?,
                "json" => json_string(&res)? + "\n",
                other => return Err(LabError::Config(format!("unknown format {other:?}; use csv or json"))),
            };
            emit(&cfg, &text)
        }
        Command::Threshold { common, target } => {
            let cfg = common.config()?;
            let est = estimate_threshold(&cfg, target)?;
            emit(&cfg, &(serde_json::to_string_pretty(&est)? + "\n"))
        }
        Command::Oracle { common, lists } => {
            let cfg = common.config()?;
            let w = cfg.workload()?;
            let inst = build_instance(&w, &cfg, trial_seed(cfg.seed, 0, 0), w.ell_for(w.grid[0]))?;
            let lists = match lists {
                Some(p) => formats::parse_lists(&formats::read_file(&p)?)?,
                None => inst.lists,
            };
            let answer = exact_list_colorable(&inst.graph, &lists.lists)?;
            let json = serde_json::json!({ "colorable": answer.is_some(), "coloring": answer });
            emit(&cfg, &(serde_json::to_string_pretty(&json)? + "\n"))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
