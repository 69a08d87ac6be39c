//! Coloring clusters: per-cluster context, regimes, the pairing process,
//! bipartite matchings and switching.

pub mod bigraph;
mod context;
mod process;
mod route;

pub use bigraph::{canonicalize_nested, Bigraph, HallMode, HallReport, Matching};
pub use context::{classify_regime, cluster_context, trim_lists, ClusterBigraph, RegimeReport, TrimmedLists};
pub use process::{run_process, ProcessState, StepAction, StepRecord};
pub use route::{color_cluster, ClusterFailure, ClusterOutcome, Route, StagedLog};
