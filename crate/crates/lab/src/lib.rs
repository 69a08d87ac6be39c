//! Experiments and tooling around `sparsecolor-core`: text formats for
//! graphs, palettes, lists and decompositions, seeded single trials in
//! pipeline or solver mode, parallel Monte Carlo sweeps with a fixed CSV
//! schema, and threshold estimation.
//!
//! Every trial derives its randomness from `(master seed, trial, probe)`
//! only, so results do not depend on the number of worker threads.

pub mod config;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod threshold;
pub mod trial;

pub use config::{ExperimentConfig, GraphSource, Mode, Workload};
pub use error::{LabError, Result};
pub use experiment::{csv_string, json_string, run_experiment, wilson, Aggregate, ExperimentResult, CSV_COLUMNS};
pub use threshold::{estimate_threshold, ThresholdEstimate};
pub use trial::{build_instance, run_trial, trial_seed, Outcome, TrialRecord};
