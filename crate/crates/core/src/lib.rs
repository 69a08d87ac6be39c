//! Palette sparsification for `(D+1)`-list coloring.
//!
//! Every vertex of a graph with maximum degree `D` owns a base list of
//! `D+1` colors and keeps only a small random sublist of it. This crate
//! implements the two-phase coloring pipeline that extends a coloring from
//! those sublists: a sparse/dense decomposition of the graph, a tentative
//! coloring of the sparse part with retained colors, and a cluster-by-cluster
//! matching phase with a pairing process for dense clusters. Exact oracles
//! (enumeration, brute-force search, Hall deficiency) live alongside the
//! pipeline so that every stage can be checked at small scale.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! experiments and the command line live in the companion `sparsecolor-lab`
//! crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod decomposition;
pub mod dense;
pub mod error;
pub mod generators;
pub mod graph;
pub mod listcolor;
pub mod palette;
pub mod pipeline;
pub mod seed;
pub mod sparse;

pub use decomposition::{decompose, verify_decomposition, Decomposition, DecompositionAudit};
pub use error::{Error, Result};
pub use graph::Graph;
pub use palette::{ListSample, PaletteMode, PaletteSystem, Params};

/// Dense vertex index, `0..n`.
pub type Vertex = usize;
/// Dense color index, `0..gamma_size`.
pub type Color = usize;
