use alloc::string::String;
use alloc::vec::Vec;

use crate::{Color, Vertex};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("edge ({0}, {1}) is a loop or has an endpoint out of range")]
    InvalidEdge(Vertex, Vertex),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("n*D = {n}*{d} is odd, no {d}-regular graph exists")]
    Parity { n: usize, d: usize },
    #[error("generation failed after {retries} repair attempts")]
    Generation { retries: usize },
    #[error("list size {ell} exceeds the {available} colors available at vertex {vertex}")]
    ListTooLarge { vertex: Vertex, ell: usize, available: usize },
    #[error("not a partition: duplicated {duplicated:?}, missing {missing:?}")]
    NotPartition { duplicated: Vec<Vertex>, missing: Vec<Vertex> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("color {color} is outside the palette of size {gamma_size}")]
    ColorOutOfRange { color: Color, gamma_size: usize },
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}
