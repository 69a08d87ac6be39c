//! Palette systems, random sublists, parameters and the probability
//! toolkit used to reason about them.

mod bounds;
mod extremal;
mod params;

pub use bounds::{
    chernoff_lower, chernoff_upper, janson_bound, large_dev_bound, lll_check, phi, ChernoffBound, JansonBound,
};
pub use extremal::{cvx_extremal_z, DiscreteDistribution};
pub use params::{Params, ProcessParams};

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;
use crate::{Color, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PaletteMode {
    /// Every `S_v = [0, D]`.
    Identical,
    /// `S_v` is the width-`(D+1)` window starting at `v mod (|Γ| - D)`.
    Windows,
    /// `S_v` uniform among the `(D+1)`-subsets of `Γ`, independently.
    RandomWide,
}

/// Base lists `S_v` of size `D+1` over the color set `Γ = [0, gamma_size)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PaletteSystem {
    pub gamma_size: usize,
    pub d: usize,
    /// Sorted `S_v` per vertex.
    pub lists: Vec<Vec<Color>>,
}

impl PaletteSystem {
    /// Checks list sizes, sortedness and the color range.
    pub fn validate(&self) -> Result<()> {
        for (v, s) in self.lists.iter().enumerate() {
            if s.len() != self.d + 1 || !s.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Parameter(alloc::format!(
                    "palette of vertex {v} must be {} sorted distinct colors",
                    self.d + 1
                )));
            }
            if let Some(&c) = s.iter().find(|&&c| c >= self.gamma_size) {
                return Err(Error::ColorOutOfRange { color: c, gamma_size: self.gamma_size });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn contains(&self, v: Vertex, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// Colors that appear in no list.
    pub fn unused_colors(&self) -> Vec<Color> {
        let mut used = alloc::vec![false; self.gamma_size];
        for &c in self.lists.iter().flatten() {
            used[c] = true;
        }
        (0..self.gamma_size).filter(|&c| !used[c]).collect()
    }

    /// Extends the system to `n` vertices, giving new vertices `[0, D]`.
    pub fn padded(&self, n: usize) -> PaletteSystem {
        let mut lists = self.lists.clone();
        lists.resize_with(n.max(lists.len()), || (0..=self.d).collect());
        PaletteSystem { gamma_size: self.gamma_size, d: self.d, lists }
    }
}

/// Builds base lists of size `D+1` for every vertex of `g`, where `D` is
/// the graph's declared degree.
pub fn make_palette(g: &Graph, mode: PaletteMode, gamma_size: usize, seed: u64) -> Result<PaletteSystem> {
    let d = g.degree_bound();
    if gamma_size < d + 1 {
        return Err(Error::Parameter(alloc::format!("palette needs at least D+1 = {} colors, got {gamma_size}", d + 1)));
    }
    let n = g.n();
    let lists = match mode {
        PaletteMode::Identical => (0..n).map(|_| (0..=d).collect()).collect(),
        PaletteMode::Windows => {
            let starts = gamma_size - d;
            (0..n).map(|v| {
                let s = v % starts;
                (s..s + d + 1).collect()
            })
            .collect()
        }
        PaletteMode::RandomWide => {
            let mut rng = seed::rng(seed);
            let mut pool: Vec<Color> = (0..gamma_size).collect();
            (0..n).map(|_| uniform_subset(&mut pool, d + 1, &mut rng)).collect()
        }
    };
    Ok(PaletteSystem { gamma_size, d, lists })
}

/// Uniform `k`-subset of `pool` by partial Fisher–Yates, returned sorted.
/// `pool` is permuted in place.
fn uniform_subset(pool: &mut [Color], k: usize, rng: &mut seed::Rng) -> Vec<Color> {
    debug_assert!(k <= pool.len());
    for i in 0..k {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// The sparsified lists `L_v ⊆ S_v`, each of size `ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ListSample {
    pub ell: usize,
    pub seed: u64,
    /// Sorted `L_v` per vertex.
    pub lists: Vec<Vec<Color>>,
}

impl ListSample {
    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn contains(&self, v: Vertex, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// Whether every `L_v` has size `ell` and lies inside `S_v`.
    pub fn is_sublist_of(&self, palette: &PaletteSystem) -> bool {
        self.lists.len() == palette.n()
            && self.lists.iter().enumerate().all(|(v, l)| {
                l.len() == self.ell && l.iter().all(|&c| palette.contains(v, c))
            })
    }
}

/// Draws independent uniform `ell`-subsets of `S_v`, or of `T_v` when a
/// restriction is given.
pub fn sample_lists(
    palette: &PaletteSystem,
    ell: usize,
    seed: u64,
    restriction: Option<&[Vec<Color>]>,
) -> Result<ListSample> {
    let bases: &[Vec<Color>] = restriction.unwrap_or(&palette.lists);
    if let Some((v, b)) = bases.iter().enumerate().find(|(_, b)| b.len() < ell) {
        return Err(Error::ListTooLarge { vertex: v, ell, available: b.len() });
    }
    let mut rng = seed::rng(seed);
    let lists = bases
        .iter()
        .map(|b| {
            let mut pool = b.clone();
            uniform_subset(&mut pool, ell, &mut rng)
        })
        .collect();
    Ok(ListSample { ell, seed, lists })
}

/// A uniform element of `list`.
pub(crate) fn pick<R: rand::Rng>(list: &[Color], rng: &mut R) -> Color {
    *list.choose(rng).expect("non-empty list")
}
