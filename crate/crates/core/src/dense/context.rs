//! Per-cluster view: allowed colors `T_v`, the non-edge graph `H = Ḡ[C]`
//! and the popularity regime.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection_len, Graph};
use crate::palette::{PaletteSystem, Params};
use crate::{Color, Vertex};

/// A cluster `C` with everything outside it already colored by `σ`.
/// Vertices are addressed by their position in the sorted `cluster`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterBigraph {
    pub cluster: Vec<Vertex>,
    /// `T_v = S_v` minus colors of colored external neighbors, sorted.
    pub allowed: Vec<Vec<Color>>,
    /// Adjacency of `H` in local indices, sorted.
    pub h_adj: Vec<Vec<usize>>,
    pub h_edges: usize,
    /// `ζ = |H| / D²`.
    pub zeta: f64,
    /// `x = |C| - (D+1)`.
    pub x: isize,
    /// External degree `∇_v`.
    pub nabla: Vec<usize>,
    pub d: usize,
    pub gamma_size: usize,
}

impl ClusterBigraph {
    pub fn len(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster.is_empty()
    }

    pub fn h_degree(&self, i: usize) -> usize {
        self.h_adj[i].len()
    }

    pub fn h_has_edge(&self, i: usize, j: usize) -> bool {
        self.h_adj[i].binary_search(&j).is_ok()
    }

    /// Edges of `H` as local pairs `i < j`, lexicographic.
    pub fn h_edge_list(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.h_adj.iter().enumerate().flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// `d_γ` in the bigraph `F`: members whose `T_v` contains `γ`.
    pub fn color_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.gamma_size];
        for &c in self.allowed.iter().flatten() {
            deg[c] += 1;
        }
        deg
    }

    pub fn allows(&self, i: usize, c: Color) -> bool {
        self.allowed[i].binary_search(&c).is_ok()
    }
}

/// Builds the cluster view. `sigma` may color any vertex outside `C`.
pub fn cluster_context(g: &Graph, p: &PaletteSystem, sigma: &[Option<Color>], cluster: &[Vertex]) -> Result<ClusterBigraph> {
    let mut members = cluster.to_vec();
    members.sort_unstable();
    members.dedup();
    if let Some(&v) = members.iter().find(|&&v| sigma[v].is_some()) {
        return Err(Error::Parameter(alloc::format!("cluster vertex {v} is already colored")));
    }
    let local = |v: Vertex| members.binary_search(&v).ok();
    let d = p.d;
    let mut allowed = Vec::with_capacity(members.len());
    let mut nabla = Vec::with_capacity(members.len());
    let mut h_adj = Vec::with_capacity(members.len());
    for (i, &v) in members.iter().enumerate() {
        let external: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| local(w).is_none()).collect();
        let blocked: Vec<Color> = external.iter().filter_map(|&w| sigma[w]).collect();
        allowed.push(p.lists[v].iter().copied().filter(|c| !blocked.contains(c)).collect::<Vec<_>>());
        nabla.push(external.len());
        h_adj.push(
            (0..members.len()).filter(|&j| j != i && !g.has_edge(v, members[j])).collect::<Vec<_>>(),
        );
    }
    let h_edges = h_adj.iter().map(Vec::len).sum::<usize>() / 2;
    let zeta = if d == 0 { 0.0 } else { h_edges as f64 / (d * d) as f64 };
    Ok(ClusterBigraph {
        x: members.len() as isize - (d as isize + 1),
        cluster: members,
        allowed,
        h_adj,
        h_edges,
        zeta,
        nabla,
        d,
        gamma_size: p.gamma_size,
    })
}

/// `L_v ∩ T_v` per member, with the members flagged for
/// `|L_v \ T_v| ≥ 0.5 δ log n` or an empty intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrimmedLists {
    pub lists: Vec<Vec<Color>>,
    pub flagged: Vec<usize>,
}

/// Restricts each member's list (given in local order) to `T_v`.
pub fn trim_lists(ctx: &ClusterBigraph, lists: &[Vec<Color>], delta: f64, log_n: f64) -> TrimmedLists {
    let limit = 0.5 * delta * log_n;
    let mut flagged = Vec::new();
    let trimmed = lists
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let kept: Vec<Color> = l.iter().copied().filter(|&c| ctx.allows(i, c)).collect();
            if kept.is_empty() || (l.len() - kept.len()) as f64 >= limit {
                flagged.push(i);
            }
            kept
        })
        .collect();
    TrimmedLists { lists: trimmed, flagged }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeReport {
    pub b: f64,
    /// Popular colors `P = {γ : d_γ > b}`.
    pub popular: Vec<Color>,
    /// `|P| < (1+2ρ)D`; may fail at small `D`.
    pub popular_small: bool,
    /// `S = {v : d_U(v) > θD/2}`, local indices.
    pub s_set: Vec<usize>,
    pub r1_lhs: f64,
    pub r1_threshold: f64,
    pub r2_lhs: f64,
    pub s_threshold: f64,
    pub zeta: f64,
    pub zeta0: f64,
    pub r1: bool,
    pub r2: bool,
    pub s_size: bool,
    pub zeta_large: bool,
    /// Audit of "R2 implies Ssize".
    pub r2_implies_s_size: bool,
}

impl RegimeReport {
    pub fn r1_margin(&self) -> f64 {
        self.r1_lhs - self.r1_threshold
    }

    pub fn s_margin(&self) -> f64 {
        self.s_set.len() as f64 - self.s_threshold
    }

    pub fn zeta_margin(&self) -> f64 {
        self.zeta - self.zeta0
    }

    pub fn is_popular(&self, c: Color) -> bool {
        self.popular.binary_search(&c).is_ok()
    }
}

pub fn classify_regime(ctx: &ClusterBigraph, params: &Params) -> RegimeReport {
    let d = ctx.d as f64;
    let b = params.b(ctx.d);
    let popular: Vec<Color> =
        ctx.color_degrees().iter().enumerate().filter(|&(_, &dg)| dg as f64 > b).map(|(c, _)| c).collect();
    let is_pop = |c: &Color| popular.binary_search(c).is_ok();
    let theta = params.theta();
    let zeta = ctx.zeta;

    let mut r1_lhs = 0usize;
    let mut r2_lhs = 0usize;
    for (i, j) in ctx.h_edge_list() {
        let common = sorted_intersection_len(&ctx.allowed[i], &ctx.allowed[j]);
        let common_pop = ctx.allowed[i].iter().filter(|c| is_pop(c) && ctx.allows(j, **c)).count();
        r1_lhs += common_pop;
        r2_lhs += common - common_pop;
    }
    let s_set: Vec<usize> = (0..ctx.len())
        .filter(|&i| ctx.allowed[i].iter().filter(|c| !is_pop(c)).count() as f64 > theta * d / 2.0)
        .collect();
    let r1_threshold = theta * zeta * d * d * d;
    let s_threshold = libm::sqrt(theta * zeta) * d;
    let r1 = r1_lhs as f64 > r1_threshold;
    let r2 = r2_lhs as f64 > r1_threshold;
    let s_size = s_set.len() as f64 > s_threshold;
    let zeta0 = params.zeta0(ctx.d);
    RegimeReport {
        b,
        popular_small: (popular.len() as f64) < (1.0 + 2.0 * params.rho()) * d,
        popular,
        s_set,
        r1_lhs: r1_lhs as f64,
        r1_threshold,
        r2_lhs: r2_lhs as f64,
        s_threshold,
        zeta,
        zeta0,
        r1,
        r2,
        s_size,
        zeta_large: zeta >= zeta0,
        r2_implies_s_size: !r2 || s_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_disjoint_cliques;
    use crate::palette::{make_palette, PaletteMode};

    #[test]
    fn clique_context() {
        let g = gen_disjoint_cliques(2, 4).unwrap();
        let p = make_palette(&g, PaletteMode::Identical, 5, 0).unwrap();
        let sigma = vec![None; 10];
        let ctx = cluster_context(&g, &p, &sigma, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((ctx.h_edges, ctx.zeta, ctx.x), (0, 0.0, 0));
        assert!(ctx.allowed.iter().all(|t| t == &p.lists[0]));
        let r = classify_regime(&ctx, &Params::default());
        assert!(!r.zeta_large && !r.r1);
    }

    #[test]
    fn external_color_is_removed() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = make_palette(&g, PaletteMode::Identical, 3, 0).unwrap();
        let sigma = vec![None, None, Some(2)];
        let ctx = cluster_context(&g, &p, &sigma, &[0, 1]).unwrap();
        assert_eq!(ctx.allowed[0], [0, 1, 2]);
        assert_eq!(ctx.allowed[1], [0, 1]);
        assert_eq!(ctx.nabla, [0, 1]);
        let t = trim_lists(&ctx, &[vec![0, 2], vec![2]], 1.0, 10.0);
        assert_eq!(t.lists, [vec![0, 2], vec![]]);
        assert_eq!(t.flagged, [1]);
        assert!(cluster_context(&g, &p, &sigma, &[1, 2]).is_err());
    }
}
