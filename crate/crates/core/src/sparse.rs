//! Coloring the sparse part: tentative colors `τ` with keep bits `ξ`, the
//! retained set `T`, fraternal and alien structures, target checks and
//! completion from residual lists.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::listcolor::{color_subgraph, SearchConfig, SearchOutcome};
use crate::palette::{pick, sample_lists, ListSample, PaletteSystem, Params};
use crate::seed;
use crate::{Color, Vertex};

/// `|{w ∼ v : γ ∈ S_w}|`.
pub fn color_degree_s(g: &Graph, p: &PaletteSystem, v: Vertex, gamma: Color) -> usize {
    g.neighbors(v).iter().filter(|&&w| p.contains(w, gamma)).count()
}

/// `|{w ∼ v : γ ∈ L_w}|`.
pub fn color_degree_l(g: &Graph, lists: &ListSample, v: Vertex, gamma: Color) -> usize {
    g.neighbors(v).iter().filter(|&&w| lists.contains(w, gamma)).count()
}

/// `ζ̂ = 1 - 1/(D+1)`.
pub fn zeta_hat(d: usize) -> f64 {
    1.0 - 1.0 / (d as f64 + 1.0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TentativeAssignment {
    pub tau: Vec<Color>,
    pub xi: Vec<bool>,
    pub seed: u64,
}

/// `τ_v` uniform on `S_v`, then `ξ_v ~ Bernoulli(ζ̂^{D - d_γ(v)})` with
/// `γ = τ_v`.
pub fn tentative_assign(g: &Graph, p: &PaletteSystem, seed: u64) -> TentativeAssignment {
    assign_from(g, p, &p.lists, seed)
}

/// As [`tentative_assign`] but with `τ_v` uniform on the given sublists.
/// The keep probability still uses the base-list color degree.
pub fn assign_from(g: &Graph, p: &PaletteSystem, lists: &[Vec<Color>], seed: u64) -> TentativeAssignment {
    let mut rng = seed::rng(seed);
    let zh = zeta_hat(p.d);
    let mut tau = Vec::with_capacity(g.n());
    let mut xi = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let gamma = pick(&lists[v], &mut rng);
        let exponent = p.d - color_degree_s(g, p, v, gamma);
        tau.push(gamma);
        xi.push(rng.gen_bool(libm::pow(zh, exponent as f64)));
    }
    TentativeAssignment { tau, xi, seed }
}

/// `ℓ⁰ = ⌊0.1 δ ln n⌋`, capped at `D+1`.
pub fn two_step_ell(n: usize, d: usize, delta: f64) -> usize {
    let raw = 0.1 * delta * libm::log(n.max(1) as f64);
    (libm::floor(raw) as usize).min(d + 1)
}

/// Two-step sampler: uniform `ℓ⁰`-subsets `L⁰_v ⊆ S_v`, then `τ_v` uniform
/// on `L⁰_v`.
pub fn two_step_assign(g: &Graph, p: &PaletteSystem, delta: f64, seed: u64) -> Result<(TentativeAssignment, ListSample)> {
    two_step_assign_with(g, p, two_step_ell(g.n(), p.d, delta), seed)
}

pub fn two_step_assign_with(g: &Graph, p: &PaletteSystem, ell0: usize, seed: u64) -> Result<(TentativeAssignment, ListSample)> {
    if ell0 < 1 {
        return Err(Error::Parameter("two-step list size 0.1 δ log n is below 1".into()));
    }
    let l0 = sample_lists(p, ell0, seed::mix64(seed, &[0]), None)?;
    let ta = assign_from(g, p, &l0.lists, seed::mix64(seed, &[1]));
    Ok((TentativeAssignment { seed, ..ta }, l0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RetainedColoring {
    /// `T`, sorted.
    pub t: Vec<Vertex>,
    /// `σ = τ|_T`, `None` off `T`.
    pub sigma: Vec<Option<Color>>,
}

impl RetainedColoring {
    pub fn contains(&self, v: Vertex) -> bool {
        self.sigma[v].is_some()
    }

    /// Restriction to the vertices where `mask` is set.
    pub fn restricted(&self, mask: &[bool]) -> RetainedColoring {
        let t: Vec<Vertex> = self.t.iter().copied().filter(|&v| mask[v]).collect();
        let mut sigma = vec![None; self.sigma.len()];
        for &v in &t {
            sigma[v] = self.sigma[v];
        }
        RetainedColoring { t, sigma }
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.sigma[u].is_none() || self.sigma[u] != self.sigma[v])
    }
}

/// `T = {v : ξ_v = 1, τ_w ≠ τ_v ∀w ∼ v}` and `σ = τ|_T`.
pub fn retained_set(g: &Graph, ta: &TentativeAssignment) -> RetainedColoring {
    let mut t = Vec::new();
    let mut sigma = vec![None; g.n()];
    for v in 0..g.n() {
        if ta.xi[v] && g.neighbors(v).iter().all(|&w| ta.tau[w] != ta.tau[v]) {
            t.push(v);
            sigma[v] = Some(ta.tau[v]);
        }
    }
    RetainedColoring { t, sigma }
}

/// `F_v = {(u, w, γ) : u < w, uw ∉ E, u, w ∈ N_v, γ ∈ S_u ∩ S_w}`.
pub fn fraternal_pairs(g: &Graph, p: &PaletteSystem, v: Vertex) -> Vec<(Vertex, Vertex, Color)> {
    let nb = g.neighbors(v);
    let mut out = Vec::new();
    for (i, &u) in nb.iter().enumerate() {
        for &w in &nb[i + 1..] {
            if !g.has_edge(u, w) {
                out.extend(p.lists[u].iter().filter(|&&c| p.contains(w, c)).map(|&c| (u, w, c)));
            }
        }
    }
    out
}

/// `A_v = {(w, γ) : w ∈ N_v, γ ∈ S_w \ S_v}`.
pub fn alien_pairs(g: &Graph, p: &PaletteSystem, v: Vertex) -> Vec<(Vertex, Color)> {
    g.neighbors(v)
        .iter()
        .flat_map(|&w| p.lists[w].iter().filter(move |&&c| !p.contains(v, c)).map(move |&c| (w, c)))
        .collect()
}

/// `|F_v|` without materializing the set.
pub fn fraternal_count(g: &Graph, p: &PaletteSystem, v: Vertex) -> usize {
    let nb = g.neighbors(v);
    let mut total = 0;
    for (i, &u) in nb.iter().enumerate() {
        for &w in &nb[i + 1..] {
            if !g.has_edge(u, w) {
                total += crate::graph::sorted_intersection_len(&p.lists[u], &p.lists[w]);
            }
        }
    }
    total
}

/// `|A_v|` without materializing the set.
pub fn alien_count(g: &Graph, p: &PaletteSystem, v: Vertex) -> usize {
    g.neighbors(v)
        .iter()
        .map(|&w| p.lists[w].len() - crate::graph::sorted_intersection_len(&p.lists[w], &p.lists[v]))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Dichotomy {
    Fraternal,
    Alien,
    Both,
    Neither,
}

/// Classifies `v` by `|F_v| ≥ ϑD³/2` and `|A_v| ≥ ϑD²/2`.
///
/// # Panics
/// If neither holds although `|Ḡ[N_v]| ≥ ϑD²`.
pub fn sparse_dichotomy(g: &Graph, p: &PaletteSystem, v: Vertex, vartheta: f64) -> Dichotomy {
    classify(g, p, v, vartheta, fraternal_count(g, p, v), alien_count(g, p, v))
}

fn classify(g: &Graph, p: &PaletteSystem, v: Vertex, vartheta: f64, f: usize, a: usize) -> Dichotomy {
    let d = p.d as f64;
    let frat = f as f64 >= vartheta * d * d * d / 2.0;
    let alien = a as f64 >= vartheta * d * d / 2.0;
    match (frat, alien) {
        (true, true) => Dichotomy::Both,
        (true, false) => Dichotomy::Fraternal,
        (false, true) => Dichotomy::Alien,
        (false, false) => {
            let witness = g.nonedge_count(g.neighbors(v)) as f64;
            assert!(
                witness < vartheta * d * d,
                "vertex {v} has {witness} non-edges in its neighborhood but |F_v| = {f}, |A_v| = {a}"
            );
            Dichotomy::Neither
        }
    }
}

/// Realized fraternal events `E^v_{uwγ}` and alien events `K_{wγ}` at `v`.
pub fn realized_events(
    g: &Graph,
    p: &PaletteSystem,
    rc: &RetainedColoring,
    ta: &TentativeAssignment,
    v: Vertex,
) -> (usize, usize) {
    let nb = g.neighbors(v);
    let mut fraternal = 0;
    for &u in nb {
        if !rc.contains(u) {
            continue;
        }
        let gamma = ta.tau[u];
        let mut same = nb.iter().filter(|&&x| ta.tau[x] == gamma);
        let (Some(&a), Some(&b), None) = (same.next(), same.next(), same.next()) else {
            continue;
        };
        let w = if a == u { b } else { a };
        if w > u && !g.has_edge(u, w) && rc.contains(w) && p.contains(u, gamma) && p.contains(w, gamma) {
            fraternal += 1;
        }
    }
    let alien = nb.iter().filter(|&&w| rc.contains(w) && !p.contains(v, ta.tau[w])).count();
    (fraternal, alien)
}

/// `|T ∩ N_v| - |σ(T ∩ N_v) ∩ S_v|`.
pub fn slack(g: &Graph, p: &PaletteSystem, rc: &RetainedColoring, v: Vertex) -> (usize, usize) {
    let mut in_t = 0;
    let mut colors: Vec<Color> = Vec::new();
    for &w in g.neighbors(v) {
        if let Some(c) = rc.sigma[w] {
            in_t += 1;
            if p.contains(v, c) {
                colors.push(c);
            }
        }
    }
    colors.sort_unstable();
    colors.dedup();
    (in_t, in_t - colors.len())
}

/// `J^v_{uwγ} = {x ∈ (N_u ∪ N_w ∪ N_v) \ {u, w} : γ ∈ S_x}`.
pub fn event_blockers(g: &Graph, p: &PaletteSystem, v: Vertex, u: Vertex, w: Vertex, gamma: Color) -> Vec<Vertex> {
    let mut xs: Vec<Vertex> = g.neighbors(u).iter().chain(g.neighbors(w)).chain(g.neighbors(v)).copied().collect();
    xs.sort_unstable();
    xs.dedup();
    xs.retain(|&x| x != u && x != w && p.contains(x, gamma));
    xs
}

/// `P(E^v_{uwγ}) = (D+1)^{-2} ζ̂^{|J| + 2D - d_γ(u) - d_γ(w)}`.
pub fn fraternal_event_probability(g: &Graph, p: &PaletteSystem, v: Vertex, u: Vertex, w: Vertex, gamma: Color) -> f64 {
    let d = p.d;
    let j = event_blockers(g, p, v, u, w, gamma).len();
    let exp = j + 2 * d - color_degree_s(g, p, u, gamma) - color_degree_s(g, p, w, gamma);
    libm::pow(zeta_hat(d), exp as f64) / ((d + 1) * (d + 1)) as f64
}

/// Expected number of realized fraternal events at `v`.
pub fn expected_fraternal_events(g: &Graph, p: &PaletteSystem, v: Vertex) -> f64 {
    fraternal_pairs(g, p, v).into_iter().map(|(u, w, c)| fraternal_event_probability(g, p, v, u, w, c)).sum()
}

/// `P(K_{wγ}) = (D+1)^{-1} ζ̂^D`.
pub fn alien_event_probability(d: usize) -> f64 {
    libm::pow(zeta_hat(d), d as f64) / (d + 1) as f64
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexDiagnostics {
    pub vertex: Vertex,
    pub in_sparse: bool,
    pub t_neighbors: usize,
    pub slack: usize,
    pub fraternal_size: usize,
    pub alien_size: usize,
    pub branch: Dichotomy,
    pub fraternal_events: usize,
    pub alien_events: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseDiagnostics {
    pub d: usize,
    pub vertices: Vec<VertexDiagnostics>,
}

/// Diagnostics for the vertices of `vertices`.
///
/// # Panics
/// If slack falls below either realized event count.
pub fn diagnose(
    g: &Graph,
    p: &PaletteSystem,
    ta: &TentativeAssignment,
    rc: &RetainedColoring,
    vertices: &[Vertex],
    in_sparse: &[bool],
    params: &Params,
) -> SparseDiagnostics {
    let records = vertices
        .iter()
        .map(|&v| {
            let (t_neighbors, sl) = slack(g, p, rc, v);
            let f = fraternal_count(g, p, v);
            let a = alien_count(g, p, v);
            let branch = classify(g, p, v, params.vartheta(), f, a);
            let (fe, ae) = realized_events(g, p, rc, ta, v);
            assert!(sl >= fe && sl >= ae, "slack {sl} below realized events ({fe}, {ae}) at {v}");
            VertexDiagnostics {
                vertex: v,
                in_sparse: in_sparse[v],
                t_neighbors,
                slack: sl,
                fraternal_size: f,
                alien_size: a,
                branch,
                fraternal_events: fe,
                alien_events: ae,
            }
        })
        .collect();
    SparseDiagnostics { d: p.d, vertices: records }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TargetStatus {
    Pass,
    Fail,
    Exempt,
}

pub const DEFAULT_TARGET_TOLERANCE: f64 = 0.2;

/// Target check for one record: `|T ∩ N_v|` within `(1 ± tol) e^{-1} D`
/// and slack strictly above `ϑ′D`. Vertices outside `V*` are exempt.
pub fn check_target(rec: &VertexDiagnostics, d: usize, params: &Params, tol: f64) -> TargetStatus {
    if !rec.in_sparse {
        return TargetStatus::Exempt;
    }
    let d = d as f64;
    let centre = libm::exp(-1.0) * d;
    let t = rec.t_neighbors as f64;
    let in_band = (1.0 - tol) * centre <= t && t <= (1.0 + tol) * centre;
    if in_band && rec.slack as f64 > params.vartheta_prime() * d {
        TargetStatus::Pass
    } else {
        TargetStatus::Fail
    }
}

pub fn check_targets(diag: &SparseDiagnostics, params: &Params, tol: f64) -> Vec<(Vertex, TargetStatus)> {
    diag.vertices.iter().map(|r| (r.vertex, check_target(r, diag.d, params, tol))).collect()
}

/// `L_v \ {τ_v} \ σ(T ∩ N_v)` for each `v` in `vertices` not in `T`.
pub fn residual_lists(
    g: &Graph,
    ta: &TentativeAssignment,
    rc: &RetainedColoring,
    lists: &ListSample,
    vertices: &[Vertex],
) -> Vec<(Vertex, Vec<Color>)> {
    vertices
        .iter()
        .filter(|&&v| !rc.contains(v))
        .map(|&v| {
            let residual = lists.lists[v]
                .iter()
                .copied()
                .filter(|&c| c != ta.tau[v] && g.neighbors(v).iter().all(|&w| rc.sigma[w] != Some(c)))
                .collect();
            (v, residual)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseCompletion {
    /// Colors for `V* \ T`.
    pub coloring: Vec<(Vertex, Color)>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseFailure {
    pub vertex: Vertex,
    pub residual_size: usize,
    pub nodes: u64,
    /// Whether search proved the residual instance uncolorable.
    pub proven: bool,
}

/// Colors `vertices \ T` from residual lists so that, together with `σ`,
/// the result is proper on `vertices`.
pub fn complete_sparse(
    g: &Graph,
    ta: &TentativeAssignment,
    rc: &RetainedColoring,
    lists: &ListSample,
    vertices: &[Vertex],
    config: &SearchConfig,
    seed: u64,
) -> core::result::Result<SparseCompletion, SparseFailure> {
    let residual = residual_lists(g, ta, rc, lists, vertices);
    if let Some((v, _)) = residual.iter().find(|(_, l)| l.is_empty()) {
        return Err(SparseFailure { vertex: *v, residual_size: 0, nodes: 0, proven: true });
    }
    let uncolored: Vec<Vertex> = residual.iter().map(|(v, _)| *v).collect();
    let mut full = vec![Vec::new(); g.n()];
    for (v, l) in residual.iter() {
        full[*v] = l.clone();
    }
    let report = color_subgraph(g, &uncolored, &full, config, seed);
    match report.outcome {
        SearchOutcome::Colored(cols) => Ok(SparseCompletion {
            coloring: uncolored.into_iter().zip(cols).collect(),
            nodes: report.nodes,
        }),
        SearchOutcome::Unsatisfiable { dead_end } => {
            Err(SparseFailure { vertex: dead_end, residual_size: full[dead_end].len(), nodes: report.nodes, proven: true })
        }
        SearchOutcome::Inconclusive { dead_end } => {
            Err(SparseFailure { vertex: dead_end, residual_size: full[dead_end].len(), nodes: report.nodes, proven: false })
        }
    }
}
