//! Simple undirected graphs with sorted adjacency and a declared maximum
//! degree `D`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Vertex;

/// A simple undirected graph on `0..n`.
///
/// Adjacency lists are sorted and symmetric, there are no loops or repeated
/// edges, and every degree is at most the declared degree `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    degree_bound: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices with `D = 0`.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], degree_bound: 0 }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; loops
    /// and out-of-range endpoints are rejected. `D` is the observed maximum
    /// degree.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            g.insert_edge(u, v);
        }
        g.degree_bound = g.observed_max_degree();
        Ok(g)
    }

    /// Re-declares `D`. Fails if some vertex already has degree above `d`.
    pub fn with_degree_bound(mut self, d: usize) -> Result<Self> {
        let observed = self.observed_max_degree();
        if observed > d {
            return Err(Error::Parameter(alloc::format!(
                "maximum degree {observed} exceeds declared degree {d}"
            )));
        }
        self.degree_bound = d;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// The declared maximum degree `D`.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        // search the shorter list
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn observed_max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `|N(u) ∩ N(v)|`, by merging the sorted lists.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> usize {
        sorted_intersection_len(&self.adj[u], &self.adj[v])
    }

    /// Number of edges of the induced subgraph `G[X]`. Duplicates in `xs`
    /// are ignored.
    pub fn induced_edge_count(&self, xs: &[Vertex]) -> usize {
        let set: BTreeSet<Vertex> = xs.iter().copied().collect();
        set.iter()
            .map(|&u| self.adj[u].iter().filter(|&&w| w > u && set.contains(&w)).count())
            .sum()
    }

    /// Number of unordered non-adjacent pairs inside `X`, i.e. `|Ḡ[X]|`.
    pub fn nonedge_count(&self, xs: &[Vertex]) -> usize {
        let k = xs.iter().copied().collect::<BTreeSet<_>>().len();
        k * k.saturating_sub(1) / 2 - self.induced_edge_count(xs)
    }

    /// Adds `uv` if absent. Returns whether the edge was new.
    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u != v);
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                true
            }
        }
    }

    pub(crate) fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
                self.adj[v].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub(crate) fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub(crate) fn set_degree_bound_unchecked(&mut self, d: usize) {
        self.degree_bound = d;
    }

    /// Structural self-check: symmetric, sorted, simple, within `D`.
    pub fn check_invariants(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, nb)| {
            nb.len() <= self.degree_bound
                && nb.windows(2).all(|w| w[0] < w[1])
                && nb.iter().all(|&v| v != u && v < self.n() && self.adj[v].binary_search(&u).is_ok())
        })
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Embeds `g` in a `D`-regular simple graph, keeping vertex ids `0..n`.
///
/// Deficient vertices are first joined greedily (most deficient pair
/// first) until they form a clique `K`. If deficiency remains, the
/// smallest workable block of `f` fresh vertices is added: each member of
/// `K` is joined to its deficiency's worth of the least loaded fresh
/// vertices, and the residual degrees inside the block are realized by
/// Havel–Hakimi. Since the loads differ by at most one, `f = D+1` or
/// `D+2` (whichever matches the parity) always works, so the result has
/// at most `n + D + 2` vertices.
pub fn regularize(g: &Graph, d: usize) -> Result<Graph> {
    let observed = g.observed_max_degree();
    if observed > d {
        return Err(Error::Parameter(alloc::format!(
            "maximum degree {observed} exceeds target degree {d}"
        )));
    }
    let mut h = g.clone();
    h.set_degree_bound_unchecked(d);
    let n0 = g.n();
    loop {
        let mut deficient: Vec<Vertex> = (0..h.n()).filter(|&v| h.degree(v) < d).collect();
        deficient.sort_by_key(|&v| (h.degree(v), v));
        let pair = deficient.iter().enumerate().find_map(|(i, &u)| {
            deficient[i + 1..].iter().find(|&&w| !h.has_edge(u, w)).map(|&w| (u, w))
        });
        match pair {
            Some((u, w)) => {
                h.insert_edge(u, w);
            }
            None => break,
        }
    }
    let clique: Vec<(Vertex, usize)> = (0..n0).filter(|&v| h.degree(v) < d).map(|v| (v, d - h.degree(v))).collect();
    if !clique.is_empty() {
        let (f, joins, inner) =
            (1..=d + 2).find_map(|f| fresh_block(&clique, d, f).map(|(j, i)| (f, j, i))).expect("a block of D+1 or D+2 always works");
        let fresh: Vec<Vertex> = (0..f).map(|_| h.add_vertex()).collect();
        for (v, i) in joins {
            h.insert_edge(v, fresh[i]);
        }
        for (i, j) in inner {
            h.insert_edge(fresh[i], fresh[j]);
        }
    }
    assert!(
        h.n() <= n0 + d + 2,
        "regularization used {} vertices, bound is {}",
        h.n(),
        n0 + d + 2
    );
    debug_assert!(h.is_regular(d) && h.check_invariants());
    Ok(h)
}

type Block = (Vec<(Vertex, usize)>, Vec<(usize, usize)>);

/// Edges from deficient vertices `(v, deficiency)` into `f` fresh vertices
/// and among them, or `None` when this `f` cannot close the deficiency.
fn fresh_block(deficient: &[(Vertex, usize)], d: usize, f: usize) -> Option<Block> {
    let total: usize = deficient.iter().map(|x| x.1).sum();
    if (f * d) % 2 != total % 2 || deficient.iter().any(|x| x.1 > f) {
        return None;
    }
    let mut load = vec![0usize; f];
    let mut joins = Vec::with_capacity(total);
    for &(v, need) in deficient {
        let mut order: Vec<usize> = (0..f).collect();
        order.sort_by_key(|&i| (load[i], i));
        for &i in order.iter().take(need) {
            load[i] += 1;
            joins.push((v, i));
        }
    }
    if load.iter().any(|&l| l > d) {
        return None;
    }
    // Havel–Hakimi on the residual degrees
    let mut residual: Vec<(usize, usize)> = (0..f).map(|i| (d - load[i], i)).collect();
    let mut inner = Vec::new();
    loop {
        residual.sort_by(|a, b| b.cmp(a));
        let (r, i) = residual[0];
        if r == 0 {
            return Some((joins, inner));
        }
        if r >= f {
            return None;
        }
        residual[0].0 = 0;
        for slot in residual.iter_mut().skip(1).take(r) {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            inner.push((i, slot.1));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn build_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.degree_bound(), 2);
        assert_eq!(tri.edge_count(), 3);

        let empty = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(empty.degree_bound(), 0);
        assert_eq!(empty.edge_count(), 0);

        let dedup = Graph::from_edges(4, &[(0, 1), (0, 1), (2, 3)]).unwrap();
        assert_eq!(dedup.edge_count(), 2);
        assert_eq!(dedup.degree_bound(), 1);
    }

    #[test]
    fn build_rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(Error::InvalidEdge(1, 1)));
        assert_eq!(Graph::from_edges(3, &[(0, 3)]), Err(Error::InvalidEdge(0, 3)));
    }

    #[test]
    fn nonedge_examples() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.nonedge_count(&[0, 1, 2, 3]), 0);
        assert_eq!(Graph::empty(4).nonedge_count(&[0, 1, 2, 3]), 6);
        assert_eq!(cycle(5).nonedge_count(&[0, 1, 2, 3, 4]), 5);
    }

    #[test]
    fn regularize_examples() {
        let tri = cycle(3);
        assert_eq!(regularize(&tri, 2).unwrap(), tri);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = regularize(&path, 2).unwrap();
        assert_eq!(r.n(), 3);
        assert!(r.is_regular(2));
        assert!(path.edges().all(|(u, v)| r.has_edge(u, v)));

        let single = Graph::empty(1);
        let r = regularize(&single, 2).unwrap();
        assert_eq!(r.n(), 3);
        assert!(r.is_regular(2) && r.check_invariants());
    }

    #[test]
    fn regularize_rejects_high_degree() {
        assert!(matches!(regularize(&cycle(4), 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn codegree_merge() {
        let g = cycle(4);
        assert_eq!(g.codegree(0, 2), 2);
        assert_eq!(g.codegree(0, 1), 0);
    }
}
