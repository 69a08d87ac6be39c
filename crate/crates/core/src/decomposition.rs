//! Sparse/dense partition `V = V* ∪ C_1 ∪ … ∪ C_m` and its audit.
//!
//! Clusters must have size in `[(1-ε)D, (1+6ε)D]`, and each member must have
//! fewer than `7εD` neighbors outside its cluster and fewer than `6εD`
//! non-neighbors inside it. Vertices of `V*` should have more than `εD`
//! neighbors with codegree below `(1-ε)D`, which forces more than
//! `(ε²/2)D²` non-edges in their neighborhoods.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::Vertex;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decomposition {
    /// `V*`, sorted.
    pub sparse: Vec<Vertex>,
    /// Disjoint clusters, each sorted, ordered by smallest member.
    pub clusters: Vec<Vec<Vertex>>,
    pub eps: f64,
    pub d: usize,
}

impl Decomposition {
    /// Cluster index per vertex, `None` for `V*`.
    pub fn cluster_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                owner[v] = Some(i);
            }
        }
        owner
    }

    pub fn in_sparse(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.sparse {
            mask[v] = true;
        }
        mask
    }
}

/// Per-vertex record for a member of `V*`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseVertexAudit {
    pub vertex: Vertex,
    /// `|{w ∼ v : codeg(v, w) < (1-ε)D}|`.
    pub low_codegree_neighbors: usize,
    /// `|Ḡ[N_v]|`.
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterAudit {
    pub size: usize,
    /// `max_v |N_v \ C|`.
    pub worst_external: usize,
    /// `max_v |C \ N[v]|`.
    pub worst_internal_nondegree: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionAudit {
    pub eps: f64,
    pub d: usize,
    pub sparse: Vec<SparseVertexAudit>,
    pub clusters: Vec<ClusterAudit>,
    pub pass_a: bool,
    pub pass_size: bool,
    pub pass_degrees: bool,
    pub pass_witness: bool,
}

impl DecompositionAudit {
    /// Margin of condition (a) at a sparse vertex; positive means pass.
    pub fn margin_a(&self, rec: &SparseVertexAudit) -> f64 {
        rec.low_codegree_neighbors as f64 - self.eps * self.d as f64
    }

    /// Margin of the non-edge witness; positive means pass.
    pub fn margin_witness(&self, rec: &SparseVertexAudit) -> f64 {
        let d = self.d as f64;
        rec.witness as f64 - self.eps * self.eps * d * d / 2.0
    }

    pub fn size_ok(&self, c: &ClusterAudit) -> bool {
        let d = self.d as f64;
        let size = c.size as f64;
        (1.0 - self.eps) * d <= size && size <= (1.0 + 6.0 * self.eps) * d
    }

    pub fn degrees_ok(&self, c: &ClusterAudit) -> bool {
        let d = self.d as f64;
        (c.worst_external as f64) < 7.0 * self.eps * d
            && (c.worst_internal_nondegree as f64) < 6.0 * self.eps * d
    }

    /// Flags recomputed from the stored records.
    pub fn recompute_flags(&self) -> [bool; 4] {
        [
            self.sparse.iter().all(|r| self.margin_a(r) > 0.0),
            self.clusters.iter().all(|c| self.size_ok(c)),
            self.clusters.iter().all(|c| self.degrees_ok(c)),
            self.sparse.iter().all(|r| self.margin_witness(r) > 0.0),
        ]
    }

    pub fn passes(&self) -> bool {
        self.pass_a && self.pass_size && self.pass_degrees && self.pass_witness
    }

    /// Sparse vertices failing condition (a).
    pub fn failing_a(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.sparse.iter().filter(|r| self.margin_a(r) <= 0.0).map(|r| r.vertex)
    }
}

/// `|Ḡ[N_v]|`.
pub fn sparsity_witness(g: &Graph, v: Vertex) -> usize {
    g.nonedge_count(g.neighbors(v))
}

/// Codegree threshold used to call adjacent vertices friends, and friend
/// count needed for a vertex to seed a cluster: `(1-ε)D`, relaxed to `D-3`
/// when `εD < 3` so that `K_{D+1}` minus a matching still qualifies at small
/// `D`.
pub fn friendship_threshold(d: usize, eps: f64) -> f64 {
    let d = d as f64;
    let strict = (1.0 - eps) * d;
    if strict > d - 3.0 { d - 3.0 } else { strict }
}

/// Partitions a `D`-regular graph into `V*` and clusters.
///
/// Clusters are the connected components of the friendship relation among
/// vertices with enough friends; components that fail the size or degree
/// audit are dissolved into `V*`. The returned audit may still report
/// condition (a) failures at dissolved vertices.
pub fn decompose(g: &Graph, eps: f64) -> Result<(Decomposition, DecompositionAudit)> {
    let d = g.degree_bound();
    if !g.is_regular(d) {
        return Err(Error::Parameter(alloc::format!("decomposition needs a {d}-regular graph")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(alloc::format!("eps must lie in (0, 1), got {eps}")));
    }
    let n = g.n();
    let threshold = friendship_threshold(d, eps);
    let friends: Vec<Vec<Vertex>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| g.codegree(v, w) as f64 >= threshold)
                .collect()
        })
        .collect();
    let candidate: Vec<bool> = friends.iter().map(|f| f.len() as f64 >= threshold).collect();

    let mut uf = UnionFind::new(n);
    for v in (0..n).filter(|&v| candidate[v]) {
        for &w in friends[v].iter().filter(|&&w| candidate[w]) {
            uf.union(v, w);
        }
    }
    let mut groups: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| candidate[v]) {
        groups[uf.find(v)].push(v);
    }
    let mut clusters: Vec<Vec<Vertex>> = groups.into_iter().filter(|c| !c.is_empty()).collect();
    clusters.sort_by_key(|c| c[0]);

    let mut dec = Decomposition { sparse: Vec::new(), clusters, eps, d };
    loop {
        dec.sparse = sparse_complement(n, &dec.clusters);
        let audit = verify_decomposition(g, &dec, eps)?;
        let keep: Vec<bool> = audit.clusters.iter().map(|c| audit.size_ok(c) && audit.degrees_ok(c)).collect();
        if keep.iter().all(|&k| k) {
            return Ok((dec, audit));
        }
        let mut k = keep.into_iter();
        dec.clusters.retain(|_| k.next().unwrap_or(true));
    }
}

fn sparse_complement(n: usize, clusters: &[Vec<Vertex>]) -> Vec<Vertex> {
    let mut in_cluster = vec![false; n];
    for &v in clusters.iter().flatten() {
        in_cluster[v] = true;
    }
    (0..n).filter(|&v| !in_cluster[v]).collect()
}

/// Recomputes every audit quantity for `dec`. Fails only if `dec` is not a
/// partition of `V(G)`.
pub fn verify_decomposition(g: &Graph, dec: &Decomposition, eps: f64) -> Result<DecompositionAudit> {
    let n = g.n();
    let d = g.degree_bound();
    let mut seen = vec![0usize; n];
    let mut out_of_range = Vec::new();
    for &v in dec.sparse.iter().chain(dec.clusters.iter().flatten()) {
        if v < n {
            seen[v] += 1;
        } else {
            out_of_range.push(v);
        }
    }
    let mut duplicated: Vec<Vertex> = (0..n).filter(|&v| seen[v] > 1).collect();
    duplicated.extend(out_of_range);
    let missing: Vec<Vertex> = (0..n).filter(|&v| seen[v] == 0).collect();
    if !duplicated.is_empty() || !missing.is_empty() {
        return Err(Error::NotPartition { duplicated, missing });
    }

    let strict = (1.0 - eps) * d as f64;
    let sparse: Vec<SparseVertexAudit> = dec
        .sparse
        .iter()
        .map(|&v| SparseVertexAudit {
            vertex: v,
            low_codegree_neighbors: g.neighbors(v).iter().filter(|&&w| (g.codegree(v, w) as f64) < strict).count(),
            witness: sparsity_witness(g, v),
        })
        .collect();

    let owner = dec.cluster_of(n);
    let clusters: Vec<ClusterAudit> = dec
        .clusters
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut worst_external = 0;
            let mut worst_internal = 0;
            for &v in c {
                let inside = g.neighbors(v).iter().filter(|&&w| owner[w] == Some(i)).count();
                worst_external = worst_external.max(g.degree(v) - inside);
                worst_internal = worst_internal.max(c.len() - 1 - inside);
            }
            ClusterAudit { size: c.len(), worst_external, worst_internal_nondegree: worst_internal }
        })
        .collect();

    let mut audit = DecompositionAudit {
        eps,
        d,
        sparse,
        clusters,
        pass_a: false,
        pass_size: false,
        pass_degrees: false,
        pass_witness: false,
    };
    let [a, size, degrees, witness] = audit.recompute_flags();
    audit.pass_a = a;
    audit.pass_size = size;
    audit.pass_degrees = degrees;
    audit.pass_witness = witness;
    Ok(audit)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
