//! Seeded graph families: disjoint cliques, random regular graphs and
//! hybrids with planted near-cliques.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GraphFamily {
    DisjointCliques,
    RandomRegular,
    Hybrid,
    /// Read from a file by the caller; `generate` refuses it.
    ExplicitFile,
}

/// What to generate. `n` is the total vertex count for the random and
/// hybrid families; cliques use `m` and `d` only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorSpec {
    pub family: GraphFamily,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// For hybrids: when set, overrides `m` with the number of cliques
    /// that covers this fraction of the `n` vertices.
    pub hybrid_mix: Option<f64>,
}

impl GeneratorSpec {
    pub fn cliques(m: usize, d: usize) -> Self {
        GeneratorSpec { family: GraphFamily::DisjointCliques, m, n: m * (d + 1), d, seed: 0, hybrid_mix: None }
    }

    pub fn random_regular(n: usize, d: usize, seed: u64) -> Self {
        GeneratorSpec { family: GraphFamily::RandomRegular, m: 0, n, d, seed, hybrid_mix: None }
    }

    pub fn hybrid(m: usize, s: usize, d: usize, seed: u64) -> Self {
        GeneratorSpec { family: GraphFamily::Hybrid, m, n: m * (d + 1) + s, d, seed, hybrid_mix: None }
    }

    /// Number of planted cliques after applying `hybrid_mix`.
    pub fn clique_count(&self) -> usize {
        match (self.family, self.hybrid_mix) {
            (GraphFamily::Hybrid, Some(f)) => {
                let covered = libm::floor(f.clamp(0.0, 1.0) * self.n as f64) as usize;
                covered / (self.d + 1)
            }
            _ => self.m,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn generate(&self) -> Result<Graph> {
        match self.family {
            GraphFamily::DisjointCliques => gen_disjoint_cliques(self.m, self.d),
            GraphFamily::RandomRegular => gen_random_regular(self.n, self.d, self.seed),
            GraphFamily::Hybrid => {
                let m = self.clique_count();
                let s = self.n.checked_sub(m * (self.d + 1)).ok_or_else(|| {
                    Error::Parameter(alloc::format!("{m} cliques of size {} exceed n = {}", self.d + 1, self.n))
                })?;
                gen_hybrid(m, s, self.d, self.seed)
            }
            GraphFamily::ExplicitFile => {
                Err(Error::Parameter("explicit-file graphs are read, not generated".into()))
            }
        }
    }
}

/// `m` disjoint copies of `K_{D+1}`; clique `i` occupies
/// `i(D+1)..(i+1)(D+1)`.
pub fn gen_disjoint_cliques(m: usize, d: usize) -> Result<Graph> {
    if m == 0 || d == 0 {
        return Err(Error::Parameter("disjoint cliques need m >= 1 and D >= 1".into()));
    }
    let mut g = Graph::empty(m * (d + 1));
    for c in 0..m {
        let base = c * (d + 1);
        for u in base..base + d + 1 {
            for v in u + 1..base + d + 1 {
                g.insert_edge(u, v);
            }
        }
    }
    g.set_degree_bound_unchecked(d);
    Ok(g)
}

/// Uniform-ish simple `D`-regular graph: configuration-model pairing, then
/// local edge swaps to remove loops and repeated edges.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if (n * d) % 2 == 1 {
        return Err(Error::Parity { n, d });
    }
    if d >= n && !(n == 0 || d == 0) {
        return Err(Error::Parameter(alloc::format!("degree {d} must be below n = {n}")));
    }
    let stubs: Vec<Vertex> = (0..n).flat_map(|v| core::iter::repeat(v).take(d)).collect();
    let mut rng = seed::rng(seed);
    let g = pair_stubs(Graph::empty(n), stubs, |_, _| true, &mut rng, 100 * n * d.max(1))?;
    Ok(finish(g, d))
}

/// `m` planted near-cliques plus `s` sparse vertices, all of degree `D`.
///
/// Each cluster is `K_{D+1}` minus a random matching on `2⌊(D+1)/2⌋` of its
/// vertices; every matched vertex gets one external edge, into the sparse
/// part when `s > 0` and into another cluster otherwise. The sparse part is a
/// configuration-model `D`-regular graph on the remaining stubs.
pub fn gen_hybrid(m: usize, s: usize, d: usize, seed: u64) -> Result<Graph> {
    if m == 0 {
        return gen_random_regular(s, d, seed);
    }
    if d == 0 {
        return Err(Error::Parameter("hybrid graphs need D >= 1".into()));
    }
    if s != 0 && s <= d {
        return Err(Error::Parameter(alloc::format!("sparse part must be empty or exceed D, got s = {s}")));
    }
    let k = d + 1;
    let n = m * k + s;
    let mut rng = seed::rng(seed);
    let mut g = Graph::empty(n);
    let mut stubs = Vec::new();
    for c in 0..m {
        let base = c * k;
        for u in base..base + k {
            for v in u + 1..base + k {
                g.insert_edge(u, v);
            }
        }
        let mut members: Vec<Vertex> = (base..base + k).collect();
        members.shuffle(&mut rng);
        for pair in members.chunks_exact(2) {
            g.remove_edge(pair[0], pair[1]);
            stubs.extend_from_slice(pair);
        }
    }
    let cluster_stubs = stubs.len();
    if s == 0 && m == 1 && cluster_stubs > 0 {
        return Err(Error::Infeasible("a single cluster with no sparse part has nowhere to send its stubs".into()));
    }
    if s > 0 && (s * d < cluster_stubs || (s * d - cluster_stubs) % 2 == 1) {
        return Err(Error::Infeasible(alloc::format!(
            "sparse part with {s} vertices of degree {d} cannot absorb {cluster_stubs} cluster edges"
        )));
    }
    stubs.extend((m * k..n).flat_map(|v| core::iter::repeat(v).take(d)));
    let cluster_of = |v: Vertex| if v < m * k { Some(v / k) } else { None };
    let allowed = |u: Vertex, v: Vertex| match (cluster_of(u), cluster_of(v)) {
        (Some(a), Some(b)) => s == 0 && a != b,
        _ => true,
    };
    let g = pair_stubs(g, stubs, allowed, &mut rng, 100 * n * d)?;
    if !g.is_regular(d) {
        return Err(Error::Infeasible("degree sequence could not be realized".into()));
    }
    Ok(finish(g, d))
}

fn finish(mut g: Graph, d: usize) -> Graph {
    g.set_degree_bound_unchecked(d);
    debug_assert!(g.check_invariants());
    g
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v { (u, v) } else { (v, u) }
}

/// Random perfect pairing of `stubs` added on top of `base`, then repaired
/// by swaps until every pair is a new, allowed, non-loop edge. A pairing
/// whose repair stalls is redrawn from scratch.
fn pair_stubs<A>(
    base: Graph,
    stubs: Vec<Vertex>,
    allowed: A,
    rng: &mut seed::Rng,
    max_attempts: usize,
) -> Result<Graph>
where
    A: Fn(Vertex, Vertex) -> bool,
{
    if stubs.len() % 2 == 1 {
        return Err(Error::Infeasible("odd number of stubs".into()));
    }
    const ROUNDS: usize = 64;
    let per_round = (max_attempts / ROUNDS).max(1000);
    let mut total = 0;
    for _ in 0..ROUNDS {
        match repair_pairing(&base, stubs.clone(), &allowed, rng, per_round) {
            Ok(pairs) => {
                let mut g = base;
                for (u, v) in pairs {
                    let added = g.insert_edge(u, v);
                    debug_assert!(added);
                }
                return Ok(g);
            }
            Err(used) => total += used,
        }
    }
    Err(Error::Generation { retries: total })
}

/// One shuffled pairing plus swap repair; `Err` carries the attempts spent.
fn repair_pairing<A>(
    base: &Graph,
    mut stubs: Vec<Vertex>,
    allowed: &A,
    rng: &mut seed::Rng,
    max_attempts: usize,
) -> core::result::Result<Vec<(Vertex, Vertex)>, usize>
where
    A: Fn(Vertex, Vertex) -> bool,
{
    stubs.shuffle(rng);
    let mut pairs: Vec<(Vertex, Vertex)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    let mut counts: BTreeMap<(Vertex, Vertex), u32> = BTreeMap::new();
    for &(u, v) in &pairs {
        *counts.entry(key(u, v)).or_insert(0) += 1;
    }
    let is_bad = |u: Vertex, v: Vertex, counts: &BTreeMap<(Vertex, Vertex), u32>| {
        u == v || !allowed(u, v) || base.has_edge(u, v) || counts.get(&key(u, v)).copied().unwrap_or(0) > 1
    };
    let mut bad: Vec<usize> = (0..pairs.len()).filter(|&i| is_bad(pairs[i].0, pairs[i].1, &counts)).collect();
    let mut attempts = 0usize;
    while let Some(&i) = bad.last() {
        let (u, v) = pairs[i];
        if !is_bad(u, v, &counts) {
            bad.pop();
            continue;
        }
        if attempts >= max_attempts {
            return Err(attempts);
        }
        attempts += 1;
        let j = rng.gen_range(0..pairs.len());
        if j == i {
            continue;
        }
        let (mut x, mut y) = pairs[j];
        if rng.gen::<bool>() {
            core::mem::swap(&mut x, &mut y);
        }
        let dec = |c: &mut BTreeMap<(Vertex, Vertex), u32>, a: Vertex, b: Vertex| {
            let e = c.get_mut(&key(a, b)).expect("pair is counted");
            *e -= 1;
            if *e == 0 {
                c.remove(&key(a, b));
            }
        };
        dec(&mut counts, u, v);
        dec(&mut counts, x, y);
        let fresh = |a: Vertex, b: Vertex, c: &BTreeMap<(Vertex, Vertex), u32>| {
            a != b && allowed(a, b) && !base.has_edge(a, b) && !c.contains_key(&key(a, b))
        };
        if key(u, x) != key(v, y) && fresh(u, x, &counts) && fresh(v, y, &counts) {
            pairs[i] = (u, x);
            pairs[j] = (v, y);
            *counts.entry(key(u, x)).or_insert(0) += 1;
            *counts.entry(key(v, y)).or_insert(0) += 1;
            // pair j was possibly bad too; its slot now holds a good pair
        } else {
            *counts.entry(key(u, v)).or_insert(0) += 1;
            *counts.entry(key(x, y)).or_insert(0) += 1;
        }
    }
    Ok(pairs)
}
