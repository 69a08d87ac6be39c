//! Bipartite graphs `B` on `U ∪ Z`: maximum matchings, switching, nested
//! canonical forms and Hall deficiency.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Bipartite graph with sides `U = 0..nu` and `Z = 0..nz`, stored as sorted
/// `U`-side neighborhoods. `t` optionally carries per-`U` sample sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bigraph {
    nz: usize,
    adj: Vec<Vec<usize>>,
    pub t: Option<Vec<usize>>,
}

/// A matching as the `Z`-mate of every `U` vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_u_perfect(&self) -> bool {
        self.mate.iter().all(Option::is_some)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate.iter().enumerate().filter_map(|(u, m)| m.map(|z| (u, z)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HallMode {
    /// Enumerate all `Q ⊆ U`; needs `|U| ≤ 22`.
    Exhaustive,
    /// König: deficiency from a maximum matching, witness from alternating
    /// reachability.
    Matching,
}

/// `min_{Q ⊆ U} |N(Q)| - |Q|` (never positive, `Q = ∅` gives 0) with an
/// argmin witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallReport {
    pub deficiency: isize,
    pub witness: Vec<usize>,
}

impl HallReport {
    pub fn has_u_perfect_matching(&self) -> bool {
        self.deficiency >= 0
    }

    /// Relaxed Hall condition `|N(Q)| ≥ |Q| - r` for all `Q`.
    pub fn holds_with_slack(&self, r: usize) -> bool {
        self.deficiency >= -(r as isize)
    }
}

pub const EXHAUSTIVE_HALL_LIMIT: usize = 22;

impl Bigraph {
    pub fn new(nz: usize, mut adj: Vec<Vec<usize>>) -> Result<Self> {
        for (u, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            if let Some(&z) = nb.iter().find(|&&z| z >= nz) {
                return Err(Error::Parameter(alloc::format!("U-vertex {u} has neighbor {z} outside Z = 0..{nz}")));
            }
        }
        Ok(Bigraph { nz, adj, t: None })
    }

    /// Attaches sample sizes, checking `t_v ≤ d(v)`.
    pub fn with_sample_sizes(mut self, t: Vec<usize>) -> Result<Self> {
        if t.len() != self.nu() {
            return Err(Error::Parameter("one sample size per U-vertex".into()));
        }
        if let Some(u) = (0..self.nu()).find(|&u| t[u] > self.degree(u)) {
            return Err(Error::Parameter(alloc::format!("sample size {} exceeds degree {} at {u}", t[u], self.degree(u))));
        }
        self.t = Some(t);
        Ok(self)
    }

    pub fn complete(nu: usize, nz: usize) -> Self {
        Bigraph { nz, adj: vec![(0..nz).collect(); nu], t: None }
    }

    pub fn nu(&self) -> usize {
        self.adj.len()
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, z: usize) -> bool {
        self.adj[u].binary_search(&z).is_ok()
    }

    /// `N_B(z)`, sorted.
    pub fn z_neighborhood(&self, z: usize) -> Vec<usize> {
        (0..self.nu()).filter(|&u| self.has_edge(u, z)).collect()
    }

    pub fn z_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nz];
        for &z in self.adj.iter().flatten() {
            deg[z] += 1;
        }
        deg
    }

    /// Switching `(β, γ)`: `N(β) ← N(β) ∪ N(γ)` and `N(γ) ← N(β) ∩ N(γ)`.
    /// Preserves `|E|` and every `U`-degree.
    pub fn switch(&self, beta: usize, gamma: usize) -> Result<Bigraph> {
        if beta == gamma || beta >= self.nz || gamma >= self.nz {
            return Err(Error::Parameter(alloc::format!("switch needs distinct Z-vertices, got ({beta}, {gamma})")));
        }
        let adj = self
            .adj
            .iter()
            .map(|nb| {
                let in_b = nb.binary_search(&beta).is_ok();
                let in_g = nb.binary_search(&gamma).is_ok();
                if in_g && !in_b {
                    let mut nb = nb.clone();
                    nb.retain(|&z| z != gamma);
                    let pos = nb.binary_search(&beta).unwrap_err();
                    nb.insert(pos, beta);
                    nb
                } else {
                    nb.clone()
                }
            })
            .collect();
        Ok(Bigraph { nz: self.nz, adj, t: self.t.clone() })
    }

    /// Whether the `Z`-neighborhoods form a chain under inclusion.
    pub fn is_nested(&self) -> bool {
        let hoods: Vec<Vec<usize>> = (0..self.nz).map(|z| self.z_neighborhood(z)).collect();
        hoods.iter().all(|a| {
            hoods.iter().all(|b| is_subset(a, b) || is_subset(b, a))
        })
    }

    /// Hopcroft–Karp maximum matching.
    pub fn max_matching(&self) -> Matching {
        self.max_matching_from(Matching { mate: vec![None; self.nu()] })
    }

    /// Maximum matching grown from `initial` by augmenting paths. Every
    /// `Z`-vertex covered by `initial` stays covered.
    pub fn max_matching_from(&self, initial: Matching) -> Matching {
        let nu = self.nu();
        let mut mate_u = initial.mate;
        debug_assert_eq!(mate_u.len(), nu);
        let mut mate_z: Vec<Option<usize>> = vec![None; self.nz];
        for (u, m) in mate_u.iter().enumerate() {
            if let Some(z) = *m {
                debug_assert!(self.has_edge(u, z) && mate_z[z].is_none());
                mate_z[z] = Some(u);
            }
        }
        const INF: usize = usize::MAX;
        let mut dist = vec![INF; nu];
        loop {
            // layered BFS from free U-vertices
            let mut queue = VecDeque::new();
            for u in 0..nu {
                if mate_u[u].is_none() {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = INF;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &z in &self.adj[u] {
                    match mate_z[z] {
                        None => found = true,
                        Some(w) if dist[w] == INF => {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                        Some(_) => {}
                    }
                }
            }
            if !found {
                break;
            }
            let mut augmented = false;
            for u in 0..nu {
                if mate_u[u].is_none() && self.augment(u, &mut dist, &mut mate_u, &mut mate_z) {
                    augmented = true;
                }
            }
            if !augmented {
                break;
            }
        }
        Matching { mate: mate_u }
    }

    fn augment(
        &self,
        u: usize,
        dist: &mut [usize],
        mate_u: &mut [Option<usize>],
        mate_z: &mut [Option<usize>],
    ) -> bool {
        // iterative DFS along the BFS layers
        let mut stack: Vec<(usize, usize)> = vec![(u, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (x, next) = stack[top];
            if next >= self.adj[x].len() {
                dist[x] = usize::MAX;
                stack.pop();
                continue;
            }
            stack[top].1 += 1;
            let z = self.adj[x][next];
            match mate_z[z] {
                None => {
                    for &(y, idx) in &stack {
                        let zz = self.adj[y][idx - 1];
                        mate_u[y] = Some(zz);
                        mate_z[zz] = Some(y);
                    }
                    return true;
                }
                Some(w) if dist[w] == dist[x].wrapping_add(1) => stack.push((w, 0)),
                Some(_) => {}
            }
        }
        false
    }

    /// Hall deficiency, exhaustively for small `U` and via König otherwise.
    pub fn hall_check(&self) -> HallReport {
        if self.nu() <= EXHAUSTIVE_HALL_LIMIT {
            self.hall_check_with(HallMode::Exhaustive).expect("U is small enough")
        } else {
            self.hall_check_with(HallMode::Matching).expect("matching mode has no size limit")
        }
    }

    pub fn hall_check_with(&self, mode: HallMode) -> Result<HallReport> {
        match mode {
            HallMode::Exhaustive => self.hall_exhaustive(),
            HallMode::Matching => Ok(self.hall_konig()),
        }
    }

    fn hall_exhaustive(&self) -> Result<HallReport> {
        let nu = self.nu();
        if nu > EXHAUSTIVE_HALL_LIMIT {
            return Err(Error::TooLarge(alloc::format!("exhaustive Hall check needs |U| <= 22, got {nu}")));
        }
        let words = self.nz.div_ceil(64).max(1);
        let masks: Vec<Vec<u64>> = self
            .adj
            .iter()
            .map(|nb| {
                let mut m = vec![0u64; words];
                for &z in nb {
                    m[z / 64] |= 1 << (z % 64);
                }
                m
            })
            .collect();
        // N(Q) for every Q, built from Q minus its lowest bit
        let total = 1usize << nu;
        let mut hood = vec![0u64; total * words];
        let mut best = (0isize, 0usize);
        for q in 1..total {
            let low = q.trailing_zeros() as usize;
            let rest = q & (q - 1);
            let mut count = 0usize;
            for w in 0..words {
                let word = hood[rest * words + w] | masks[low][w];
                hood[q * words + w] = word;
                count += word.count_ones() as usize;
            }
            let def = count as isize - q.count_ones() as isize;
            if def < best.0 {
                best = (def, q);
            }
        }
        let witness = (0..nu).filter(|&u| best.1 >> u & 1 == 1).collect();
        Ok(HallReport { deficiency: best.0, witness })
    }

    fn hall_konig(&self) -> HallReport {
        let m = self.max_matching();
        let mut mate_z = vec![None; self.nz];
        for (u, z) in m.pairs() {
            mate_z[z] = Some(u);
        }
        // U-vertices reachable from free U-vertices by alternating paths
        let mut seen_u = vec![false; self.nu()];
        let mut seen_z = vec![false; self.nz];
        let mut queue: VecDeque<usize> = (0..self.nu()).filter(|&u| m.mate[u].is_none()).collect();
        for &u in &queue {
            seen_u[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &z in &self.adj[u] {
                if !seen_z[z] {
                    seen_z[z] = true;
                    if let Some(w) = mate_z[z] {
                        if !seen_u[w] {
                            seen_u[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let witness: Vec<usize> = (0..self.nu()).filter(|&u| seen_u[u]).collect();
        HallReport { deficiency: m.size() as isize - self.nu() as isize, witness }
    }

    /// Exact `P(L admits a U-perfect matching)` where `N_L(u)` is uniform
    /// among the `t_u`-subsets of `N_B(u)`, as `(favorable, total)`.
    pub fn exact_matching_probability(&self, t: &[usize]) -> Result<(u64, u64)> {
        if t.len() != self.nu() || (0..self.nu()).any(|u| t[u] > self.degree(u)) {
            return Err(Error::Parameter("need one sample size t_u <= d(u) per U-vertex".into()));
        }
        let choices: Vec<Vec<Vec<usize>>> = (0..self.nu()).map(|u| subsets(&self.adj[u], t[u])).collect();
        let total = choices
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
            .filter(|&tot| tot <= 100_000_000)
            .ok_or_else(|| Error::TooLarge("more than 1e8 list outcomes".into()))?;
        let mut picked: Vec<&[usize]> = Vec::with_capacity(self.nu());
        let mut favorable = 0u64;
        enumerate_choices(&choices, &mut picked, &mut |hoods| {
            let sample = Bigraph { nz: self.nz, adj: hoods.iter().map(|h| h.to_vec()).collect(), t: None };
            if sample.max_matching().is_u_perfect() {
                favorable += 1;
            }
        });
        Ok((favorable, total))
    }
}

fn enumerate_choices<'a, F: FnMut(&[&'a [usize]])>(
    choices: &'a [Vec<Vec<usize>>],
    picked: &mut Vec<&'a [usize]>,
    visit: &mut F,
) {
    if picked.len() == choices.len() {
        visit(picked);
        return;
    }
    for c in &choices[picked.len()] {
        picked.push(c);
        enumerate_choices(choices, picked, visit);
        picked.pop();
    }
}

/// All `k`-subsets of `items`, in lexicographic order of positions.
pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The nested bigraph in which `U`-vertex `v` is adjacent to the first
/// `d_v` vertices of `Z`; it minimizes the perfect-matching probability
/// among bigraphs with these `U`-degrees.
pub fn canonicalize_nested(b: &Bigraph, degrees: &[usize]) -> Result<Bigraph> {
    if degrees.len() != b.nu() {
        return Err(Error::Parameter(alloc::format!("expected {} degrees, got {}", b.nu(), degrees.len())));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d > b.nz()) {
        return Err(Error::Infeasible(alloc::format!("degree {d} exceeds |Z| = {}", b.nz())));
    }
    Ok(Bigraph { nz: b.nz(), adj: degrees.iter().map(|&d| (0..d).collect()).collect(), t: b.t.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bg(nz: usize, adj: &[&[usize]]) -> Bigraph {
        Bigraph::new(nz, adj.iter().map(|a| a.to_vec()).collect()).unwrap()
    }

    #[test]
    fn switch_definition() {
        // N(β = 0) = {1, 2}, N(γ = 1) = {2, 3} on U = 0..4
        let b = bg(2, &[&[], &[0], &[0, 1], &[1]]);
        let s = b.switch(0, 1).unwrap();
        assert_eq!(s.z_neighborhood(0), [1, 2, 3]);
        assert_eq!(s.z_neighborhood(1), [2]);
        assert_eq!(s.edge_count(), b.edge_count());
        assert_eq!(s.degrees(), b.degrees());
        assert!(b.switch(1, 1).is_err());
    }

    #[test]
    fn nested_is_fixed_point() {
        let b = bg(2, &[&[0, 1], &[0], &[0]]);
        assert_eq!(b.switch(0, 1).unwrap(), b);
        assert!(b.is_nested());
    }

    #[test]
    fn matching_examples() {
        let id = bg(3, &[&[0], &[1], &[2]]);
        assert_eq!(id.max_matching().size(), 3);
        let star = bg(1, &[&[0], &[0], &[0]]);
        assert_eq!(star.max_matching().size(), 1);
        let b = bg(3, &[&[0, 1], &[0], &[1, 2]]);
        assert!(b.max_matching().is_u_perfect());
    }

    #[test]
    fn matching_from_keeps_covered_z() {
        let b = bg(3, &[&[0, 1], &[0, 2], &[1]]);
        let init = Matching { mate: vec![Some(0), None, None] };
        let m = b.max_matching_from(init);
        assert!(m.is_u_perfect());
        assert!(m.pairs().any(|(_, z)| z == 0));
    }

    #[test]
    fn hall_examples() {
        let full = Bigraph::complete(3, 4);
        assert_eq!(full.hall_check().deficiency, 0);
        let b = bg(2, &[&[0, 1], &[]]);
        let r = b.hall_check();
        assert_eq!(r.deficiency, -1);
        assert_eq!(r.witness, [1]);
        let k = b.hall_check_with(HallMode::Matching).unwrap();
        assert_eq!(k.deficiency, -1);
        assert!(k.witness.contains(&1));
    }

    #[test]
    fn canonical_examples() {
        let b = Bigraph::complete(2, 2);
        assert_eq!(canonicalize_nested(&b, &[2, 2]).unwrap(), b);
        let c = canonicalize_nested(&b, &[1, 1]).unwrap();
        assert_eq!(c.neighbors(0), [0]);
        assert_eq!(c.neighbors(1), [0]);
        assert!(canonicalize_nested(&b, &[3, 1]).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(&[4, 5, 6], 2), vec![vec![4, 5], vec![4, 6], vec![5, 6]]);
        assert_eq!(subsets(&[4, 5], 0), vec![Vec::<usize>::new()]);
        assert!(subsets(&[4], 2).is_empty());
    }

    #[test]
    fn exact_probability_small() {
        // two U-vertices choosing one of {0, 1} each: matching iff different
        let b = Bigraph::complete(2, 2);
        assert_eq!(b.exact_matching_probability(&[1, 1]).unwrap(), (2, 4));
    }
}
