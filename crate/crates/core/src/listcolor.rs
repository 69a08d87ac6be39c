//! List coloring: validation, a budgeted DSATUR backtracking search shared by
//! the sparse completion and the direct solver, and an exhaustive reference.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng as _;

use crate::dense::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{rng, Rng};
use crate::{Color, Vertex};

/// Whether `coloring` is proper and picks every color from its list.
pub fn validate_coloring(g: &Graph, lists: &[Vec<Color>], coloring: &[Color]) -> bool {
    coloring.len() == g.n()
        && lists.len() == g.n()
        && (0..g.n()).all(|v| lists[v].contains(&coloring[v]))
        && g.edges().all(|(u, v)| coloring[u] != coloring[v])
}

/// First violation of a coloring, for diagnostics.
pub fn first_violation(g: &Graph, lists: &[Vec<Color>], coloring: &[Color]) -> Option<(Vertex, Option<Vertex>)> {
    if let Some(v) = (0..g.n()).find(|&v| !lists[v].contains(&coloring[v])) {
        return Some((v, None));
    }
    g.edges().find(|&(u, v)| coloring[u] == coloring[v]).map(|(u, v)| (u, Some(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SearchStrategy {
    /// One DSATUR pass, no backtracking.
    Greedy,
    /// DSATUR backtracking with forward checking, node budget per component.
    Backtrack,
    /// Backtracking repeated under random tie-breaking permutations.
    Restart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    /// Nodes per component per attempt.
    pub budget: u64,
    /// Extra randomized attempts for [`SearchStrategy::Restart`].
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { strategy: SearchStrategy::Restart, budget: 1_000_000, restarts: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A color per vertex of the instance.
    Colored(Vec<Color>),
    /// Exhaustive search proved no coloring exists.
    Unsatisfiable { dead_end: Vertex },
    /// Budget ran out or the greedy pass hit a dead end.
    Inconclusive { dead_end: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Colors the subgraph of `g` induced by `vertices` from `lists`
/// (indexed by vertex of `g`). The coloring is returned in `vertices` order.
pub fn color_subgraph(
    g: &Graph,
    vertices: &[Vertex],
    lists: &[Vec<Color>],
    config: &SearchConfig,
    seed: u64,
) -> SearchReport {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let adj: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|&w| local[w]).filter(|&w| w != usize::MAX).collect())
        .collect();
    let local_lists: Vec<Vec<Color>> = vertices
        .iter()
        .map(|&v| {
            let mut l = lists[v].clone();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let mut report = solve_local(&adj, &local_lists, config, seed);
    match &mut report.outcome {
        SearchOutcome::Colored(_) => {}
        SearchOutcome::Unsatisfiable { dead_end } | SearchOutcome::Inconclusive { dead_end } => {
            *dead_end = vertices[*dead_end];
        }
    }
    report
}

/// Solves a local instance component by component.
pub(crate) fn solve_local(adj: &[Vec<usize>], lists: &[Vec<Color>], config: &SearchConfig, seed: u64) -> SearchReport {
    let n = adj.len();
    let mut coloring = vec![0; n];
    let mut nodes = 0u64;
    let mut inconclusive = None;
    let mut comp_of = vec![usize::MAX; n];
    let mut comp_index = 0u64;
    for s in 0..n {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let mut comp = vec![s];
        comp_of[s] = s;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = s;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        let comp_seed = crate::seed::mix64(seed, &[comp_index]);
        comp_index += 1;
        let (outcome, used) = solve_component(adj, lists, &comp, config, comp_seed);
        nodes += used;
        match outcome {
            SearchOutcome::Colored(cols) => {
                for (k, &v) in comp.iter().enumerate() {
                    coloring[v] = cols[k];
                }
            }
            SearchOutcome::Unsatisfiable { dead_end } => {
                return SearchReport { outcome: SearchOutcome::Unsatisfiable { dead_end }, nodes };
            }
            SearchOutcome::Inconclusive { dead_end } => {
                inconclusive.get_or_insert(dead_end);
            }
        }
    }
    let outcome = match inconclusive {
        Some(dead_end) => SearchOutcome::Inconclusive { dead_end },
        None => SearchOutcome::Colored(coloring),
    };
    SearchReport { outcome, nodes }
}

/// One connected component; `comp` holds sorted local indices. Returned
/// colors follow `comp` order; dead ends are local indices.
fn solve_component(
    adj: &[Vec<usize>],
    lists: &[Vec<Color>],
    comp: &[usize],
    config: &SearchConfig,
    seed: u64,
) -> (SearchOutcome, u64) {
    if let Some(&v) = comp.iter().find(|&&v| lists[v].is_empty()) {
        return (SearchOutcome::Unsatisfiable { dead_end: v }, 0);
    }
    let k = comp.len();
    let is_clique = comp.iter().all(|&v| adj[v].iter().filter(|w| comp.binary_search(w).is_ok()).count() == k - 1);
    if is_clique {
        return clique_by_matching(lists, comp);
    }
    let mut pos = vec![usize::MAX; adj.len()];
    for (i, &v) in comp.iter().enumerate() {
        pos[v] = i;
    }
    let sub_adj: Vec<Vec<usize>> = comp.iter().map(|&v| adj[v].iter().map(|&w| pos[w]).collect()).collect();
    let sub_lists: Vec<Vec<Color>> = comp.iter().map(|&v| lists[v].clone()).collect();

    let attempts = match config.strategy {
        SearchStrategy::Restart => 1 + config.restarts,
        _ => 1,
    };
    let greedy = config.strategy == SearchStrategy::Greedy;
    let mut rng = rng(seed);
    let mut nodes = 0;
    let mut first_dead_end = None;
    for attempt in 0..attempts {
        let tie: Vec<u64> = if attempt == 0 { (0..k as u64).collect() } else { (0..k).map(|_| rng.gen()).collect() };
        let mut engine = Engine::new(&sub_adj, &sub_lists, tie, config.budget, greedy, attempt > 0);
        let step = engine.run(&mut rng);
        nodes += engine.nodes;
        let dead = engine.first_dead_end.map(|i| comp[i]);
        first_dead_end = first_dead_end.or(dead);
        match step {
            Step::Found => {
                let cols = engine.color.iter().enumerate().map(|(i, c)| sub_lists[i][c.expect("all colored")]).collect();
                return (SearchOutcome::Colored(cols), nodes);
            }
            Step::Dead if !greedy => {
                return (SearchOutcome::Unsatisfiable { dead_end: first_dead_end.unwrap_or(comp[0]) }, nodes);
            }
            _ => {}
        }
    }
    (SearchOutcome::Inconclusive { dead_end: first_dead_end.unwrap_or(comp[0]) }, nodes)
}

/// A clique is list colorable iff vertices match injectively into colors.
fn clique_by_matching(lists: &[Vec<Color>], comp: &[usize]) -> (SearchOutcome, u64) {
    let mut colors: Vec<Color> = comp.iter().flat_map(|&v| lists[v].iter().copied()).collect();
    colors.sort_unstable();
    colors.dedup();
    let adj = comp
        .iter()
        .map(|&v| lists[v].iter().map(|c| colors.binary_search(c).expect("color collected")).collect())
        .collect();
    let b = Bigraph::new(colors.len(), adj).expect("indices in range");
    let m = b.max_matching();
    if m.is_u_perfect() {
        let cols = m.mate.iter().map(|z| colors[z.expect("perfect")]).collect();
        (SearchOutcome::Colored(cols), comp.len() as u64)
    } else {
        let hall = b.hall_check_with(crate::dense::bigraph::HallMode::Matching).expect("matching mode");
        let dead = hall.witness.first().map_or(comp[0], |&i| comp[i]);
        (SearchOutcome::Unsatisfiable { dead_end: dead }, comp.len() as u64)
    }
}

enum Step {
    Found,
    Dead,
    Budget,
}

struct Engine<'a> {
    adj: &'a [Vec<usize>],
    lists: &'a [Vec<Color>],
    blocked: Vec<Vec<u32>>,
    avail: Vec<usize>,
    color: Vec<Option<usize>>,
    uncolored: usize,
    tie: Vec<u64>,
    nodes: u64,
    budget: u64,
    greedy: bool,
    shuffle_colors: bool,
    first_dead_end: Option<usize>,
}

impl<'a> Engine<'a> {
    fn new(adj: &'a [Vec<usize>], lists: &'a [Vec<Color>], tie: Vec<u64>, budget: u64, greedy: bool, shuffle_colors: bool) -> Self {
        let n = adj.len();
        Engine {
            adj,
            lists,
            blocked: lists.iter().map(|l| vec![0; l.len()]).collect(),
            avail: lists.iter().map(Vec::len).collect(),
            color: vec![None; n],
            uncolored: n,
            tie,
            nodes: 0,
            budget,
            greedy,
            shuffle_colors,
            first_dead_end: None,
        }
    }

    fn run(&mut self, rng: &mut Rng) -> Step {
        self.dfs(rng)
    }

    /// Fewest available colors, then most uncolored neighbors, then tie key.
    fn select(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, u64, usize)> = None;
        for v in 0..self.adj.len() {
            if self.color[v].is_some() {
                continue;
            }
            let free_deg = self.adj[v].iter().filter(|&&w| self.color[w].is_none()).count();
            let key = (self.avail[v], usize::MAX - free_deg, self.tie[v], v);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        best.map(|b| b.3)
    }

    fn candidates(&self, v: usize, rng: &mut Rng) -> Vec<usize> {
        let mut c: Vec<(usize, u64, usize)> = (0..self.lists[v].len())
            .filter(|&i| self.blocked[v][i] == 0)
            .map(|i| {
                let col = self.lists[v][i];
                let impact = self.adj[v]
                    .iter()
                    .filter(|&&w| self.color[w].is_none())
                    .filter(|&&w| self.lists[w].binary_search(&col).is_ok_and(|j| self.blocked[w][j] == 0))
                    .count();
                let key = if self.shuffle_colors { rng.gen() } else { 0 };
                (impact, key, i)
            })
            .collect();
        c.sort_unstable();
        c.into_iter().map(|x| x.2).collect()
    }

    /// Assigns and forward-checks; returns touched neighbors and whether
    /// some neighbor lost its last color.
    fn assign(&mut self, v: usize, idx: usize) -> (Vec<(usize, usize)>, Option<usize>) {
        self.color[v] = Some(idx);
        self.uncolored -= 1;
        let col = self.lists[v][idx];
        let mut touched = Vec::new();
        let mut wiped = None;
        for &w in &self.adj[v] {
            if self.color[w].is_some() {
                continue;
            }
            if let Ok(j) = self.lists[w].binary_search(&col) {
                self.blocked[w][j] += 1;
                if self.blocked[w][j] == 1 {
                    self.avail[w] -= 1;
                    if self.avail[w] == 0 && wiped.is_none() {
                        wiped = Some(w);
                    }
                }
                touched.push((w, j));
            }
        }
        (touched, wiped)
    }

    fn unassign(&mut self, v: usize, touched: &[(usize, usize)]) {
        self.color[v] = None;
        self.uncolored += 1;
        for &(w, j) in touched {
            self.blocked[w][j] -= 1;
            if self.blocked[w][j] == 0 {
                self.avail[w] += 1;
            }
        }
    }

    fn dfs(&mut self, rng: &mut Rng) -> Step {
        let Some(v) = self.select() else { return Step::Found };
        if self.avail[v] == 0 {
            self.first_dead_end.get_or_insert(v);
            return Step::Dead;
        }
        let cands = self.candidates(v, rng);
        if self.greedy {
            // first wipe-out free color, else the first one
            for (k, &idx) in cands.iter().enumerate() {
                self.nodes += 1;
                let (touched, wiped) = self.assign(v, idx);
                if wiped.is_none() || k + 1 == cands.len() {
                    return self.dfs(rng);
                }
                self.unassign(v, &touched);
            }
            unreachable!("candidates are nonempty");
        }
        for idx in cands {
            if self.nodes >= self.budget {
                return Step::Budget;
            }
            self.nodes += 1;
            let (touched, wiped) = self.assign(v, idx);
            match wiped {
                Some(w) => {
                    self.first_dead_end.get_or_insert(w);
                }
                None => match self.dfs(rng) {
                    Step::Dead => {}
                    other => return other,
                },
            }
            self.unassign(v, &touched);
        }
        Step::Dead
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Success(Vec<Color>),
    ProvenUnsat,
    Inconclusive,
}

/// Direct list-coloring solver on the whole graph.
pub fn solve_direct(g: &Graph, lists: &[Vec<Color>], config: &SearchConfig, seed: u64) -> (SolveOutcome, u64) {
    let all: Vec<Vertex> = (0..g.n()).collect();
    let report = color_subgraph(g, &all, lists, config, seed);
    let outcome = match report.outcome {
        SearchOutcome::Colored(c) => SolveOutcome::Success(c),
        SearchOutcome::Unsatisfiable { .. } => SolveOutcome::ProvenUnsat,
        SearchOutcome::Inconclusive { .. } => SolveOutcome::Inconclusive,
    };
    (outcome, report.nodes)
}

/// Plain exhaustive search in vertex order; a reference for small instances.
pub fn exact_list_colorable(g: &Graph, lists: &[Vec<Color>]) -> Result<Option<Vec<Color>>> {
    let product = lists.iter().try_fold(1f64, |acc, l| Some(acc * l.len() as f64)).unwrap_or(f64::INFINITY);
    if product > 1e8 && g.n() > 40 {
        return Err(Error::TooLarge(alloc::format!("search space {product:e} on {} vertices", g.n())));
    }
    let mut coloring = vec![0; g.n()];
    fn go(g: &Graph, lists: &[Vec<Color>], v: usize, coloring: &mut [Color]) -> bool {
        if v == g.n() {
            return true;
        }
        for &c in &lists[v] {
            if g.neighbors(v).iter().all(|&w| w > v || coloring[w] != c) {
                coloring[v] = c;
                if go(g, lists, v + 1, coloring) {
                    return true;
                }
            }
        }
        false
    }
    Ok(go(g, lists, 0, &mut coloring).then_some(coloring))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn validation() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let lists = vec![vec![0, 1], vec![0, 1]];
        assert!(validate_coloring(&g, &lists, &[0, 1]));
        assert!(!validate_coloring(&g, &lists, &[0, 0]));
        assert!(!validate_coloring(&g, &lists, &[0, 2]));
    }

    #[test]
    fn odd_cycle_two_lists_unsat() {
        let g = cycle(5);
        let lists = vec![vec![0, 1]; 5];
        let (out, _) = solve_direct(&g, &lists, &SearchConfig::default(), 1);
        assert_eq!(out, SolveOutcome::ProvenUnsat);
        assert_eq!(exact_list_colorable(&g, &lists).unwrap(), None);
    }

    #[test]
    fn even_cycle_two_lists() {
        let g = cycle(6);
        let lists = vec![vec![0, 1]; 6];
        let (out, _) = solve_direct(&g, &lists, &SearchConfig::default(), 1);
        let SolveOutcome::Success(c) = out else { panic!("{out:?}") };
        assert!(validate_coloring(&g, &lists, &c));
    }

    #[test]
    fn clique_uses_matching() {
        let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let g = Graph::from_edges(4, &edges).unwrap();
        let lists = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let (out, _) = solve_direct(&g, &lists, &SearchConfig::default(), 0);
        let SolveOutcome::Success(c) = out else { panic!() };
        assert!(validate_coloring(&g, &lists, &c));
        let bad = vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![2, 3]];
        assert_eq!(solve_direct(&g, &bad, &SearchConfig::default(), 0).0, SolveOutcome::ProvenUnsat);
    }

    #[test]
    fn greedy_reports_dead_end() {
        let g = cycle(5);
        let lists = vec![vec![0, 1]; 5];
        let cfg = SearchConfig { strategy: SearchStrategy::Greedy, ..SearchConfig::default() };
        let all: Vec<_> = (0..5).collect();
        let r = color_subgraph(&g, &all, &lists, &cfg, 0);
        assert!(matches!(r.outcome, SearchOutcome::Inconclusive { .. }));
    }

    #[test]
    fn exact_refuses_huge() {
        let g = Graph::empty(50);
        let lists = vec![vec![0, 1, 2]; 50];
        assert!(exact_list_colorable(&g, &lists).is_err());
    }
}
