use rand::Rng;
use sparsecolor_core::listcolor::{
    exact_list_colorable, solve_direct, validate_coloring, SearchConfig, SearchStrategy, SolveOutcome,
};
use sparsecolor_core::seed::rng;
use sparsecolor_core::Graph;
use sparsecolor_oracles as oracle;

fn random_instance(seed: u64) -> (Graph, Vec<Vec<usize>>) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=9);
    let p = r.gen_range(0.2..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let colors = r.gen_range(2..=5);
    let lists = (0..n)
        .map(|_| {
            let k = r.gen_range(1..=colors.min(3));
            let mut l: Vec<usize> = (0..k).map(|_| r.gen_range(0..colors)).collect();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    (Graph::from_edges(n, &edges).unwrap(), lists)
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

#[test]
fn solvers_agree_with_brute_force() {
    for seed in 0..600 {
        let (g, lists) = random_instance(seed);
        let truth = oracle::brute_list_colorable(&adjacency(&g), &lists);
        let exact = exact_list_colorable(&g, &lists).unwrap();
        assert_eq!(exact.is_some(), truth, "seed {seed}");
        if let Some(c) = exact {
            assert!(validate_coloring(&g, &lists, &c));
        }
        for strategy in [SearchStrategy::Backtrack, SearchStrategy::Restart] {
            let cfg = SearchConfig { strategy, ..SearchConfig::default() };
            match solve_direct(&g, &lists, &cfg, seed).0 {
                SolveOutcome::Success(c) => {
                    assert!(truth);
                    assert!(validate_coloring(&g, &lists, &c));
                }
                SolveOutcome::ProvenUnsat => assert!(!truth, "seed {seed}"),
                SolveOutcome::Inconclusive => panic!("small instances never exhaust the budget"),
            }
        }
        let greedy = SearchConfig { strategy: SearchStrategy::Greedy, ..SearchConfig::default() };
        if let SolveOutcome::Success(c) = solve_direct(&g, &lists, &greedy, seed).0 {
            assert!(validate_coloring(&g, &lists, &c));
        }
    }
}

#[test]
fn triangle_examples() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let good = vec![vec![1, 2], vec![2, 3], vec![1, 3]];
    let SolveOutcome::Success(c) = solve_direct(&g, &good, &SearchConfig::default(), 0).0 else { panic!() };
    assert!(validate_coloring(&g, &good, &c));
    let bad = vec![vec![1, 2]; 3];
    assert_eq!(solve_direct(&g, &bad, &SearchConfig::default(), 0).0, SolveOutcome::ProvenUnsat);
    assert_eq!(exact_list_colorable(&g, &bad).unwrap(), None);
    assert!(exact_list_colorable(&g, &good).unwrap().is_some());
}

#[test]
fn tiny_budget_is_inconclusive_not_wrong() {
    // odd wheel minus hub on two colors needs search to refute
    let n = 9;
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let g = Graph::from_edges(n, &edges).unwrap();
    let lists = vec![vec![0, 1]; n];
    let cfg = SearchConfig { strategy: SearchStrategy::Backtrack, budget: 1, restarts: 0 };
    let out = solve_direct(&g, &lists, &cfg, 0).0;
    assert!(matches!(out, SolveOutcome::Inconclusive | SolveOutcome::ProvenUnsat));
    let full = solve_direct(&g, &lists, &SearchConfig::default(), 0).0;
    assert_eq!(full, SolveOutcome::ProvenUnsat);
}
