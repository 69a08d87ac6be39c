use num_rational::Ratio;
use rand::Rng;
use sparsecolor_core::generators::gen_random_regular;
use sparsecolor_core::palette::{make_palette, PaletteMode};
use sparsecolor_core::seed::rng;
use sparsecolor_core::sparse::{
    color_degree_s, retained_set, tentative_assign, two_step_assign_with, zeta_hat, TentativeAssignment,
};
use sparsecolor_core::{Graph, PaletteSystem};
use sparsecolor_oracles as oracle;

type Q = Ratio<i128>;

fn tiny_instance(seed: u64) -> (Graph, PaletteSystem) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, &edges).unwrap();
    let d = (g.observed_max_degree() + r.gen_range(0..=1)).clamp(1, 3).max(g.observed_max_degree());
    let g = g.with_degree_bound(d).unwrap();
    let mode = [PaletteMode::Identical, PaletteMode::Windows, PaletteMode::RandomWide][r.gen_range(0..3)];
    let gamma = d + 1 + r.gen_range(0..=2);
    let p = make_palette(&g, mode, gamma, seed).unwrap();
    (g, p)
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// `P(v ∈ T)` from the crate's own retained-set and color-degree code.
fn exact_via_crate(g: &Graph, p: &PaletteSystem, v: usize) -> Q {
    let d = p.d as i128;
    let zh = Q::new(d, d + 1);
    let weight = p.lists.iter().fold(Q::from_integer(1), |acc, s| acc * Q::new(1, s.len() as i128));
    let mut total = Q::from_integer(0);
    oracle::for_each_product(&p.lists, |tau| {
        let ta = TentativeAssignment { tau: tau.to_vec(), xi: vec![true; g.n()], seed: 0 };
        if retained_set(g, &ta).contains(v) {
            let e = p.d - color_degree_s(g, p, v, tau[v]);
            total += weight * (0..e).fold(Q::from_integer(1), |acc, _| acc * zh);
        }
    });
    total
}

#[test]
fn exact_retention_law_on_tiny_graphs() {
    for seed in 0..120 {
        let (g, p) = tiny_instance(seed);
        let d = p.d as i128;
        let target = (0..p.d).fold(Q::from_integer(1), |acc, _| acc * Q::new(d, d + 1));
        for v in 0..g.n() {
            assert_eq!(exact_via_crate(&g, &p, v), target, "seed {seed} vertex {v}");
            assert_eq!(oracle::retention_probability(&adjacency(&g), &p.lists, p.d, v), target);
        }
    }
}

#[test]
fn isolated_vertex_retention() {
    let g = Graph::empty(1).with_degree_bound(3).unwrap();
    let p = make_palette(&g, PaletteMode::Identical, 4, 0).unwrap();
    assert_eq!(exact_via_crate(&g, &p, 0), Q::new(27, 64));
}

#[test]
fn two_step_exact_law() {
    for seed in 0..15 {
        let (g, p) = tiny_instance(1000 + seed);
        if g.n() > 4 || p.d < 2 {
            continue;
        }
        let d = p.d as i128;
        let target = (0..p.d).fold(Q::from_integer(1), |acc, _| acc * Q::new(d, d + 1));
        for v in 0..g.n() {
            assert_eq!(oracle::two_step_retention_probability(&adjacency(&g), &p.lists, p.d, 2, v), target);
        }
    }
}

#[test]
fn monte_carlo_retention_and_two_step() {
    let g = gen_random_regular(12, 3, 5).unwrap();
    let p = make_palette(&g, PaletteMode::RandomWide, 7, 2).unwrap();
    let target = zeta_hat(3).powi(3);
    let trials = 20_000u64;
    let (mut one, mut two) = (0u64, 0u64);
    for t in 0..trials {
        one += retained_set(&g, &tentative_assign(&g, &p, t)).contains(0) as u64;
        let (ta, _) = two_step_assign_with(&g, &p, 2, t).unwrap();
        two += retained_set(&g, &ta).contains(0) as u64;
    }
    let se = (target * (1.0 - target) / trials as f64).sqrt();
    for hits in [one, two] {
        let est = hits as f64 / trials as f64;
        assert!((est - target).abs() < 4.0 * se, "estimate {est} vs {target}");
    }
}

#[test]
fn two_step_tau_is_uniform_on_base_list() {
    let g = Graph::empty(1).with_degree_bound(4).unwrap();
    let p = make_palette(&g, PaletteMode::Identical, 5, 0).unwrap();
    let mut counts = [0u64; 5];
    let trials = 100_000u64;
    for t in 0..trials {
        let (ta, l0) = two_step_assign_with(&g, &p, 2, t).unwrap();
        assert!(l0.contains(0, ta.tau[0]));
        counts[ta.tau[0]] += 1;
    }
    let expected = trials as f64 / 5.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 4 degrees of freedom, 99.9% quantile 18.47
    assert!(chi2 < 18.47, "chi-square {chi2}");
}

#[test]
fn degenerate_two_step_matches_tentative_law() {
    let g = gen_random_regular(10, 3, 1).unwrap();
    let p = make_palette(&g, PaletteMode::RandomWide, 6, 1).unwrap();
    let trials = 20_000u64;
    let mut a = 0u64;
    let mut b = 0u64;
    for t in 0..trials {
        a += (tentative_assign(&g, &p, t).tau[0] == p.lists[0][0]) as u64;
        let (ta, _) = two_step_assign_with(&g, &p, 4, t).unwrap();
        b += (ta.tau[0] == p.lists[0][0]) as u64;
    }
    let se = (0.25f64 * 0.75 / trials as f64).sqrt();
    assert!((a as f64 / trials as f64 - 0.25).abs() < 4.0 * se);
    assert!((b as f64 / trials as f64 - 0.25).abs() < 4.0 * se);
}
