use sparsecolor_core::decomposition::decompose;
use sparsecolor_core::generators::{gen_hybrid, gen_random_regular};
use sparsecolor_core::listcolor::SearchConfig;
use sparsecolor_core::palette::{make_palette, sample_lists, PaletteMode, Params};
use sparsecolor_core::sparse::*;
use sparsecolor_core::{Graph, PaletteSystem};

fn brute_fraternal(g: &Graph, p: &PaletteSystem, v: usize) -> usize {
    let mut total = 0;
    for &u in g.neighbors(v) {
        for &w in g.neighbors(v) {
            if u < w && !g.has_edge(u, w) {
                total += (0..p.gamma_size).filter(|&c| p.lists[u].contains(&c) && p.lists[w].contains(&c)).count();
            }
        }
    }
    total
}

#[test]
fn pair_sets_match_recount() {
    let g = gen_random_regular(60, 8, 4).unwrap();
    let p = make_palette(&g, PaletteMode::RandomWide, 20, 9).unwrap();
    for v in 0..g.n() {
        assert_eq!(fraternal_pairs(&g, &p, v).len(), brute_fraternal(&g, &p, v));
        assert!(fraternal_pairs(&g, &p, v).iter().all(|&(u, w, _)| u < w));
        let a: usize = g.neighbors(v).iter().map(|&w| p.lists[w].iter().filter(|c| !p.lists[v].contains(c)).count()).sum();
        assert_eq!(alien_pairs(&g, &p, v).len(), a);
        let vt = Params::default().vartheta();
        let d = p.d as f64;
        let expect = match (
            fraternal_count(&g, &p, v) as f64 >= vt * d.powi(3) / 2.0,
            alien_count(&g, &p, v) as f64 >= vt * d * d / 2.0,
        ) {
            (true, true) => Dichotomy::Both,
            (true, false) => Dichotomy::Fraternal,
            (false, true) => Dichotomy::Alien,
            (false, false) => Dichotomy::Neither,
        };
        assert_eq!(sparse_dichotomy(&g, &p, v, vt), expect);
    }
}

#[test]
fn identical_palettes_are_fraternal_on_sparse_vertices() {
    let g = gen_random_regular(100, 10, 2).unwrap();
    let p = make_palette(&g, PaletteMode::Identical, 11, 0).unwrap();
    let (dec, _) = decompose(&g, 0.1).unwrap();
    let vt = Params::default().vartheta();
    for &v in &dec.sparse {
        assert!(alien_pairs(&g, &p, v).is_empty());
        if g.nonedge_count(g.neighbors(v)) as f64 >= vt * 100.0 {
            assert_eq!(sparse_dichotomy(&g, &p, v, vt), Dichotomy::Fraternal);
        }
    }
}

#[test]
fn slack_bounds_and_proper_retention_over_trials() {
    let g = gen_hybrid(2, 80, 8, 3).unwrap();
    let params = Params::default();
    for (mode, gamma) in [(PaletteMode::Identical, 9), (PaletteMode::RandomWide, 18), (PaletteMode::Windows, 14)] {
        let p = make_palette(&g, mode, gamma, 1).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        let mask = vec![true; g.n()];
        for seed in 0..40 {
            let ta = tentative_assign(&g, &p, seed);
            assert!((0..g.n()).all(|v| p.contains(v, ta.tau[v])));
            let rc = retained_set(&g, &ta);
            assert!(rc.is_proper(&g));
            for &v in &rc.t {
                assert!(ta.xi[v] && g.neighbors(v).iter().all(|&w| ta.tau[w] != ta.tau[v]));
            }
            // diagnose asserts slack >= both realized event counts
            let diag = diagnose(&g, &p, &ta, &rc, &all, &mask, &params);
            assert_eq!(diag.vertices.len(), g.n());
        }
    }
}

#[test]
fn fraternal_event_rate_matches_closed_form() {
    let g = gen_random_regular(40, 4, 11).unwrap();
    let p = make_palette(&g, PaletteMode::RandomWide, 8, 3).unwrap();
    let v = 0;
    let expected = expected_fraternal_events(&g, &p, v);
    let trials = 40_000u64;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for t in 0..trials {
        let ta = tentative_assign(&g, &p, t);
        let rc = retained_set(&g, &ta);
        let x = realized_events(&g, &p, &rc, &ta, v).0 as f64;
        sum += x;
        sq += x * x;
    }
    let mean = sum / trials as f64;
    let sd = (sq / trials as f64 - mean * mean).sqrt();
    assert!((mean - expected).abs() < 4.0 * sd / (trials as f64).sqrt() + 1e-9, "{mean} vs {expected}");

    let alien_expected = alien_count(&g, &p, v) as f64 * alien_event_probability(4);
    let mut alien_sum = 0.0;
    for t in 0..trials {
        let ta = tentative_assign(&g, &p, 1_000_000 + t);
        alien_sum += realized_events(&g, &p, &retained_set(&g, &ta), &ta, v).1 as f64;
    }
    let alien_mean = alien_sum / trials as f64;
    assert!((alien_mean - alien_expected).abs() < 0.02 + 0.05 * alien_expected, "{alien_mean} vs {alien_expected}");
}

#[test]
fn completion_from_residual_lists() {
    let g = gen_random_regular(300, 8, 5).unwrap();
    let p = make_palette(&g, PaletteMode::Identical, 9, 0).unwrap();
    let lists = sample_lists(&p, 9, 1, None).unwrap();
    let all: Vec<usize> = (0..g.n()).collect();
    let ta = assign_from(&g, &p, &lists.lists, 2);
    let rc = retained_set(&g, &ta);
    let done = complete_sparse(&g, &ta, &rc, &lists, &all, &SearchConfig::default(), 0).unwrap();
    let mut color = rc.sigma.clone();
    for (v, c) in done.coloring {
        assert!(!rc.contains(v) && c != ta.tau[v]);
        color[v] = Some(c);
    }
    let color: Vec<usize> = color.into_iter().map(Option::unwrap).collect();
    assert!(sparsecolor_core::listcolor::validate_coloring(&g, &lists.lists, &color));
}

#[test]
fn completion_failure_is_a_diagnostic() {
    // triangle, single shared color left after the tentative color is spent
    let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let lists = sparsecolor_core::ListSample { ell: 2, seed: 0, lists: vec![vec![0, 1]; 3] };
    let ta = TentativeAssignment { tau: vec![0, 0, 0], xi: vec![true; 3], seed: 0 };
    let rc = retained_set(&g, &ta);
    let f = complete_sparse(&g, &ta, &rc, &lists, &[0, 1, 2], &SearchConfig::default(), 0).unwrap_err();
    assert!(f.proven);
    assert_eq!(f.residual_size, 1);
}
