use rand::Rng;
use sparsecolor_core::palette::{chernoff_lower, chernoff_upper, janson_bound, large_dev_bound, lll_check, phi};
use sparsecolor_core::seed::rng;
use sparsecolor_oracles as oracle;

#[test]
fn chernoff_dominates_exact_binomial_tails() {
    for n in 1..=20u64 {
        for pi in 1..10 {
            let p = pi as f64 / 10.0;
            let mu = n as f64 * p;
            for k in 0..=n {
                let kf = k as f64;
                if kf >= mu {
                    let b = chernoff_upper(mu, kf - mu).unwrap();
                    let exact = oracle::binomial_upper(n, p, k);
                    assert!(b.phi_form >= exact - 1e-12 && b.quadratic_form >= exact - 1e-12, "n={n} p={p} k={k}");
                }
                if kf <= mu {
                    let b = chernoff_lower(mu, mu - kf).unwrap();
                    let exact = oracle::binomial_lower(n, p, k);
                    assert!(b.phi_form >= exact - 1e-12 && b.quadratic_form >= exact - 1e-12, "n={n} p={p} k={k}");
                }
            }
        }
    }
}

#[test]
fn chernoff_dominates_hypergeometric_tails() {
    for total in 2..=20u64 {
        for marked in 0..=total {
            for draws in 1..=total {
                let mu = (marked * draws) as f64 / total as f64;
                if mu == 0.0 {
                    continue;
                }
                for k in 0..=draws {
                    if k as f64 >= mu {
                        let exact = oracle::hypergeometric_upper(total, marked, draws, k);
                        let b = chernoff_upper(mu, k as f64 - mu).unwrap();
                        assert!(b.phi_form >= exact - 1e-12 && b.quadratic_form >= exact - 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn large_deviation_dominates() {
    for n in 1..=20u64 {
        for pi in 1..10 {
            let p = pi as f64 / 20.0;
            let mu = n as f64 * p;
            for k in 0..=n {
                let big_k = k as f64 / mu;
                if big_k > 1.0 {
                    let exact = oracle::binomial_upper(n, p, k + 1);
                    assert!(large_dev_bound(mu, big_k).unwrap() >= exact - 1e-12);
                }
            }
        }
    }
    assert!((large_dev_bound(7.0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-12);
    let e2 = std::f64::consts::E.powi(2);
    assert!((large_dev_bound(1.0, e2).unwrap() - (-e2).exp()).abs() < 1e-12);
}

#[test]
fn large_deviation_on_sparse_binomial() {
    // P(Bin(10^4, 10^-3) > 100), summed in log space
    let n = 10_000u64;
    let p = 1e-3f64;
    let mut log_term = (n as f64) * (1.0 - p).ln();
    let mut tail = 0.0;
    for k in 1..=n {
        log_term += ((n - k + 1) as f64).ln() - (k as f64).ln() + p.ln() - (1.0 - p).ln();
        if k > 100 {
            tail += log_term.exp();
        }
    }
    assert!(large_dev_bound(10.0, 10.0).unwrap() >= tail);
}

#[test]
fn chernoff_formula_check() {
    let b = chernoff_upper(100.0, 20.0).unwrap();
    let expected = (-100.0 * (1.2 * 1.2f64.ln() - 0.2)).exp();
    assert!((b.phi_form - expected).abs() < 1e-15);
    assert_eq!(chernoff_upper(5.0, 0.0).unwrap().phi_form, 1.0);
    assert!((chernoff_lower(3.0, 3.0).unwrap().phi_form - (-3.0f64).exp()).abs() < 1e-15);
    assert!(chernoff_lower(3.0, 4.0).is_err());
    assert_eq!(phi(-1.0).unwrap(), 1.0);
}

#[test]
fn janson_dominates_exhaustive_enumeration() {
    for seed in 0..400 {
        let mut r = rng(seed);
        let ground = r.gen_range(1..=12);
        let count = r.gen_range(1..=6);
        let sets: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                let size = r.gen_range(1..=ground.min(4));
                let mut s: Vec<usize> = (0..size).map(|_| r.gen_range(0..ground)).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let p = r.gen_range(0.05..0.95);
        let bound = janson_bound(&sets, p).unwrap().bound;
        let exact = oracle::no_set_contained(ground, &sets, p);
        assert!(bound >= exact - 1e-12, "seed {seed}: {bound} < {exact}");
    }
}

#[test]
fn janson_examples() {
    let one = janson_bound(&[vec![0, 1]], 0.5).unwrap();
    assert!((one.bound - (-0.25f64).exp()).abs() < 1e-15);
    let two = janson_bound(&[vec![0], vec![1]], 0.3).unwrap();
    assert!((two.delta_bar - 0.6).abs() < 1e-15);
    assert!((two.bound - (-0.6f64).exp()).abs() < 1e-15);
    assert!(janson_bound(&[vec![]], 0.3).is_err());
}

#[test]
fn lll_examples() {
    assert!(lll_check(0.0, 5));
    assert!(!lll_check(1.0, 0));
    for d in 3..50u32 {
        let df = d as f64;
        assert!(lll_check(df.powi(-5), d.pow(4) as usize));
    }
}
