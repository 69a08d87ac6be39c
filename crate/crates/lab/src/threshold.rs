//! Bisection for the smallest `c` whose success rate reaches a target.

use serde::Serialize;

use crate::config::{ln, ExperimentConfig};
use crate::error::{LabError, Result};
use crate::experiment::{run_point, thread_pool, Aggregate};

/// Bisection stops once the bracket is at most this wide.
pub const C_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub index: u64,
    pub aggregate: Aggregate,
    /// Isotonic (non-decreasing in `c`) fit over all probes so far.
    pub smoothed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub target: f64,
    pub c_star: f64,
    pub ell_star: usize,
    /// Final bracket.
    pub lo: f64,
    pub hi: f64,
    pub probes: Vec<Probe>,
    /// Probe pairs `(c_1, c_2)` with `c_1 < c_2` but a raw rate at `c_1`
    /// above the rate at `c_2` by more than both Wilson half-widths.
    pub non_monotone: Vec<(f64, f64)>,
}

/// Pool-adjacent-violators fit of `(c, rate, weight)` sorted by `c`.
fn isotonic(points: &[(f64, f64, f64)]) -> Vec<f64> {
    let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
    for &(_, y, w) in points {
        blocks.push((y * w, w, 1));
        while blocks.len() > 1 {
            let k = blocks.len();
            let (s1, w1, _) = blocks[k - 2];
            let (s2, w2, _) = blocks[k - 1];
            if s1 / w1 <= s2 / w2 {
                break;
            }
            let last = blocks.pop().expect("two blocks");
            let prev = blocks.last_mut().expect("two blocks");
            prev.0 += last.0;
            prev.1 += last.1;
            prev.2 += last.2;
        }
    }
    blocks.iter().flat_map(|&(s, w, k)| std::iter::repeat(s / w).take(k)).collect()
}

fn refit(probes: &mut [Probe]) {
    let mut order: Vec<usize> = (0..probes.len()).collect();
    order.sort_by(|&a, &b| probes[a].aggregate.c.total_cmp(&probes[b].aggregate.c));
    let pts: Vec<(f64, f64, f64)> = order
        .iter()
        .map(|&i| (probes[i].aggregate.c, probes[i].aggregate.rate, probes[i].aggregate.trials as f64))
        .collect();
    for (k, y) in isotonic(&pts).into_iter().enumerate() {
        probes[order[k]].smoothed = y;
    }
}

/// Smallest `c` in the grid's range with success rate at least `target`,
/// to within [`C_TOLERANCE`]. The grid's minimum and maximum bracket the
/// search; each probe runs `trials` trials with its own seeds.
pub fn estimate_threshold(cfg: &ExperimentConfig, target: f64) -> Result<ThresholdEstimate> {
    if !(0.0..=1.0).contains(&target) {
        return Err(LabError::Config(format!("target rate must lie in [0, 1], got {target}")));
    }
    let w = cfg.workload()?;
    let (mut lo, mut hi) = (w.grid[0], *w.grid.last().expect("non-empty grid"));
    let done = |probes, lo: f64, hi: f64, c_star: f64| ThresholdEstimate {
        target,
        c_star,
        ell_star: w.ell_for(c_star),
        lo,
        hi,
        probes,
        non_monotone: Vec::new(),
    };
    if target <= 0.0 {
        return Ok(done(Vec::new(), lo, hi, lo));
    }
    let pool = thread_pool(cfg.jobs)?;
    let mut probes: Vec<Probe> = Vec::new();
    let probe_at = |c: f64, probes: &mut Vec<Probe>| -> Result<f64> {
        let index = probes.len() as u64;
        let (_, aggregate) = run_point(&w, cfg, &pool, index, c)?;
        probes.push(Probe { index, aggregate, smoothed: 0.0 });
        refit(probes);
        Ok(probes.last().expect("just pushed").smoothed)
    };
    let at_lo = probe_at(lo, &mut probes)?;
    if at_lo >= target {
        return Ok(finish(done(probes, lo, lo, lo)));
    }
    if lo == hi || probe_at(hi, &mut probes)? < target {
        let top = probes.last().expect("probed").aggregate.rate;
        return Err(LabError::NonBracketing {
            target,
            detail: format!("success rate at the largest c = {hi} is {top}"),
        });
    }
    while hi - lo > C_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        probe_at(mid, &mut probes)?;
        // decide on the current fit at mid, which may have been pooled
        let fit_mid = probes.last().expect("probed").smoothed;
        if fit_mid >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // every c with the same ℓ as `hi` has the same success law
    let ell = w.ell_for(hi);
    let edge = if ell <= 1 { lo } else { (ell as f64 - 0.5) / ln(w.n) };
    let c_star = edge.clamp(lo, hi);
    Ok(finish(done(probes, lo, hi, c_star)))
}

fn finish(mut est: ThresholdEstimate) -> ThresholdEstimate {
    let half = |a: &Aggregate| 0.5 * (a.wilson_hi - a.wilson_lo);
    for a in &est.probes {
        for b in &est.probes {
            let (a, b) = (&a.aggregate, &b.aggregate);
            if a.c < b.c && a.rate - b.rate > half(a) + half(b) {
                est.non_monotone.push((a.c, b.c));
            }
        }
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_examples() {
        let fit = isotonic(&[(0.0, 0.2, 1.0), (1.0, 0.6, 1.0), (2.0, 0.4, 1.0), (3.0, 0.9, 2.0)]);
        assert_eq!(fit, vec![0.2, 0.5, 0.5, 0.9]);
        let flat = isotonic(&[(0.0, 1.0, 3.0), (1.0, 0.0, 1.0)]);
        assert_eq!(flat, vec![0.75, 0.75]);
    }

    fn small_cliques() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("graph = cliques\nm = 2\nd = 6\nc_grid = 0.3, 4\ntrials = 30\nmode = solver\n").unwrap();
        cfg
    }

    #[test]
    fn zero_target_is_grid_minimum() {
        let est = estimate_threshold(&small_cliques(), 0.0).unwrap();
        assert_eq!(est.c_star, 0.3);
        assert!(est.probes.is_empty());
    }

    #[test]
    fn full_lists_reach_rate_one() {
        let cfg = small_cliques();
        let est = estimate_threshold(&cfg, 1.0).unwrap();
        let n = 14f64;
        assert!(est.c_star <= 7.0 / n.ln() + 1e-12, "{}", est.c_star);
        assert!(est.hi - est.lo <= C_TOLERANCE || est.lo == est.hi);
    }

    #[test]
    fn non_bracketing_grid_is_an_error() {
        let mut cfg = small_cliques();
        cfg.set("c_grid", "0.1, 0.2").unwrap();
        assert!(matches!(estimate_threshold(&cfg, 0.99), Err(LabError::NonBracketing { .. })));
    }
}
