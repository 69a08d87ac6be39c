//! Slow, exhaustive reference computations. Nothing here shares code with
//! the implementation under test; inputs are plain adjacency and color
//! lists.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

fn pow(x: Q, e: usize) -> Q {
    (0..e).fold(Ratio::from_integer(1), |acc, _| acc * x)
}

/// Calls `visit` with every element of `lists[0] × lists[1] × …`.
pub fn for_each_product<F: FnMut(&[usize])>(lists: &[Vec<usize>], mut visit: F) {
    let n = lists.len();
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0; n];
    let mut cur: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        visit(&cur);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                cur[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = lists[k][0];
        }
    }
}

/// All `k`-subsets of `items`.
pub fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut with: Vec<Vec<usize>> = k_subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(k_subsets(&items[1..], k));
    with
}

/// Exact `P(v ∈ T)`: every `τ_u` uniform on `palettes[u]`, keep bit with
/// probability `(D/(D+1))^{D - #{w ∼ v : τ_v ∈ S_w}}`, and no neighbor
/// sharing `τ_v`.
pub fn retention_probability(adj: &[Vec<usize>], palettes: &[Vec<usize>], d: usize, v: usize) -> Q {
    let zh = q(d as i128, d as i128 + 1);
    let mut total = Ratio::from_integer(0);
    let weight: Q = palettes.iter().fold(Ratio::from_integer(1), |acc, s| acc * q(1, s.len() as i128));
    for_each_product(palettes, |tau| {
        let gamma = tau[v];
        if adj[v].iter().any(|&w| tau[w] == gamma) {
            return;
        }
        let dg = adj[v].iter().filter(|&&w| palettes[w].contains(&gamma)).count();
        total += weight * pow(zh, d - dg);
    });
    total
}

/// Exact `P(v ∈ T)` when `τ_u` is uniform on a uniform `ell0`-subset of
/// `palettes[u]`, keep bits as in [`retention_probability`].
pub fn two_step_retention_probability(adj: &[Vec<usize>], palettes: &[Vec<usize>], d: usize, ell0: usize, v: usize) -> Q {
    let zh = q(d as i128, d as i128 + 1);
    let subsets: Vec<Vec<Vec<usize>>> = palettes.iter().map(|s| k_subsets(s, ell0)).collect();
    let mut total = Ratio::from_integer(0);
    let index_lists: Vec<Vec<usize>> = subsets.iter().map(|s| (0..s.len()).collect()).collect();
    let sub_weight: Q = subsets.iter().fold(Ratio::from_integer(1), |acc, s| acc * q(1, s.len() as i128));
    for_each_product(&index_lists, |choice| {
        let l0: Vec<Vec<usize>> = choice.iter().enumerate().map(|(u, &c)| subsets[u][c].clone()).collect();
        let w = sub_weight * pow(q(1, ell0 as i128), l0.len());
        for_each_product(&l0, |tau| {
            let gamma = tau[v];
            if adj[v].iter().any(|&x| tau[x] == gamma) {
                return;
            }
            let dg = adj[v].iter().filter(|&&x| palettes[x].contains(&gamma)).count();
            total += w * pow(zh, d - dg);
        });
    });
    total
}

/// `C(n, k)` as a float, exact for the small arguments used here.
pub fn choose(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `P(Bin(n, p) = k)`.
pub fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// `P(Bin(n, p) ≥ k)`.
pub fn binomial_upper(n: u64, p: f64, k: u64) -> f64 {
    (k..=n).map(|j| binomial_pmf(n, p, j)).sum()
}

/// `P(Bin(n, p) ≤ k)`.
pub fn binomial_lower(n: u64, p: f64, k: u64) -> f64 {
    (0..=k.min(n)).map(|j| binomial_pmf(n, p, j)).sum()
}

/// `P(X = k)` for `X` the number of marked items in a uniform `draws`-subset
/// of `total` items, `marked` of them marked.
pub fn hypergeometric_pmf(total: u64, marked: u64, draws: u64, k: u64) -> f64 {
    if k > marked || k > draws || draws - k > total - marked {
        return 0.0;
    }
    choose(marked, k) * choose(total - marked, draws - k) / choose(total, draws)
}

pub fn hypergeometric_upper(total: u64, marked: u64, draws: u64, k: u64) -> f64 {
    (k..=draws).map(|j| hypergeometric_pmf(total, marked, draws, j)).sum()
}

/// `P(no set lies entirely in the random subset)` where each ground
/// element is kept independently with probability `p`.
pub fn no_set_contained(ground: usize, sets: &[Vec<usize>], p: f64) -> f64 {
    assert!(ground <= 20, "ground set too large to enumerate");
    let masks: Vec<u32> = sets.iter().map(|s| s.iter().fold(0u32, |m, &x| m | 1 << x)).collect();
    let mut prob = 0.0;
    for sub in 0u32..1 << ground {
        if masks.iter().all(|&m| sub & m != m) {
            let kept = sub.count_ones() as i32;
            prob += p.powi(kept) * (1.0 - p).powi(ground as i32 - kept);
        }
    }
    prob
}

/// Maximum matching size of a bigraph given by `U`-side neighbor lists,
/// by trying every injective assignment.
pub fn brute_max_matching(adj: &[Vec<usize>]) -> usize {
    fn go(adj: &[Vec<usize>], u: usize, used: &mut Vec<usize>) -> usize {
        if u == adj.len() {
            return 0;
        }
        let mut best = go(adj, u + 1, used);
        for &z in &adj[u] {
            if !used.contains(&z) {
                used.push(z);
                best = best.max(1 + go(adj, u + 1, used));
                used.pop();
            }
        }
        best
    }
    go(adj, 0, &mut Vec::new())
}

/// `min_{Q ⊆ U} |N(Q)| - |Q|` by enumeration, `Q = ∅` included.
pub fn brute_hall_deficiency(adj: &[Vec<usize>]) -> isize {
    let nu = adj.len();
    assert!(nu <= 20);
    let mut best = 0isize;
    for qmask in 1u32..1 << nu {
        let mut hood: Vec<usize> = (0..nu).filter(|&u| qmask >> u & 1 == 1).flat_map(|u| adj[u].clone()).collect();
        hood.sort_unstable();
        hood.dedup();
        best = best.min(hood.len() as isize - qmask.count_ones() as isize);
    }
    best
}

/// Exact `P(U-perfect matching)` when each `u` keeps a uniform `t[u]`-subset
/// of its neighbors, as `(favorable, total)`.
pub fn brute_matching_probability(adj: &[Vec<usize>], t: &[usize]) -> (u64, u64) {
    let choices: Vec<Vec<Vec<usize>>> = adj.iter().zip(t).map(|(nb, &k)| k_subsets(nb, k)).collect();
    let index_lists: Vec<Vec<usize>> = choices.iter().map(|c| (0..c.len()).collect()).collect();
    let mut fav = 0;
    let mut total = 0;
    for_each_product(&index_lists, |pick| {
        total += 1;
        let sample: Vec<Vec<usize>> = pick.iter().enumerate().map(|(u, &i)| choices[u][i].clone()).collect();
        if brute_max_matching(&sample) == adj.len() {
            fav += 1;
        }
    });
    if choices.iter().any(Vec::is_empty) {
        total = 0;
    }
    (fav, total)
}

/// Whether some choice from the lists is a proper coloring, by enumerating
/// the full product.
pub fn brute_list_colorable(adj: &[Vec<usize>], lists: &[Vec<usize>]) -> bool {
    let mut found = false;
    for_each_product(lists, |c| {
        if !found && (0..adj.len()).all(|u| adj[u].iter().all(|&w| c[u] != c[w])) {
            found = true;
        }
    });
    found
}

/// Every bigraph with `nu` `U`-vertices over `Z = 0..nz`, as neighbor lists.
pub fn all_bigraphs(nu: usize, nz: usize) -> Vec<Vec<Vec<usize>>> {
    let hoods: Vec<Vec<usize>> = (0u32..1 << nz).map(|m| (0..nz).filter(|&z| m >> z & 1 == 1).collect()).collect();
    let idx: Vec<Vec<usize>> = vec![(0..hoods.len()).collect(); nu];
    let mut out = Vec::new();
    for_each_product(&idx, |pick| out.push(pick.iter().map(|&i| hoods[i].clone()).collect()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_vertex_retention() {
        let p = retention_probability(&[vec![]], &[vec![0, 1, 2]], 2, 0);
        assert_eq!(p, q(4, 9));
    }

    #[test]
    fn tails_sum_to_one() {
        let up = binomial_upper(10, 0.3, 4);
        let lo = binomial_lower(10, 0.3, 3);
        assert!((up + lo - 1.0).abs() < 1e-12);
        let h: f64 = (0..=5).map(|k| hypergeometric_pmf(20, 7, 5, k)).sum();
        assert!((h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matching_and_hall() {
        assert_eq!(brute_max_matching(&[vec![0], vec![0], vec![0]]), 1);
        assert_eq!(brute_hall_deficiency(&[vec![0, 1], vec![]]), -1);
        assert_eq!(brute_matching_probability(&[vec![0, 1], vec![0, 1]], &[1, 1]), (2, 4));
    }

    #[test]
    fn coloring() {
        let tri = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        assert!(!brute_list_colorable(&tri, &vec![vec![0, 1]; 3]));
        assert!(brute_list_colorable(&tri, &[vec![0, 1], vec![1, 2], vec![0, 2]]));
    }
}
