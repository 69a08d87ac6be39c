//! Tail bounds: Chernoff (two forms), the large-deviation bound, Janson's
//! inequality and the Local Lemma condition.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `φ(x) = (1+x)ln(1+x) - x` for `x > -1`, with `φ(-1) = 1`.
pub fn phi(x: f64) -> Result<f64> {
    if x < -1.0 || x.is_nan() {
        return Err(Error::Domain(alloc::format!("phi is undefined at {x}")));
    }
    if x == -1.0 {
        return Ok(1.0);
    }
    Ok((1.0 + x) * libm::log1p(x) - x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChernoffBound {
    /// `exp[-μ φ(±t/μ)]`.
    pub phi_form: f64,
    /// `exp[-t²/(2(μ + t/3))]` (upper) or `exp[-t²/(2μ)]` (lower).
    pub quadratic_form: f64,
}

fn check_mu_t(mu: f64, t: f64) -> Result<()> {
    if !(mu > 0.0) || !(t >= 0.0) {
        return Err(Error::Domain(alloc::format!("need mu > 0 and t >= 0, got mu = {mu}, t = {t}")));
    }
    Ok(())
}

/// Bounds on `P(ξ ≥ μ + t)` for binomial or hypergeometric `ξ`.
pub fn chernoff_upper(mu: f64, t: f64) -> Result<ChernoffBound> {
    check_mu_t(mu, t)?;
    Ok(ChernoffBound {
        phi_form: libm::exp(-mu * phi(t / mu)?),
        quadratic_form: libm::exp(-t * t / (2.0 * (mu + t / 3.0))),
    })
}

/// Bounds on `P(ξ ≤ μ - t)`. Fails when `t > μ`.
pub fn chernoff_lower(mu: f64, t: f64) -> Result<ChernoffBound> {
    check_mu_t(mu, t)?;
    Ok(ChernoffBound {
        phi_form: libm::exp(-mu * phi(-t / mu)?),
        quadratic_form: libm::exp(-t * t / (2.0 * mu)),
    })
}

/// `exp[-Kμ log(K/e)]`, bounding `P(ξ > Kμ)`.
pub fn large_dev_bound(mu: f64, big_k: f64) -> Result<f64> {
    if !(mu > 0.0) || !(big_k > 0.0) {
        return Err(Error::Domain(alloc::format!("need mu > 0 and K > 0, got mu = {mu}, K = {big_k}")));
    }
    Ok(libm::exp(-big_k * mu * (libm::log(big_k) - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JansonBound {
    /// `Σ_i p^{|A_i|}`.
    pub mu: f64,
    /// `ΣΣ_{A_i ∩ A_j ≠ ∅} p^{|A_i ∪ A_j|}`, diagonal included.
    pub delta_bar: f64,
    /// `exp[-μ²/∆̄]`, bounding the probability that no `A_i` is contained
    /// in the `p`-random subset.
    pub bound: f64,
}

/// Janson's inequality for the events `{A_i ⊆ S_p}`. Sets are given as
/// element lists of a common ground set; duplicates within a set are
/// ignored.
pub fn janson_bound(sets: &[Vec<usize>], p: f64) -> Result<JansonBound> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(alloc::format!("p must lie in (0, 1), got {p}")));
    }
    let sets: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::Domain("Janson events need non-empty sets".into()));
    }
    let mu: f64 = sets.iter().map(|s| libm::pow(p, s.len() as f64)).sum();
    let mut delta_bar = 0.0;
    for a in &sets {
        for b in &sets {
            let common = crate::graph::sorted_intersection_len(a, b);
            if common > 0 {
                delta_bar += libm::pow(p, (a.len() + b.len() - common) as f64);
            }
        }
    }
    Ok(JansonBound { mu, delta_bar, bound: libm::exp(-mu * mu / delta_bar) })
}

/// Local Lemma condition `e·p·(Δ+1) < 1`.
pub fn lll_check(p: f64, max_dependency_degree: usize) -> bool {
    core::f64::consts::E * p * (max_dependency_degree as f64 + 1.0) < 1.0
}
