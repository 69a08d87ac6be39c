use crate::error::{Error, Result};

/// Tunable constants of the pipeline.
///
/// Only `delta`, `eps` and the absolute constant `b0` are stored; `θ`, `ρ`,
/// `ν₀`, `ϑ` and `ϑ′` are recomputed on every call. The overrides replace
/// regime thresholds whose asymptotic values are too small to matter at
/// desk scale.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Params {
    pub delta: f64,
    pub eps: f64,
    /// Cluster constant bounding size deviation and external degrees
    /// in units of `εD`.
    pub b0: f64,
    pub theta_override: Option<f64>,
    pub zeta0_override: Option<f64>,
    /// Replaces `0.1 δ log n` in process success condition (S1).
    pub s1_bound_override: Option<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Params { delta: 1.0, eps: 0.1, b0: 7.0, theta_override: None, zeta0_override: None, s1_bound_override: None }
    }
}

/// Resolved constants of the pairing process for one cluster.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProcessParams {
    pub eta: f64,
    pub q: f64,
    pub big_k: f64,
    /// `KηD/q` before rounding and clamping.
    pub m_raw: f64,
    pub m: usize,
    pub eta_clamped: bool,
    pub k_clamped: bool,
    pub m_clamped: bool,
}

impl Params {
    pub fn new(delta: f64, eps: f64) -> Result<Self> {
        let p = Params { delta, eps, ..Params::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(Error::Parameter(alloc::format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Parameter(alloc::format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        Ok(())
    }

    /// `θ = e^{-9/δ}` unless overridden.
    pub fn theta(&self) -> f64 {
        self.theta_override.unwrap_or_else(|| libm::exp(-9.0 / self.delta))
    }

    /// `ρ = δ/10`.
    pub fn rho(&self) -> f64 {
        self.delta / 10.0
    }

    /// `ν₀ = ρ/2`.
    pub fn nu0(&self) -> f64 {
        self.rho() / 2.0
    }

    /// `ϑ = ε²/2`, the sparseness constant of `V*`.
    pub fn vartheta(&self) -> f64 {
        self.eps * self.eps / 2.0
    }

    /// `ϑ′ = e^{-3}ϑ/4 = e^{-3}ε²/8`, the required slack per unit of `D`.
    pub fn vartheta_prime(&self) -> f64 {
        libm::exp(-3.0) * self.vartheta() / 4.0
    }

    /// Popularity threshold `b = D/(1+ρ)`.
    pub fn b(&self, d: usize) -> f64 {
        d as f64 / (1.0 + self.rho())
    }

    /// `ζ₀ = √ε / D` unless overridden; `ζ ≥ ζ₀` is "large".
    pub fn zeta0(&self, d: usize) -> f64 {
        self.zeta0_override.unwrap_or_else(|| libm::sqrt(self.eps) / d.max(1) as f64)
    }

    /// Bound in (S1); `0.1 δ log n` unless overridden.
    pub fn s1_bound(&self, log_n: f64) -> f64 {
        self.s1_bound_override.unwrap_or(0.1 * self.delta * log_n)
    }

    /// Resolves `η`, `q`, `K` and `m` for a cluster with density `zeta`,
    /// list size `k` and `p_size = |P|` popular colors.
    ///
    /// Each value is the geometric mean of its bracket, clamped into the
    /// bracket when non-empty and to the lower end otherwise; `m` is capped
    /// at `min(|P|, ⌈2ηD⌉)`.
    pub fn resolve_process(&self, zeta: f64, d: usize, k: f64, p_size: usize) -> Result<ProcessParams> {
        let df = d.max(1) as f64;
        let eps = self.eps;
        let (eta, eta_clamped) = clamp_bracket(
            libm::sqrt(zeta.max(1.0 / df) * zeta / eps),
            zeta.max(1.0 / df),
            zeta / eps,
        );
        let q = 1.0 - libm::exp(-self.theta() * zeta * k / (18.0 * self.b0 * eps));
        let k_guess = libm::sqrt(q / eta) * libm::sqrt(eps * q / (zeta * df * eta)).max(1.0);
        let (big_k, k_clamped) = clamp_bracket(k_guess, (eps / (zeta * df) * q / eta).max(1.0), q / eta);
        let m_raw = big_k * eta * df / q;
        let cap = p_size.min(libm::ceil(2.0 * eta * df) as usize);
        if cap < 1 {
            return Err(Error::Parameter(alloc::format!(
                "process needs at least one step, cap resolved to {cap} (|P| = {p_size})"
            )));
        }
        let rounded = if m_raw.is_finite() { libm::round(m_raw).max(1.0) as usize } else { usize::MAX };
        let m = rounded.min(cap);
        Ok(ProcessParams { eta, q, big_k, m_raw, m, eta_clamped, k_clamped, m_clamped: m != rounded })
    }
}

fn clamp_bracket(x: f64, lo: f64, hi: f64) -> (f64, bool) {
    if lo > hi || !x.is_finite() {
        (lo, true)
    } else if x < lo {
        (lo, true)
    } else if x > hi {
        (hi, true)
    } else {
        (x, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_values() {
        let p = Params::default();
        assert!((p.theta() - libm::exp(-9.0)).abs() < 1e-18);
        assert!((p.theta() - 1.234e-4).abs() < 1e-6);
        assert_eq!(p.rho(), 0.1);
        assert_eq!(p.nu0(), 0.05);
        assert!((p.vartheta_prime() - libm::exp(-3.0) * 0.01 / 8.0).abs() < 1e-18);
        assert!((p.b(30) - 30.0 / 1.1).abs() < 1e-12);
    }

    #[test]
    fn mutation_keeps_identities() {
        let mut p = Params::default();
        p.delta = 2.5;
        p.eps = 0.03;
        assert!((p.theta() - libm::exp(-9.0 / 2.5)).abs() <= 1e-15);
        assert!((p.rho() - 0.25).abs() <= 1e-15);
        assert!((p.vartheta_prime() - libm::exp(-3.0) * 0.03 * 0.03 / 8.0).abs() <= 1e-15);
    }

    #[test]
    fn process_resolution_is_clamped() {
        let p = Params::default();
        let pp = p.resolve_process(1.0 / 60.0, 30, 16.0, 31).unwrap();
        assert!(pp.eta >= 1.0 / 30.0 && pp.eta <= (1.0 / 60.0) / 0.1);
        assert!(pp.q > 0.0 && pp.q < 1e-4);
        assert!(pp.big_k >= 1.0);
        assert!(pp.m >= 1 && pp.m <= 31);
        assert!(pp.m_clamped);
        assert!(p.resolve_process(0.1, 30, 16.0, 0).is_err());
    }
}
