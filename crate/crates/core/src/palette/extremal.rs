//! The three-point extremal law for convex functionals with two moment
//! constraints.

use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Finitely supported law with exact rational probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    /// `(value, probability)`, values strictly increasing, probabilities
    /// positive and summing to one.
    pub atoms: Vec<(Rational, Rational)>,
}

impl DiscreteDistribution {
    /// Builds a law, merging equal values and dropping zero masses.
    pub fn new(mut atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.iter().any(|(_, p)| *p < Rational::from_integer(0)) {
            return Err(Error::Infeasible("negative probability".into()));
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(atoms.len());
        for (x, p) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += p,
                _ => merged.push((x, p)),
            }
        }
        merged.retain(|(_, p)| *p != Rational::from_integer(0));
        let total: Rational = merged.iter().map(|(_, p)| *p).sum();
        if total != Rational::from_integer(1) {
            return Err(Error::Infeasible(alloc::format!("probabilities sum to {total}, not 1")));
        }
        Ok(DiscreteDistribution { atoms: merged })
    }

    pub fn prob(&self, x: Rational) -> Rational {
        self.atoms.iter().find(|(v, _)| *v == x).map(|(_, p)| *p).unwrap_or_default()
    }

    pub fn mean(&self) -> Rational {
        self.atoms.iter().map(|(x, p)| *x * *p).sum()
    }

    /// `E[X·1{X ≤ b}]`.
    pub fn truncated_mean(&self, b: Rational) -> Rational {
        self.atoms.iter().filter(|(x, _)| *x <= b).map(|(x, p)| *x * *p).sum()
    }

    pub fn expect<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.atoms.iter().map(|(x, p)| to_f64(*p) * g(to_f64(*x))).sum()
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The law `Z` with `P(Z=b) = β/b`, `P(Z=a) = (α-β)/a` and the rest at 0.
///
/// It meets `E[Z] = α` and `E[Z·1{Z ≤ b}] = β` exactly and maximizes
/// `E g` over laws on `[0, a]` meeting both as lower bounds, for every
/// convex `g` with `g(a) ≤ g(0)`.
pub fn cvx_extremal_z(alpha: Rational, beta: Rational, a: Rational, b: Rational) -> Result<DiscreteDistribution> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(zero <= beta && beta <= alpha) || !(zero < b && b <= a) {
        return Err(Error::Domain(alloc::format!(
            "need 0 <= beta <= alpha and 0 < b <= a, got alpha = {alpha}, beta = {beta}, a = {a}, b = {b}"
        )));
    }
    let p_b = beta / b;
    let p_a = (alpha - beta) / a;
    if p_b + p_a > one {
        return Err(Error::Infeasible(alloc::format!("beta/b + (alpha-beta)/a = {} exceeds 1", p_b + p_a)));
    }
    let z = DiscreteDistribution::new(alloc::vec![(zero, one - p_b - p_a), (b, p_b), (a, p_a)])?;
    assert_eq!(z.mean(), alpha);
    assert_eq!(z.truncated_mean(b), if b == a { alpha } else { beta });
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn collapsed_case() {
        let z = cvx_extremal_z(r(1, 2), r(1, 2), r(3, 1), r(3, 1)).unwrap();
        assert_eq!(z.prob(r(3, 1)), r(1, 6));
        assert_eq!(z.prob(r(0, 1)), r(5, 6));
    }

    #[test]
    fn mean_forces_top() {
        let z = cvx_extremal_z(r(4, 1), r(0, 1), r(4, 1), r(1, 1)).unwrap();
        assert_eq!(z.atoms, alloc::vec![(r(4, 1), r(1, 1))]);
    }

    #[test]
    fn infeasible_and_domain() {
        assert!(matches!(cvx_extremal_z(r(5, 1), r(1, 1), r(4, 1), r(1, 1)), Err(Error::Infeasible(_))));
        assert!(matches!(cvx_extremal_z(r(1, 1), r(2, 1), r(4, 1), r(1, 1)), Err(Error::Domain(_))));
        assert!(matches!(cvx_extremal_z(r(1, 1), r(0, 1), r(1, 1), r(2, 1)), Err(Error::Domain(_))));
    }
}
