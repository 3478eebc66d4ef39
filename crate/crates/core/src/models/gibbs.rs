use crate::gfc::gfc_table;
use crate::numerics::{rising_factorial, Scalar};
use crate::{Error, Result};

/// Gibbs-type exchangeable partition: a discount `σ < 1` and weights
/// `V_{n,j}` satisfying `V_{n,j} = V_{n+1,j+1} + (n - jσ) V_{n+1,j}`.
pub trait GibbsModel<T: Scalar>: Send + Sync {
    fn sigma(&self) -> &T;

    /// `V_{n,j}` for `1 ≤ j ≤ n`.
    fn weight(&self, n: usize, j: usize) -> T;

    /// `V_{n2,j2} / V_{n,j}`.
    fn weight_ratio(&self, n: usize, j: usize, n2: usize, j2: usize) -> T {
        self.weight(n2, j2) / self.weight(n, j)
    }

    /// `Σ_k V_{n+m,j+k} / V_{n,j} · Ĉ(rest, k; σ, γ)` over `k = 0..=rest`,
    /// where `Ĉ` is the σ-normalized noncentral coefficient. Every
    /// looking-backward probability reduces to sums of this quantity.
    fn predictive_tail(&self, n: usize, j: usize, m: usize, rest: usize, gamma: &T) -> T {
        let table = gfc_table(self.sigma(), gamma, rest, rest);
        table
            .row(rest)
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, c)| {
                if c.is_zero() {
                    acc
                } else {
                    acc + self.weight_ratio(n, j, n + m, j + k) * c
                }
            })
    }

    /// Ewens–Pitman parameters when the model is of that family.
    fn ewens_pitman(&self) -> Option<&EwensPitman<T>> {
        None
    }
}

/// Ewens–Pitman model with discount `σ` and strength `θ`.
///
/// Either `0 ≤ σ < 1, θ > -σ`, or `σ < 0` with `θ = κ|σ|` for a positive
/// integer `κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EwensPitman<T> {
    sigma: T,
    theta: T,
}

impl<T: Scalar> EwensPitman<T> {
    pub fn new(sigma: T, theta: T) -> Result<Self> {
        if sigma >= T::one() {
            return Err(Error::Domain("σ must be below 1".into()));
        }
        if sigma.is_negative() {
            let kappa = (theta.clone() / -sigma.clone()).to_f64();
            let rounded = kappa.round();
            if rounded < 1.0 || (kappa - rounded).abs() > 1e-12 * rounded.max(1.0) {
                return Err(Error::Domain(
                    "for σ < 0, θ/|σ| must be a positive integer".into(),
                ));
            }
        } else if theta.clone() + &sigma <= T::zero() {
            return Err(Error::Domain("θ must exceed -σ".into()));
        }
        Ok(EwensPitman { sigma, theta })
    }

    pub fn theta(&self) -> &T {
        &self.theta
    }

    /// `∏_{i=j}^{j2-1} (θ + iσ)`.
    fn numerator_span(&self, j: usize, j2: usize) -> T {
        (j..j2).fold(T::one(), |acc, i| {
            acc * (self.theta.clone() + self.sigma.clone() * T::from_usize(i))
        })
    }
}

impl<T: Scalar> GibbsModel<T> for EwensPitman<T> {
    fn sigma(&self) -> &T {
        &self.sigma
    }

    /// `∏_{i=1}^{j-1}(θ + iσ) / (θ + 1)_{(n-1)↑}`, which equals the usual
    /// `∏_{i=0}^{j-1}(θ + iσ) / (θ)_{n↑}` and stays finite at `θ = 0`.
    fn weight(&self, n: usize, j: usize) -> T {
        assert!(1 <= j && j <= n, "weight needs 1 <= j <= n");
        self.numerator_span(1, j)
            / rising_factorial(&(self.theta.clone() + T::one()), n - 1)
    }

    fn weight_ratio(&self, n: usize, j: usize, n2: usize, j2: usize) -> T {
        assert!(n2 >= n && j2 >= j);
        self.numerator_span(j, j2) / rising_factorial(&(self.theta.clone() + T::from_usize(n)), n2 - n)
    }

    /// Closed form `(θ + jσ - γ)_{rest↑} / (θ + n)_{m↑}`.
    fn predictive_tail(&self, n: usize, j: usize, m: usize, rest: usize, gamma: &T) -> T {
        let base = self.theta.clone() + self.sigma.clone() * T::from_usize(j) - gamma;
        rising_factorial(&base, rest)
            / rising_factorial(&(self.theta.clone() + T::from_usize(n)), m)
    }

    fn ewens_pitman(&self) -> Option<&EwensPitman<T>> {
        Some(self)
    }
}

/// Wraps a model and exposes only `σ` and `V_{n,j}`, forcing the general
/// Gibbs code paths. Used to cross-check the Ewens–Pitman closed forms.
#[derive(Clone, Debug)]
pub struct WeightsOnly<M>(pub M);

impl<T: Scalar, M: GibbsModel<T>> GibbsModel<T> for WeightsOnly<M> {
    fn sigma(&self) -> &T {
        self.0.sigma()
    }

    fn weight(&self, n: usize, j: usize) -> T {
        self.0.weight(n, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn ep(s: Q, t: Q) -> EwensPitman<Q> {
        EwensPitman::new(s, t).unwrap()
    }

    #[test]
    fn weights() {
        let m = ep(q(1, 2), q(1, 1));
        assert_eq!(m.weight(1, 1), q(1, 1));
        assert_eq!(m.weight(2, 2), q(3, 4));
        assert_eq!(m.weight_ratio(2, 1, 5, 3), m.weight(5, 3) / m.weight(2, 1));
        let zero_theta = ep(q(1, 2), q(0, 1));
        assert_eq!(zero_theta.weight(2, 1), q(1, 1));
    }

    #[test]
    fn parameter_domain() {
        assert!(EwensPitman::new(q(1, 1), q(1, 1)).is_err());
        assert!(EwensPitman::new(q(1, 2), q(-1, 2)).is_err());
        assert!(EwensPitman::new(q(1, 2), q(-1, 4)).is_ok());
        assert!(EwensPitman::new(q(-1, 2), q(3, 2)).is_ok());
        assert!(EwensPitman::new(q(-1, 2), q(3, 4)).is_err());
        let finite = ep(q(-1, 2), q(3, 2));
        assert_eq!(finite.weight(6, 4), q(0, 1));
    }

    #[test]
    fn gibbs_recursion() {
        for (s, t) in [(q(1, 2), q(1, 1)), (q(1, 4), q(10, 1)), (q(0, 1), q(3, 2)), (q(-1, 3), q(2, 1))] {
            let m = ep(s.clone(), t);
            for n in 1..=30 {
                for j in 1..=n {
                    let rhs = m.weight(n + 1, j + 1)
                        + (Q::from_usize(n) - s.clone() * Q::from_usize(j)) * m.weight(n + 1, j);
                    assert_eq!(m.weight(n, j), rhs);
                }
            }
        }
    }

    #[test]
    fn tail_closed_form_matches_weights() {
        let m = ep(q(1, 3), q(5, 2));
        let w = WeightsOnly(m.clone());
        for (n, j) in [(5, 2), (8, 8), (3, 1)] {
            for mm in 0..=6 {
                for rest in 0..=mm {
                    for g in [q(-4, 1), q(1, 3), q(-7, 2)] {
                        assert_eq!(
                            m.predictive_tail(n, j, mm, rest, &g),
                            w.predictive_tail(n, j, mm, rest, &g)
                        );
                    }
                }
            }
        }
    }
}
