use crate::models::Pmf;
use crate::numerics::{binomial, factorial, guarded_sum, Scalar};
use crate::Result;

use super::moments::FactorialMoments;

/// Law on `0..=r_max` with the given factorial moments:
/// `P[X = x] = Σ_{r ≥ x} (-1)^{r-x} E[(X)_{r↓}] / (x! (r-x)!)`.
pub fn moment_inversion<T: Scalar>(moments: &FactorialMoments<T>) -> Result<Pmf<T>> {
    let top = moments.r_max();
    let binom: Vec<T> = (0..=top).map(|r| moments.get(r) / factorial::<T>(r)).collect();
    binomial_moment_inversion(&binom)?.cleaned()
}

/// Same inversion from binomial moments `E[C(X, r)]`; not cleaned.
pub(crate) fn binomial_moment_inversion<T: Scalar>(binom: &[T]) -> Result<Pmf<T>> {
    let top = binom.len() - 1;
    let probs = (0..=top)
        .map(|x| {
            guarded_sum((x..=top).map(|r| {
                let t = binomial::<T>(r, x).expect("x <= r") * &binom[r];
                if (r - x) % 2 == 0 {
                    t
                } else {
                    -t
                }
            }))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Pmf::from_range(0, probs))
}
