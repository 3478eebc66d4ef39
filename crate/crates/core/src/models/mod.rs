//! Gibbs-type partition models, their finite-sample laws and samplers.

mod gibbs;
mod marginal;
mod partition;
mod pmf;
mod sampling;

pub use gibbs::{EwensPitman, GibbsModel, WeightsOnly};
pub use marginal::{block_product, compositions, eppf, integer_partitions, unobserved_frequency_law, prior_k};
pub use partition::PartitionSummary;
pub use pmf::{Pmf, CLAMP_TOLERANCE};
pub use sampling::{
    crp_blocks, crp_sample, sample_frequencies, seeded_rng, zeta_sample, zeta_sample_with,
    ZetaDraw, ZetaSampler, ZETA_CAP,
};

use crate::numerics::Scalar;

/// Ewens–Pitman weight `V_{n,j}`.
pub fn ep_weight<T: Scalar>(model: &EwensPitman<T>, n: usize, j: usize) -> crate::Result<T> {
    if j < 1 || j > n {
        return Err(crate::Error::Domain(format!("weight needs 1 <= j <= n, got n={n} j={j}")));
    }
    Ok(model.weight(n, j))
}
