use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gfc::gfc_table;
use crate::numerics::{binomial, rising_factorial, Scalar, SignedLog};
use crate::{Error, Result};

use super::gibbs::{EwensPitman, GibbsModel};
use super::partition::PartitionSummary;

/// Generator for replicate `stream` of a run seeded with `seed`.
///
/// Streams are independent ChaCha sequences, so replicates can run in any
/// order or in parallel and still reproduce bit for bit.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Block sizes of an Ewens–Pitman (Chinese restaurant) draw of size `n`.
pub fn crp_blocks<R: Rng + ?Sized>(sigma: f64, theta: f64, n: usize, rng: &mut R) -> Vec<usize> {
    let mut blocks: Vec<usize> = Vec::new();
    for i in 0..n {
        let j = blocks.len() as f64;
        let u = rng.gen::<f64>() * (theta + i as f64);
        let new_weight = theta + j * sigma;
        if blocks.is_empty() || u < new_weight {
            blocks.push(1);
            continue;
        }
        let mut acc = new_weight;
        let mut chosen = blocks.len() - 1;
        for (b, &size) in blocks.iter().enumerate() {
            acc += size as f64 - sigma;
            if u < acc {
                chosen = b;
                break;
            }
        }
        blocks[chosen] += 1;
    }
    blocks
}

/// Ewens–Pitman sample of size `n`, collapsed to its partition summary.
pub fn crp_sample<T: Scalar>(model: &EwensPitman<T>, n: usize, seed: u64) -> PartitionSummary {
    let mut rng = seeded_rng(seed, 0);
    let blocks = crp_blocks(model.sigma().to_f64(), model.theta().to_f64(), n, &mut rng);
    PartitionSummary::new(blocks).expect("n >= 1")
}

/// Values beyond this are not resolved individually.
pub const ZETA_CAP: u64 = 1_000_000_000;
const ZETA_HEAD: usize = 1 << 16;

/// One draw from a zeta law; values above [`ZETA_CAP`] are reported as
/// `Capped` and treated as fresh species.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZetaDraw {
    Value(u64),
    Capped,
}

/// Inversion sampler for `P[X = k] = k^{-s} / ζ(s)`, `k ≥ 1`.
#[derive(Clone, Debug)]
pub struct ZetaSampler {
    scale: f64,
    zeta: f64,
    /// `survival[k] = P[X > k]` for `k < ZETA_HEAD`.
    survival: Vec<f64>,
}

impl ZetaSampler {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 1.0) || !scale.is_finite() {
            return Err(Error::Domain(format!("zeta scale must exceed 1, got {scale}")));
        }
        let h = ZETA_HEAD;
        let mut survival = vec![0.0; h];
        let mut acc = hurwitz_tail(scale, h as f64);
        for k in (0..h).rev() {
            survival[k] = acc;
            if k >= 1 {
                acc += (k as f64).powf(-scale);
            }
        }
        let zeta = survival[0];
        for s in survival.iter_mut() {
            *s /= zeta;
        }
        Ok(ZetaSampler { scale, zeta, survival })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `ζ(s)`.
    pub fn normalizer(&self) -> f64 {
        self.zeta
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else {
            (k as f64).powf(-self.scale) / self.zeta
        }
    }

    /// `P[X > k]`.
    pub fn survival(&self, k: u64) -> f64 {
        if (k as usize) < self.survival.len() {
            self.survival[k as usize]
        } else {
            hurwitz_tail(self.scale, k as f64 + 1.0) / self.zeta
        }
    }

    /// Probability of a capped draw.
    pub fn tail_mass(&self) -> f64 {
        self.survival(ZETA_CAP)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ZetaDraw {
        let v: f64 = rng.gen();
        // First k with P[X > k] <= v.
        let k = self.survival.partition_point(|&s| s > v);
        if k < self.survival.len() {
            return ZetaDraw::Value(k as u64);
        }
        if self.survival(ZETA_CAP) > v {
            return ZetaDraw::Capped;
        }
        let (mut lo, mut hi) = (self.survival.len() as u64 - 1, ZETA_CAP);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) > v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ZetaDraw::Value(hi)
    }
}

/// `Σ_{i ≥ x} i^{-s}` by Euler–Maclaurin; accurate to double precision for
/// `x` in the tens of thousands.
fn hurwitz_tail(s: f64, x: f64) -> f64 {
    x.powf(1.0 - s) / (s - 1.0) + x.powf(-s) / 2.0 + s * x.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0) / 720.0
}

/// `n` i.i.d. zeta draws collapsed to species frequencies. Capped draws
/// count as distinct singleton species.
pub fn zeta_sample(scale: f64, n: usize, seed: u64) -> Result<PartitionSummary> {
    let sampler = ZetaSampler::new(scale)?;
    let mut rng = seeded_rng(seed, 0);
    zeta_sample_with(&sampler, n, &mut rng)
}

pub fn zeta_sample_with<R: Rng + ?Sized>(
    sampler: &ZetaSampler,
    n: usize,
    rng: &mut R,
) -> Result<PartitionSummary> {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    let mut capped = Vec::new();
    for _ in 0..n {
        match sampler.draw(rng) {
            ZetaDraw::Value(k) => *counts.entry(k).or_default() += 1,
            ZetaDraw::Capped => capped.push(1),
        }
    }
    let mut freqs: Vec<usize> = counts.into_values().collect();
    freqs.extend(capped);
    PartitionSummary::new(freqs)
}

/// Random labelled frequency vector of `n` observations in `j` blocks,
/// drawn from the Gibbs conditional law given `K_n = j` (which depends only
/// on `σ`). Blocks are produced one at a time from their exact marginal.
pub fn sample_frequencies<R: Rng + ?Sized>(sigma: f64, n: usize, j: usize, rng: &mut R) -> Vec<usize> {
    assert!(1 <= j && j <= n, "need 1 <= j <= n");
    type L = SignedLog<f64>;
    let s = L::from_real(sigma);
    let table = gfc_table(&s, &L::from_real(0.0), n, j);
    let base = L::from_real(1.0 - sigma);
    let mut out = Vec::with_capacity(j);
    let (mut left, mut blocks) = (n, j);
    while blocks > 1 {
        let total = table.normalized(left, blocks) * L::from_usize(blocks);
        let v = L::from_real(rng.gen::<f64>()) * total;
        let mut acc = L::from_real(0.0);
        let mut pick = left - blocks + 1;
        for a in 1..=(left - blocks + 1) {
            let w = binomial::<L>(left, a).expect("a <= left")
                * rising_factorial(&base, a - 1)
                * table.normalized(left - a, blocks - 1);
            acc = acc + w;
            if v < acc {
                pick = a;
                break;
            }
        }
        out.push(pick);
        left -= pick;
        blocks -= 1;
    }
    out.push(left);
    out
}
