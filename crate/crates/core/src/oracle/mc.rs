use rand::Rng;
use rayon::prelude::*;

use crate::backward::ConditioningInfo;
use crate::models::{seeded_rng, sample_frequencies, EwensPitman, Pmf};
use crate::numerics::Scalar;

/// Replicates per independent random stream.
const CHUNK: usize = 1024;

/// Histogram of an integer statistic over `replicates` draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalLaw {
    counts: Vec<u64>,
    replicates: u64,
}

impl EmpiricalLaw {
    fn new(max: usize) -> Self {
        EmpiricalLaw {
            counts: vec![0; max + 1],
            replicates: 0,
        }
    }

    fn record(&mut self, x: usize) {
        self.counts[x] += 1;
        self.replicates += 1;
    }

    fn merge(&mut self, other: &EmpiricalLaw) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.replicates += other.replicates;
    }

    pub fn replicates(&self) -> u64 {
        self.replicates
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.counts.get(x).copied().unwrap_or(0) as f64 / self.replicates as f64
    }

    /// Binomial standard error of a cell whose true probability is `p`.
    pub fn se_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.replicates as f64).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(x, &c)| x as f64 * c as f64)
            .sum::<f64>()
            / self.replicates as f64
    }

    /// Standard error of [`mean`](Self::mean).
    pub fn mean_se(&self) -> f64 {
        let mu = self.mean();
        let var = self
            .counts
            .iter()
            .enumerate()
            .map(|(x, &c)| (x as f64 - mu).powi(2) * c as f64)
            .sum::<f64>()
            / (self.replicates.max(2) - 1) as f64;
        (var / self.replicates as f64).sqrt()
    }

    /// Largest cellwise deviation from `law`, in binomial standard errors.
    /// Cells with zero true probability must be empty.
    pub fn max_z(&self, law: &Pmf<f64>) -> f64 {
        let top = self.counts.len().max(law.support().last().map_or(0, |x| x + 1));
        (0..top)
            .map(|x| {
                let (hat, p) = (self.prob(x), law.prob(x));
                let se = self.se_at(p);
                if se == 0.0 {
                    if (hat - p).abs() < 1e-12 { 0.0 } else { f64::INFINITY }
                } else {
                    (hat - p).abs() / se
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Empirical laws of the continuation statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McLaws {
    /// Number of old species seen again.
    pub reobserved: EmpiricalLaw,
    /// Entry `l`: number of old species seen exactly `l` times.
    pub by_frequency: Vec<EmpiricalLaw>,
    /// Number of new species.
    pub new_species: EmpiricalLaw,
}

impl McLaws {
    fn new(j: usize, m: usize) -> Self {
        McLaws {
            reobserved: EmpiricalLaw::new(j),
            by_frequency: (0..=m).map(|_| EmpiricalLaw::new(j)).collect(),
            new_species: EmpiricalLaw::new(m),
        }
    }

    fn merge(&mut self, other: &McLaws) {
        self.reobserved.merge(&other.reobserved);
        for (a, b) in self.by_frequency.iter_mut().zip(&other.by_frequency) {
            a.merge(b);
        }
        self.new_species.merge(&other.new_species);
    }

    pub fn old(&self, l: Option<usize>) -> &EmpiricalLaw {
        match l {
            None => &self.reobserved,
            Some(l) => &self.by_frequency[l],
        }
    }
}

/// Continues a sample with block sizes `freqs` by `m` predictive draws and
/// records the statistics.
fn continue_sample<R: Rng + ?Sized>(
    sigma: f64,
    theta: f64,
    freqs: &[usize],
    m: usize,
    rng: &mut R,
    laws: &mut McLaws,
) {
    let n: usize = freqs.iter().sum();
    let j = freqs.len();
    let mut hits = vec![0usize; j];
    let mut new_blocks: Vec<usize> = Vec::new();
    for t in 0..m {
        let fresh = theta + (j + new_blocks.len()) as f64 * sigma;
        let mut u = rng.gen::<f64>() * (theta + (n + t) as f64);
        if u < fresh {
            new_blocks.push(1);
            continue;
        }
        u -= fresh;
        let mut placed = false;
        for i in 0..j {
            let w = (freqs[i] + hits[i]) as f64 - sigma;
            if u < w {
                hits[i] += 1;
                placed = true;
                break;
            }
            u -= w;
        }
        if !placed {
            let last = new_blocks.len().saturating_sub(1);
            let mut b = last;
            for (k, &size) in new_blocks.iter().enumerate() {
                let w = size as f64 - sigma;
                if u < w {
                    b = k;
                    break;
                }
                u -= w;
            }
            if new_blocks.is_empty() {
                // Rounding left nothing to pick from; fall back to the last old block.
                hits[j - 1] += 1;
            } else {
                new_blocks[b] += 1;
            }
        }
    }
    laws.reobserved.record(hits.iter().filter(|&&h| h > 0).count());
    let mut per_l = vec![0usize; m + 1];
    for &h in &hits {
        per_l[h] += 1;
    }
    for (l, &c) in per_l.iter().enumerate() {
        laws.by_frequency[l].record(c);
    }
    laws.new_species.record(new_blocks.len());
}

fn run<F>(j: usize, m: usize, replicates: usize, seed: u64, body: F) -> McLaws
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut McLaws) + Sync,
{
    let chunks = replicates.div_ceil(CHUNK);
    let parts: Vec<McLaws> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeded_rng(seed, c as u64);
            let mut laws = McLaws::new(j, m);
            let count = CHUNK.min(replicates - c * CHUNK);
            for _ in 0..count {
                body(&mut rng, &mut laws);
            }
            laws
        })
        .collect();
    let mut total = McLaws::new(j, m);
    for p in &parts {
        total.merge(p);
    }
    total
}

/// Monte Carlo continuation of a known initial partition.
pub fn mc_continuations<T: Scalar>(
    ep: &EwensPitman<T>,
    freqs: &[usize],
    m: usize,
    replicates: usize,
    seed: u64,
) -> McLaws {
    use crate::models::GibbsModel;
    let (sigma, theta) = (ep.sigma().to_f64(), ep.theta().to_f64());
    run(freqs.len(), m, replicates.max(1), seed, |rng, laws| {
        continue_sample(sigma, theta, freqs, m, rng, laws)
    })
}

/// Monte Carlo oracle under any conditioning: unknown frequencies are
/// drawn afresh for every replicate from their law given what is known.
pub fn mc_mixture<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    m: usize,
    replicates: usize,
    seed: u64,
) -> McLaws {
    use crate::models::GibbsModel;
    let (sigma, theta) = (ep.sigma().to_f64(), ep.theta().to_f64());
    let (n, j) = (info.n(), info.j());
    run(j, m, replicates.max(1), seed, |rng, laws| match info {
        ConditioningInfo::Complete(s) => continue_sample(sigma, theta, s.freqs(), m, rng, laws),
        ConditioningInfo::Incomplete { .. } => {
            let f = sample_frequencies(sigma, n, j, rng);
            continue_sample(sigma, theta, &f, m, rng, laws)
        }
        ConditioningInfo::AlmostComplete { observed, .. } => {
            let mut f = observed.clone();
            let rest_j = j - observed.len();
            if rest_j > 0 {
                let rest_n = n - observed.iter().sum::<usize>();
                f.extend(sample_frequencies(sigma, rest_n, rest_j, rng));
            }
            continue_sample(sigma, theta, &f, m, rng, laws)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PartitionSummary;
    use crate::oracle::complete_oracle;

    #[test]
    fn degenerate_run() {
        let ep = EwensPitman::new(0.5f64, 1.0).unwrap();
        let laws = mc_continuations(&ep, &[2, 1], 0, 1, 3);
        assert_eq!(laws.reobserved.counts(), &[1, 0, 0]);
        assert_eq!(laws.new_species.counts(), &[1]);
    }

    #[test]
    fn deterministic_given_seed() {
        let ep = EwensPitman::new(0.5f64, 1.0).unwrap();
        let a = mc_continuations(&ep, &[3, 1, 1], 4, 3000, 17);
        let b = mc_continuations(&ep, &[3, 1, 1], 4, 3000, 17);
        assert_eq!(a, b);
        assert_ne!(a, mc_continuations(&ep, &[3, 1, 1], 4, 3000, 18));
    }

    #[test]
    fn agrees_with_enumeration() {
        let ep = EwensPitman::new(0.5f64, 1.0).unwrap();
        let s = PartitionSummary::new(vec![3, 2, 1]).unwrap();
        let exact = complete_oracle(&ep, &s, 4).unwrap();
        let mc = mc_continuations(&ep, s.freqs(), 4, 40_000, 99);
        assert!(mc.reobserved.max_z(&exact.reobserved) < 4.0);
        assert!(mc.new_species.max_z(&exact.new_species) < 4.0);
        for l in 0..=4 {
            assert!(mc.by_frequency[l].max_z(&exact.by_frequency[l]) < 4.0);
        }
    }
}
