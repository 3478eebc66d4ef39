use crate::gfc::gfc_table;
use crate::numerics::{factorial, multinomial, rising_factorial, Scalar};
use crate::{Error, Result};

use super::gibbs::GibbsModel;
use super::pmf::Pmf;

/// Probability of one particular set partition with the given block sizes:
/// `V_{n,j} ∏ (1 - σ)_{(n_i - 1)↑}`.
pub fn eppf<T: Scalar, M: GibbsModel<T> + ?Sized>(model: &M, freqs: &[usize]) -> T {
    assert!(!freqs.is_empty() && !freqs.contains(&0), "frequencies must be positive");
    let n = freqs.iter().sum();
    block_product(model.sigma(), freqs) * model.weight(n, freqs.len())
}

/// `∏ (1 - σ)_{(n_i - 1)↑}`.
pub fn block_product<T: Scalar>(sigma: &T, freqs: &[usize]) -> T {
    let base = T::one() - sigma;
    freqs
        .iter()
        .fold(T::one(), |acc, &f| acc * rising_factorial(&base, f - 1))
}

/// Law of the number of distinct species among `n` observations,
/// `P[K_n = j] = V_{n,j} C(n, j; σ) / σ^j`.
pub fn prior_k<T: Scalar, M: GibbsModel<T> + ?Sized>(model: &M, n: usize) -> Pmf<T> {
    assert!(n >= 1, "prior_k needs n >= 1");
    let table = gfc_table(model.sigma(), &T::zero(), n, n);
    let probs = (1..=n)
        .map(|j| model.weight(n, j) * table.normalized(n, j))
        .collect();
    Pmf::from_range(1, probs)
}

/// All ordered vectors of `k` positive integers summing to `n`.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left < parts {
            return;
        }
        for first in 1..=(left - parts + 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Integer partitions of `n` into exactly `k` parts, parts decreasing.
pub fn integer_partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left < parts {
            return;
        }
        let hi = cap.min(left - parts + 1);
        for first in (1..=hi).rev() {
            if first * parts < left {
                break;
            }
            cur.push(first);
            rec(left - first, parts - 1, first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, n, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Conditional law of the `j - p` unobserved frequencies given `K_n = j`
/// and the frequencies `observed` of `p` labelled species.
///
/// Each returned vector is an ordered composition of `n - Σ observed` into
/// `j - p` positive parts; the law depends on the model only through `σ`.
pub fn unobserved_frequency_law<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    n: usize,
    j: usize,
    observed: &[usize],
) -> Result<Vec<(Vec<usize>, T)>> {
    let p = observed.len();
    let used: usize = observed.iter().sum();
    if p > j || used + (j - p) > n || observed.contains(&0) || (p == j && used != n) {
        return Err(Error::Domain(format!(
            "no partition of {n} into {j} blocks has observed frequencies {observed:?}"
        )));
    }
    let (rest_n, rest_j) = (n - used, j - p);
    let sigma = model.sigma();
    let table = gfc_table(sigma, &T::zero(), rest_n, rest_j);
    let norm = table.normalized(rest_n, rest_j) * factorial::<T>(rest_j);
    let out = compositions(rest_n, rest_j)
        .into_iter()
        .map(|c| {
            let w = multinomial::<T>(rest_n, &c).expect("parts sum to total")
                * block_product(sigma, &c)
                / &norm;
            (c, w)
        })
        .collect();
    Ok(out)
}
