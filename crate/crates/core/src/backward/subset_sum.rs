use num_bigint::{BigInt, BigUint};

use crate::numerics::Scalar;

/// `table[v][s]`: number of `v`-element sub-multisets of the frequencies
/// with sum `s`, or the sum of a per-item weight product over them.
#[derive(Clone, Debug)]
pub struct SubsetSumTable<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> SubsetSumTable<T> {
    /// Plain counts for every `v ≤ max_v`.
    pub fn counts(freqs: &[usize], max_v: usize) -> Self {
        let total: usize = freqs.iter().sum();
        let max_v = max_v.min(freqs.len());
        let mut rows = vec![vec![BigUint::default(); total + 1]; max_v + 1];
        rows[0][0] = BigUint::from(1u32);
        let mut seen = 0;
        for &f in freqs {
            seen += f;
            for v in (1..=max_v).rev() {
                for s in (f..=seen).rev() {
                    if rows[v - 1][s - f] != BigUint::default() {
                        let add = rows[v - 1][s - f].clone();
                        rows[v][s] += add;
                    }
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|c| T::from_bigint(&BigInt::from(c))).collect())
            .collect();
        SubsetSumTable { rows }
    }

    /// Each chosen item contributes the factor `weight(frequency)`.
    pub fn weighted(freqs: &[usize], max_v: usize, weight: impl Fn(usize) -> T) -> Self {
        let total: usize = freqs.iter().sum();
        let max_v = max_v.min(freqs.len());
        let mut rows = vec![vec![T::zero(); total + 1]; max_v + 1];
        rows[0][0] = T::one();
        let mut seen = 0;
        for &f in freqs {
            let w = weight(f);
            seen += f;
            for v in (1..=max_v).rev() {
                for s in (f..=seen).rev() {
                    if !rows[v - 1][s - f].is_zero() {
                        let add = rows[v - 1][s - f].clone() * &w;
                        rows[v][s] = rows[v][s].clone() + add;
                    }
                }
            }
        }
        SubsetSumTable { rows }
    }

    pub fn max_v(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, v: usize, s: usize) -> T {
        self.rows
            .get(v)
            .and_then(|r| r.get(s))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// Nonzero `(s, value)` pairs of row `v`.
    pub fn row(&self, v: usize) -> impl Iterator<Item = (usize, &T)> {
        self.rows
            .get(v)
            .into_iter()
            .flat_map(|r| r.iter().enumerate())
            .filter(|(_, c)| !c.is_zero())
    }
}

/// Subset-sum counts over all `v`.
pub fn subset_sum_table<T: Scalar>(freqs: &[usize]) -> SubsetSumTable<T> {
    SubsetSumTable::counts(freqs, freqs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::binomial;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn pair_of_singletons() {
        let t: SubsetSumTable<f64> = subset_sum_table(&[1, 1]);
        assert_eq!(t.get(0, 0), 1.0);
        assert_eq!(t.get(1, 1), 2.0);
        assert_eq!(t.get(2, 2), 1.0);
        assert_eq!(t.get(2, 1), 0.0);
    }

    fn brute(freqs: &[usize], weight: impl Fn(usize) -> f64) -> Vec<Vec<f64>> {
        let total: usize = freqs.iter().sum();
        let j = freqs.len();
        let mut out = vec![vec![0.0; total + 1]; j + 1];
        for mask in 0u32..(1 << j) {
            let items: Vec<usize> = (0..j).filter(|i| mask >> i & 1 == 1).map(|i| freqs[i]).collect();
            let s = items.iter().sum::<usize>();
            out[items.len()][s] += items.iter().map(|&f| weight(f)).product::<f64>();
        }
        out
    }

    proptest! {
        #[test]
        fn rows_sum_to_binomials(freqs in prop::collection::vec(1usize..8, 1..12)) {
            let t: SubsetSumTable<BigRational> = subset_sum_table(&freqs);
            for v in 0..=freqs.len() {
                let total: BigRational = t.row(v).map(|(_, c)| c.clone()).sum();
                prop_assert_eq!(total, binomial::<BigRational>(freqs.len(), v).unwrap());
            }
        }

        #[test]
        fn matches_enumeration(freqs in prop::collection::vec(1usize..6, 1..10)) {
            let t: SubsetSumTable<f64> = subset_sum_table(&freqs);
            let w: SubsetSumTable<f64> = SubsetSumTable::weighted(&freqs, freqs.len(), |f| f as f64 - 0.5);
            let b = brute(&freqs, |_| 1.0);
            let bw = brute(&freqs, |f| f as f64 - 0.5);
            for v in 0..=freqs.len() {
                for s in 0..b[v].len() {
                    prop_assert_eq!(t.get(v, s), b[v][s]);
                    prop_assert!((w.get(v, s) - bw[v][s]).abs() <= 1e-9 * bw[v][s].abs().max(1.0));
                }
            }
        }
    }
}
