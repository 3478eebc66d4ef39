use std::collections::HashMap;

use crate::backward::ConditioningInfo;
use crate::models::{compositions, eppf, integer_partitions, EwensPitman, PartitionSummary};
use crate::numerics::{factorial, multinomial, Scalar};
use crate::{Error, Result};

use super::enumerate::{complete_oracle, OracleLaws};

/// Largest initial sample for exact mixtures over unknown frequencies.
pub const MAX_MIXTURE_N: usize = 10;

/// Exact oracle laws under any conditioning, by enumerating the unknown
/// frequencies with weights read straight off the EPPF.
pub fn oracle_laws<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    m: usize,
) -> Result<OracleLaws<T>> {
    match info {
        ConditioningInfo::Complete(s) => complete_oracle(ep, s, m),
        ConditioningInfo::Incomplete { n, j } => incomplete_oracle(ep, *n, *j, m),
        ConditioningInfo::AlmostComplete { n, j, observed } => {
            almost_complete_oracle(ep, *n, *j, observed, m)
        }
    }
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_MIXTURE_N {
        return Err(Error::Domain(format!(
            "exact mixture oracle is limited to n <= {MAX_MIXTURE_N}, got {n}"
        )));
    }
    Ok(())
}

/// Law of the block shape given `K_n = j`: each shape weighted by the
/// number of set partitions of that shape times its EPPF, normalized.
pub fn shape_law<T: Scalar>(ep: &EwensPitman<T>, n: usize, j: usize) -> Result<Vec<(PartitionSummary, T)>> {
    guard(n)?;
    ConditioningInfo::incomplete(n, j)?;
    let mut law = Vec::new();
    for shape in integer_partitions(n, j) {
        let summary = PartitionSummary::new(shape.clone())?;
        let repeats = summary
            .mults()
            .values()
            .fold(T::one(), |acc, &c| acc * factorial::<T>(c));
        let w = multinomial::<T>(n, &shape)? / repeats * eppf(ep, &shape);
        law.push((summary, w));
    }
    let total = law.iter().fold(T::zero(), |acc, (_, w)| acc + w);
    if total.is_zero() {
        return Err(Error::Domain("conditioning event has probability zero".into()));
    }
    for (_, w) in law.iter_mut() {
        *w = w.clone() / &total;
    }
    Ok(law)
}

/// Given only `K_n = j`: the complete oracle mixed over [`shape_law`].
pub fn incomplete_oracle<T: Scalar>(ep: &EwensPitman<T>, n: usize, j: usize, m: usize) -> Result<OracleLaws<T>> {
    let mut parts = Vec::new();
    for (summary, w) in shape_law(ep, n, j)? {
        parts.push((w, complete_oracle(ep, &summary, m)?));
    }
    normalize_and_mix(parts)
}

/// Given `K_n = j` and the frequencies of some labelled species: mixes over
/// the remaining frequencies, each ordered completion weighted by
/// `n! / ∏ n_i! ·` EPPF.
pub fn almost_complete_oracle<T: Scalar>(
    ep: &EwensPitman<T>,
    n: usize,
    j: usize,
    observed: &[usize],
    m: usize,
) -> Result<OracleLaws<T>> {
    guard(n)?;
    ConditioningInfo::almost_complete(n, j, observed.to_vec())?;
    let rest_n = n - observed.iter().sum::<usize>();
    let rest_j = j - observed.len();
    let mut cache: HashMap<PartitionSummary, OracleLaws<T>> = HashMap::new();
    let mut parts = Vec::new();
    for tail in compositions(rest_n, rest_j) {
        let mut full = observed.to_vec();
        full.extend(tail);
        let w = multinomial::<T>(n, &full)? * eppf(ep, &full);
        let summary = PartitionSummary::new(full)?;
        let laws = match cache.get(&summary) {
            Some(l) => l.clone(),
            None => {
                let l = complete_oracle(ep, &summary, m)?;
                cache.insert(summary, l.clone());
                l
            }
        };
        parts.push((w, laws));
    }
    normalize_and_mix(parts)
}

fn normalize_and_mix<T: Scalar>(mut parts: Vec<(T, OracleLaws<T>)>) -> Result<OracleLaws<T>> {
    let total = parts.iter().fold(T::zero(), |acc, (w, _)| acc + w);
    if parts.is_empty() || total.is_zero() {
        return Err(Error::Domain("conditioning event has probability zero".into()));
    }
    for (w, _) in parts.iter_mut() {
        *w = w.clone() / &total;
    }
    Ok(OracleLaws::mix(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn all_singletons_is_complete() {
        let ep = EwensPitman::new(q(1, 2), q(1, 1)).unwrap();
        let s = PartitionSummary::new(vec![1; 5]).unwrap();
        assert_eq!(
            incomplete_oracle(&ep, 5, 5, 3).unwrap(),
            complete_oracle(&ep, &s, 3).unwrap()
        );
    }

    #[test]
    fn fully_observed_is_complete() {
        let ep = EwensPitman::new(q(1, 4), q(2, 1)).unwrap();
        let s = PartitionSummary::new(vec![3, 2, 1]).unwrap();
        assert_eq!(
            almost_complete_oracle(&ep, 6, 3, &[1, 3, 2], 3).unwrap(),
            complete_oracle(&ep, &s, 3).unwrap()
        );
        assert!(incomplete_oracle(&ep, 11, 3, 2).is_err());
    }

    #[test]
    fn nothing_observed_is_incomplete() {
        let ep = EwensPitman::new(q(1, 2), q(1, 1)).unwrap();
        assert_eq!(
            almost_complete_oracle(&ep, 7, 3, &[], 3).unwrap(),
            incomplete_oracle(&ep, 7, 3, 3).unwrap()
        );
    }
}
