use std::collections::BTreeMap;

use crate::gfc::gfc_table;
use crate::models::GibbsModel;
use crate::numerics::{
    binomial, binomial_row, factorial, guarded_sum, repeated_multinomial, rising_factorial, Scalar,
};
use crate::Result;

use super::info::ConditioningInfo;
use super::subset_sum::SubsetSumTable;

/// `E[(X)_{r↓}]` for `r = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorialMoments<T> {
    values: Vec<T>,
}

impl<T: Scalar> FactorialMoments<T> {
    pub fn new(values: Vec<T>) -> Self {
        FactorialMoments { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Zero beyond the stored range.
    pub fn get(&self, r: usize) -> T {
        self.values.get(r).cloned().unwrap_or_else(T::zero)
    }

    pub fn r_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// For each `r`, the pairs `(s, w)` where `w` is the expected weighted
/// number of `r`-sets of old species whose frequencies add up to `s`.
/// Each species in a set contributes `(n_c - σ)_{l↑}`, so `l = 0` counts.
type Profile<T> = Vec<BTreeMap<usize, T>>;

fn block_weight<T: Scalar>(sigma: &T, l: usize) -> impl Fn(usize) -> T + '_ {
    move |f| rising_factorial(&(T::from_usize(f) - sigma), l)
}

fn complete_profile<T: Scalar>(sigma: &T, freqs: &[usize], l: usize, r_max: usize) -> Profile<T> {
    let table = if l == 0 {
        SubsetSumTable::counts(freqs, r_max)
    } else {
        SubsetSumTable::weighted(freqs, r_max, block_weight(sigma, l))
    };
    (0..=table.max_v())
        .map(|r| table.row(r).map(|(s, w)| (s, w.clone())).collect())
        .collect()
}

/// Expectation of the complete profile over the frequencies of `j` blocks
/// holding `n` observations, which given `K_n = j` depend only on `σ`:
/// `((1-σ)_l)^r C(n,s) Ĉ(s,r;σ-l) Ĉ(n-s,j-r;σ) / Ĉ(n,j;σ)`.
fn incomplete_profile<T: Scalar>(sigma: &T, n: usize, j: usize, l: usize, r_max: usize) -> Profile<T> {
    if j == 0 {
        let mut row = BTreeMap::new();
        if n == 0 {
            row.insert(0, T::one());
        }
        return vec![row];
    }
    let r_max = r_max.min(j);
    let central = gfc_table(sigma, &T::zero(), n, j);
    let shifted_sigma = sigma.clone() - T::from_usize(l);
    let shifted = gfc_table(&shifted_sigma, &T::zero(), n, r_max);
    let binom: Vec<T> = binomial_row(n);
    let per_block = rising_factorial(&(T::one() - sigma), l);
    let norm = central.normalized(n, j);
    (0..=r_max)
        .map(|r| {
            let scale = per_block.powu(r) / &norm;
            (r..=n - (j - r))
                .filter_map(|s| {
                    let w = binom[s].clone()
                        * shifted.normalized(s, r)
                        * central.normalized(n - s, j - r);
                    (!w.is_zero()).then(|| (s, w * &scale))
                })
                .collect()
        })
        .collect()
}

fn convolve<T: Scalar>(a: &Profile<T>, b: &Profile<T>, r_max: usize) -> Profile<T> {
    let mut out: Profile<T> = vec![BTreeMap::new(); r_max + 1];
    for (v1, row1) in a.iter().enumerate() {
        for (v2, row2) in b.iter().enumerate() {
            if v1 + v2 > r_max {
                continue;
            }
            for (s1, w1) in row1 {
                for (s2, w2) in row2 {
                    let cell = out[v1 + v2].entry(s1 + s2).or_insert_with(T::zero);
                    *cell = cell.clone() + w1.clone() * w2;
                }
            }
        }
    }
    out
}

fn profile<T: Scalar>(sigma: &T, info: &ConditioningInfo, l: usize, r_max: usize) -> Profile<T> {
    match info {
        ConditioningInfo::Complete(s) => complete_profile(sigma, s.freqs(), l, r_max),
        ConditioningInfo::Incomplete { n, j } => incomplete_profile(sigma, *n, *j, l, r_max),
        ConditioningInfo::AlmostComplete { n, j, observed } => {
            let used: usize = observed.iter().sum();
            let seen = complete_profile(sigma, observed, l, r_max);
            let unseen = incomplete_profile(sigma, n - used, j - observed.len(), l, r_max);
            convolve(&seen, &unseen, r_max)
        }
    }
}

/// `E[C(R_l, r)]` for `r = 0..=r_max`, where `R_l` counts old species that
/// appear exactly `l` times among `m` further observations (`R_0`: species
/// not seen again).
pub fn binomial_moments<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
    l: usize,
    r_max: usize,
) -> Result<Vec<T>> {
    let (n, j) = (info.n(), info.j());
    let sigma = model.sigma();
    let prof = profile(sigma, info, l, r_max.min(j));
    (0..=r_max)
        .map(|r| {
            if r > j || r * l > m || r >= prof.len() {
                return Ok(T::zero());
            }
            let rest = m - r * l;
            let mult: T = repeated_multinomial(m, l, r);
            let shift = sigma.clone() * T::from_usize(j - r) - T::from_usize(n);
            let terms = prof[r].iter().map(|(s, w)| {
                let gamma = shift.clone() + T::from_usize(*s);
                w.clone() * model.predictive_tail(n, j, m, rest, &gamma)
            });
            Ok(guarded_sum(terms)? * mult)
        })
        .collect()
}

/// Largest value the re-observation count can take.
pub fn support_max(j: usize, m: usize, l: Option<usize>) -> usize {
    match l {
        None | Some(0) => j.min(m),
        Some(l) => j.min(m / l),
    }
}

/// Factorial moments `E[(R)_{r↓}]`, `r = 0..=r_max`, of the number of old
/// species re-observed among `m` further observations, or with `l` given,
/// of the number re-observed exactly `l` times.
pub fn old_moments<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
    r_max: usize,
    l: Option<usize>,
) -> Result<FactorialMoments<T>> {
    let j = info.j();
    let mut values = vec![T::zero(); r_max + 1];
    values[0] = T::one();
    if let Some(l) = l {
        let bound = if l == 0 { j } else { support_max(j, m, Some(l)) };
        let b = binomial_moments(model, info, m, l, r_max.min(bound))?;
        for (r, v) in b.into_iter().enumerate().skip(1) {
            values[r] = v * factorial::<T>(r);
        }
        return Ok(FactorialMoments::new(values));
    }
    let top = r_max.min(support_max(j, m, None));
    if top == 0 {
        return Ok(FactorialMoments::new(values));
    }
    // C(j - U, r) = Σ_v (-1)^v C(U, v) C(j - v, r - v) with U = j - R.
    let a = binomial_moments(model, info, m, 0, top)?;
    for r in 1..=top {
        let terms = (0..=r).map(|v| {
            let t = binomial::<T>(j - v, r - v).expect("r <= j") * &a[v];
            if v % 2 == 0 {
                t
            } else {
                -t
            }
        });
        values[r] = guarded_sum(terms)? * factorial::<T>(r);
    }
    Ok(FactorialMoments::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{EwensPitman, PartitionSummary, WeightsOnly};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn profiles_agree_at_extremes() {
        let s = q(1, 3);
        let freqs = [3, 2, 2, 1];
        let c = complete_profile(&s, &freqs, 2, 4);
        let a = profile(
            &s,
            &ConditioningInfo::almost_complete(8, 4, freqs.to_vec()).unwrap(),
            2,
            4,
        );
        assert_eq!(c, a);
        let i = incomplete_profile(&s, 8, 4, 1, 4);
        let a0 = profile(&s, &ConditioningInfo::almost_complete(8, 4, vec![]).unwrap(), 1, 4);
        assert_eq!(i, a0);
    }

    #[test]
    fn one_step_mean() {
        let (s, t) = (q(1, 2), q(3, 1));
        let m = EwensPitman::new(s.clone(), t.clone()).unwrap();
        let info = ConditioningInfo::complete(PartitionSummary::new(vec![4, 2, 1, 1]).unwrap());
        let mom = old_moments(&m, &info, 1, 1, None).unwrap();
        let expect = (q(8, 1) - q(4, 1) * &s) / (t + q(8, 1));
        assert_eq!(mom.get(1), expect);
        let general = old_moments(&WeightsOnly(m), &info, 1, 1, None).unwrap();
        assert_eq!(general.get(1), expect);
    }

    #[test]
    fn nothing_new_means_nothing_reobserved() {
        let m = EwensPitman::new(0.5f64, 2.0).unwrap();
        let info = ConditioningInfo::incomplete(9, 4).unwrap();
        let mom = old_moments(&m, &info, 0, 3, None).unwrap();
        assert_eq!(mom.values(), &[1.0, 0.0, 0.0, 0.0]);
        let mom = old_moments(&m, &info, 0, 3, Some(2)).unwrap();
        assert_eq!(mom.values(), &[1.0, 0.0, 0.0, 0.0]);
    }
}
