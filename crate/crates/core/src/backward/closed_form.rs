//! Ewens–Pitman specializations written out term by term. They do not use
//! the generic tail machinery and serve both as fast paths and as an
//! independent check on it.

use crate::gfc::gfc_table;
use crate::models::{EwensPitman, GibbsModel, Pmf};
use crate::numerics::{
    binomial, binomial_row, check_cancellation, guarded_sum, repeated_multinomial,
    rising_factorial, Scalar,
};
use crate::{Error, Result};

use super::info::ConditioningInfo;
use super::moments::support_max;
use super::subset_sum::SubsetSumTable;

/// `(a)_{k↑} / (b)_{k↑}` as a product of ratios.
fn rising_ratio<T: Scalar>(a: &T, b: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, t| {
        let t = T::from_usize(t);
        acc * (a.clone() + &t) / (b.clone() + t)
    })
}

fn alternate<T: Scalar>(t: T, odd: bool) -> T {
    if odd {
        -t
    } else {
        t
    }
}

/// Weights `C(n,s) Ĉ(s,1;σ-l) Ĉ(n-s,j-1;σ) / Ĉ(n,j;σ)` for `s = 1..=n-j+1`:
/// the expected number of blocks of size `s`, tilted by `(s-σ)_l / (1-σ)_l`.
fn block_size_weights<T: Scalar>(sigma: &T, n: usize, j: usize, l: usize) -> Vec<(usize, T)> {
    let central = gfc_table(sigma, &T::zero(), n, j);
    let binom: Vec<T> = binomial_row(n);
    let base = T::one() - sigma + T::from_usize(l);
    let norm = central.normalized(n, j);
    (1..=n - j + 1)
        .map(|s| {
            let w = binom[s].clone() * rising_factorial(&base, s - 1) * central.normalized(n - s, j - 1)
                / &norm;
            (s, w)
        })
        .collect()
}

/// Law of the number of old species re-observed, complete or incomplete
/// information; `None` for almost-complete information.
pub fn ep_old_pmf<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    m: usize,
) -> Result<Option<Pmf<T>>> {
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let (n, j) = (info.n(), info.j());
    let big_n = theta.clone() + T::from_usize(n);
    // inner[v]: Σ over v-sets of old species of (θ + n - s + vσ)_m, in
    // expectation over the frequencies when those are unknown.
    let inner: Vec<T> = match info {
        ConditioningInfo::Complete(summary) => {
            let c: SubsetSumTable<T> = SubsetSumTable::counts(summary.freqs(), j);
            (0..=j)
                .map(|v| {
                    let shift = big_n.clone() + sigma.clone() * T::from_usize(v);
                    c.row(v).fold(T::zero(), |acc, (s, cnt)| {
                        acc + cnt.clone() * rising_ratio(&(shift.clone() - T::from_usize(s)), &big_n, m)
                    })
                })
                .collect()
        }
        ConditioningInfo::Incomplete { .. } => {
            let central = gfc_table(sigma, &T::zero(), n, j);
            let binom: Vec<T> = binomial_row(n);
            let norm = central.normalized(n, j);
            (0..=j)
                .map(|v| {
                    let shift = big_n.clone() + sigma.clone() * T::from_usize(v);
                    (v..=n - (j - v)).fold(T::zero(), |acc, s| {
                        let w = central.normalized(s, v) * central.normalized(n - s, j - v);
                        if w.is_zero() {
                            return acc;
                        }
                        acc + binom[s].clone()
                            * w
                            * rising_ratio(&(shift.clone() - T::from_usize(s)), &big_n, m)
                    }) / &norm
                })
                .collect()
        }
        ConditioningInfo::AlmostComplete { .. } => return Ok(None),
    };
    let top = support_max(j, m, None);
    let probs = (0..=top)
        .map(|x| {
            guarded_sum((j - x..=j).map(|v| {
                let t = binomial::<T>(v, j - x).expect("j-x <= v") * &inner[v];
                alternate(t, (j + v + x) % 2 == 1)
            }))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Some(Pmf::from_range(0, probs).cleaned()?))
}

/// Law of the number of old species re-observed exactly `l ≥ 1` times.
pub fn ep_freq_pmf<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    m: usize,
    l: usize,
) -> Result<Option<Pmf<T>>> {
    if l == 0 {
        return Err(Error::Domain("ep_freq_pmf needs l >= 1".into()));
    }
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let (n, j) = (info.n(), info.j());
    let top = support_max(j, m, Some(l));
    let big_n = theta.clone() + T::from_usize(n);
    let ratio = |s: usize, y: usize| {
        let a = big_n.clone() - T::from_usize(s) + sigma.clone() * T::from_usize(y);
        // (a)_{m-yl} / (θ+n)_m
        rising_ratio(&a, &big_n, m - y * l) / rising_factorial(&(big_n.clone() + T::from_usize(m - y * l)), y * l)
    };
    let inner: Vec<T> = match info {
        ConditioningInfo::Complete(summary) => {
            let w = SubsetSumTable::weighted(summary.freqs(), top, |f| {
                rising_factorial(&(T::from_usize(f) - sigma), l)
            });
            (0..=top)
                .map(|y| {
                    let mult: T = repeated_multinomial(m, l, y);
                    w.row(y).fold(T::zero(), |acc, (s, c)| acc + c.clone() * ratio(s, y)) * mult
                })
                .collect()
        }
        ConditioningInfo::Incomplete { .. } => {
            let central = gfc_table(sigma, &T::zero(), n, j);
            let shifted = gfc_table(&(sigma.clone() - T::from_usize(l)), &T::zero(), n, top);
            let binom: Vec<T> = binomial_row(n);
            let per_block = rising_factorial(&(T::one() - sigma), l);
            let norm = central.normalized(n, j);
            (0..=top)
                .map(|y| {
                    let mult: T = repeated_multinomial(m, l, y);
                    let sum = (y..=n - (j - y)).fold(T::zero(), |acc, s| {
                        let w = shifted.normalized(s, y) * central.normalized(n - s, j - y);
                        if w.is_zero() {
                            return acc;
                        }
                        acc + binom[s].clone() * w * ratio(s, y)
                    });
                    sum * per_block.powu(y) * mult / &norm
                })
                .collect()
        }
        ConditioningInfo::AlmostComplete { .. } => return Ok(None),
    };
    let probs = (0..=top)
        .map(|x| {
            guarded_sum((x..=top).map(|y| {
                let t = binomial::<T>(y, x).expect("x <= y") * &inner[y];
                alternate(t, (y - x) % 2 == 1)
            }))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Some(Pmf::from_range(0, probs).cleaned()?))
}

/// Terms `(w, b)` with `E[R_0] = Σ w (b)_{m↑} / (θ+n)_{m↑}`.
fn unseen_terms<T: Scalar>(ep: &EwensPitman<T>, info: &ConditioningInfo) -> Option<Vec<(T, T)>> {
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let n = info.n();
    let base = |i: usize| theta.clone() + T::from_usize(n) - T::from_usize(i) + sigma;
    match info {
        ConditioningInfo::Complete(summary) => Some(
            summary
                .mults()
                .into_iter()
                .map(|(i, mi)| (T::from_usize(mi), base(i)))
                .collect(),
        ),
        ConditioningInfo::Incomplete { n, j } => Some(
            block_size_weights(sigma, *n, *j, 0)
                .into_iter()
                .map(|(s, w)| (w, base(s)))
                .collect(),
        ),
        ConditioningInfo::AlmostComplete { .. } => None,
    }
}

/// Estimator of the number of old species re-observed (`l = None`), or
/// re-observed exactly `l` times. `None` for almost-complete information.
pub fn ep_old_estimator<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    m: usize,
    l: Option<usize>,
) -> Result<Option<T>> {
    match l {
        None => Ok(ep_old_estimator_curve(ep, info, &[m])?.map(|mut v| v.remove(0))),
        Some(0) => {
            let Some(terms) = unseen_terms(ep, info) else { return Ok(None) };
            let big_n = ep.theta().clone() + T::from_usize(info.n());
            Ok(Some(terms.iter().fold(T::zero(), |acc, (w, b)| {
                acc + w.clone() * rising_ratio(b, &big_n, m)
            })))
        }
        Some(l) => {
            if l > m {
                return Ok(Some(T::zero()));
            }
            let (sigma, theta) = (ep.sigma(), ep.theta());
            let n = info.n();
            let big_n = theta.clone() + T::from_usize(n);
            let tail = |i: usize| {
                let b = big_n.clone() - T::from_usize(i) + sigma;
                rising_ratio(&b, &big_n, m - l)
                    / rising_factorial(&(big_n.clone() + T::from_usize(m - l)), l)
            };
            let choose: T = binomial(m, l)?;
            let total = match info {
                ConditioningInfo::Complete(summary) => summary.mults().into_iter().fold(T::zero(), |acc, (i, mi)| {
                    acc + T::from_usize(mi) * rising_factorial(&(T::from_usize(i) - sigma), l) * tail(i)
                }),
                ConditioningInfo::Incomplete { n, j } => {
                    let per_block = rising_factorial(&(T::one() - sigma), l);
                    block_size_weights(sigma, *n, *j, l)
                        .into_iter()
                        .fold(T::zero(), |acc, (s, w)| acc + w * tail(s))
                        * per_block
                }
                ConditioningInfo::AlmostComplete { .. } => return Ok(None),
            };
            Ok(Some(total * choose))
        }
    }
}

fn check_grid(grid: &[usize]) -> Result<()> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("m-grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Estimator of the number of old species re-observed along an increasing
/// grid of additional sample sizes, `O(terms × max m)` overall.
pub fn ep_old_estimator_curve<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    grid: &[usize],
) -> Result<Option<Vec<T>>> {
    check_grid(grid)?;
    let Some(terms) = unseen_terms(ep, info) else { return Ok(None) };
    let j = T::from_usize(info.j());
    let big_n = ep.theta().clone() + T::from_usize(info.n());
    let mut ratios: Vec<T> = vec![T::one(); terms.len()];
    let mut out = Vec::with_capacity(grid.len());
    let mut step = 0;
    for &m in grid {
        while step < m {
            let t = T::from_usize(step);
            let den = big_n.clone() + &t;
            for (r, (_, b)) in ratios.iter_mut().zip(&terms) {
                *r = r.clone() * (b.clone() + &t) / &den;
            }
            step += 1;
        }
        if m == 0 {
            out.push(T::zero());
            continue;
        }
        let unseen = terms
            .iter()
            .zip(&ratios)
            .fold(T::zero(), |acc, ((w, _), r)| acc + w.clone() * r);
        let est = j.clone() - unseen;
        check_cancellation(&j, &est)?;
        out.push(est);
    }
    Ok(Some(out))
}

/// Expected number of new species along an increasing grid, from
/// `E_{m+1} = E_m (1 + σ/(θ+n+m)) + (θ+jσ)/(θ+n+m)`.
pub fn ep_new_species_curve<T: Scalar>(ep: &EwensPitman<T>, n: usize, j: usize, grid: &[usize]) -> Result<Vec<T>> {
    check_grid(grid)?;
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let fresh = theta.clone() + sigma.clone() * T::from_usize(j);
    let mut e = T::zero();
    let mut step = 0;
    let mut out = Vec::with_capacity(grid.len());
    for &m in grid {
        while step < m {
            let den = theta.clone() + T::from_usize(n + step);
            e = e.clone() + (e.clone() * sigma + &fresh) / den;
            step += 1;
        }
        out.push(e.clone());
    }
    Ok(out)
}

/// `(θ/σ + j) [(θ+n+σ)_{m↑} / (θ+n)_{m↑} - 1]`, or its `σ → 0` limit
/// `Σ_{i<m} θ/(θ+n+i)`.
pub fn ep_new_species_estimator<T: Scalar>(ep: &EwensPitman<T>, n: usize, j: usize, m: usize) -> T {
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let big_n = theta.clone() + T::from_usize(n);
    if sigma.is_zero() {
        return (0..m).fold(T::zero(), |acc, i| acc + theta.clone() / (big_n.clone() + T::from_usize(i)));
    }
    let lead = theta.clone() / sigma + T::from_usize(j);
    lead * (rising_ratio(&(big_n.clone() + sigma), &big_n, m) - T::one())
}
