//! Looking-backward laws: how many of the species already seen show up
//! again in a further sample, and how many new ones appear.

mod closed_form;
mod info;
mod inversion;
mod moments;
mod subset_sum;

pub use closed_form::{
    ep_freq_pmf, ep_new_species_curve, ep_new_species_estimator, ep_old_estimator,
    ep_old_estimator_curve, ep_old_pmf,
};
pub use info::ConditioningInfo;
pub use inversion::moment_inversion;
pub use moments::{binomial_moments, old_moments, support_max, FactorialMoments};
pub use subset_sum::{subset_sum_table, SubsetSumTable};

use crate::gfc::gfc_table;
use crate::models::{GibbsModel, Pmf};
use crate::numerics::Scalar;
use crate::Result;

/// Law of the number of new species among `m` further observations. It
/// depends on the conditioning only through `(n, j)`.
pub fn new_species_pmf<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
) -> Result<Pmf<T>> {
    let (n, j) = (info.n(), info.j());
    if m == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let sigma = model.sigma();
    let gamma = sigma.clone() * T::from_usize(j) - T::from_usize(n);
    let table = gfc_table(sigma, &gamma, m, m);
    let probs = (0..=m)
        .map(|k| {
            let c = table.normalized(m, k);
            if c.is_zero() {
                c
            } else {
                model.weight_ratio(n, j, n + m, j + k) * c
            }
        })
        .collect();
    Pmf::from_range(0, probs).cleaned()
}

/// Expected number of new species among `m` further observations.
pub fn new_species_estimator<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
) -> Result<T> {
    match model.ewens_pitman() {
        Some(ep) => Ok(ep_new_species_curve(ep, info.n(), info.j(), &[m])?.remove(0)),
        None => Ok(new_species_pmf(model, info, m)?.mean()),
    }
}

/// Law of the number of old species re-observed among `m` further
/// observations (`l = None`) or re-observed exactly `l` times.
///
/// Ewens–Pitman models with complete or incomplete information use the
/// explicit alternating sums; every other case inverts [`old_moments`].
pub fn old_pmf<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
    l: Option<usize>,
) -> Result<Pmf<T>> {
    if l == Some(0) {
        return Ok(old_pmf(model, info, m, None)?.reflect(info.j()));
    }
    if m == 0 || l.is_some_and(|l| l > m) {
        return Ok(Pmf::point_mass(0));
    }
    if let Some(ep) = model.ewens_pitman() {
        let fast = match l {
            None => ep_old_pmf(ep, info, m)?,
            Some(l) => ep_freq_pmf(ep, info, m, l)?,
        };
        if let Some(p) = fast {
            return Ok(p);
        }
    }
    old_pmf_via_moments(model, info, m, l)
}

/// [`old_pmf`] through factorial-moment inversion, for any model.
pub fn old_pmf_via_moments<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
    l: Option<usize>,
) -> Result<Pmf<T>> {
    if l == Some(0) {
        return Ok(old_pmf_via_moments(model, info, m, None)?.reflect(info.j()));
    }
    let top = support_max(info.j(), m, l);
    moment_inversion(&old_moments(model, info, m, top, l)?)
}

/// Expected number of old species re-observed (`l = None`) or re-observed
/// exactly `l` times.
pub fn old_estimator<T: Scalar, M: GibbsModel<T> + ?Sized>(
    model: &M,
    info: &ConditioningInfo,
    m: usize,
    l: Option<usize>,
) -> Result<T> {
    if let Some(ep) = model.ewens_pitman() {
        if let Some(v) = ep_old_estimator(ep, info, m, l)? {
            return Ok(v);
        }
    }
    Ok(old_moments(model, info, m, 1, l)?.get(1))
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

    fn infos() -> Vec<ConditioningInfo> {
        vec![
            ConditioningInfo::complete(PartitionSummary::new(vec![3, 2, 1, 1]).unwrap()),
            ConditioningInfo::incomplete(7, 4).unwrap(),
            ConditioningInfo::almost_complete(7, 4, vec![2]).unwrap(),
        ]
    }

    #[test]
    fn closed_forms_match_general_path() {
        let ep = EwensPitman::new(q(1, 2), q(3, 2)).unwrap();
        let general = WeightsOnly(ep.clone());
        for info in infos() {
            for m in 0..=5 {
                for l in [None, Some(0), Some(1), Some(2)] {
                    let a = old_pmf(&ep, &info, m, l).unwrap();
                    let b = old_pmf(&general, &info, m, l).unwrap();
                    assert_eq!(a, b, "{info} m={m} l={l:?}");
                    assert_eq!(a.total(), q(1, 1));
                    let e = old_estimator(&ep, &info, m, l).unwrap();
                    assert_eq!(e, a.mean(), "{info} m={m} l={l:?}");
                    assert_eq!(e, old_estimator(&general, &info, m, l).unwrap());
                }
                let k = new_species_pmf(&ep, &info, m).unwrap();
                assert_eq!(k, new_species_pmf(&general, &info, m).unwrap());
                assert_eq!(k.total(), q(1, 1));
                assert_eq!(new_species_estimator(&ep, &info, m).unwrap(), k.mean());
            }
        }
    }

    #[test]
    fn support_and_degenerate_cases() {
        let ep = EwensPitman::new(q(1, 2), q(1, 1)).unwrap();
        let info = ConditioningInfo::complete(PartitionSummary::new(vec![3, 2, 1]).unwrap());
        assert_eq!(old_pmf(&ep, &info, 0, None).unwrap(), Pmf::point_mass(0));
        assert_eq!(old_pmf(&ep, &info, 2, Some(3)).unwrap(), Pmf::point_mass(0));
        assert_eq!(new_species_pmf(&ep, &info, 0).unwrap(), Pmf::point_mass(0));
        let p = old_pmf(&ep, &info, 2, None).unwrap();
        assert_eq!(p.support(), &[0, 1, 2]);
        assert!(p.probs().iter().all(|x| *x > q(0, 1)));
        let p = old_pmf(&ep, &info, 5, Some(2)).unwrap();
        assert_eq!(p.support(), &[0, 1, 2]);
        let p0 = old_pmf(&ep, &info, 2, Some(0)).unwrap();
        assert_eq!(p0.support(), &[1, 2, 3]);
    }

    #[test]
    fn frequencies_matter_for_old_species() {
        let ep = EwensPitman::new(q(1, 2), q(1, 1)).unwrap();
        let a = ConditioningInfo::complete(PartitionSummary::new(vec![4, 1]).unwrap());
        let b = ConditioningInfo::complete(PartitionSummary::new(vec![3, 2]).unwrap());
        assert_ne!(old_pmf(&ep, &a, 2, None).unwrap(), old_pmf(&ep, &b, 2, None).unwrap());
        assert_eq!(new_species_pmf(&ep, &a, 2).unwrap(), new_species_pmf(&ep, &b, 2).unwrap());
    }
}
