use lookback::backward::{
    ep_old_estimator_curve, new_species_pmf, old_estimator, old_pmf, ConditioningInfo,
};
use lookback::models::{EwensPitman, PartitionSummary};
use lookback::{Exact, Mp128, Scalar};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn q(a: i64, b: i64) -> Exact {
    Exact::new(BigInt::from(a), BigInt::from(b))
}

fn freqs() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..6, 1..6)
}

fn params() -> impl Strategy<Value = (Exact, Exact)> {
    (0i64..10, 1i64..40).prop_map(|(s, t)| (q(s, 10), q(t, 4)))
}

fn infos(f: &[usize], p: usize) -> Vec<ConditioningInfo> {
    let s = PartitionSummary::new(f.to_vec()).unwrap();
    let (n, j) = (s.n(), s.j());
    let observed = s.freqs()[..p.min(j)].to_vec();
    vec![
        ConditioningInfo::complete(s),
        ConditioningInfo::incomplete(n, j).unwrap(),
        ConditioningInfo::almost_complete(n, j, observed).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_laws_are_distributions(f in freqs(), (s, t) in params(), m in 0usize..7, p in 0usize..6, l in prop::option::of(0usize..4)) {
        let ep = EwensPitman::new(s, t).unwrap();
        for info in infos(&f, p) {
            let law = old_pmf(&ep, &info, m, l).unwrap();
            prop_assert_eq!(law.total(), Exact::one());
            prop_assert!(law.probs().iter().all(|x| *x >= q(0, 1)));
            prop_assert!(law.support().iter().all(|&x| x <= info.j()));
            prop_assert_eq!(old_estimator(&ep, &info, m, l).unwrap(), law.mean());
            prop_assert_eq!(new_species_pmf(&ep, &info, m).unwrap().total(), Exact::one());
        }
    }

    #[test]
    fn seen_and_unseen_are_complementary(f in freqs(), (s, t) in params(), m in 0usize..7, p in 0usize..6) {
        let ep = EwensPitman::new(s, t).unwrap();
        for info in infos(&f, p) {
            let seen = old_pmf(&ep, &info, m, None).unwrap();
            let unseen = old_pmf(&ep, &info, m, Some(0)).unwrap();
            for x in 0..=info.j() {
                prop_assert_eq!(seen.prob(x), unseen.prob(info.j() - x));
            }
        }
    }

    #[test]
    fn frequency_laws_never_exceed_total(f in freqs(), (s, t) in params(), m in 1usize..7, l in 1usize..4) {
        // Species seen exactly l times are among those seen at least once.
        let ep = EwensPitman::new(s, t).unwrap();
        let info = infos(&f, 0).remove(0);
        let any = old_estimator(&ep, &info, m, None).unwrap();
        let exact_l = old_estimator(&ep, &info, m, Some(l)).unwrap();
        prop_assert!(exact_l <= any);
    }

    #[test]
    fn estimator_curves_increase_to_j(f in prop::collection::vec(1usize..30, 1..25), s in 0i64..10, t in 1i64..200) {
        let ep = EwensPitman::new(Mp128::from_rational(&q(s, 10)), Mp128::from_rational(&q(t, 2))).unwrap();
        let grid: Vec<usize> = (0..=600).step_by(25).collect();
        for info in infos(&f, 0).into_iter().take(2) {
            let curve = ep_old_estimator_curve(&ep, &info, &grid).unwrap().unwrap();
            let j = info.j() as f64;
            let v: Vec<f64> = curve.iter().map(|x| x.to_f64()).collect();
            prop_assert_eq!(v[0], 0.0);
            prop_assert!(v.windows(2).all(|w| w[1] >= w[0]), "{:?}", v);
            prop_assert!(v.iter().all(|&x| x <= j + 1e-9));
        }
    }
}
