use lookback::backward::{new_species_pmf, old_pmf, old_pmf_via_moments, ConditioningInfo};
use lookback::models::{compositions, integer_partitions, EwensPitman, PartitionSummary, WeightsOnly};
use lookback::oracle::oracle_laws;
use lookback::Exact;
use num_rational::BigRational;

fn q(a: i64, b: i64) -> Exact {
    BigRational::new(a.into(), b.into())
}

fn infos(n: usize, j: usize) -> Vec<ConditioningInfo> {
    let mut out = vec![ConditioningInfo::incomplete(n, j).unwrap()];
    for shape in integer_partitions(n, j) {
        out.push(ConditioningInfo::complete(PartitionSummary::new(shape).unwrap()));
    }
    for p in 1..j {
        for obs in compositions(n - (j - p), p).into_iter().take(3) {
            if let Ok(info) = ConditioningInfo::almost_complete(n, j, obs) {
                out.push(info);
            }
        }
    }
    out
}

#[test]
fn analytic_laws_match_enumeration_small() {
    let ep = EwensPitman::new(q(1, 3), q(3, 2)).unwrap();
    for n in 1..=6 {
        for j in 1..=n.min(3) {
            for info in infos(n, j) {
                for m in 0..=3 {
                    let oracle = oracle_laws(&ep, &info, m).unwrap();
                    for l in [None, Some(0), Some(1), Some(2)] {
                        let a = old_pmf(&ep, &info, m, l).unwrap();
                        let o = oracle.old(l);
                        for x in 0..=j {
                            assert_eq!(a.prob(x), o.prob(x), "{info} m={m} l={l:?} x={x}");
                        }
                        let g = old_pmf_via_moments(&WeightsOnly(ep.clone()), &info, m, l).unwrap();
                        assert_eq!(g, a, "{info} m={m} l={l:?}");
                    }
                    let k = new_species_pmf(&ep, &info, m).unwrap();
                    for x in 0..=m {
                        assert_eq!(k.prob(x), oracle.new_species.prob(x));
                    }
                }
            }
        }
    }
}
