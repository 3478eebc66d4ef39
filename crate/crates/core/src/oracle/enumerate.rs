use std::collections::HashMap;

use crate::models::{EwensPitman, GibbsModel, PartitionSummary, Pmf};
use crate::numerics::Scalar;
use crate::{Error, Result};

/// Largest additional sample the exhaustive oracle accepts.
pub const MAX_ENUMERATED_M: usize = 6;

/// How `m` further observations fall relative to the initial sample.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuationRecord {
    /// `S_i`: hits on each old species, in the summary's frequency order.
    pub old_hits: Vec<usize>,
    /// Sizes of the new blocks, decreasing.
    pub new_blocks: Vec<usize>,
    /// Observations that are not old species.
    pub l_new: usize,
}

impl ContinuationRecord {
    fn start(j: usize) -> Self {
        ContinuationRecord {
            old_hits: vec![0; j],
            new_blocks: Vec::new(),
            l_new: 0,
        }
    }

    pub fn reobserved(&self) -> usize {
        self.old_hits.iter().filter(|&&s| s > 0).count()
    }

    pub fn reobserved_exactly(&self, l: usize) -> usize {
        self.old_hits.iter().filter(|&&s| s == l).count()
    }

    pub fn new_species(&self) -> usize {
        self.new_blocks.len()
    }
}

fn guard(m: usize) -> Result<()> {
    if m > MAX_ENUMERATED_M {
        return Err(Error::Domain(format!(
            "exhaustive enumeration is limited to m <= {MAX_ENUMERATED_M}, got {m}"
        )));
    }
    Ok(())
}

/// Exact joint law of the continuation given the initial partition, built
/// one observation at a time from the Ewens–Pitman predictive rule:
/// old block `i` with weight `n_i + S_i - σ`, new block `b` with `M_b - σ`,
/// a fresh species with `θ + (j + k)σ`, all over `θ + n + t`.
pub fn enumerate_continuations<T: Scalar>(
    ep: &EwensPitman<T>,
    summary: &PartitionSummary,
    m: usize,
) -> Result<Vec<(ContinuationRecord, T)>> {
    guard(m)?;
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let freqs = summary.freqs();
    let j = freqs.len();
    let mut states: HashMap<ContinuationRecord, T> = HashMap::new();
    states.insert(ContinuationRecord::start(j), T::one());
    for t in 0..m {
        let total = theta.clone() + T::from_usize(summary.n() + t);
        let mut next: HashMap<ContinuationRecord, T> = HashMap::new();
        let mut push = |rec: ContinuationRecord, p: T| {
            if p.is_zero() {
                return;
            }
            let cell = next.entry(rec).or_insert_with(T::zero);
            *cell = cell.clone() + p;
        };
        for (rec, p) in &states {
            for i in 0..j {
                let w = T::from_usize(freqs[i] + rec.old_hits[i]) - sigma;
                let mut r = rec.clone();
                r.old_hits[i] += 1;
                push(r, p.clone() * w / &total);
            }
            for b in 0..rec.new_blocks.len() {
                let w = T::from_usize(rec.new_blocks[b]) - sigma;
                let mut r = rec.clone();
                r.new_blocks[b] += 1;
                r.new_blocks.sort_unstable_by(|a, b| b.cmp(a));
                r.l_new += 1;
                push(r, p.clone() * w / &total);
            }
            let w = theta.clone() + sigma.clone() * T::from_usize(j + rec.new_blocks.len());
            let mut r = rec.clone();
            r.new_blocks.push(1);
            r.l_new += 1;
            push(r, p.clone() * w / &total);
        }
        states = next;
    }
    let mut out: Vec<_> = states.into_iter().collect();
    out.sort_by(|a, b| a.0.old_hits.cmp(&b.0.old_hits).then(a.0.new_blocks.cmp(&b.0.new_blocks)));
    Ok(out)
}

/// Species of one further observation: an old species by index, or the
/// `k`-th new species in order of first appearance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Old(usize),
    New(usize),
}

/// Relabels new species by order of first appearance.
pub fn canonical_sequence(seq: &[Label]) -> Vec<Label> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    seq.iter()
        .map(|l| match l {
            Label::Old(i) => Label::Old(*i),
            Label::New(k) => {
                let next = map.len();
                Label::New(*map.entry(*k).or_insert(next))
            }
        })
        .collect()
}

/// Probability of every label sequence of length `m`, without merging
/// histories. Exponential; for checking exchangeability on tiny cases.
pub fn enumerate_sequences<T: Scalar>(
    ep: &EwensPitman<T>,
    summary: &PartitionSummary,
    m: usize,
) -> Result<Vec<(Vec<Label>, T)>> {
    guard(m)?;
    let (sigma, theta) = (ep.sigma(), ep.theta());
    let freqs = summary.freqs();
    let j = freqs.len();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Label>, Vec<usize>, Vec<usize>, T)> =
        vec![(Vec::new(), freqs.to_vec(), Vec::new(), T::one())];
    while let Some((seq, old, new, p)) = stack.pop() {
        let t = seq.len();
        if t == m {
            out.push((seq, p));
            continue;
        }
        let total = theta.clone() + T::from_usize(summary.n() + t);
        for i in 0..j {
            let (mut s, mut o) = (seq.clone(), old.clone());
            let w = T::from_usize(o[i]) - sigma;
            o[i] += 1;
            s.push(Label::Old(i));
            stack.push((s, o, new.clone(), p.clone() * w / &total));
        }
        for b in 0..new.len() {
            let (mut s, mut nb) = (seq.clone(), new.clone());
            let w = T::from_usize(nb[b]) - sigma;
            nb[b] += 1;
            s.push(Label::New(b));
            stack.push((s, old.clone(), nb, p.clone() * w / &total));
        }
        let w = theta.clone() + sigma.clone() * T::from_usize(j + new.len());
        let (mut s, mut nb) = (seq.clone(), new.clone());
        s.push(Label::New(nb.len()));
        nb.push(1);
        stack.push((s, old.clone(), nb, p * w / &total));
    }
    Ok(out)
}

/// Exact laws of the three statistics under one weighted record list.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleLaws<T> {
    /// Law of the number of old species seen again, on `0..=j`.
    pub reobserved: Pmf<T>,
    /// Entry `l`: law of the number of old species seen exactly `l` times.
    pub by_frequency: Vec<Pmf<T>>,
    /// Law of the number of new species, on `0..=m`.
    pub new_species: Pmf<T>,
}

impl<T: Scalar> OracleLaws<T> {
    pub fn from_records(records: &[(ContinuationRecord, T)], j: usize, m: usize) -> Self {
        let dense = |f: &dyn Fn(&ContinuationRecord) -> usize, len: usize| {
            let mut v = vec![T::zero(); len + 1];
            for (r, p) in records {
                let x = f(r);
                v[x] = v[x].clone() + p;
            }
            Pmf::from_range(0, v)
        };
        OracleLaws {
            reobserved: dense(&|r| r.reobserved(), j),
            by_frequency: (0..=m).map(|l| dense(&|r| r.reobserved_exactly(l), j)).collect(),
            new_species: dense(&|r| r.new_species(), m),
        }
    }

    /// Law of the re-observation statistic selected by `l`.
    pub fn old(&self, l: Option<usize>) -> Pmf<T> {
        match l {
            None => self.reobserved.clone(),
            Some(l) if l < self.by_frequency.len() => self.by_frequency[l].clone(),
            Some(_) => Pmf::point_mass(0),
        }
    }

    /// `Σ w_i · laws_i`, all laws sharing `j` and `m`.
    pub fn mix(parts: &[(T, OracleLaws<T>)]) -> Self {
        let combine = |get: &dyn Fn(&OracleLaws<T>) -> &Pmf<T>| {
            let len = get(&parts[0].1).len();
            let mut v = vec![T::zero(); len];
            for (w, laws) in parts {
                for (x, p) in get(laws).iter() {
                    v[x] = v[x].clone() + w.clone() * p;
                }
            }
            Pmf::from_range(0, v)
        };
        let m = parts[0].1.by_frequency.len();
        OracleLaws {
            reobserved: combine(&|o| &o.reobserved),
            by_frequency: (0..m).map(|l| combine(&|o| &o.by_frequency[l])).collect(),
            new_species: combine(&|o| &o.new_species),
        }
    }
}

/// Oracle laws for a known initial partition.
pub fn complete_oracle<T: Scalar>(
    ep: &EwensPitman<T>,
    summary: &PartitionSummary,
    m: usize,
) -> Result<OracleLaws<T>> {
    let records = enumerate_continuations(ep, summary, m)?;
    Ok(OracleLaws::from_records(&records, summary.j(), m))
}
