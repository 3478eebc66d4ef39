use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::io::Read;

use crate::{Error, Result};

/// Sample size, number of distinct species and their frequencies.
///
/// Frequencies are kept sorted in decreasing order; every formula that
/// consumes them is symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSummary {
    n: usize,
    freqs: Vec<usize>,
}

impl PartitionSummary {
    pub fn new(mut freqs: Vec<usize>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::Domain("a partition needs at least one block".into()));
        }
        if freqs.contains(&0) {
            return Err(Error::Domain("block frequencies must be positive".into()));
        }
        freqs.sort_unstable_by(|a, b| b.cmp(a));
        let n = freqs.iter().sum();
        Ok(PartitionSummary { n, freqs })
    }

    /// Collapses raw species labels to frequencies.
    pub fn from_labels<L, I>(labels: I) -> Result<Self>
    where
        L: Hash + Eq,
        I: IntoIterator<Item = L>,
    {
        let mut counts: HashMap<L, usize> = HashMap::new();
        for l in labels {
            *counts.entry(l).or_default() += 1;
        }
        Self::new(counts.into_values().collect())
    }

    /// One observation per CSV record, species label in the first column,
    /// no header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut labels = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            match rec.get(0) {
                Some(l) if !l.is_empty() => labels.push(l.to_string()),
                _ => {}
            }
        }
        Self::from_labels(labels)
    }

    /// Reads either the summary text format (`n j` then the frequencies) or
    /// a bare whitespace-separated list of frequencies.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<Vec<usize>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("not a count: '{t}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if let [head, rest @ ..] = lines.as_slice() {
            if head.len() == 2 && !rest.is_empty() {
                let freqs: Vec<usize> = rest.concat();
                let (n, j) = (head[0], head[1]);
                if freqs.len() == j && freqs.iter().sum::<usize>() == n {
                    return Self::new(freqs);
                }
            }
        }
        let freqs = lines.concat();
        if freqs.is_empty() {
            return Err(Error::Parse("no frequencies found".into()));
        }
        Self::new(freqs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[usize] {
        &self.freqs
    }

    /// `i -> m_i`, the number of blocks of size `i`.
    pub fn mults(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &f in &self.freqs {
            *m.entry(f).or_default() += 1;
        }
        m
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PartitionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.j())?;
        let line: Vec<String> = self.freqs.iter().map(|x| x.to_string()).collect();
        writeln!(f, "{}", line.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_consistent() {
        let p = PartitionSummary::new(vec![1, 3, 1, 2]).unwrap();
        assert_eq!(p.freqs(), &[3, 2, 1, 1]);
        assert_eq!((p.n(), p.j()), (7, 4));
        let m = p.mults();
        assert_eq!(m[&1], 2);
        assert_eq!(m.iter().map(|(i, c)| i * c).sum::<usize>(), 7);
        assert_eq!(m.values().sum::<usize>(), 4);
        assert!(PartitionSummary::new(vec![]).is_err());
        assert!(PartitionSummary::new(vec![2, 0]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let p = PartitionSummary::new(vec![5, 1, 1]).unwrap();
        assert_eq!(p.to_text(), "7 3\n5 1 1\n");
        assert_eq!(PartitionSummary::parse(&p.to_text()).unwrap(), p);
        assert_eq!(PartitionSummary::parse("1 5 1\n").unwrap(), p);
        // Two numbers on the first line that do not describe the rest are
        // plain frequencies.
        let q = PartitionSummary::parse("2 2\n1 1 1\n").unwrap();
        assert_eq!(q.freqs(), &[2, 2, 1, 1, 1]);
        assert!(PartitionSummary::parse("a b").is_err());
    }

    #[test]
    fn raw_labels() {
        let csv = "cat,x\ndog\ncat\n\nemu,3\n";
        let p = PartitionSummary::from_csv(csv.as_bytes()).unwrap();
        assert_eq!(p.freqs(), &[2, 1, 1]);
    }
}
