use std::fmt;

use crate::models::PartitionSummary;
use crate::{Error, Result};

/// What is known about the initial sample of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditioningInfo {
    /// `K_n = j` and every block frequency.
    Complete(PartitionSummary),
    /// Only `K_n = j`.
    Incomplete { n: usize, j: usize },
    /// `K_n = j` and the frequencies of `p ≤ j` labelled species.
    AlmostComplete { n: usize, j: usize, observed: Vec<usize> },
}

impl ConditioningInfo {
    pub fn complete(summary: PartitionSummary) -> Self {
        ConditioningInfo::Complete(summary)
    }

    pub fn incomplete(n: usize, j: usize) -> Result<Self> {
        if j < 1 || j > n {
            return Err(Error::Domain(format!("need 1 <= j <= n, got n={n} j={j}")));
        }
        Ok(ConditioningInfo::Incomplete { n, j })
    }

    pub fn almost_complete(n: usize, j: usize, observed: Vec<usize>) -> Result<Self> {
        Self::incomplete(n, j)?;
        let p = observed.len();
        let used: usize = observed.iter().sum();
        if p > j {
            return Err(Error::Domain(format!("{p} observed frequencies but only {j} species")));
        }
        if observed.contains(&0) {
            return Err(Error::Domain("observed frequencies must be positive".into()));
        }
        if used + (j - p) > n || (p == j && used != n) {
            return Err(Error::Domain(format!(
                "observed frequencies {observed:?} cannot occur with n={n}, j={j}"
            )));
        }
        Ok(ConditioningInfo::AlmostComplete { n, j, observed })
    }

    pub fn n(&self) -> usize {
        match self {
            ConditioningInfo::Complete(s) => s.n(),
            ConditioningInfo::Incomplete { n, .. } | ConditioningInfo::AlmostComplete { n, .. } => *n,
        }
    }

    pub fn j(&self) -> usize {
        match self {
            ConditioningInfo::Complete(s) => s.j(),
            ConditioningInfo::Incomplete { j, .. } | ConditioningInfo::AlmostComplete { j, .. } => *j,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ConditioningInfo::Complete(_) => "complete",
            ConditioningInfo::Incomplete { .. } => "incomplete",
            ConditioningInfo::AlmostComplete { .. } => "almost-complete",
        }
    }
}

impl fmt::Display for ConditioningInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditioningInfo::Complete(s) => write!(f, "complete(n={}, freqs={:?})", s.n(), s.freqs()),
            ConditioningInfo::Incomplete { n, j } => write!(f, "incomplete(n={n}, j={j})"),
            ConditioningInfo::AlmostComplete { n, j, observed } => {
                write!(f, "almost-complete(n={n}, j={j}, observed={observed:?})")
            }
        }
    }
}
