use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lookback::backward::ConditioningInfo;
use lookback::models::PartitionSummary;
use lookback::numerics::parse_rational;
use lookback::{Exact, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Old species seen again (or seen exactly `--l` times).
    Old,
    /// Species not in the initial sample.
    New,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InfoTag {
    Complete,
    Incomplete,
    AlmostComplete,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Discount parameter, in [0, 1); decimals and fractions are read exactly.
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub sigma: String,
    /// Concentration parameter, > -sigma.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub theta: String,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// What is known about the initial sample. Defaults to complete when a
    /// frequency file is given, almost-complete with --observed, otherwise
    /// incomplete.
    #[arg(long, value_enum)]
    pub info: Option<InfoTag>,
    /// Frequency file: whitespace-separated positive integers.
    #[arg(long, value_name = "FILE", conflicts_with = "raw")]
    pub freqs: Option<PathBuf>,
    /// Raw observations, one species label per line (first CSV column).
    #[arg(long, value_name = "FILE")]
    pub raw: Option<PathBuf>,
    /// Frequencies of the species whose counts are known, for
    /// almost-complete information.
    #[arg(long, value_name = "FILE")]
    pub observed: Option<PathBuf>,
    /// Initial sample size, when no frequency file is given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of distinct species in the initial sample.
    #[arg(long)]
    pub j: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct PrecisionArgs {
    /// `exact` or `float:BITS` (also plain BITS). Defaults to exact when
    /// n + m <= 500 and 256 bits otherwise; GIBBS_PRECISION overrides the
    /// default.
    #[arg(long)]
    pub precision: Option<String>,
}

impl PrecisionArgs {
    pub fn requested(&self) -> Result<Option<Precision>> {
        self.precision
            .as_deref()
            .map(|s| s.parse::<Precision>().map_err(Into::into))
            .transpose()
    }
}

pub fn parse_param(name: &str, s: &str) -> Result<Exact> {
    parse_rational(s).with_context(|| format!("invalid --{name}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_counts(path: &Path) -> Result<Vec<usize>> {
    read(path)?
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .with_context(|| format!("{}: '{t}' is not a positive integer", path.display()))
        })
        .collect()
}

impl DataArgs {
    fn summary(&self) -> Result<Option<PartitionSummary>> {
        if let Some(p) = &self.freqs {
            let counts = parse_counts(p)?;
            return Ok(Some(PartitionSummary::new(counts).with_context(|| format!("{}", p.display()))?));
        }
        if let Some(p) = &self.raw {
            let f = fs::File::open(p).with_context(|| format!("cannot read {}", p.display()))?;
            return Ok(Some(PartitionSummary::from_csv(f)?));
        }
        Ok(None)
    }

    /// The conditioning event, or `None` when no data was supplied at all.
    pub fn resolve(&self) -> Result<Option<ConditioningInfo>> {
        let summary = self.summary()?;
        let tag = match self.info {
            Some(t) => t,
            None if self.observed.is_some() => InfoTag::AlmostComplete,
            None if summary.is_some() => InfoTag::Complete,
            None => InfoTag::Incomplete,
        };
        let nj = match (&summary, self.n, self.j) {
            (Some(s), None, None) => Some((s.n(), s.j())),
            (Some(s), n, j) => {
                if n.is_some_and(|n| n != s.n()) || j.is_some_and(|j| j != s.j()) {
                    bail!("--n/--j disagree with the frequency file (n={}, j={})", s.n(), s.j());
                }
                Some((s.n(), s.j()))
            }
            (None, Some(n), Some(j)) => Some((n, j)),
            (None, None, None) => None,
            _ => bail!("--n and --j must be given together"),
        };
        let Some((n, j)) = nj else {
            if self.info.is_some() || self.observed.is_some() {
                bail!("no initial sample: give --freqs, --raw, or --n and --j");
            }
            return Ok(None);
        };
        let info = match tag {
            InfoTag::Complete => match summary {
                Some(s) => ConditioningInfo::complete(s),
                None => bail!("complete information needs --freqs or --raw"),
            },
            InfoTag::Incomplete => ConditioningInfo::incomplete(n, j)?,
            InfoTag::AlmostComplete => {
                let Some(p) = &self.observed else {
                    bail!("almost-complete information needs --observed");
                };
                ConditioningInfo::almost_complete(n, j, parse_counts(p)?)?
            }
        };
        Ok(Some(info))
    }
}

/// `A:B:STEP` (inclusive of `B` when reached), `A:B` with step 1, or a
/// comma-separated list. Must be strictly increasing.
pub fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad m-grid entry '{t}'"));
    let grid: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let (a, b, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => bail!("m-grid must look like A:B:STEP, got '{s}'"),
        };
        if step == 0 || b < a {
            bail!("m-grid '{s}' is empty or has zero step");
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        bail!("m-grid must be nonempty and strictly increasing");
    }
    Ok(grid)
}
