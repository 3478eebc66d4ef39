use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lookback::backward::{
    ep_new_species_curve, ep_old_estimator_curve, new_species_pmf, old_estimator, old_pmf, ConditioningInfo,
};
use lookback::figures::{self, format_f64, FigureConfig, FigureScale, Table};
use lookback::models::{EwensPitman, Pmf};
use lookback::numerics::{PrecisionTask, Resolved};
use lookback::validate::{self, Level};
use lookback::{Exact, Precision, Scalar};

use crate::config::{parse_grid, parse_param, DataArgs, Kind, ModelArgs, PrecisionArgs};
use crate::output::{emit, emit_bundle};

#[derive(Args, Debug)]
pub struct DistArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "old")]
    pub kind: Kind,
    /// Additional sample size.
    #[arg(long)]
    pub m: usize,
    /// Count old species seen exactly this many times instead of at least once.
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write a JSON array of row objects instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "old")]
    pub kind: Kind,
    /// Single additional sample size.
    #[arg(long, conflicts_with = "m_grid", required_unless_present = "m_grid")]
    pub m: Option<usize>,
    /// Additional sample sizes: A:B:STEP, A:B, or a comma list.
    #[arg(long, value_name = "GRID")]
    pub m_grid: Option<String>,
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Desk,
    Full,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Which study: 1, 2 or 3.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    #[arg(long, value_enum, default_value = "desk")]
    pub scale: Scale,
    /// Initial sample size (overrides the scale).
    #[arg(long)]
    pub n: Option<usize>,
    /// Additional sample sizes for figures 1 and 2 (overrides the scale).
    #[arg(long, value_name = "GRID")]
    pub m_grid: Option<String>,
    /// Additional sample size for figure 3 (overrides the scale).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of initial samples for figure 3 (overrides the scale).
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Draws averaged in the figure 1 discrepancy summary (overrides the scale).
    #[arg(long)]
    pub draws: Option<usize>,
    /// Data-generating discount parameter.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    /// Data-generating concentration parameter.
    #[arg(long, default_value_t = 100.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Arithmetic for the estimator curves; defaults to 53-bit floats.
    #[arg(long)]
    pub precision: Option<String>,
    /// Directory receiving one file per table.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, default_value = "fast")]
    pub level: String,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

struct Setup {
    sigma: Exact,
    theta: Exact,
    info: Option<ConditioningInfo>,
    precision: Resolved,
}

fn setup(model: &ModelArgs, data: &DataArgs, prec: &PrecisionArgs, max_m: usize) -> Result<Setup> {
    let sigma = parse_param("sigma", &model.sigma)?;
    let theta = parse_param("theta", &model.theta)?;
    EwensPitman::new(sigma.clone(), theta.clone())?;
    let info = data.resolve()?;
    let n = info.as_ref().map_or(0, |i| i.n());
    let precision = Precision::resolve(prec.requested()?, n, max_m, true)?;
    Ok(Setup { sigma, theta, info, precision })
}

fn note_escalation(start: Resolved, used: Precision) {
    if used != start.precision {
        eprintln!("note: {} lost too many bits; used {used}", start.precision);
    }
}

fn model<T: Scalar>(s: &Setup) -> lookback::Result<EwensPitman<T>> {
    EwensPitman::new(T::from_rational(&s.sigma), T::from_rational(&s.theta))
}

#[derive(Clone)]
struct DistTask<'a> {
    setup: &'a Setup,
    info: &'a ConditioningInfo,
    kind: Kind,
    m: usize,
    l: Option<usize>,
}

impl PrecisionTask for DistTask<'_> {
    type Output = lookback::Result<Pmf<f64>>;

    fn run<T: Scalar>(self) -> Self::Output {
        let ep = model::<T>(self.setup)?;
        let p = match self.kind {
            Kind::Old => old_pmf(&ep, self.info, self.m, self.l)?,
            Kind::New => new_species_pmf(&ep, self.info, self.m)?,
        };
        Ok(p.to_f64())
    }
}

pub const DIST_HEADER: [&str; 2] = ["x", "probability"];
pub const ESTIMATE_HEADER: [&str; 2] = ["m", "estimate"];

pub fn dist(args: &DistArgs) -> Result<()> {
    let s = setup(&args.model, &args.data, &args.precision, args.m)?;
    let mut table = Table::new("dist", &DIST_HEADER);
    let rows: Vec<(usize, f64)> = match &s.info {
        Some(info) => {
            let task = DistTask { setup: &s, info, kind: args.kind, m: args.m, l: args.l };
            let (pmf, used) = s.precision.run(task)?;
            note_escalation(s.precision, used);
            pmf.iter().map(|(x, p)| (x, *p)).collect()
        }
        // The law at m = 0 does not depend on the data.
        None if args.m == 0 && args.l != Some(0) => vec![(0, 1.0)],
        None => bail!("no initial sample: give --freqs, --raw, or --n and --j"),
    };
    for (x, p) in rows {
        table.rows.push(vec![x.to_string(), format_f64(p)]);
    }
    emit(&table, args.out.as_deref(), args.json)
}

#[derive(Clone)]
struct EstimateTask<'a> {
    setup: &'a Setup,
    info: &'a ConditioningInfo,
    kind: Kind,
    grid: &'a [usize],
    l: Option<usize>,
}

impl PrecisionTask for EstimateTask<'_> {
    type Output = lookback::Result<Vec<f64>>;

    fn run<T: Scalar>(self) -> Self::Output {
        let ep = model::<T>(self.setup)?;
        let (n, j) = (self.info.n(), self.info.j());
        let values = match (self.kind, self.l) {
            (Kind::New, _) => ep_new_species_curve(&ep, n, j, self.grid)?,
            (Kind::Old, None) => match ep_old_estimator_curve(&ep, self.info, self.grid)? {
                Some(v) => v,
                None => pointwise(&ep, self.info, self.grid, None)?,
            },
            (Kind::Old, l) => pointwise(&ep, self.info, self.grid, l)?,
        };
        Ok(values.iter().map(Scalar::to_f64).collect())
    }
}

fn pointwise<T: Scalar>(
    ep: &EwensPitman<T>,
    info: &ConditioningInfo,
    grid: &[usize],
    l: Option<usize>,
) -> lookback::Result<Vec<T>> {
    grid.iter().map(|&m| old_estimator(ep, info, m, l)).collect()
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let grid = match (&args.m_grid, args.m) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(m)) => vec![m],
        (None, None) => bail!("give --m or --m-grid"),
    };
    let max_m = *grid.last().expect("nonempty grid");
    let s = setup(&args.model, &args.data, &args.precision, max_m)?;
    let values = match &s.info {
        Some(info) => {
            let task = EstimateTask { setup: &s, info, kind: args.kind, grid: &grid, l: args.l };
            let (values, used) = s.precision.run(task)?;
            note_escalation(s.precision, used);
            values
        }
        None if max_m == 0 && args.l != Some(0) => vec![0.0],
        None => bail!("no initial sample: give --freqs, --raw, or --n and --j"),
    };
    let mut table = Table::new("estimate", &ESTIMATE_HEADER);
    for (m, v) in grid.iter().zip(values) {
        table.rows.push(vec![m.to_string(), format_f64(v)]);
    }
    emit(&table, args.out.as_deref(), args.json)
}

#[derive(Clone)]
struct FigureTask<'a> {
    which: u8,
    cfg: &'a FigureConfig,
}

impl PrecisionTask for FigureTask<'_> {
    type Output = lookback::Result<Vec<Table>>;

    fn run<T: Scalar>(self) -> Self::Output {
        match self.which {
            1 => figures::figure1::<T>(self.cfg),
            2 => figures::figure2::<T>(self.cfg),
            _ => figures::figure3::<T>(self.cfg),
        }
    }
}

pub fn figure(args: &FigureArgs) -> Result<()> {
    let mut scale = match args.scale {
        Scale::Desk => FigureScale::desk(),
        Scale::Full => FigureScale::full(),
    };
    if let Some(n) = args.n {
        scale.n = n;
    }
    if let Some(g) = &args.m_grid {
        scale.m_grid = parse_grid(g)?;
    }
    if let Some(m) = args.m {
        scale.m_replicate = m;
    }
    if let Some(r) = args.replicates {
        scale.replicates = r;
    }
    if let Some(d) = args.draws {
        scale.discrepancy_draws = d;
    }
    if scale.n == 0 || scale.replicates == 0 || scale.discrepancy_draws == 0 {
        bail!("--n, --replicates and --draws must be positive");
    }
    let cfg = FigureConfig { scale, seed: args.seed, sigma: args.sigma, theta: args.theta, ..FigureConfig::default() };
    let precision = match &args.precision {
        Some(p) => Resolved { precision: p.parse()?, automatic: false },
        None => Resolved { precision: Precision::Float(53), automatic: true },
    };
    if precision.precision == Precision::Exact {
        bail!("figures use floating point; pass --precision float:BITS");
    }
    let (tables, used) = precision.run(FigureTask { which: args.which, cfg: &cfg })?;
    note_escalation(precision, used);
    for path in emit_bundle(&tables, &args.out, args.json)? {
        eprintln!("wrote {path}");
    }
    Ok(())
}

/// Returns whether every check passed.
pub fn validate(args: &ValidateArgs) -> Result<bool> {
    let level: Level = args.level.parse()?;
    let report = validate::run(level, args.seed);
    print!("{report}");
    println!("{}", if report.passed() { "all checks passed" } else { "validation FAILED" });
    Ok(report.passed())
}
