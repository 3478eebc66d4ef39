//! Self-checks of the analytic laws against independent computations:
//! exhaustive enumeration, exact mixtures, simulation and known identities.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use num_traits::Zero;

use crate::backward::{
    new_species_estimator, new_species_pmf, old_estimator, old_moments, old_pmf, support_max,
    ConditioningInfo,
};
use crate::figures::{self, FigureConfig, FigureScale, SampleStats};
use crate::gfc::{gfc_central, stirling_unsigned};
use crate::models::{
    crp_blocks, crp_sample, integer_partitions, seeded_rng, EwensPitman, GibbsModel,
    PartitionSummary,
};
use crate::numerics::Scalar;
use crate::oracle::{mc_continuations, oracle_laws, shape_law};
use crate::{Error, Exact, LogF64, Result};

/// How much of the suite to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::Parse(format!("unknown validation level '{s}'"))),
        }
    }
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

/// Counts cases and keeps the first few failure messages.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    messages: Vec<String>,
    worst: f64,
}

impl Tally {
    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures += 1;
        if self.messages.len() < 3 {
            self.messages.push(msg.into());
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.case();
        if !ok {
            self.fail(msg());
        }
    }

    fn diff(&mut self, d: f64, tol: f64, msg: impl FnOnce() -> String) {
        self.worst = self.worst.max(d);
        self.check(d <= tol, msg);
    }

    fn done(self) -> Outcome {
        let detail = if self.failures == 0 {
            format!("max deviation {:.3e}", self.worst)
        } else {
            format!("{} failures; {}", self.failures, self.messages.join("; "))
        };
        Outcome { passed: self.failures == 0, cases: self.cases, detail }
    }
}

fn rel_diff<T: Scalar>(a: &T, b: &T) -> f64 {
    let d = (a.clone() - b).abs_val();
    if d.is_zero() {
        return 0.0;
    }
    let (x, y) = (a.abs_val(), b.abs_val());
    let scale = if x > y { x } else { y };
    (d / scale).to_f64()
}

fn abs_diff<T: Scalar>(a: &T, b: &T) -> f64 {
    (a.clone() - b).abs_val().to_f64()
}

/// Analytic quantities tracked by the coverage matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    ReobservedLaw,
    FrequencyLaw,
    ReobservedMean,
    FrequencyMean,
    ReobservedMoments,
    FrequencyMoments,
    NewSpeciesLaw,
    NewSpeciesMean,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::ReobservedLaw,
        Quantity::FrequencyLaw,
        Quantity::ReobservedMean,
        Quantity::FrequencyMean,
        Quantity::ReobservedMoments,
        Quantity::FrequencyMoments,
        Quantity::NewSpeciesLaw,
        Quantity::NewSpeciesMean,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Quantity::ReobservedLaw => "law of old species seen again",
            Quantity::FrequencyLaw => "law of old species seen l times",
            Quantity::ReobservedMean => "mean of old species seen again",
            Quantity::FrequencyMean => "mean of old species seen l times",
            Quantity::ReobservedMoments => "factorial moments, seen again",
            Quantity::FrequencyMoments => "factorial moments, seen l times",
            Quantity::NewSpeciesLaw => "law of new species",
            Quantity::NewSpeciesMean => "mean of new species",
        }
    }
}

pub const TAGS: [&str; 3] = ["complete", "incomplete", "almost-complete"];

/// Which (quantity, information tag) cells some oracle has exercised.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Coverage {
    cells: BTreeSet<(Quantity, &'static str)>,
}

impl Coverage {
    pub fn mark(&mut self, q: Quantity, info: &ConditioningInfo) {
        self.cells.insert((q, info.tag()));
    }

    pub fn covered(&self, q: Quantity, tag: &str) -> bool {
        self.cells.iter().any(|(a, b)| *a == q && *b == tag)
    }

    pub fn missing(&self) -> Vec<(Quantity, &'static str)> {
        Quantity::ALL
            .iter()
            .flat_map(|&q| TAGS.iter().map(move |&t| (q, t)))
            .filter(|(q, t)| !self.covered(*q, t))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.missing().is_empty()
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<34}", "quantity")?;
        for t in TAGS {
            write!(f, " {t:>15}")?;
        }
        writeln!(f)?;
        for q in Quantity::ALL {
            write!(f, "{:<34}", q.label())?;
            for t in TAGS {
                write!(f, " {:>15}", if self.covered(q, t) { "checked" } else { "MISSING" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Conditioning events used by exhaustive checks: the incomplete event and,
/// for every shape, the complete event plus almost-complete events that
/// reveal the largest or smallest `p` frequencies, `0 ≤ p ≤ j`.
pub fn small_infos(n: usize, j: usize) -> Vec<ConditioningInfo> {
    let mut out = vec![ConditioningInfo::Incomplete { n, j }];
    let mut partial = BTreeSet::new();
    for shape in integer_partitions(n, j) {
        for p in 0..=j {
            partial.insert(shape[..p].to_vec());
            partial.insert(shape[j - p..].to_vec());
        }
        out.push(ConditioningInfo::complete(PartitionSummary::new(shape).expect("valid shape")));
    }
    for obs in partial {
        out.push(ConditioningInfo::AlmostComplete { n, j, observed: obs });
    }
    out
}

/// Every law, mean and factorial moment against the exact enumeration
/// oracle, for all `n ≤ max_n`, `j ≤ max_j`, `m ≤ max_m`.
pub fn oracle_equivalence(
    ep: &EwensPitman<Exact>,
    max_n: usize,
    max_j: usize,
    max_m: usize,
    coverage: &mut Coverage,
) -> Result<Outcome> {
    let mut t = Tally::default();
    for n in 1..=max_n {
        for j in 1..=n.min(max_j) {
            for info in small_infos(n, j) {
                for m in 0..=max_m {
                    let oracle = oracle_laws(ep, &info, m)?;
                    let mut ls = vec![None];
                    ls.extend((0..=m + 1).map(Some));
                    for l in ls {
                        let (law, mean, moments) = match l {
                            None => (Quantity::ReobservedLaw, Quantity::ReobservedMean, Quantity::ReobservedMoments),
                            Some(_) => (Quantity::FrequencyLaw, Quantity::FrequencyMean, Quantity::FrequencyMoments),
                        };
                        let truth = oracle.old(l);
                        let a = old_pmf(ep, &info, m, l)?;
                        for x in 0..=j {
                            t.diff(abs_diff(&a.prob(x), &truth.prob(x)), 0.0, || {
                                format!("{info} m={m} l={l:?} x={x}")
                            });
                        }
                        coverage.mark(law, &info);
                        let e = old_estimator(ep, &info, m, l)?;
                        t.diff(abs_diff(&e, &truth.mean()), 0.0, || format!("mean {info} m={m} l={l:?}"));
                        coverage.mark(mean, &info);
                        let top = support_max(j, m, l);
                        let fm = old_moments(ep, &info, m, top, l)?;
                        for r in 1..=top {
                            t.diff(abs_diff(&fm.get(r), &truth.factorial_moment(r)), 0.0, || {
                                format!("moment {r} {info} m={m} l={l:?}")
                            });
                        }
                        coverage.mark(moments, &info);
                    }
                    let k = new_species_pmf(ep, &info, m)?;
                    for x in 0..=m {
                        t.diff(abs_diff(&k.prob(x), &oracle.new_species.prob(x)), 0.0, || {
                            format!("new {info} m={m} x={x}")
                        });
                    }
                    coverage.mark(Quantity::NewSpeciesLaw, &info);
                    let e = new_species_estimator(ep, &info, m)?;
                    t.diff(abs_diff(&e, &oracle.new_species.mean()), 0.0, || format!("new mean {info} m={m}"));
                    coverage.mark(Quantity::NewSpeciesMean, &info);
                }
            }
        }
    }
    Ok(t.done())
}

/// One random initial partition with parameters and an additional sample
/// size; `observed` is the subset of frequencies revealed in the
/// almost-complete event.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCase {
    pub sigma: Exact,
    pub theta: Exact,
    pub summary: PartitionSummary,
    pub m: usize,
    pub observed: Vec<usize>,
}

impl GridCase {
    pub fn model<T: Scalar>(&self) -> Result<EwensPitman<T>> {
        EwensPitman::new(T::from_rational(&self.sigma), T::from_rational(&self.theta))
    }

    pub fn infos(&self) -> [ConditioningInfo; 3] {
        let (n, j) = (self.summary.n(), self.summary.j());
        [
            ConditioningInfo::Complete(self.summary.clone()),
            ConditioningInfo::Incomplete { n, j },
            ConditioningInfo::AlmostComplete { n, j, observed: self.observed.clone() },
        ]
    }
}

/// `per_point` random cases for every (σ, θ): `n` uniform on `1..=max_n`,
/// the partition drawn from the model itself, `m` uniform on `0..=max_m`,
/// and a uniformly sized random subset of frequencies revealed.
pub fn grid_cases(
    sigmas: &[Exact],
    thetas: &[Exact],
    per_point: usize,
    max_n: usize,
    max_m: usize,
    seed: u64,
) -> Vec<GridCase> {
    let mut out = Vec::new();
    let mut stream = 0;
    for sigma in sigmas {
        for theta in thetas {
            let mut rng = seeded_rng(seed, stream);
            stream += 1;
            for _ in 0..per_point {
                let n = rng.gen_range(1..=max_n);
                let freqs = crp_blocks(sigma.to_f64(), theta.to_f64(), n, &mut rng);
                let summary = PartitionSummary::new(freqs).expect("sampled partition");
                let m = rng.gen_range(0..=max_m);
                let mut observed = summary.freqs().to_vec();
                observed.shuffle(&mut rng);
                observed.truncate(rng.gen_range(0..=summary.j()));
                out.push(GridCase { sigma: sigma.clone(), theta: theta.clone(), summary, m, observed });
            }
        }
    }
    out
}

/// Values of `l` exercised on the grid: absent, 0, 1, 2.
pub const GRID_LS: [Option<usize>; 4] = [None, Some(0), Some(1), Some(2)];

/// Every law on the grid sums to one: exactly in exact arithmetic, within
/// `1e-9` otherwise.
pub fn normalization<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let tol = if T::is_exact() { 0.0 } else { 1e-9 };
    let one = T::one();
    let mut t = Tally::default();
    for c in cases {
        let ep = c.model::<T>()?;
        for info in c.infos() {
            for l in GRID_LS {
                match old_pmf(&ep, &info, c.m, l) {
                    Ok(p) => t.diff(abs_diff(&p.total(), &one), tol, || format!("{info} m={} l={l:?}", c.m)),
                    Err(e) => t.fail(format!("{info} m={} l={l:?}: {e}", c.m)),
                }
            }
            match new_species_pmf(&ep, &info, c.m) {
                Ok(p) => t.diff(abs_diff(&p.total(), &one), tol, || format!("new {info} m={}", c.m)),
                Err(e) => t.fail(format!("new {info} m={}: {e}", c.m)),
            }
        }
    }
    Ok(t.done())
}

/// The law of species seen zero times is the law of species seen again
/// reflected through `j`, value for value.
pub fn complement_identity<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let mut t = Tally::default();
    for c in cases {
        let ep = c.model::<T>()?;
        let j = c.summary.j();
        for info in c.infos() {
            let seen = old_pmf(&ep, &info, c.m, None)?;
            let unseen = old_pmf(&ep, &info, c.m, Some(0))?;
            for x in 0..=j {
                t.check(seen.prob(x) == unseen.prob(j - x), || format!("{info} m={} x={x}", c.m));
            }
        }
    }
    Ok(t.done())
}

/// With one more observation the expected number of old species seen again
/// is `(n - jσ) / (θ + n)`.
pub fn one_step_estimator<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let tol = if T::is_exact() { 0.0 } else { 1e-12 };
    let mut t = Tally::default();
    for c in cases {
        let ep = c.model::<T>()?;
        let (n, j) = (T::from_usize(c.summary.n()), T::from_usize(c.summary.j()));
        let expected = (n.clone() - j * ep.sigma()) / (ep.theta().clone() + n);
        let info = ConditioningInfo::Complete(c.summary.clone());
        let got = old_estimator(&ep, &info, 1, None)?;
        t.diff(rel_diff(&got, &expected), tol, || format!("{info}"));
    }
    Ok(t.done())
}

/// Factorial moments `r = 1, 2, 3` of each law against the direct moment
/// formulas, on cases with `min(j, m) ≥ 3`.
pub fn moment_consistency<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let tol = if T::is_exact() { 0.0 } else { 1e-8 };
    let mut t = Tally::default();
    for c in cases.iter().filter(|c| c.summary.j().min(c.m) >= 3) {
        let ep = c.model::<T>()?;
        for info in c.infos() {
            for l in GRID_LS {
                let p = old_pmf(&ep, &info, c.m, l)?;
                let fm = old_moments(&ep, &info, c.m, 3, l)?;
                for r in 1..=3 {
                    t.diff(rel_diff(&p.factorial_moment(r), &fm.get(r)), tol, || {
                        format!("{info} m={} l={l:?} r={r}", c.m)
                    });
                }
            }
        }
    }
    Ok(t.done())
}

/// The law of new species depends on the data only through `(n, j)`.
pub fn new_species_invariance<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let mut t = Tally::default();
    for c in cases {
        let ep = c.model::<T>()?;
        let [a, b, d] = c.infos().map(|info| new_species_pmf(&ep, &info, c.m));
        let (a, b, d) = (a?, b?, d?);
        let bits = |p: &crate::models::Pmf<T>| format!("{p:?}");
        t.check(a == b && a == d && bits(&a) == bits(&b) && bits(&a) == bits(&d), || {
            format!("n={} j={} m={}", c.summary.n(), c.summary.j(), c.m)
        });
    }
    Ok(t.done())
}

/// Revealing every frequency gives the complete moments; revealing none
/// gives the incomplete moments.
pub fn almost_complete_reductions<T: Scalar>(cases: &[GridCase]) -> Result<Outcome> {
    let mut t = Tally::default();
    for c in cases {
        let ep = c.model::<T>()?;
        let (n, j) = (c.summary.n(), c.summary.j());
        let pairs = [
            (ConditioningInfo::AlmostComplete { n, j, observed: c.summary.freqs().to_vec() }, ConditioningInfo::Complete(c.summary.clone())),
            (ConditioningInfo::AlmostComplete { n, j, observed: Vec::new() }, ConditioningInfo::Incomplete { n, j }),
        ];
        for (almost, reduced) in &pairs {
            for l in GRID_LS {
                let top = support_max(j, c.m, l);
                let a = old_moments(&ep, almost, c.m, top, l)?;
                let b = old_moments(&ep, reduced, c.m, top, l)?;
                t.check(a == b, || format!("{almost} vs {reduced} m={} l={l:?}", c.m));
            }
        }
    }
    Ok(t.done())
}

/// Mixing complete-information estimators over the law of the frequencies
/// given `K_n = j` reproduces the incomplete-information estimator exactly.
pub fn tower_property(ep: &EwensPitman<Exact>, max_n: usize, max_m: usize) -> Result<Outcome> {
    let mut t = Tally::default();
    for n in 1..=max_n {
        for j in 1..=n {
            let law = shape_law(ep, n, j)?;
            let info = ConditioningInfo::Incomplete { n, j };
            for m in 0..=max_m {
                for l in [None, Some(0), Some(1), Some(2)] {
                    let mut mixed = Exact::zero();
                    for (s, w) in &law {
                        mixed += w * old_estimator(ep, &ConditioningInfo::Complete(s.clone()), m, l)?;
                    }
                    let direct = old_estimator(ep, &info, m, l)?;
                    t.diff(abs_diff(&mixed, &direct), 0.0, || format!("n={n} j={j} m={m} l={l:?}"));
                }
            }
        }
    }
    Ok(t.done())
}

/// Generalized factorial coefficients at small `σ`, divided by `σ^k`, are
/// close to unsigned Stirling numbers of the first kind.
pub fn ewens_limit(max_n: usize, rel_tol: f64) -> Result<Outcome> {
    let sigma = Exact::new(BigInt::from(1), BigInt::from(100_000_000));
    let mut t = Tally::default();
    for n in 1..=max_n {
        for k in 1..=n {
            let c: Exact = gfc_central(n, k, &sigma)?;
            let scaled = c / sigma.powu(k);
            let s = Exact::from_integer(BigInt::from(stirling_unsigned(n, k)));
            t.diff(rel_diff(&scaled, &s), rel_tol, || format!("n={n} k={k}"));
        }
    }
    Ok(t.done())
}

/// Largest standardized deviation tolerated between a simulated and an
/// analytic probability.
pub const MC_Z_LIMIT: f64 = 4.0;

/// One seeded initial sample of size `n`, continued `replicates` times by
/// simulation: every cell of the old-species and new-species laws must lie
/// within [`MC_Z_LIMIT`] standard errors.
pub fn monte_carlo<T: Scalar>(
    ep: &EwensPitman<T>,
    n: usize,
    m: usize,
    replicates: usize,
    seed: u64,
    coverage: &mut Coverage,
) -> Result<Outcome> {
    let summary = crp_sample(ep, n, seed);
    let info = ConditioningInfo::Complete(summary.clone());
    let sim = mc_continuations(ep, summary.freqs(), m, replicates, seed.wrapping_add(1));
    let old = old_pmf(ep, &info, m, None)?.to_f64();
    let fresh = new_species_pmf(ep, &info, m)?.to_f64();
    let (zo, zn) = (sim.reobserved.max_z(&old), sim.new_species.max_z(&fresh));
    coverage.mark(Quantity::ReobservedLaw, &info);
    coverage.mark(Quantity::NewSpeciesLaw, &info);
    Ok(Outcome {
        passed: zo <= MC_Z_LIMIT && zn <= MC_Z_LIMIT,
        cases: old.len() + fresh.len(),
        detail: format!("j={} max |z| old {zo:.2}, new {zn:.2}", summary.j()),
    })
}

/// Replicated draws analysed under the true model: the two estimators
/// agree in mean within two combined standard errors and the
/// complete-information estimator is at least as variable.
pub fn replicate_study(cfg: &FigureConfig) -> Result<Outcome> {
    let tables = figures::figure3::<LogF64>(cfg)?;
    let col = |c| tables[0].column(c).expect("replicate column");
    let (c, i) = (SampleStats::of(&col("complete")), SampleStats::of(&col("incomplete")));
    let z = (c.mean - i.mean).abs() / (c.se_mean().powi(2) + i.se_mean().powi(2)).sqrt();
    Ok(Outcome {
        passed: z < 2.0 && c.variance >= i.variance,
        cases: c.len,
        detail: format!(
            "means {:.4} vs {:.4} ({z:.2} SE), variances {:.4} vs {:.4}",
            c.mean, i.mean, c.variance, i.variance
        ),
    })
}

/// Estimator curves on one draw are nondecreasing, start at zero and stay
/// below `j`; the draw-averaged complete/incomplete discrepancy is smallest
/// at the data-generating σ.
pub fn curve_study(cfg: &FigureConfig) -> Result<Outcome> {
    let tables = figures::figure1::<LogF64>(cfg)?;
    let j = tables[3].column("j").expect("sample j")[0];
    let mut t = Tally::default();
    for panel in &tables[..2] {
        let col = |name| panel.column(name).expect("curve column");
        let (ms, c, i) = (col("m"), col("old_complete"), col("old_incomplete"));
        let per = cfg.scale.m_grid.len();
        for start in (0..ms.len()).step_by(per) {
            for curve in [&c[start..start + per], &i[start..start + per]] {
                t.check(ms[start] != 0.0 || curve[0] == 0.0, || format!("{} starts at {}", panel.name, curve[0]));
                t.check(curve.windows(2).all(|w| w[1] >= w[0]), || format!("{} decreases", panel.name));
                t.check(curve.iter().all(|&x| x <= j), || format!("{} exceeds j", panel.name));
            }
        }
    }
    let disc = &tables[2];
    let (sig, avg) = (disc.column("sigma").expect("sigma"), disc.column("mean_abs_averaged_discrepancy").expect("avg"));
    let best = (0..cfg.sigma_grid.len())
        .min_by(|&a, &b| avg[a].total_cmp(&avg[b]))
        .map(|k| sig[k])
        .unwrap_or(f64::NAN);
    t.check(best == cfg.sigma, || format!("discrepancy smallest at σ={best} not σ={}", cfg.sigma));
    let mut out = t.done();
    let shown: Vec<String> = (0..cfg.sigma_grid.len()).map(|k| format!("σ={} {:.3}", sig[k], avg[k])).collect();
    out.detail = format!("{}; averaged discrepancy {}", out.detail, shown.join(", "));
    Ok(out)
}

/// One line of a validation report.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub outcome: std::result::Result<Outcome, String>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(o) if o.passed)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<CheckReport>,
    pub coverage: Coverage,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed) && self.coverage.is_complete()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<44} {:<6} {:>7} {:>9}  detail", "check", "status", "cases", "seconds")?;
        for c in &self.checks {
            let (status, cases, detail) = match &c.outcome {
                Ok(o) => (if o.passed { "PASS" } else { "FAIL" }, o.cases.to_string(), o.detail.clone()),
                Err(e) => ("ERROR", "-".into(), e.clone()),
            };
            writeln!(f, "{:<44} {status:<6} {cases:>7} {:>9.2}  {detail}", c.name, c.elapsed.as_secs_f64())?;
        }
        writeln!(f)?;
        write!(f, "{}", self.coverage)?;
        if !self.coverage.is_complete() {
            writeln!(f, "coverage incomplete")?;
        }
        Ok(())
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> Result<Outcome>) -> CheckReport {
    let start = Instant::now();
    let outcome = f().map_err(|e| e.to_string());
    CheckReport { name, outcome, elapsed: start.elapsed() }
}

fn q(a: i64, b: i64) -> Exact {
    Exact::new(BigInt::from(a), BigInt::from(b))
}

/// σ ∈ {1/4, 1/2, 3/4}.
pub fn grid_sigmas() -> Vec<Exact> {
    vec![q(1, 4), q(1, 2), q(3, 4)]
}

/// θ ∈ {1, 10, 100}.
pub fn grid_thetas() -> Vec<Exact> {
    vec![q(1, 1), q(10, 1), q(100, 1)]
}

/// Runs the suite. `Fast` uses small grids; `Full` uses the sizes of the
/// acceptance suite.
pub fn run(level: Level, seed: u64) -> Report {
    let full = level == Level::Full;
    let ep = EwensPitman::new(q(1, 2), q(1, 1)).expect("valid parameters");
    let mut coverage = Coverage::default();
    let (per, max_n, max_m) = if full { (20, 40, 15) } else { (3, 20, 8) };
    let cases = grid_cases(&grid_sigmas(), &grid_thetas(), per, max_n, max_m, seed);
    let mut checks = Vec::new();
    let (on, oj, om) = if full { (8, 4, 5) } else { (6, 3, 4) };
    checks.push(timed("exact enumeration oracle", || oracle_equivalence(&ep, on, oj, om, &mut coverage)));
    checks.push(timed("laws sum to one", || normalization::<Exact>(&cases)));
    checks.push(timed("unseen law is reflected seen law", || complement_identity::<Exact>(&cases)));
    checks.push(timed("one-step expected old species", || one_step_estimator::<Exact>(&cases)));
    checks.push(timed("factorial moments of the laws", || moment_consistency::<Exact>(&cases)));
    checks.push(timed("new species law ignores frequencies", || new_species_invariance::<Exact>(&cases)));
    checks.push(timed("almost-complete limits", || almost_complete_reductions::<Exact>(&cases)));
    let (tn, tm) = if full { (10, 4) } else { (7, 3) };
    checks.push(timed("mixture of complete estimators", || tower_property(&ep, tn, tm)));
    checks.push(timed("small-sigma Stirling limit", || ewens_limit(10, 1e-6)));
    let mc_ep = EwensPitman::new(q(1, 2), q(10, 1)).expect("valid parameters");
    let (mn, mm, mr) = if full { (100, 50, 100_000) } else { (30, 10, 20_000) };
    checks.push(timed("simulated continuations", || {
        monte_carlo::<Exact>(&mc_ep, mn, mm, mr, seed, &mut coverage)
    }));
    let mut cfg = FigureConfig { seed, ..FigureConfig::default() };
    checks.push(timed("estimator curves and discrepancy", || curve_study(&cfg)));
    cfg.theta = 10.0;
    if !full {
        cfg.scale = FigureScale { replicates: 100, ..FigureScale::desk() };
    }
    checks.push(timed("replicated estimators", || replicate_study(&cfg)));
    Report { level, checks, coverage }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_parses() {
        assert_eq!("FAST".parse::<Level>().unwrap(), Level::Fast);
        assert!("medium".parse::<Level>().is_err());
    }

    #[test]
    fn oracle_check_fills_coverage() {
        let ep = EwensPitman::new(q(1, 2), q(1, 1)).unwrap();
        let mut cov = Coverage::default();
        let out = oracle_equivalence(&ep, 4, 3, 2, &mut cov).unwrap();
        assert!(out.passed, "{}", out.detail);
        assert!(cov.is_complete(), "{:?}", cov.missing());
        assert!(Coverage::default().missing().len() == Quantity::ALL.len() * TAGS.len());
    }

    #[test]
    fn grid_cases_are_valid_and_seeded() {
        let a = grid_cases(&grid_sigmas(), &grid_thetas(), 2, 15, 6, 3);
        assert_eq!(a.len(), 18);
        assert_eq!(a, grid_cases(&grid_sigmas(), &grid_thetas(), 2, 15, 6, 3));
        for c in &a {
            let [_, _, almost] = c.infos();
            let ConditioningInfo::AlmostComplete { n, j, observed } = almost else { unreachable!() };
            assert!(ConditioningInfo::almost_complete(n, j, observed).is_ok());
        }
    }

    #[test]
    fn small_grid_checks_pass() {
        let cases = grid_cases(&grid_sigmas(), &grid_thetas(), 1, 12, 6, 9);
        for out in [
            normalization::<Exact>(&cases).unwrap(),
            normalization::<crate::Mp256>(&cases).unwrap(),
            complement_identity::<Exact>(&cases).unwrap(),
            one_step_estimator::<Exact>(&cases).unwrap(),
            moment_consistency::<Exact>(&cases).unwrap(),
            new_species_invariance::<Exact>(&cases).unwrap(),
            almost_complete_reductions::<Exact>(&cases).unwrap(),
        ] {
            assert!(out.passed, "{}", out.detail);
        }
    }

    #[test]
    fn small_sigma_limit() {
        assert!(ewens_limit(6, 1e-6).unwrap().passed);
    }
}
