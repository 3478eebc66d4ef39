//! Simulation studies: estimator curves on simulated initial samples.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::backward::{ep_new_species_curve, ep_old_estimator_curve, ConditioningInfo};
use crate::models::{crp_blocks, seeded_rng, EwensPitman, PartitionSummary, ZetaDraw, ZetaSampler};
use crate::numerics::{f64_to_rational, Scalar};
use crate::{Error, Result};

/// A CSV table: header plus rows of already formatted cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

/// Sizes of a simulation study.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureScale {
    /// Initial sample size.
    pub n: usize,
    /// Additional sample sizes evaluated.
    pub m_grid: Vec<usize>,
    /// Independent initial samples, where the figure uses more than one.
    pub replicates: usize,
    /// Additional sample size of the replicate study.
    pub m_replicate: usize,
    /// Independent draws averaged in the discrepancy summary of figure 1.
    pub discrepancy_draws: usize,
}

impl FigureScale {
    /// n = 200, m = 0, 10, ..., 400, 500 replicates at m = 100, 50
    /// discrepancy draws.
    pub fn desk() -> Self {
        FigureScale {
            n: 200,
            m_grid: (0..=400).step_by(10).collect(),
            replicates: 500,
            m_replicate: 100,
            discrepancy_draws: 50,
        }
    }

    /// n = 2000, m = 0, 50, ..., 4000, 1000 replicates at m = 500, 20
    /// discrepancy draws.
    pub fn full() -> Self {
        FigureScale {
            n: 2000,
            m_grid: (0..=4000).step_by(50).collect(),
            replicates: 1000,
            m_replicate: 500,
            discrepancy_draws: 20,
        }
    }
}

/// Parameters shared by the three studies.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureConfig {
    pub scale: FigureScale,
    pub seed: u64,
    /// Data-generating Ewens–Pitman parameters.
    pub sigma: f64,
    pub theta: f64,
    /// Analysis grids.
    pub sigma_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    /// Zeta scale of the misspecified study.
    pub zeta_scale: f64,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            scale: FigureScale::desk(),
            seed: 2024,
            sigma: 0.5,
            theta: 100.0,
            sigma_grid: vec![0.3, 0.5, 0.7],
            theta_grid: vec![50.0, 100.0, 200.0],
            zeta_scale: 1.3,
        }
    }
}

fn model<T: Scalar>(sigma: f64, theta: f64) -> Result<EwensPitman<T>> {
    let conv = |x: f64| {
        f64_to_rational(x)
            .map(|r| T::from_rational(&r))
            .ok_or_else(|| Error::Domain(format!("parameter {x} is not finite")))
    };
    EwensPitman::new(conv(sigma)?, conv(theta)?)
}

/// Shortest round-trip decimal, switching to exponent notation outside
/// `[1e-5, 1e16)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt(x: f64) -> String {
    format_f64(x)
}

/// Estimator curves `(complete, incomplete, new)` for one data set and one
/// analysis model.
fn curves<T: Scalar>(
    summary: &PartitionSummary,
    sigma: f64,
    theta: f64,
    grid: &[usize],
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let ep = model::<T>(sigma, theta)?;
    let (n, j) = (summary.n(), summary.j());
    let complete = ep_old_estimator_curve(&ep, &ConditioningInfo::complete(summary.clone()), grid)?
        .expect("complete information has a closed form");
    let incomplete = ep_old_estimator_curve(&ep, &ConditioningInfo::incomplete(n, j)?, grid)?
        .expect("incomplete information has a closed form");
    let fresh = ep_new_species_curve(&ep, n, j, grid)?;
    let f = |v: Vec<T>| v.iter().map(Scalar::to_f64).collect::<Vec<_>>();
    Ok((f(complete), f(incomplete), f(fresh)))
}

/// Mean over the grid of `|complete - incomplete|`.
pub fn mean_discrepancy(complete: &[f64], incomplete: &[f64]) -> f64 {
    let total: f64 = complete.iter().zip(incomplete).map(|(a, b)| (a - b).abs()).sum();
    total / complete.len().max(1) as f64
}

fn draw_ep(cfg: &FigureConfig, stream: u64) -> Result<PartitionSummary> {
    let mut rng = seeded_rng(cfg.seed, stream);
    PartitionSummary::new(crp_blocks(cfg.sigma, cfg.theta, cfg.scale.n, &mut rng))
}

/// Ewens–Pitman draws analysed under a σ grid (θ fixed at the truth) and a
/// θ grid (σ fixed at the truth). Curves are shown for the first draw; the
/// discrepancy summary also averages the signed gap between the complete
/// and incomplete curves over `discrepancy_draws` draws before taking the
/// mean absolute value over the grid.
///
/// Tables: `fig1_sigma` and `fig1_theta` with columns
/// `sigma,theta,m,old_complete,old_incomplete,new_species`;
/// `fig1_discrepancy` with
/// `panel,sigma,theta,mean_abs_discrepancy,draws,mean_abs_averaged_discrepancy`;
/// `fig1_sample` with the first draw.
pub fn figure1<T: Scalar>(cfg: &FigureConfig) -> Result<Vec<Table>> {
    let grid = &cfg.scale.m_grid;
    let settings: Vec<(&str, f64, f64)> = cfg
        .sigma_grid
        .iter()
        .map(|&s| ("sigma", s, cfg.theta))
        .chain(cfg.theta_grid.iter().map(|&t| ("theta", cfg.sigma, t)))
        .collect();
    let summary = draw_ep(cfg, 0)?;
    let first: Vec<_> = settings
        .iter()
        .map(|&(_, s, t)| curves::<T>(&summary, s, t, grid))
        .collect::<Result<_>>()?;
    let draws = cfg.scale.discrepancy_draws.max(1);
    let gaps: Vec<Vec<Vec<f64>>> = (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let sample = if d == 0 { summary.clone() } else { draw_ep(cfg, d)? };
            settings
                .iter()
                .map(|&(_, s, t)| {
                    let (c, i, _) = curves::<T>(&sample, s, t, grid)?;
                    Ok(c.iter().zip(&i).map(|(a, b)| a - b).collect())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let header = ["sigma", "theta", "m", "old_complete", "old_incomplete", "new_species"];
    let mut panels = vec![Table::new("fig1_sigma", &header), Table::new("fig1_theta", &header)];
    let mut disc = Table::new(
        "fig1_discrepancy",
        &["panel", "sigma", "theta", "mean_abs_discrepancy", "draws", "mean_abs_averaged_discrepancy"],
    );
    for (k, &(panel, s, t)) in settings.iter().enumerate() {
        let (c, i, new) = &first[k];
        let table = &mut panels[usize::from(panel == "theta")];
        for (idx, &m) in grid.iter().enumerate() {
            table.rows.push(vec![fmt(s), fmt(t), m.to_string(), fmt(c[idx]), fmt(i[idx]), fmt(new[idx])]);
        }
        let averaged: f64 = (0..grid.len())
            .map(|idx| (gaps.iter().map(|g| g[k][idx]).sum::<f64>() / draws as f64).abs())
            .sum::<f64>()
            / grid.len().max(1) as f64;
        disc.rows.push(vec![
            panel.into(),
            fmt(s),
            fmt(t),
            fmt(mean_discrepancy(c, i)),
            draws.to_string(),
            fmt(averaged),
        ]);
    }
    panels.push(disc);
    panels.push(sample_table("fig1_sample", &summary));
    Ok(panels)
}

fn sample_table(name: &str, summary: &PartitionSummary) -> Table {
    let mut t = Table::new(name, &["n", "j", "frequency", "count"]);
    for (f, c) in summary.mults().into_iter().rev() {
        t.rows.push(vec![summary.n().to_string(), summary.j().to_string(), f.to_string(), c.to_string()]);
    }
    t
}

/// One zeta draw analysed under Ewens–Pitman models: a panel per θ with σ
/// varying, plus the expected number of old species seen again under the
/// true zeta law.
///
/// Tables: `fig2_estimates` with `theta,sigma,m,old_complete,old_incomplete`
/// and `fig2_truth` with `m,expected_old`.
pub fn figure2<T: Scalar>(cfg: &FigureConfig) -> Result<Vec<Table>> {
    let sampler = ZetaSampler::new(cfg.zeta_scale)?;
    let mut rng = seeded_rng(cfg.seed, 0);
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    let mut capped = 0usize;
    for _ in 0..cfg.scale.n {
        match sampler.draw(&mut rng) {
            ZetaDraw::Value(k) => *counts.entry(k).or_default() += 1,
            ZetaDraw::Capped => capped += 1,
        }
    }
    let mut freqs: Vec<usize> = counts.values().copied().collect();
    freqs.extend(std::iter::repeat_n(1, capped));
    let summary = PartitionSummary::new(freqs)?;
    let grid = &cfg.scale.m_grid;
    let mut est = Table::new("fig2_estimates", &["theta", "sigma", "m", "old_complete", "old_incomplete"]);
    for &t in &cfg.theta_grid {
        for &s in &cfg.sigma_grid {
            let (c, i, _) = curves::<T>(&summary, s, t, grid)?;
            for (idx, &m) in grid.iter().enumerate() {
                est.rows.push(vec![fmt(t), fmt(s), m.to_string(), fmt(c[idx]), fmt(i[idx])]);
            }
        }
    }
    // Capped species have probability below the cap's mass and are left out.
    let probs: Vec<f64> = counts.keys().map(|&k| sampler.pmf(k)).collect();
    let mut truth = Table::new("fig2_truth", &["m", "expected_old"]);
    for &m in grid {
        let e: f64 = probs.iter().map(|p| -((-p).ln_1p() * m as f64).exp_m1()).sum();
        truth.rows.push(vec![m.to_string(), fmt(e)]);
    }
    Ok(vec![est, truth, sample_table("fig2_sample", &summary)])
}

/// Replicated Ewens–Pitman draws; both estimators at a single additional
/// sample size, analysed under the data-generating parameters.
///
/// Tables: `fig3_replicates` with `replicate,j,complete,incomplete` and
/// `fig3_summary` with `estimator,mean,variance,se_mean`.
pub fn figure3<T: Scalar>(cfg: &FigureConfig) -> Result<Vec<Table>> {
    let m = cfg.scale.m_replicate;
    let n = cfg.scale.n;
    let ep = model::<T>(cfg.sigma, cfg.theta)?;
    let pairs: Vec<Result<(usize, f64, f64)>> = (0..cfg.scale.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(cfg.seed, r as u64);
            let summary = PartitionSummary::new(crp_blocks(cfg.sigma, cfg.theta, n, &mut rng))?;
            let j = summary.j();
            let c = ep_old_estimator_curve(&ep, &ConditioningInfo::complete(summary), &[m])?
                .expect("closed form");
            let i = ep_old_estimator_curve(&ep, &ConditioningInfo::incomplete(n, j)?, &[m])?
                .expect("closed form");
            Ok((j, c[0].to_f64(), i[0].to_f64()))
        })
        .collect();
    let mut reps = Table::new("fig3_replicates", &["replicate", "j", "complete", "incomplete"]);
    let (mut cs, mut is) = (Vec::new(), Vec::new());
    for (r, p) in pairs.into_iter().enumerate() {
        let (j, c, i) = p?;
        reps.rows.push(vec![r.to_string(), j.to_string(), fmt(c), fmt(i)]);
        cs.push(c);
        is.push(i);
    }
    let mut summary = Table::new("fig3_summary", &["estimator", "mean", "variance", "se_mean"]);
    for (name, v) in [("complete", &cs), ("incomplete", &is)] {
        let s = SampleStats::of(v);
        summary.rows.push(vec![name.into(), fmt(s.mean), fmt(s.variance), fmt(s.se_mean())]);
    }
    Ok(vec![reps, summary])
}

/// Mean and unbiased variance of a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleStats {
    pub len: usize,
    pub mean: f64,
    pub variance: f64,
}

impl SampleStats {
    pub fn of(v: &[f64]) -> Self {
        let len = v.len();
        let mean = v.iter().sum::<f64>() / len as f64;
        let variance = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len.max(2) - 1) as f64;
        SampleStats { len, mean, variance }
    }

    pub fn se_mean(&self) -> f64 {
        (self.variance / self.len as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LogF64;

    fn small() -> FigureConfig {
        FigureConfig {
            scale: FigureScale {
                n: 60,
                m_grid: vec![0, 5, 20, 80],
                replicates: 20,
                m_replicate: 30,
                discrepancy_draws: 4,
            },
            ..FigureConfig::default()
        }
    }

    #[test]
    fn figure_tables_have_schema() {
        let cfg = small();
        let f1 = figure1::<LogF64>(&cfg).unwrap();
        assert_eq!(f1[0].header, ["sigma", "theta", "m", "old_complete", "old_incomplete", "new_species"]);
        assert_eq!(f1[0].rows.len(), 3 * 4);
        let f2 = figure2::<LogF64>(&cfg).unwrap();
        assert_eq!(f2[1].column("expected_old").unwrap()[0], 0.0);
        let f3 = figure3::<LogF64>(&cfg).unwrap();
        assert_eq!(f3[0].rows.len(), 20);
        assert_eq!(figure3::<LogF64>(&cfg).unwrap(), f3);
        assert!(f1[0].to_csv().unwrap().starts_with("sigma,theta,m,old_complete"));
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, 0.25, 1e-7, 3.5e-120, 2e20, -4.2e-9, 123456.789] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_f64(1.0), "1");
        assert_eq!(format_f64(1.5e-100), "1.5e-100");
    }

    #[test]
    fn sample_stats() {
        let s = SampleStats::of(&[1.0, 2.0, 3.0]);
        assert_eq!((s.mean, s.variance), (2.0, 1.0));
    }
}
