mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DistArgs, EstimateArgs, FigureArgs, ValidateArgs};

const DIST_SCHEMA: &str = "\
Output schema (CSV): x,probability
  one row per support point, x increasing; probabilities sum to 1.
With --json: an array of {\"x\": .., \"probability\": ..} objects.";

const ESTIMATE_SCHEMA: &str = "\
Output schema (CSV): m,estimate
  one row per additional sample size, in grid order.
With --json: an array of {\"m\": .., \"estimate\": ..} objects.";

const FIGURE_SCHEMA: &str = "\
Output files in --out (CSV, or .json with --json):
  figure 1: fig1_sigma.csv, fig1_theta.csv
              sigma,theta,m,old_complete,old_incomplete,new_species
            fig1_discrepancy.csv  panel,sigma,theta,mean_abs_discrepancy,
                                  draws,mean_abs_averaged_discrepancy
            fig1_sample.csv       n,j,frequency,count
  figure 2: fig2_estimates.csv    theta,sigma,m,old_complete,old_incomplete
            fig2_truth.csv        m,expected_old
            fig2_sample.csv       n,j,frequency,count
  figure 3: fig3_replicates.csv   replicate,j,complete,incomplete
            fig3_summary.csv      estimator,mean,variance,se_mean
Curves come from the first draw; the averaged discrepancy uses --draws
independent draws.
Desk scale: n=200, m-grid 0:400:10, 500 replicates at m=100, 50 draws.
Full scale: n=2000, m-grid 0:4000:50, 1000 replicates at m=500, 20 draws.";

const EXIT_CODES: &str = "\
Exit codes: 0 success, 1 validation failure, 2 invalid input, 3 precision failure.";

/// Looking-backward laws and estimators for Gibbs-type species sampling.
#[derive(Parser, Debug)]
#[command(name = "lookback", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probability mass function of an old- or new-species count.
    #[command(after_help = DIST_SCHEMA)]
    Dist(DistArgs),
    /// Expected old- or new-species counts over additional sample sizes.
    #[command(after_help = ESTIMATE_SCHEMA)]
    Estimate(EstimateArgs),
    /// Simulation studies as CSV tables.
    #[command(after_help = FIGURE_SCHEMA)]
    Figure(FigureArgs),
    /// Run the self-check suite and print a pass/fail table.
    Validate(ValidateArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<lookback::Error>()) {
        Some(e) if e.is_precision() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dist(a) => commands::dist(a).map(|_| true),
        Command::Estimate(a) => commands::estimate(a).map(|_| true),
        Command::Figure(a) => commands::figure(a).map(|_| true),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if code == 3 {
                eprintln!("hint: retry with more bits, e.g. --precision float:1024, or --precision exact");
            }
            ExitCode::from(code)
        }
    }
}
