//! `seminar` — pipeline driver for detecting coordinated propaganda
//! accounts in archived tweet streams.
//!
//! Every subcommand reads files, writes artifact files into `--out`, and
//! prints a short summary to stdout. Exit codes: 0 success, 1 data error,
//! 2 usage error. All randomized steps take `--seed` and rerunning any
//! stage with equal inputs and flags reproduces its artifacts byte for
//! byte, at any `--threads` setting.

mod commands;
mod context;

use clap::{Parser, Subcommand};

use crate::context::UsageError;

#[derive(Parser)]
#[command(name = "seminar", version, about = "Coordinated-account detection pipeline")]
struct Cli {
    /// JSON config file supplying defaults per subcommand; explicit flags
    /// override it.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate a tweet archive into per-user tallies.
    Ingest(commands::IngestArgs),
    /// Turn aggregates into the behavioral feature matrix.
    Featurize(commands::FeaturizeArgs),
    /// Train an RBF-SVM classifier from a feature matrix and labels.
    Train(commands::TrainArgs),
    /// Leave-one-out cross-validation with P/R/F1 reporting.
    Loocv(commands::LoocvArgs),
    /// Classify users in a feature matrix with a trained model.
    Predict(commands::PredictArgs),
    /// Propagate pro/anti stance labels from a seed set.
    Propagate(commands::PropagateArgs),
    /// Rank hashtag campaigns by burst score.
    Campaigns(commands::CampaignsArgs),
    /// Mainstream-penetration statistics and cross-group hashtag sharing.
    Penetration(commands::PenetrationArgs),
    /// Build, analyze, and export the user similarity network.
    Network(commands::NetworkArgs),
    /// Generate a synthetic corpus with planted ground truth.
    Synth(commands::SynthArgs),
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    let ctx = context::Context::load(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest(args) => commands::ingest(args, &ctx),
        Command::Featurize(args) => commands::featurize(args, &ctx),
        Command::Train(args) => commands::train(args, &ctx),
        Command::Loocv(args) => commands::loocv(args, &ctx),
        Command::Predict(args) => commands::predict(args, &ctx),
        Command::Propagate(args) => commands::propagate(args, &ctx),
        Command::Campaigns(args) => commands::campaigns(args, &ctx),
        Command::Penetration(args) => commands::penetration(args, &ctx),
        Command::Network(args) => commands::network(args, &ctx),
        Command::Synth(args) => commands::synth(args, &ctx),
    }
}

#[cfg(feature = "parallel")]
fn run_in_pool(threads: Option<usize>, cli: Cli) -> anyhow::Result<()> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_in_pool(_threads: Option<usize>, cli: Cli) -> anyhow::Result<()> {
    dispatch(cli)
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    match run_in_pool(threads, cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                std::process::ExitCode::from(2)
            } else {
                std::process::ExitCode::from(1)
            }
        }
    }
}
