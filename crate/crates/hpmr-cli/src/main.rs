//! `hpmr` — dataset generation, surrogate training, optimization, reporting,
//! and the random-search baseline, all reproducible from (config, seed).

mod commands;
mod runctx;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hpmr",
    version,
    about = "Techno-economic design optimization for a heat-pipe microreactor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct CommonArgs {
    /// TOML run configuration; every field is optional.
    #[arg(long)]
    config: Option<String>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the command's sample budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Reflector cost mode: be | graphite.
    #[arg(long)]
    mode: Option<hpmr::econ::ReflectorCostMode>,
    /// Output directory root.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw designs, evaluate them, and write the dataset CSV.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fit the two-stage surrogate and report cross-validated R^2.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Dataset CSV (default: the sample command's output).
        #[arg(long)]
        dataset: Option<String>,
    },
    /// Run the PPO optimizer and re-evaluate its champions full-order.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        /// Serialized surrogate (default: the train command's output).
        #[arg(long)]
        model: Option<String>,
        /// Evaluate rewards directly against the bundled physics model.
        #[arg(long)]
        oracle: bool,
    },
    /// Cost-breakdown report for one design (default: nominal).
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// CSV file holding one design row (x_ca,...,x_mr).
        #[arg(long)]
        design: Option<String>,
    },
    /// Pure random-search baseline under the same reward.
    Baseline {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample { common } => commands::sample::run(&common),
        Command::Train { common, dataset } => commands::train::run(&common, dataset.as_deref()),
        Command::Optimize {
            common,
            model,
            oracle,
        } => commands::optimize::run(&common, model.as_deref(), oracle),
        Command::Report { common, design } => commands::report::run(&common, design.as_deref()),
        Command::Baseline { common } => commands::baseline::run(&common),
    };
    if let Err(e) = result {
        // single machine-readable error line
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
