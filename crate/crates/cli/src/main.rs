//! `pcn-resilience` command-line driver.

mod analyze;
mod attack;
mod report;
mod robustness;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcn_resilience::graph::{load_snapshot, BalanceModel};
use pcn_resilience::PcnGraph;

pub const SEED_ENV: &str = "PCN_RESILIENCE_SEED";

#[derive(Parser, Debug)]
#[command(name = "pcn-resilience", version, about = "Topology analysis and attack simulation for payment channel networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Topology metrics, reference graphs and degree power-law fit.
    Analyze(analyze::AnalyzeArgs),
    /// Plan and execute attacks over a count or budget sweep.
    Attack(attack::AttackArgs),
    /// Mean component count after random node failures.
    Robustness(robustness::RobustnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BalanceArg {
    CapacityBothWays,
    HalfSplit,
    Explicit,
}

impl BalanceArg {
    fn model(self) -> BalanceModel {
        match self {
            BalanceArg::CapacityBothWays => BalanceModel::CapacityBothWays,
            BalanceArg::HalfSplit => BalanceModel::HalfSplit,
            BalanceArg::Explicit => BalanceModel::Explicit,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BalanceArg::CapacityBothWays => "capacity-both-ways",
            BalanceArg::HalfSplit => "half-split",
            BalanceArg::Explicit => "explicit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn label(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Flags shared by every command.
#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Channel graph snapshot (JSON).
    #[arg(long)]
    pub snapshot: PathBuf,
    #[arg(long, value_enum, default_value = "capacity-both-ways")]
    pub balance_model: BalanceArg,
    /// Seed for every random choice; falls back to PCN_RESILIENCE_SEED, then 0.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl CommonArgs {
    pub fn load(&self) -> anyhow::Result<PcnGraph> {
        Ok(load_snapshot(&self.snapshot, self.balance_model.model())?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => analyze::run(a),
        Command::Attack(a) => attack::run(a),
        Command::Robustness(a) => robustness::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
