use std::path::PathBuf;

use clap::Args;
use pcn_resilience::topology::random_failure_experiment;
use serde_json::json;

use crate::report::{self, file_digest, RunInfo};
use crate::{CommonArgs, Format};

pub const DEFAULT_FAILURE_REPS: usize = 100;

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Repetitions per failure count.
    #[arg(long, default_value_t = DEFAULT_FAILURE_REPS)]
    pub reps: usize,
    /// Failure counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30, 40, 50])]
    pub failures: Vec<usize>,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &RobustnessArgs) -> anyhow::Result<()> {
    let g = args.common.load()?;
    let seed = args.common.seed;
    let run = RunInfo::new(
        "robustness",
        seed,
        json!({
            "snapshot_sha256": file_digest(&args.common.snapshot)?,
            "balance_model": args.common.balance_model.label(),
            "reps": args.reps,
            "failures": args.failures,
            "format": args.common.format.label(),
        }),
    );
    let points = random_failure_experiment(&g, &args.failures, args.reps, seed)?;
    let text = match args.common.format {
        Format::Json => run.json(&json!({ "rows": points }))?,
        Format::Csv => {
            let rows: Vec<String> = points.iter().map(|p| format!("{},{}", p.failures, p.mean_components)).collect();
            run.csv("failures,mean_components", &rows)
        }
    };
    report::write(&args.out, &text)
}
