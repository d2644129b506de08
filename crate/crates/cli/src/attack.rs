use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, ValueEnum};
use pcn_resilience::attack::{
    execute_with_baseline, plan_targets, Baseline, Constraint, MetricParams, SimReport, Strategy, DEFAULT_CUT_SAMPLES,
    REPORT_CSV_HEADER,
};
use pcn_resilience::payment::{VolumeModel, DEFAULT_ATTEMPTS, DEFAULT_FLOW_ROUNDS};
use pcn_resilience::rng::replicate_seed;
use pcn_resilience::NodeId;
use serde::Serialize;
use serde_json::json;

use crate::report::{self, file_digest, RunInfo};
use crate::{CommonArgs, Format};

/// Payment volume pool used when no volume file is given, satoshi.
pub const DEFAULT_VOLUME: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum StrategyArg {
    Degree,
    Betweenness,
    Eigenvector,
    Mincut,
    Parallel,
    Random,
    All,
}

const EVERY_STRATEGY: [StrategyArg; 6] = [
    StrategyArg::Degree,
    StrategyArg::Betweenness,
    StrategyArg::Eigenvector,
    StrategyArg::Mincut,
    StrategyArg::Parallel,
    StrategyArg::Random,
];

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("sweep").required(true).args(["n_sweep", "budget_sweep"])))]
pub struct AttackArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Payment volume file, one satoshi amount per line.
    #[arg(long)]
    pub volumes: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub strategy: Vec<StrategyArg>,
    /// Target counts `start:end[:step]`, inclusive.
    #[arg(long)]
    pub n_sweep: Option<String>,
    /// Budgets in satoshi, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub budget_sweep: Option<Vec<u64>>,
    /// Independent seed replicates of the whole sweep.
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_CUT_SAMPLES)]
    pub cut_samples: usize,
    #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
    pub payment_samples: usize,
    /// Adversary hub: excluded from parallel-path ranking, fee gain tracked.
    #[arg(long)]
    pub hub: Option<String>,
    /// Payments per success-ratio measurement.
    #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
    pub attempts: usize,
    /// Terminal pairs per average max-flow measurement.
    #[arg(long, default_value_t = DEFAULT_FLOW_ROUNDS)]
    pub flow_rounds: usize,
    /// Isolate by payment griefing: targets cost nothing.
    #[arg(long)]
    pub griefing: bool,
    /// Re-rank betweenness after every removal.
    #[arg(long)]
    pub adaptive: bool,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `start:end[:step]` into an ascending inclusive list.
pub fn parse_n_sweep(spec: &str) -> anyhow::Result<Vec<usize>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        bail!("n-sweep must be start:end[:step], got {spec:?}");
    }
    let num = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad n-sweep number {s:?}"));
    let (start, end) = (num(parts[0])?, num(parts[1])?);
    let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
    if step == 0 {
        bail!("n-sweep step must be positive");
    }
    if start > end {
        bail!("n-sweep start {start} exceeds end {end}");
    }
    Ok((start..=end).step_by(step).collect())
}

#[derive(Serialize)]
struct Row<'a> {
    rep: usize,
    seed: u64,
    #[serde(flatten)]
    report: &'a SimReport,
}

fn strategy_for(arg: StrategyArg, args: &AttackArgs, volumes: &VolumeModel, hub: Option<&NodeId>, seed: u64) -> Strategy {
    match arg {
        StrategyArg::Degree => Strategy::Degree,
        StrategyArg::Betweenness => Strategy::Betweenness { adaptive: args.adaptive },
        StrategyArg::Eigenvector => Strategy::Eigenvector,
        StrategyArg::Mincut => Strategy::RankedMinCut {
            cut_samples: args.cut_samples,
            seed,
        },
        StrategyArg::Parallel => Strategy::ParallelPaths {
            payment_samples: args.payment_samples,
            hub: hub.cloned(),
            volumes: volumes.clone(),
            seed,
        },
        StrategyArg::Random => Strategy::Random { seed },
        StrategyArg::All => unreachable!("expanded before use"),
    }
}

pub fn run(args: &AttackArgs) -> anyhow::Result<()> {
    let g = args.common.load()?;
    let seed = args.common.seed;
    let volumes = match &args.volumes {
        Some(p) => VolumeModel::from_file(p)?,
        None => VolumeModel::new(vec![DEFAULT_VOLUME])?,
    };
    let hub = args.hub.as_deref().map(NodeId::new).transpose()?;

    let mut strategies: Vec<StrategyArg> = if args.strategy.contains(&StrategyArg::All) {
        EVERY_STRATEGY.to_vec()
    } else {
        args.strategy.clone()
    };
    strategies.sort();
    strategies.dedup();

    let constraints: Vec<Constraint> = match (&args.n_sweep, &args.budget_sweep) {
        (Some(spec), _) => parse_n_sweep(spec)?.into_iter().map(Constraint::Count).collect(),
        (None, Some(budgets)) => {
            let mut b = budgets.clone();
            b.sort_unstable();
            b.dedup();
            b.into_iter().map(Constraint::Budget).collect()
        }
        (None, None) => bail!("one of --n-sweep or --budget-sweep is required"),
    };
    let limit = match (&args.n_sweep, constraints.last()) {
        (Some(_), Some(Constraint::Count(n))) => (*n).max(1),
        _ => g.node_count().max(1),
    };

    let run = RunInfo::new(
        "attack",
        seed,
        json!({
            "snapshot_sha256": file_digest(&args.common.snapshot)?,
            "balance_model": args.common.balance_model.label(),
            "volumes_sha256": match &args.volumes { Some(p) => file_digest(p)?, None => format!("default:{DEFAULT_VOLUME}") },
            "strategies": strategies.iter().map(|s| format!("{s:?}").to_lowercase()).collect::<Vec<_>>(),
            "n_sweep": args.n_sweep,
            "budget_sweep": args.budget_sweep,
            "reps": args.reps,
            "cut_samples": args.cut_samples,
            "payment_samples": args.payment_samples,
            "hub": args.hub,
            "attempts": args.attempts,
            "flow_rounds": args.flow_rounds,
            "griefing": args.griefing,
            "adaptive": args.adaptive,
            "format": args.common.format.label(),
        }),
    );

    let params = MetricParams {
        attempts: args.attempts,
        flow_rounds: args.flow_rounds,
        volumes: volumes.clone(),
        hub: hub.clone(),
        griefing: args.griefing,
    };
    let mut reports: Vec<(usize, u64, SimReport)> = Vec::new();
    for rep in 0..args.reps {
        let rep_seed = if rep == 0 { seed } else { replicate_seed(seed, rep as u64) };
        let baseline = Baseline::measure(&g, &params, rep_seed)?;
        for &s in &strategies {
            let strategy = strategy_for(s, args, &volumes, hub.as_ref(), rep_seed);
            let plan = plan_targets(&g, &strategy, limit)?;
            for &c in &constraints {
                reports.push((rep, rep_seed, execute_with_baseline(&g, &plan, c, &baseline)?));
            }
        }
    }

    let text = match args.common.format {
        Format::Json => {
            let rows: Vec<Row> = reports.iter().map(|(rep, seed, report)| Row { rep: *rep, seed: *seed, report }).collect();
            run.json(&json!({ "rows": rows }))?
        }
        Format::Csv => {
            let rows: Vec<String> = reports.iter().map(|(rep, seed, r)| format!("{rep},{seed},{}", r.csv_row())).collect();
            run.csv(&format!("rep,seed,{REPORT_CSV_HEADER}"), &rows)
        }
    };
    report::write(&args.out, &text)
}
