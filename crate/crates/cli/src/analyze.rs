use std::path::PathBuf;

use clap::{Args, ValueEnum};
use pcn_resilience::powerlaw::{ccdf_table, fit_power_law, goodness_of_fit, CcdfPoint, FitResult, GofResult, DEFAULT_SYNTHETIC_RUNS};
use pcn_resilience::rng::replicate_seed;
use pcn_resilience::topology::{degree_distribution, degrees, generate_reference, metric_report, MetricReport, ReferenceKind, DEFAULT_REFERENCE_RUNS};
use serde::Serialize;
use serde_json::json;

use crate::report::{self, file_digest, RunInfo};
use crate::{CommonArgs, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    ErdosRenyi,
    BarabasiAlbert,
}

impl ReferenceArg {
    fn kind(self) -> ReferenceKind {
        match self {
            ReferenceArg::ErdosRenyi => ReferenceKind::ErdosRenyi,
            ReferenceArg::BarabasiAlbert => ReferenceKind::BarabasiAlbert,
        }
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Random reference graphs averaged for the small-world coefficient.
    #[arg(long, default_value_t = DEFAULT_REFERENCE_RUNS)]
    pub reps: usize,
    /// Also report metrics of a reference graph with the snapshot's size.
    #[arg(long, value_enum)]
    pub reference: Vec<ReferenceArg>,
    /// Synthetic data sets for the power-law goodness of fit.
    #[arg(long, default_value_t = DEFAULT_SYNTHETIC_RUNS)]
    pub gof_runs: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct MetricRow {
    graph: String,
    #[serde(flatten)]
    metrics: MetricReport,
}

#[derive(Serialize)]
struct PowerLawReport {
    observations: usize,
    fit: Option<FitResult>,
    goodness_of_fit: Option<GofResult>,
    error: Option<String>,
    ccdf: Vec<CcdfPoint>,
}

pub fn run(args: &AnalyzeArgs) -> anyhow::Result<()> {
    let g = args.common.load()?;
    let seed = args.common.seed;
    let refs: Vec<&str> = args.reference.iter().map(|r| r.kind().label()).collect();
    let run = RunInfo::new(
        "analyze",
        seed,
        json!({
            "snapshot_sha256": file_digest(&args.common.snapshot)?,
            "balance_model": args.common.balance_model.label(),
            "reps": args.reps,
            "references": refs,
            "gof_runs": args.gof_runs,
            "format": args.common.format.label(),
        }),
    );

    let mut rows = vec![MetricRow {
        graph: "snapshot".into(),
        metrics: metric_report(&g, args.reps, seed)?,
    }];
    let simple_edges = g.simple_projection().edge_count();
    for (i, r) in args.reference.iter().enumerate() {
        let reference = generate_reference(r.kind(), g.node_count(), simple_edges, replicate_seed(seed, 1 + i as u64))?;
        rows.push(MetricRow {
            graph: r.kind().label().into(),
            metrics: metric_report(&reference, args.reps, seed)?,
        });
    }

    let metrics_path = args.out.join(format!("metrics.{}", args.common.format.label()));
    let metrics_text = match args.common.format {
        Format::Json => run.json(&json!({ "rows": rows }))?,
        Format::Csv => {
            let lines: Vec<String> = rows.iter().map(|r| format!("{},{}", r.graph, r.metrics.csv_row())).collect();
            run.csv(&format!("graph,{}", MetricReport::CSV_HEADER), &lines)
        }
    };
    report::write(&metrics_path, &metrics_text)?;

    let hist: Vec<String> = degree_distribution(&g).into_iter().map(|(k, c)| format!("{k},{c}")).collect();
    report::write(&args.out.join("degree_distribution.csv"), &run.csv("degree,count", &hist))?;

    let data: Vec<u64> = degrees(&g).into_iter().map(|d| d as u64).collect();
    let mut pl = PowerLawReport {
        observations: data.len(),
        fit: None,
        goodness_of_fit: None,
        error: None,
        ccdf: Vec::new(),
    };
    match fit_power_law(&data) {
        Ok(fit) => {
            pl.ccdf = ccdf_table(&data, &fit);
            pl.fit = Some(fit);
            match goodness_of_fit(&data, &fit, args.gof_runs, seed) {
                Ok(gof) => pl.goodness_of_fit = Some(gof),
                Err(e) => pl.error = Some(e.to_string()),
            }
        }
        Err(e) => pl.error = Some(e.to_string()),
    }
    let ccdf: Vec<String> = pl
        .ccdf
        .iter()
        .map(|p| format!("{},{},{}", p.k, p.empirical, p.fitted.map(|f| f.to_string()).unwrap_or_default()))
        .collect();
    report::write(&args.out.join("ccdf.csv"), &run.csv("k,ccdf,fitted", &ccdf))?;
    report::write(&args.out.join("powerlaw.json"), &run.json(&pl)?)?;
    Ok(())
}
