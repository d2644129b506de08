use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, PcnGraph};
use crate::payment::{
    hub_fee_total, mean_max_flow, sample_flow_pairs, sample_payments, simulate_payments, success_count, PaymentSpec,
    VolumeModel, DEFAULT_ATTEMPTS, DEFAULT_FLOW_ROUNDS,
};

use super::strategy::{AttackPlan, Target};
use super::{reachability, relative_change, AttackError};

pub const REPORT_CSV_HEADER: &str = "strategy,constraint,n_or_budget,spent,s,s_post,r,r_post,F_bar,F_bar_post,delta_s,delta_r,delta_F,g_bar,g_bar_post,delta_g,removed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "kebab-case")]
pub enum Constraint {
    /// Execute the first `n` targets.
    Count(usize),
    /// Execute targets in order while the remaining budget (satoshi) covers them.
    Budget(u64),
}

impl Constraint {
    fn label(&self) -> &'static str {
        match self {
            Constraint::Count(_) => "count",
            Constraint::Budget(_) => "budget",
        }
    }

    fn value(&self) -> u64 {
        match *self {
            Constraint::Count(n) => n as u64,
            Constraint::Budget(b) => b,
        }
    }
}

/// How metrics are measured before and after an attack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub attempts: usize,
    pub flow_rounds: usize,
    pub volumes: VolumeModel,
    /// Adversary hub whose fee income is tracked, if any.
    pub hub: Option<NodeId>,
    /// Zero-spend isolation: every target is affordable.
    pub griefing: bool,
}

impl MetricParams {
    pub fn new(volumes: VolumeModel) -> Self {
        MetricParams {
            attempts: DEFAULT_ATTEMPTS,
            flow_rounds: DEFAULT_FLOW_ROUNDS,
            volumes,
            hub: None,
            griefing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Payment success ratio.
    pub s: f64,
    /// Largest component size.
    pub r: usize,
    #[serde(rename = "F_bar")]
    pub f_bar: f64,
    /// Mean hub fee income per payment, millisatoshi.
    pub g_bar: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Advantage {
    pub delta_s: f64,
    pub delta_r: f64,
    #[serde(rename = "delta_F")]
    pub delta_f: f64,
    /// Absent when no hub is tracked or the hub earned nothing a priori.
    pub delta_g: Option<f64>,
}

/// Sampled payment and flow sequences plus the a-priori metrics they give.
/// Every a-posteriori measurement replays the same sequences.
#[derive(Clone, Debug)]
pub struct Baseline {
    pub specs: Vec<PaymentSpec>,
    pub pairs: Vec<(NodeId, NodeId)>,
    pub metrics: Metrics,
    params: MetricParams,
}

impl Baseline {
    pub fn measure(g: &PcnGraph, params: &MetricParams, seed: u64) -> Result<Self, AttackError> {
        if let Some(hub) = &params.hub {
            if !g.contains(hub) {
                return Err(AttackError::UnknownNode(hub.clone()));
            }
        }
        let ids: Vec<NodeId> = g.node_ids().cloned().collect();
        let specs = sample_payments(&ids, params.attempts, &params.volumes, seed)?;
        let pairs = sample_flow_pairs(&ids, params.flow_rounds, seed)?;
        let metrics = measure(g, &specs, &pairs, params);
        Ok(Baseline {
            specs,
            pairs,
            metrics,
            params: params.clone(),
        })
    }

    pub fn params(&self) -> &MetricParams {
        &self.params
    }

    pub fn remeasure(&self, g: &PcnGraph) -> Metrics {
        measure(g, &self.specs, &self.pairs, &self.params)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn measure(g: &PcnGraph, specs: &[PaymentSpec], pairs: &[(NodeId, NodeId)], params: &MetricParams) -> Metrics {
    let s = ratio(success_count(&simulate_payments(g, specs, false)), specs.len());
    let g_bar = params.hub.as_ref().map(|hub| {
        if !g.contains(hub) || specs.is_empty() {
            return 0.0;
        }
        hub_fee_total(&simulate_payments(g, specs, true), hub) as f64 / specs.len() as f64
    });
    Metrics {
        s,
        r: reachability(g),
        f_bar: mean_max_flow(g, pairs),
        g_bar,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub strategy: String,
    pub constraint: Constraint,
    pub griefing: bool,
    pub a_priori: Metrics,
    pub a_posteriori: Metrics,
    pub advantage: Advantage,
    /// Satoshi spent by the attacker.
    pub spent: u64,
    /// Satoshi moved or locked, whether or not it was spent.
    pub committed: u64,
    /// Number of executed targets (nodes or cuts).
    pub removed: usize,
    pub removed_nodes: Vec<NodeId>,
    pub removed_channels: Vec<String>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SimReport {
    /// One row under [`REPORT_CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let (a, p, d) = (&self.a_priori, &self.a_posteriori, &self.advantage);
        let _ = write!(
            row,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.strategy,
            self.constraint.label(),
            self.constraint.value(),
            self.spent,
            a.s,
            p.s,
            a.r,
            p.r,
            a.f_bar,
            p.f_bar,
            d.delta_s,
            d.delta_r,
            d.delta_f,
            opt(a.g_bar),
            opt(p.g_bar),
            opt(d.delta_g),
            self.removed
        );
        row
    }
}

/// Plans are tied to the graph they came from: every target must exist and
/// node costs must still equal the outbound balance.
fn check_plan(g: &PcnGraph, plan: &AttackPlan) -> Result<(), AttackError> {
    for t in &plan.targets {
        match t {
            Target::Node { id, cost } => {
                let v = g
                    .node_index(id)
                    .ok_or_else(|| AttackError::PlanMismatch(format!("node {id} is not in the graph")))?;
                let current = g.outbound_balance(v);
                if current != *cost {
                    return Err(AttackError::StalePlan {
                        node: id.clone(),
                        planned: *cost,
                        current,
                    });
                }
            }
            Target::Cut { channels, .. } => {
                if let Some(c) = channels.iter().find(|c| g.channel(c).is_none()) {
                    return Err(AttackError::PlanMismatch(format!("channel {c} is not in the graph")));
                }
            }
        }
    }
    Ok(())
}

/// Plans, measures and executes in one go.
pub fn execute_attack(
    g: &PcnGraph,
    plan: &AttackPlan,
    constraint: Constraint,
    params: &MetricParams,
    seed: u64,
) -> Result<SimReport, AttackError> {
    let baseline = Baseline::measure(g, params, seed)?;
    execute_with_baseline(g, plan, constraint, &baseline)
}

/// Executes `plan` under `constraint` and compares against a precomputed
/// baseline of the same graph, so sweeps measure the pristine graph once.
pub fn execute_with_baseline(
    g: &PcnGraph,
    plan: &AttackPlan,
    constraint: Constraint,
    baseline: &Baseline,
) -> Result<SimReport, AttackError> {
    check_plan(g, plan)?;
    let griefing = baseline.params.griefing;
    let mut removed_nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut removed_channels: BTreeSet<String> = BTreeSet::new();
    let (mut spent, mut committed, mut removed) = (0u64, 0u64, 0usize);

    let cap = match constraint {
        Constraint::Count(n) => n,
        Constraint::Budget(_) => usize::MAX,
    };
    for target in &plan.targets {
        if removed >= cap {
            break;
        }
        let cost = match target {
            Target::Node { cost, .. } => *cost,
            // channels an earlier cut already took are not paid for twice
            Target::Cut { channels, .. } => channels
                .iter()
                .filter(|c| !removed_channels.contains(*c))
                .map(|c| g.channel(c).expect("checked").capacity)
                .sum(),
        };
        let spend = if griefing { 0 } else { cost };
        if let Constraint::Budget(budget) = constraint {
            if spent + spend > budget {
                continue;
            }
        }
        match target {
            Target::Node { id, .. } => {
                removed_nodes.insert(id.clone());
            }
            Target::Cut { channels, .. } => {
                if channels.iter().all(|c| removed_channels.contains(c)) {
                    continue;
                }
                removed_channels.extend(channels.iter().cloned());
            }
        }
        spent += spend;
        committed += cost;
        removed += 1;
    }

    let removed_nodes: Vec<NodeId> = removed_nodes.into_iter().collect();
    let removed_channels: Vec<String> = removed_channels.into_iter().collect();
    let attacked = g.remove_channels(&removed_channels)?.remove_nodes(&removed_nodes)?;
    let a_priori = baseline.metrics.clone();
    let a_posteriori = baseline.remeasure(&attacked);
    let advantage = Advantage {
        delta_s: relative_change(a_priori.s, a_posteriori.s, "s")?,
        delta_r: relative_change(a_priori.r as f64, a_posteriori.r as f64, "r")?,
        delta_f: relative_change(a_priori.f_bar, a_posteriori.f_bar, "F_bar")?,
        delta_g: match (a_priori.g_bar, a_posteriori.g_bar) {
            (Some(m), Some(mp)) if m != 0.0 => Some(relative_change(m, mp, "g_bar")?),
            _ => None,
        },
    };
    Ok(SimReport {
        strategy: plan.strategy.label().to_string(),
        constraint,
        griefing,
        a_priori,
        a_posteriori,
        advantage,
        spent,
        committed,
        removed,
        removed_nodes,
        removed_channels,
    })
}
