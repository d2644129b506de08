//! Topology attacks: channel exhaustion, node isolation, target planning,
//! constrained execution and adversarial advantage.

mod execute;
mod ops;
mod strategy;

use thiserror::Error;

use crate::graph::{GraphError, NodeId, PcnGraph};
use crate::payment::PaymentError;
use crate::topology::TopologyError;

pub use execute::{
    execute_attack, execute_with_baseline, Advantage, Baseline, Constraint, MetricParams, Metrics, SimReport,
    REPORT_CSV_HEADER,
};
pub use ops::{exhaust_channel, isolate_node, Isolation, IsolationMode};
pub use strategy::{plan_targets, AttackPlan, Strategy, Target, DEFAULT_CUT_SAMPLES};

#[derive(Debug, Error)]
pub enum AttackError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Payment(#[from] PaymentError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown channel {0}")]
    UnknownChannel(String),
    #[error("strategy {strategy} needs {param} >= 1")]
    MissingParam { strategy: &'static str, param: &'static str },
    #[error("plan limit must be at least 1")]
    ZeroLimit,
    #[error("plan does not match the graph: {0}")]
    PlanMismatch(String),
    #[error("stale plan: node {node} cost {planned} at planning time, {current} now")]
    StalePlan { node: NodeId, planned: u64, current: u64 },
    #[error("advantage of {metric} is undefined for an a-priori value of 0")]
    UndefinedAdvantage { metric: &'static str },
}

/// Size of the largest connected component.
pub fn reachability(g: &PcnGraph) -> usize {
    g.largest_component_nodes().len()
}

/// Relative change `|1 − m'/m|`.
pub fn advantage(m: f64, m_prime: f64) -> Result<f64, AttackError> {
    relative_change(m, m_prime, "metric")
}

pub(crate) fn relative_change(m: f64, m_prime: f64, metric: &'static str) -> Result<f64, AttackError> {
    if m == 0.0 {
        return Err(AttackError::UndefinedAdvantage { metric });
    }
    Ok((1.0 - m_prime / m).abs())
}
