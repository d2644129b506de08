//! Payment simulation on the directed balance view of a channel graph.
//!
//! Direction `u → v` of a channel can carry a payment iff its balance covers
//! the amount. Routing is single-path, hop-count shortest path; fees are
//! accounted per forwarding hop but never deducted from balances.

mod flow;
mod routing;
mod sim;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;

pub use flow::{average_max_flow, max_flow, mean_max_flow, FlowNetwork};
pub use routing::{execute_payment, route_payment, Route, Router};
pub(crate) use sim::sample_payments_in;
pub use sim::{
    fee_gain, hub_fee_total, outcome_log_csv, sample_flow_pairs, sample_payments, simulate_payments, success_count,
    success_ratio, OUTCOME_LOG_HEADER,
};

/// Payment attempts per success-ratio measurement.
pub const DEFAULT_ATTEMPTS: usize = 1000;
/// Max-flow rounds per average-flow measurement.
pub const DEFAULT_FLOW_ROUNDS: usize = 1000;

#[derive(Debug, Error)]
pub enum PaymentError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("payment source and target are both {0}")]
    SameEndpoints(NodeId),
    #[error("payment amount must be positive")]
    ZeroAmount,
    #[error("volume pool is empty")]
    EmptyVolumes,
    #[error("volume file {path}, line {line}: {reason}")]
    VolumeFile { path: String, line: usize, reason: String },
    #[error("cannot read volume file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("at least two nodes are needed to sample endpoint pairs")]
    TooFewNodes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaymentSpec {
    pub source: NodeId,
    pub target: NodeId,
    /// satoshi
    pub amount: u64,
}

impl PaymentSpec {
    pub fn new(source: NodeId, target: NodeId, amount: u64) -> Result<Self, PaymentError> {
        if source == target {
            return Err(PaymentError::SameEndpoints(source));
        }
        if amount == 0 {
            return Err(PaymentError::ZeroAmount);
        }
        Ok(PaymentSpec { source, target, amount })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaymentOutcome {
    pub success: bool,
    /// Nodes from source to target; empty on failure.
    pub path: Vec<NodeId>,
    /// Channel ids along the path.
    pub channels: Vec<String>,
    /// Total fees in millisatoshi.
    pub fees_paid: u64,
    /// Fee earned by each forwarding node, millisatoshi.
    pub per_hop_fees: BTreeMap<NodeId, u64>,
}

impl PaymentOutcome {
    pub fn failed() -> Self {
        PaymentOutcome {
            success: false,
            path: Vec::new(),
            channels: Vec::new(),
            fees_paid: 0,
            per_hop_fees: BTreeMap::new(),
        }
    }

    pub fn hops(&self) -> usize {
        self.path.len().saturating_sub(1)
    }
}

/// Empirical pool of payment volumes in satoshi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeModel {
    volumes: Vec<u64>,
}

impl VolumeModel {
    pub fn new(volumes: Vec<u64>) -> Result<Self, PaymentError> {
        if volumes.is_empty() {
            return Err(PaymentError::EmptyVolumes);
        }
        if volumes.contains(&0) {
            return Err(PaymentError::ZeroAmount);
        }
        Ok(VolumeModel { volumes })
    }

    /// Reads one positive integer per line; blank lines are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PaymentError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PaymentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|(line, reason)| PaymentError::VolumeFile {
            path: path.display().to_string(),
            line,
            reason,
        })
    }

    fn parse(text: &str) -> Result<Self, (usize, String)> {
        let mut volumes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            match line.parse::<u64>() {
                Ok(0) => return Err((i + 1, "volume must be positive".into())),
                Ok(v) => volumes.push(v),
                Err(_) => return Err((i + 1, format!("not a positive integer: {line:?}"))),
            }
        }
        if volumes.is_empty() {
            return Err((0, "no volumes".into()));
        }
        Ok(VolumeModel { volumes })
    }

    pub fn volumes(&self) -> &[u64] {
        &self.volumes
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.volumes[rng.random_range(0..self.volumes.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_parsing() {
        let v = VolumeModel::parse("10\n\n 25 \n7\n").unwrap();
        assert_eq!(v.volumes(), [10, 25, 7]);
        assert_eq!(VolumeModel::parse("10\n0\n").unwrap_err().0, 2);
        assert_eq!(VolumeModel::parse("1\nabc\n").unwrap_err().0, 2);
        assert!(VolumeModel::parse("\n").is_err());
        assert!(VolumeModel::new(vec![]).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PaymentSpec::new("a".into(), "a".into(), 5).is_err());
        assert!(PaymentSpec::new("a".into(), "b".into(), 0).is_err());
    }
}
