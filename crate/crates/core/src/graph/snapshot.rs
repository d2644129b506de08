//! `describegraph` snapshot I/O.
//!
//! Accepted subset:
//!
//! ```json
//! {"nodes": [{"pub_key": "02ab..", "alias": "x"}],
//!  "edges": [{"channel_id": "123", "node1_pub": "02ab..", "node2_pub": "03cd..",
//!             "capacity": "100000",
//!             "node1_policy": {"fee_base_msat": "1000", "fee_rate_milli_msat": "1"},
//!             "node2_policy": null}]}
//! ```
//!
//! Numbers may be given as JSON integers or decimal strings. Unknown fields
//! are ignored. Two optional extensions are understood: a top-level
//! `timestamp` (unix seconds) and per-edge `node1_balance` / `node2_balance`
//! used by [`BalanceModel::Explicit`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ChannelEdge, FeePolicy, GraphError, Node, NodeId, PcnGraph, DEFAULT_FEE_POLICY};

/// How per-direction balances are initialised from capacities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceModel {
    /// Both directions may route the full capacity (best case).
    #[default]
    CapacityBothWays,
    /// `capacity / 2` towards node2, the remainder towards node1.
    HalfSplit,
    /// Balances read from `node1_balance` / `node2_balance`.
    Explicit,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(u64),
    Text(String),
}

impl Number {
    fn parse(&self, channel_id: &str, field: &'static str) -> Result<u64, GraphError> {
        match self {
            Number::Int(v) => Ok(*v),
            Number::Text(s) => s.trim().parse().map_err(|_| GraphError::InvalidField {
                channel_id: channel_id.to_string(),
                field,
                value: s.clone(),
            }),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Ident {
    Int(u64),
    Text(String),
}

impl Ident {
    fn into_string(self) -> String {
        match self {
            Ident::Int(v) => v.to_string(),
            Ident::Text(s) => s,
        }
    }
}

#[derive(Deserialize)]
struct RawSnapshot {
    #[serde(default)]
    timestamp: Option<u64>,
    #[serde(default)]
    nodes: Vec<RawNode>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Deserialize)]
struct RawNode {
    pub_key: String,
    #[serde(default)]
    alias: Option<String>,
}

#[derive(Deserialize)]
struct RawEdge {
    channel_id: Ident,
    node1_pub: String,
    node2_pub: String,
    #[serde(default)]
    capacity: Option<Number>,
    #[serde(default)]
    node1_policy: Option<RawPolicy>,
    #[serde(default)]
    node2_policy: Option<RawPolicy>,
    #[serde(default)]
    node1_balance: Option<Number>,
    #[serde(default)]
    node2_balance: Option<Number>,
}

#[derive(Deserialize)]
struct RawPolicy {
    #[serde(default)]
    fee_base_msat: Option<Number>,
    #[serde(default)]
    fee_rate_milli_msat: Option<Number>,
}

impl RawPolicy {
    fn resolve(&self, channel_id: &str) -> Result<FeePolicy, GraphError> {
        let base_fee_msat = match &self.fee_base_msat {
            Some(n) => n.parse(channel_id, "fee_base_msat")?,
            None => DEFAULT_FEE_POLICY.base_fee_msat,
        };
        let proportional_millionths = match &self.fee_rate_milli_msat {
            Some(n) => n.parse(channel_id, "fee_rate_milli_msat")?,
            None => DEFAULT_FEE_POLICY.proportional_millionths,
        };
        Ok(FeePolicy {
            base_fee_msat,
            proportional_millionths,
        })
    }
}

fn policy(raw: &Option<RawPolicy>, channel_id: &str) -> Result<FeePolicy, GraphError> {
    raw.as_ref().map_or(Ok(DEFAULT_FEE_POLICY), |p| p.resolve(channel_id))
}

fn convert_edge(raw: RawEdge, model: BalanceModel) -> Result<ChannelEdge, GraphError> {
    let channel_id = raw.channel_id.into_string();
    let capacity = raw
        .capacity
        .as_ref()
        .ok_or_else(|| GraphError::MissingCapacity {
            channel_id: channel_id.clone(),
        })?
        .parse(&channel_id, "capacity")?;
    if capacity == 0 {
        return Err(GraphError::ZeroCapacity { channel_id });
    }
    let (balance_ab, balance_ba) = match model {
        BalanceModel::CapacityBothWays => (capacity, capacity),
        BalanceModel::HalfSplit => (capacity / 2, capacity - capacity / 2),
        BalanceModel::Explicit => match (&raw.node1_balance, &raw.node2_balance) {
            (Some(x), Some(y)) => {
                let ab = x.parse(&channel_id, "node1_balance")?;
                let ba = y.parse(&channel_id, "node2_balance")?;
                if ab > capacity || ba > capacity {
                    return Err(GraphError::BalanceExceedsCapacity { channel_id });
                }
                (ab, ba)
            }
            _ => return Err(GraphError::MissingBalance { channel_id }),
        },
    };
    let a = NodeId::new(raw.node1_pub).map_err(|_| GraphError::InvalidField {
        channel_id: channel_id.clone(),
        field: "node1_pub",
        value: String::new(),
    })?;
    let b = NodeId::new(raw.node2_pub).map_err(|_| GraphError::InvalidField {
        channel_id: channel_id.clone(),
        field: "node2_pub",
        value: String::new(),
    })?;
    Ok(ChannelEdge {
        policy_ab: policy(&raw.node1_policy, &channel_id)?,
        policy_ba: policy(&raw.node2_policy, &channel_id)?,
        channel_id,
        a,
        b,
        capacity,
        balance_ab,
        balance_ba,
    })
}

/// Parses snapshot JSON text.
pub fn parse_snapshot(text: &str, model: BalanceModel) -> Result<PcnGraph, GraphError> {
    let raw: RawSnapshot = serde_json::from_str(text)?;
    let nodes = raw
        .nodes
        .into_iter()
        .map(|n| {
            Ok(Node {
                id: NodeId::new(n.pub_key)?,
                alias: n.alias,
            })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    let edges = raw
        .edges
        .into_iter()
        .map(|e| convert_edge(e, model))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PcnGraph::new(nodes, edges)?.with_snapshot_time(raw.timestamp))
}

pub fn load_snapshot(path: impl AsRef<Path>, model: BalanceModel) -> Result<PcnGraph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_snapshot(&text, model)
}

#[derive(Serialize)]
struct OutSnapshot<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    nodes: Vec<OutNode<'a>>,
    edges: Vec<OutEdge<'a>>,
}

#[derive(Serialize)]
struct OutNode<'a> {
    pub_key: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alias: Option<&'a str>,
}

#[derive(Serialize)]
struct OutEdge<'a> {
    channel_id: &'a str,
    node1_pub: &'a str,
    node2_pub: &'a str,
    capacity: String,
    node1_policy: OutPolicy,
    node2_policy: OutPolicy,
    node1_balance: String,
    node2_balance: String,
}

#[derive(Serialize)]
struct OutPolicy {
    fee_base_msat: String,
    fee_rate_milli_msat: String,
}

impl From<FeePolicy> for OutPolicy {
    fn from(p: FeePolicy) -> Self {
        OutPolicy {
            fee_base_msat: p.base_fee_msat.to_string(),
            fee_rate_milli_msat: p.proportional_millionths.to_string(),
        }
    }
}

/// Serialises a graph in the snapshot schema, balances included. Reading the
/// result back with [`BalanceModel::Explicit`] reproduces the graph as long
/// as no balance exceeds its channel capacity.
pub fn to_snapshot_json(g: &PcnGraph) -> String {
    let out = OutSnapshot {
        timestamp: g.snapshot_time(),
        nodes: g
            .nodes()
            .iter()
            .map(|n| OutNode {
                pub_key: n.id.as_str(),
                alias: n.alias.as_deref(),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| OutEdge {
                channel_id: &e.channel_id,
                node1_pub: e.a.as_str(),
                node2_pub: e.b.as_str(),
                capacity: e.capacity.to_string(),
                node1_policy: e.policy_ab.into(),
                node2_policy: e.policy_ba.into(),
                node1_balance: e.balance_ab.to_string(),
                node2_balance: e.balance_ba.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&out).expect("snapshot serialisation cannot fail")
}

pub fn write_snapshot(g: &PcnGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let path = path.as_ref();
    fs::write(path, to_snapshot_json(g)).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{
      "nodes": [{"pub_key": "A", "alias": "target", "last_update": 1548979200},
                {"pub_key": "B"}, {"pub_key": "C"}, {"pub_key": "D"}],
      "edges": [
        {"channel_id": "1", "node1_pub": "A", "node2_pub": "B", "capacity": "75000",
         "node1_policy": {"fee_base_msat": "2000", "fee_rate_milli_msat": "10", "disabled": false},
         "node2_policy": null},
        {"channel_id": 2, "node1_pub": "A", "node2_pub": "C", "capacity": 100000},
        {"channel_id": "3", "node1_pub": "D", "node2_pub": "A", "capacity": "125000", "chan_point": "x:0"}
      ]
    }"#;

    #[test]
    fn loads_fixture_with_capacity_both_ways() {
        let g = parse_snapshot(FIXTURE, BalanceModel::CapacityBothWays).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let caps: Vec<u64> = g.edges().iter().map(|e| e.capacity).collect();
        assert_eq!(caps, [75_000, 100_000, 125_000]);
        for e in g.edges() {
            assert_eq!((e.balance_ab, e.balance_ba), (e.capacity, e.capacity));
        }
        let c1 = g.channel("1").unwrap();
        assert_eq!(c1.policy_ab.base_fee_msat, 2000);
        assert_eq!(c1.policy_ab.proportional_millionths, 10);
        assert_eq!(c1.policy_ba, DEFAULT_FEE_POLICY);
        assert_eq!(g.nodes()[0].alias.as_deref(), Some("target"));
        let a = g.node_index(&"A".into()).unwrap();
        assert_eq!(g.outbound_balance(a), 300_000);
    }

    #[test]
    fn half_split_balances() {
        let g = parse_snapshot(FIXTURE, BalanceModel::HalfSplit).unwrap();
        let e = g.channel("1").unwrap();
        assert_eq!((e.balance_ab, e.balance_ba), (37_500, 37_500));
        let e = g.channel("3").unwrap();
        assert_eq!(e.balance_ab + e.balance_ba, 125_000);
    }

    #[test]
    fn empty_snapshot() {
        let g = parse_snapshot(r#"{"nodes": [], "edges": []}"#, BalanceModel::default()).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn validation_errors_name_the_channel() {
        let dangling = r#"{"nodes":[{"pub_key":"a"}],"edges":[{"channel_id":"chan-9","node1_pub":"a","node2_pub":"zz","capacity":"5"}]}"#;
        let err = parse_snapshot(dangling, BalanceModel::default()).unwrap_err();
        assert!(matches!(err, GraphError::DanglingEndpoint { ref channel_id, .. } if channel_id == "chan-9"));
        assert!(err.to_string().contains("chan-9"));

        let zero = r#"{"nodes":[{"pub_key":"a"},{"pub_key":"b"}],"edges":[{"channel_id":"z","node1_pub":"a","node2_pub":"b","capacity":"0"}]}"#;
        assert!(matches!(
            parse_snapshot(zero, BalanceModel::default()).unwrap_err(),
            GraphError::ZeroCapacity { .. }
        ));
        let absent = r#"{"nodes":[{"pub_key":"a"},{"pub_key":"b"}],"edges":[{"channel_id":"m","node1_pub":"a","node2_pub":"b"}]}"#;
        assert!(matches!(
            parse_snapshot(absent, BalanceModel::default()).unwrap_err(),
            GraphError::MissingCapacity { .. }
        ));
        let garbage = r#"{"nodes":[{"pub_key":"a"},{"pub_key":"b"}],"edges":[{"channel_id":"g","node1_pub":"a","node2_pub":"b","capacity":"-3"}]}"#;
        assert!(matches!(
            parse_snapshot(garbage, BalanceModel::default()).unwrap_err(),
            GraphError::InvalidField { field: "capacity", .. }
        ));
        let looped = r#"{"nodes":[{"pub_key":"a"}],"edges":[{"channel_id":"s","node1_pub":"a","node2_pub":"a","capacity":"5"}]}"#;
        assert!(matches!(
            parse_snapshot(looped, BalanceModel::default()).unwrap_err(),
            GraphError::SelfLoop { .. }
        ));
        assert!(matches!(
            parse_snapshot("{\"nodes\": [", BalanceModel::default()).unwrap_err(),
            GraphError::Parse(_)
        ));
    }

    #[test]
    fn explicit_model_requires_bounded_balances() {
        let missing = r#"{"nodes":[{"pub_key":"a"},{"pub_key":"b"}],"edges":[{"channel_id":"e","node1_pub":"a","node2_pub":"b","capacity":"5"}]}"#;
        assert!(matches!(
            parse_snapshot(missing, BalanceModel::Explicit).unwrap_err(),
            GraphError::MissingBalance { .. }
        ));
        let over = r#"{"nodes":[{"pub_key":"a"},{"pub_key":"b"}],"edges":[{"channel_id":"e","node1_pub":"a","node2_pub":"b","capacity":"5","node1_balance":6,"node2_balance":0}]}"#;
        assert!(matches!(
            parse_snapshot(over, BalanceModel::Explicit).unwrap_err(),
            GraphError::BalanceExceedsCapacity { .. }
        ));
    }

    #[test]
    fn serialise_then_load_round_trips() {
        let g = parse_snapshot(FIXTURE, BalanceModel::HalfSplit).unwrap().with_snapshot_time(Some(1_548_979_200));
        let back = parse_snapshot(&to_snapshot_json(&g), BalanceModel::Explicit).unwrap();
        assert_eq!(back, g);
    }
}
