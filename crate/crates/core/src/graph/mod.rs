//! Channel-graph data model.
//!
//! A [`PcnGraph`] keeps its nodes sorted by [`NodeId`], so node indices are
//! ordered lexicographically by key. Every algorithm in the crate relies on
//! that to make tie-breaks deterministic. Channels keep their input order.

mod snapshot;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use snapshot::{load_snapshot, parse_snapshot, to_snapshot_json, write_snapshot, BalanceModel};

/// Fee policy used when a snapshot omits one direction's policy.
pub const DEFAULT_FEE_POLICY: FeePolicy = FeePolicy {
    base_fee_msat: 1000,
    proportional_millionths: 1,
};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("cannot read snapshot {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed snapshot: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("channel {channel_id}: invalid {field} value {value:?}")]
    InvalidField {
        channel_id: String,
        field: &'static str,
        value: String,
    },
    #[error("channel {channel_id}: missing capacity")]
    MissingCapacity { channel_id: String },
    #[error("channel {channel_id}: capacity must be positive")]
    ZeroCapacity { channel_id: String },
    #[error("channel {channel_id}: unknown endpoint {node}")]
    DanglingEndpoint { channel_id: String, node: NodeId },
    #[error("channel {channel_id}: self-loop on {node}")]
    SelfLoop { channel_id: String, node: NodeId },
    #[error("channel {channel_id}: balance exceeds capacity")]
    BalanceExceedsCapacity { channel_id: String },
    #[error("channel {channel_id}: explicit balance model requires node1_balance and node2_balance")]
    MissingBalance { channel_id: String },
    #[error("empty node id")]
    EmptyNodeId,
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate channel {0}")]
    DuplicateChannel(String),
    #[error("unknown nodes: {}", join_ids(.0))]
    UnknownNodes(Vec<NodeId>),
    #[error("unknown channel {0}")]
    UnknownChannel(String),
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter().map(NodeId::as_str).collect::<Vec<_>>().join(", ")
}

/// Node identity; the hex public key in real snapshots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(key: impl Into<String>) -> Result<Self, GraphError> {
        let key = key.into();
        if key.is_empty() {
            return Err(GraphError::EmptyNodeId);
        }
        Ok(NodeId(key))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    /// Panics on an empty key; use [`NodeId::new`] for untrusted input.
    fn from(key: &str) -> Self {
        NodeId::new(key).expect("node id must be non-empty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub alias: Option<String>,
}

impl Node {
    pub fn new(id: impl Into<NodeId>) -> Self {
        Node {
            id: id.into(),
            alias: None,
        }
    }
}

impl From<NodeId> for Node {
    fn from(id: NodeId) -> Self {
        Node { id, alias: None }
    }
}

/// Outbound forwarding fee of one channel direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeePolicy {
    pub base_fee_msat: u64,
    /// Fee per million routed (ppm).
    pub proportional_millionths: u64,
}

impl FeePolicy {
    /// Fee in millisatoshi for forwarding `amount_sat`, rounded down.
    pub fn fee_msat(&self, amount_sat: u64) -> u64 {
        let proportional = (amount_sat as u128 * 1000 * self.proportional_millionths as u128) / 1_000_000;
        self.base_fee_msat + proportional as u64
    }
}

impl Default for FeePolicy {
    fn default() -> Self {
        DEFAULT_FEE_POLICY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AtoB,
    BtoA,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::AtoB => Direction::BtoA,
            Direction::BtoA => Direction::AtoB,
        }
    }
}

/// A payment channel between `a` and `b`.
///
/// Balances are the routable share per direction. Under the
/// capacity-both-ways model both start at `capacity`, and payment shifts keep
/// `balance_ab + balance_ba` constant, so either side may exceed `capacity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelEdge {
    pub channel_id: String,
    pub a: NodeId,
    pub b: NodeId,
    pub capacity: u64,
    pub balance_ab: u64,
    pub balance_ba: u64,
    pub policy_ab: FeePolicy,
    pub policy_ba: FeePolicy,
}

impl ChannelEdge {
    /// Channel with both balances equal to `capacity` and default policies.
    pub fn new(channel_id: impl Into<String>, a: impl Into<NodeId>, b: impl Into<NodeId>, capacity: u64) -> Self {
        ChannelEdge {
            channel_id: channel_id.into(),
            a: a.into(),
            b: b.into(),
            capacity,
            balance_ab: capacity,
            balance_ba: capacity,
            policy_ab: DEFAULT_FEE_POLICY,
            policy_ba: DEFAULT_FEE_POLICY,
        }
    }

    pub fn with_balances(mut self, balance_ab: u64, balance_ba: u64) -> Self {
        self.balance_ab = balance_ab;
        self.balance_ba = balance_ba;
        self
    }

    pub fn with_policies(mut self, policy_ab: FeePolicy, policy_ba: FeePolicy) -> Self {
        self.policy_ab = policy_ab;
        self.policy_ba = policy_ba;
        self
    }

    pub fn balance(&self, dir: Direction) -> u64 {
        match dir {
            Direction::AtoB => self.balance_ab,
            Direction::BtoA => self.balance_ba,
        }
    }

    pub fn policy(&self, dir: Direction) -> FeePolicy {
        match dir {
            Direction::AtoB => self.policy_ab,
            Direction::BtoA => self.policy_ba,
        }
    }

    /// Direction whose sender is `node`, if `node` is an endpoint.
    pub fn direction_from(&self, node: &NodeId) -> Option<Direction> {
        if *node == self.a {
            Some(Direction::AtoB)
        } else if *node == self.b {
            Some(Direction::BtoA)
        } else {
            None
        }
    }

    /// Moves `amount` from `dir` to the reverse direction.
    ///
    /// Panics if `dir` holds less than `amount`.
    pub(crate) fn shift(&mut self, dir: Direction, amount: u64) {
        let (from, to) = match dir {
            Direction::AtoB => (&mut self.balance_ab, &mut self.balance_ba),
            Direction::BtoA => (&mut self.balance_ba, &mut self.balance_ab),
        };
        *from = from.checked_sub(amount).expect("insufficient balance for shift");
        *to += amount;
    }
}

/// Undirected simple projection: parallel channels collapsed, capacities
/// summed. Neighbour lists are sorted by node index.
#[derive(Clone, Debug)]
pub struct SimpleView {
    pub adj: Vec<Vec<usize>>,
    pub weights: Vec<Vec<u64>>,
}

impl SimpleView {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Builds a view from an undirected unweighted adjacency list (unit weights).
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let weights = adj.iter().map(|l| vec![1; l.len()]).collect();
        SimpleView { adj, weights }
    }
}

/// The channel graph.
#[derive(Clone, Debug)]
pub struct PcnGraph {
    nodes: Vec<Node>,
    edges: Vec<ChannelEdge>,
    snapshot_time: Option<u64>,
    index: HashMap<NodeId, usize>,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    channel_index: HashMap<String, usize>,
}

impl PartialEq for PcnGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges && self.snapshot_time == other.snapshot_time
    }
}

impl PcnGraph {
    /// Validates and indexes a graph.
    ///
    /// Checks node uniqueness, channel-id uniqueness, endpoints, self-loops and
    /// positive capacity. Balance bounds are a snapshot-loading concern.
    pub fn new(mut nodes: Vec<Node>, edges: Vec<ChannelEdge>) -> Result<Self, GraphError> {
        nodes.sort_by(|x, y| x.id.cmp(&y.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(GraphError::DuplicateNode(pair[0].id.clone()));
            }
        }
        let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        let mut ends = Vec::with_capacity(edges.len());
        let mut channel_index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.capacity == 0 {
                return Err(GraphError::ZeroCapacity {
                    channel_id: e.channel_id.clone(),
                });
            }
            if e.a == e.b {
                return Err(GraphError::SelfLoop {
                    channel_id: e.channel_id.clone(),
                    node: e.a.clone(),
                });
            }
            let lookup = |n: &NodeId| {
                index.get(n).copied().ok_or_else(|| GraphError::DanglingEndpoint {
                    channel_id: e.channel_id.clone(),
                    node: n.clone(),
                })
            };
            ends.push((lookup(&e.a)?, lookup(&e.b)?));
            if channel_index.insert(e.channel_id.clone(), i).is_some() {
                return Err(GraphError::DuplicateChannel(e.channel_id.clone()));
            }
        }
        Ok(Self::assemble(nodes, edges, ends, index, channel_index))
    }

    fn assemble(
        nodes: Vec<Node>,
        edges: Vec<ChannelEdge>,
        ends: Vec<(usize, usize)>,
        index: HashMap<NodeId, usize>,
        channel_index: HashMap<String, usize>,
    ) -> Self {
        let mut incident = vec![Vec::new(); nodes.len()];
        for (e, &(a, b)) in ends.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
        }
        PcnGraph {
            nodes,
            edges,
            snapshot_time: None,
            index,
            ends,
            incident,
            channel_index,
        }
    }

    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), Vec::new(), HashMap::new(), HashMap::new())
    }

    pub fn with_snapshot_time(mut self, time: Option<u64>) -> Self {
        self.snapshot_time = time;
        self
    }

    pub fn snapshot_time(&self) -> Option<u64> {
        self.snapshot_time
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> + '_ {
        self.nodes.iter().map(|n| &n.id)
    }

    pub fn node_id(&self, index: usize) -> &NodeId {
        &self.nodes[index].id
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    pub fn edges(&self) -> &[ChannelEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &ChannelEdge {
        &self.edges[e]
    }

    pub(crate) fn edge_mut(&mut self, e: usize) -> &mut ChannelEdge {
        &mut self.edges[e]
    }

    pub fn channel(&self, channel_id: &str) -> Option<&ChannelEdge> {
        self.channel_index.get(channel_id).map(|&e| &self.edges[e])
    }

    pub fn channel_index(&self, channel_id: &str) -> Option<usize> {
        self.channel_index.get(channel_id).copied()
    }

    /// Node indices `(a, b)` of channel `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    /// Channel indices incident to node `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Number of channels at `v`; parallel channels each count.
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Other endpoint of channel `e` seen from `v`, and the direction `v → other`.
    pub fn traverse(&self, e: usize, v: usize) -> (usize, Direction) {
        let (a, b) = self.ends[e];
        if a == v {
            (b, Direction::AtoB)
        } else {
            debug_assert_eq!(b, v);
            (a, Direction::BtoA)
        }
    }

    /// Sum of the balances `v` can send over its channels.
    pub fn outbound_balance(&self, v: usize) -> u64 {
        self.incident[v]
            .iter()
            .map(|&e| {
                let (_, dir) = self.traverse(e, v);
                self.edges[e].balance(dir)
            })
            .sum()
    }

    pub fn simple_projection(&self) -> SimpleView {
        let n = self.nodes.len();
        let mut pairs: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            let cap = self.edges[e].capacity;
            pairs[a].push((b, cap));
            pairs[b].push((a, cap));
        }
        let mut adj = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for mut list in pairs {
            list.sort_unstable_by_key(|&(v, _)| v);
            let mut nbrs: Vec<usize> = Vec::with_capacity(list.len());
            let mut ws: Vec<u64> = Vec::with_capacity(list.len());
            for (v, w) in list {
                if nbrs.last() == Some(&v) {
                    *ws.last_mut().unwrap() += w;
                } else {
                    nbrs.push(v);
                    ws.push(w);
                }
            }
            adj.push(nbrs);
            weights.push(ws);
        }
        SimpleView { adj, weights }
    }

    /// Induced subgraph on the nodes with `keep[v]`. Balances are carried over
    /// unchanged.
    pub fn induced(&self, keep: &[bool]) -> PcnGraph {
        debug_assert_eq!(keep.len(), self.nodes.len());
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for (v, node) in self.nodes.iter().enumerate() {
            if keep[v] {
                remap[v] = nodes.len();
                index.insert(node.id.clone(), nodes.len());
                nodes.push(node.clone());
            }
        }
        let mut edges = Vec::new();
        let mut ends = Vec::new();
        let mut channel_index = HashMap::new();
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            if keep[a] && keep[b] {
                channel_index.insert(self.edges[e].channel_id.clone(), edges.len());
                edges.push(self.edges[e].clone());
                ends.push((remap[a], remap[b]));
            }
        }
        Self::assemble(nodes, edges, ends, index, channel_index).with_snapshot_time(self.snapshot_time)
    }

    /// Graph without `targets` and their channels. Duplicated targets are
    /// allowed; unknown ones are an error listing every unknown id.
    pub fn remove_nodes(&self, targets: &[NodeId]) -> Result<PcnGraph, GraphError> {
        let mut keep = vec![true; self.nodes.len()];
        let mut unknown = BTreeSet::new();
        for t in targets {
            match self.node_index(t) {
                Some(v) => keep[v] = false,
                None => {
                    unknown.insert(t.clone());
                }
            }
        }
        if !unknown.is_empty() {
            return Err(GraphError::UnknownNodes(unknown.into_iter().collect()));
        }
        Ok(self.induced(&keep))
    }

    /// Graph without the listed channels; all nodes are kept.
    pub fn remove_channels<S: AsRef<str>>(&self, channel_ids: &[S]) -> Result<PcnGraph, GraphError> {
        let mut drop = vec![false; self.edges.len()];
        for id in channel_ids {
            let e = self
                .channel_index(id.as_ref())
                .ok_or_else(|| GraphError::UnknownChannel(id.as_ref().to_string()))?;
            drop[e] = true;
        }
        let edges: Vec<ChannelEdge> = self
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(e, _)| e.clone())
            .collect();
        let ends: Vec<(usize, usize)> = self.ends.iter().zip(&drop).filter(|(_, &d)| !d).map(|(&p, _)| p).collect();
        let channel_index = edges.iter().enumerate().map(|(i, e)| (e.channel_id.clone(), i)).collect();
        Ok(Self::assemble(self.nodes.clone(), edges, ends, self.index.clone(), channel_index)
            .with_snapshot_time(self.snapshot_time))
    }

    /// Adds a node and channels touching it. Used to model an attacker joining
    /// the network.
    pub fn with_additions(&self, nodes: Vec<Node>, channels: Vec<ChannelEdge>) -> Result<PcnGraph, GraphError> {
        let mut all_nodes = self.nodes.clone();
        all_nodes.extend(nodes);
        let mut all_edges = self.edges.clone();
        all_edges.extend(channels);
        Ok(PcnGraph::new(all_nodes, all_edges)?.with_snapshot_time(self.snapshot_time))
    }

    /// Connected components as sorted node-index lists, ordered by their
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &e in &self.incident[v] {
                    let (w, _) = self.traverse(e, v);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Index list of the largest component. Ties go to the component holding
    /// the lexicographically smallest node id.
    pub fn largest_component_nodes(&self) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        // components() is ordered by smallest member, so the first maximum wins.
        for comp in self.components() {
            if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
                best = Some(comp);
            }
        }
        best.unwrap_or_default()
    }

    /// Induced subgraph on the largest connected component.
    pub fn largest_connected_component(&self) -> PcnGraph {
        let mut keep = vec![false; self.nodes.len()];
        for v in self.largest_component_nodes() {
            keep[v] = true;
        }
        self.induced(&keep)
    }
}
