use std::collections::VecDeque;

use crate::graph::{NodeId, PcnGraph};

use super::sim::sample_flow_pairs;
use super::PaymentError;

/// Residual network of the directed balance view. Each channel becomes an
/// arc pair whose forward capacities are the two directional balances, so
/// opposite flows cancel as they should.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    n: usize,
    head: Vec<usize>,
    cap: Vec<u64>,
    base: Vec<u64>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    next_arc: Vec<usize>,
}

impl FlowNetwork {
    /// Balance view: arc `a → b` carries `balance_ab`.
    pub fn from_balances(g: &PcnGraph) -> Self {
        Self::build(g, |e| (g.edge(e).balance_ab, g.edge(e).balance_ba))
    }

    /// Capacity view: both directions carry the channel capacity.
    pub fn from_capacities(g: &PcnGraph) -> Self {
        Self::build(g, |e| (g.edge(e).capacity, g.edge(e).capacity))
    }

    fn build(g: &PcnGraph, caps: impl Fn(usize) -> (u64, u64)) -> Self {
        let n = g.node_count();
        let mut net = FlowNetwork {
            n,
            head: Vec::with_capacity(2 * g.edge_count()),
            cap: Vec::with_capacity(2 * g.edge_count()),
            base: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![usize::MAX; n],
            next_arc: vec![0; n],
        };
        for e in 0..g.edge_count() {
            let (a, b) = g.ends(e);
            let (ab, ba) = caps(e);
            net.adj[a].push(net.head.len());
            net.head.push(b);
            net.cap.push(ab);
            net.adj[b].push(net.head.len());
            net.head.push(a);
            net.cap.push(ba);
        }
        net.base = net.cap.clone();
        net
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Arc `2e` is channel `e` in its a→b orientation, `2e+1` the reverse.
    fn reset(&mut self) {
        self.cap.copy_from_slice(&self.base);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let w = self.head[arc];
                if self.cap[arc] > 0 && self.level[w] == usize::MAX {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn augment(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.next_arc[v] < self.adj[v].len() {
            let arc = self.adj[v][self.next_arc[v]];
            let w = self.head[arc];
            if self.cap[arc] > 0 && self.level[w] == self.level[v] + 1 {
                let pushed = self.augment(w, t, limit.min(self.cap[arc]));
                if pushed > 0 {
                    self.cap[arc] -= pushed;
                    self.cap[arc ^ 1] += pushed;
                    return pushed;
                }
            }
            self.next_arc[v] += 1;
        }
        0
    }

    /// Exact maximum `s → t` flow by Dinic's algorithm.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        self.reset();
        if s == t {
            return 0;
        }
        let mut total = 0u64;
        while self.bfs(s, t) {
            self.next_arc.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = self.augment(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                total = total.saturating_add(pushed);
            }
        }
        total
    }

    /// Maximum flow plus the source side of a minimum cut (nodes reachable
    /// from `s` in the final residual network).
    pub fn min_cut(&mut self, s: usize, t: usize) -> (u64, Vec<bool>) {
        let value = self.max_flow(s, t);
        let mut side = vec![false; self.n];
        side[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &arc in &self.adj[v] {
                let w = self.head[arc];
                if self.cap[arc] > 0 && !side[w] {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
        (value, side)
    }
}

/// Maximum flow from `s` to `t` where direction `u → v` of a channel can
/// carry at most its balance. 0 when `t` is unreachable.
pub fn max_flow(g: &PcnGraph, s: &NodeId, t: &NodeId) -> Result<u64, PaymentError> {
    let si = g.node_index(s).ok_or_else(|| PaymentError::UnknownNode(s.clone()))?;
    let ti = g.node_index(t).ok_or_else(|| PaymentError::UnknownNode(t.clone()))?;
    if si == ti {
        return Err(PaymentError::SameEndpoints(s.clone()));
    }
    Ok(FlowNetwork::from_balances(g).max_flow(si, ti))
}

/// Mean max flow over the given ordered pairs. Pairs with an endpoint
/// missing from `g` contribute 0.
pub fn mean_max_flow(g: &PcnGraph, pairs: &[(NodeId, NodeId)]) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    let mut net = FlowNetwork::from_balances(g);
    let total: u128 = pairs
        .iter()
        .map(|(s, t)| match (g.node_index(s), g.node_index(t)) {
            (Some(si), Some(ti)) => net.max_flow(si, ti) as u128,
            _ => 0,
        })
        .sum();
    total as f64 / pairs.len() as f64
}

/// Mean max flow over `rounds` uniformly sampled ordered pairs `s ≠ t`.
pub fn average_max_flow(g: &PcnGraph, rounds: usize, seed: u64) -> Result<f64, PaymentError> {
    let ids: Vec<NodeId> = g.node_ids().cloned().collect();
    let pairs = sample_flow_pairs(&ids, rounds, seed)?;
    Ok(mean_max_flow(g, &pairs))
}
