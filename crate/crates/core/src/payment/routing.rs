use std::collections::{BTreeMap, VecDeque};

use crate::graph::{Direction, PcnGraph};

use super::{PaymentError, PaymentOutcome, PaymentSpec};

/// A routed path: node indices and the `(channel, direction)` of each hop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub nodes: Vec<usize>,
    pub hops: Vec<(usize, Direction)>,
}

/// Shortest-path router with reusable scratch buffers.
pub struct Router {
    dist: Vec<usize>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Router {
    pub fn new(node_count: usize) -> Self {
        Router {
            dist: vec![usize::MAX; node_count],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Fewest-hop route from `s` to `t` using only directions whose balance
    /// covers `amount`. Among shortest routes the lexicographically smallest
    /// node sequence wins; among parallel channels, the first in input order.
    pub fn find(&mut self, g: &PcnGraph, s: usize, t: usize, amount: u64) -> Option<Route> {
        if self.dist.len() < g.node_count() {
            self.dist.resize(g.node_count(), usize::MAX);
        }
        for &v in &self.touched {
            self.dist[v] = usize::MAX;
        }
        self.touched.clear();
        self.queue.clear();

        // backwards BFS from t over usable incoming directions, until s is labelled
        self.dist[t] = 0;
        self.touched.push(t);
        self.queue.push_back(t);
        'bfs: while let Some(v) = self.queue.pop_front() {
            for &e in g.incident(v) {
                let (u, v_to_u) = g.traverse(e, v);
                if self.dist[u] != usize::MAX || g.edge(e).balance(v_to_u.reverse()) < amount {
                    continue;
                }
                self.dist[u] = self.dist[v] + 1;
                self.touched.push(u);
                if u == s {
                    break 'bfs;
                }
                self.queue.push_back(u);
            }
        }
        if self.dist[s] == usize::MAX {
            return None;
        }

        let mut nodes = vec![s];
        let mut hops = Vec::with_capacity(self.dist[s]);
        let mut cur = s;
        while cur != t {
            let want = self.dist[cur] - 1;
            let mut best: Option<(usize, usize, Direction)> = None;
            for &e in g.incident(cur) {
                let (w, dir) = g.traverse(e, cur);
                if self.dist[w] != want || g.edge(e).balance(dir) < amount {
                    continue;
                }
                if best.is_none_or(|(bw, be, _)| (w, e) < (bw, be)) {
                    best = Some((w, e, dir));
                }
            }
            let (w, e, dir) = best.expect("BFS labels guarantee a next hop");
            hops.push((e, dir));
            nodes.push(w);
            cur = w;
        }
        Some(Route { nodes, hops })
    }
}

pub(crate) fn outcome(g: &PcnGraph, route: &Route, amount: u64) -> PaymentOutcome {
    let mut per_hop_fees = BTreeMap::new();
    let mut fees_paid = 0;
    // the sender pays no fee to itself; each later hop is a forwarding node
    for (i, &(e, dir)) in route.hops.iter().enumerate().skip(1) {
        let fee = g.edge(e).policy(dir).fee_msat(amount);
        fees_paid += fee;
        per_hop_fees.insert(g.node_id(route.nodes[i]).clone(), fee);
    }
    PaymentOutcome {
        success: true,
        path: route.nodes.iter().map(|&v| g.node_id(v).clone()).collect(),
        channels: route.hops.iter().map(|&(e, _)| g.edge(e).channel_id.clone()).collect(),
        fees_paid,
        per_hop_fees,
    }
}

pub(crate) fn apply(g: &mut PcnGraph, route: &Route, amount: u64) {
    for &(e, dir) in &route.hops {
        g.edge_mut(e).shift(dir, amount);
    }
}

fn endpoints(g: &PcnGraph, spec: &PaymentSpec) -> Result<(usize, usize), PaymentError> {
    let s = g
        .node_index(&spec.source)
        .ok_or_else(|| PaymentError::UnknownNode(spec.source.clone()))?;
    let t = g
        .node_index(&spec.target)
        .ok_or_else(|| PaymentError::UnknownNode(spec.target.clone()))?;
    Ok((s, t))
}

/// Routes a payment against the current balances without changing them.
/// An unroutable payment is a failed outcome, not an error.
pub fn route_payment(g: &PcnGraph, spec: &PaymentSpec) -> Result<PaymentOutcome, PaymentError> {
    let (s, t) = endpoints(g, spec)?;
    Ok(match Router::new(g.node_count()).find(g, s, t, spec.amount) {
        Some(route) => outcome(g, &route, spec.amount),
        None => PaymentOutcome::failed(),
    })
}

/// Routes a payment and, on success, shifts `amount` along the path: each
/// traversed direction loses it, the reverse direction gains it.
pub fn execute_payment(g: &mut PcnGraph, spec: &PaymentSpec) -> Result<PaymentOutcome, PaymentError> {
    let (s, t) = endpoints(g, spec)?;
    Ok(match Router::new(g.node_count()).find(g, s, t, spec.amount) {
        Some(route) => {
            let out = outcome(g, &route, spec.amount);
            apply(g, &route, spec.amount);
            out
        }
        None => PaymentOutcome::failed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ChannelEdge, FeePolicy, Node, NodeId};

    fn pay(a: &str, b: &str, amount: u64) -> PaymentSpec {
        PaymentSpec::new(a.into(), b.into(), amount).unwrap()
    }

    #[test]
    fn two_node_shift_conserves_channel_total() {
        let mut g = PcnGraph::new(vec![Node::new("a"), Node::new("b")], vec![ChannelEdge::new("c", "a", "b", 100_000)]).unwrap();
        let out = execute_payment(&mut g, &pay("a", "b", 40_000)).unwrap();
        assert!(out.success);
        assert_eq!(out.fees_paid, 0);
        let e = g.channel("c").unwrap();
        assert_eq!((e.balance_ab, e.balance_ba), (60_000, 140_000));
        assert_eq!(e.balance_ab + e.balance_ba, 2 * e.capacity);
    }

    #[test]
    fn insufficient_balance_fails() {
        let g = PcnGraph::new(
            vec![Node::new("a"), Node::new("b"), Node::new("c")],
            vec![ChannelEdge::new("1", "a", "b", 10), ChannelEdge::new("2", "b", "c", 1000)],
        )
        .unwrap();
        let out = route_payment(&g, &pay("a", "c", 11)).unwrap();
        assert!(!out.success);
        assert!(out.path.is_empty());
        assert!(route_payment(&g, &pay("a", "zz", 1)).is_err());
    }

    #[test]
    fn direction_matters() {
        let g = PcnGraph::new(
            vec![Node::new("a"), Node::new("b")],
            vec![ChannelEdge::new("1", "a", "b", 10).with_balances(0, 10)],
        )
        .unwrap();
        assert!(!route_payment(&g, &pay("a", "b", 1)).unwrap().success);
        assert!(route_payment(&g, &pay("b", "a", 10)).unwrap().success);
    }

    #[test]
    fn tie_break_and_fee_arithmetic() {
        // s -> {x, y} -> t, y is cheaper but x sorts first
        let cheap = FeePolicy {
            base_fee_msat: 0,
            proportional_millionths: 0,
        };
        let g = PcnGraph::new(
            ["s", "t", "x", "y", "z"].iter().map(|&n| Node::new(n)).collect(),
            vec![
                ChannelEdge::new("sy", "s", "y", 100_000),
                ChannelEdge::new("yt", "y", "t", 100_000).with_policies(cheap, cheap),
                ChannelEdge::new("sx", "s", "x", 100_000),
                ChannelEdge::new("xt", "x", "t", 100_000),
                ChannelEdge::new("sz", "s", "z", 100_000),
            ],
        )
        .unwrap();
        let out = route_payment(&g, &pay("s", "t", 50_000)).unwrap();
        let path: Vec<&str> = out.path.iter().map(NodeId::as_str).collect();
        assert_eq!(path, ["s", "x", "t"]);
        assert_eq!(out.channels, ["sx", "xt"]);
        assert_eq!(out.fees_paid, 1050);
        assert_eq!(out.per_hop_fees, BTreeMap::from([(NodeId::from("x"), 1050)]));
    }

    #[test]
    fn prefers_fewer_hops() {
        let g = PcnGraph::new(
            ["a", "b", "c", "d"].iter().map(|&n| Node::new(n)).collect(),
            vec![
                ChannelEdge::new("1", "a", "b", 10),
                ChannelEdge::new("2", "b", "c", 10),
                ChannelEdge::new("3", "c", "d", 10),
                ChannelEdge::new("4", "a", "d", 10),
            ],
        )
        .unwrap();
        let out = route_payment(&g, &pay("a", "d", 5)).unwrap();
        assert_eq!(out.hops(), 1);
        assert!(out.per_hop_fees.is_empty());
    }
}
