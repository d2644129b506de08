use serde::{Deserialize, Serialize};

use crate::graph::{ChannelEdge, Direction, Node, NodeId, PcnGraph};

use super::AttackError;

/// Drains one direction of a channel into the reverse direction.
pub fn exhaust_channel(g: &PcnGraph, channel_id: &str, dir: Direction) -> Result<PcnGraph, AttackError> {
    let e = g
        .channel_index(channel_id)
        .ok_or_else(|| AttackError::UnknownChannel(channel_id.to_string()))?;
    let mut out = g.clone();
    let edge = out.edge_mut(e);
    let amount = edge.balance(dir);
    edge.shift(dir, amount);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsolationMode {
    /// The attacker funds a channel and pushes real payments.
    Routing,
    /// Held payments lock the balances; nothing is spent.
    Griefing,
}

/// Result of isolating one node.
#[derive(Clone, Debug)]
pub struct Isolation {
    /// Channel-level state after draining, before the attacker's channel is
    /// closed: the target's outbound balances are all 0.
    pub drained: PcnGraph,
    /// Attacker channel as it stands after the drain.
    pub attacker_channel: ChannelEdge,
    /// Routable graph used for metrics: the target is deleted.
    pub routable: PcnGraph,
    /// Amount the attack moves or locks (sum of outbound balances).
    pub cost: u64,
    /// Satoshi actually spent; 0 under griefing.
    pub spend: u64,
}

fn attacker_id(g: &PcnGraph) -> NodeId {
    let mut i = 0u64;
    loop {
        let id = NodeId::from(format!("attacker-{i}").as_str());
        if !g.contains(&id) {
            return id;
        }
        i += 1;
    }
}

/// Isolates `v`: an attacker opens a channel to `v` holding exactly `v`'s
/// total outbound balance, then routes `attacker → v → x` over each of `v`'s
/// channels until every outbound direction of `v` is empty.
pub fn isolate_node(g: &PcnGraph, v: &NodeId, mode: IsolationMode) -> Result<Isolation, AttackError> {
    let vi = g.node_index(v).ok_or_else(|| AttackError::UnknownNode(v.clone()))?;
    let cost = g.outbound_balance(vi);
    let attacker = attacker_id(g);
    let mut cid = format!("{attacker}:{v}");
    while g.channel(&cid).is_some() {
        cid.push('\'');
    }
    let channel = ChannelEdge::new(cid.clone(), attacker.clone(), v.clone(), cost.max(1)).with_balances(cost, 0);
    let mut drained = g.with_additions(vec![Node::new(attacker.clone())], vec![channel])?;
    let entry = drained.channel_index(&cid).expect("attacker channel was just added");
    let vi = drained.node_index(v).expect("target is still present");

    let outbound: Vec<(usize, Direction)> = drained
        .incident(vi)
        .iter()
        .filter(|&&e| e != entry)
        .map(|&e| (e, drained.traverse(e, vi).1))
        .collect();
    for (e, dir) in outbound {
        let amount = drained.edge(e).balance(dir);
        if amount == 0 {
            continue;
        }
        drained.edge_mut(entry).shift(Direction::AtoB, amount);
        drained.edge_mut(e).shift(dir, amount);
    }
    let attacker_channel = drained.edge(entry).clone();
    let drained = drained.remove_nodes(std::slice::from_ref(&attacker))?;
    let routable = g.remove_nodes(std::slice::from_ref(v))?;
    let spend = match mode {
        IsolationMode::Routing => cost,
        IsolationMode::Griefing => 0,
    };
    Ok(Isolation {
        drained,
        attacker_channel,
        routable,
        cost,
        spend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(ab: u64, ba: u64) -> PcnGraph {
        PcnGraph::new(
            vec![Node::new("a"), Node::new("b")],
            vec![ChannelEdge::new("c", "a", "b", 10).with_balances(ab, ba)],
        )
        .unwrap()
    }

    #[test]
    fn exhaust_moves_balance() {
        let g = exhaust_channel(&pair(10, 10), "c", Direction::AtoB).unwrap();
        let e = g.channel("c").unwrap();
        assert_eq!((e.balance_ab, e.balance_ba), (0, 20));
        let again = exhaust_channel(&g, "c", Direction::AtoB).unwrap();
        assert_eq!(again, g);
        assert!(exhaust_channel(&g, "zz", Direction::AtoB).is_err());
    }

    #[test]
    fn isolating_a_lone_node_is_free() {
        let g = PcnGraph::new(vec![Node::new("a"), Node::new("b"), Node::new("z")], vec![ChannelEdge::new("c", "a", "b", 5)]).unwrap();
        let iso = isolate_node(&g, &"z".into(), IsolationMode::Routing).unwrap();
        assert_eq!(iso.cost, 0);
        assert_eq!(iso.routable.node_count(), 2);
        assert!(isolate_node(&g, &"q".into(), IsolationMode::Routing).is_err());
    }

    #[test]
    fn griefing_costs_nothing() {
        let iso = isolate_node(&pair(7, 3), &"a".into(), IsolationMode::Griefing).unwrap();
        assert_eq!((iso.cost, iso.spend), (7, 0));
        let e = iso.drained.channel("c").unwrap();
        assert_eq!((e.balance_ab, e.balance_ba), (0, 10));
    }

    #[test]
    fn isolation_drains_every_outbound_direction() {
        let g = PcnGraph::new(
            ["A", "B", "C", "D"].iter().map(|&n| Node::new(n)).collect(),
            vec![
                ChannelEdge::new("ab", "A", "B", 10).with_balances(3, 7),
                ChannelEdge::new("ac", "C", "A", 12).with_balances(4, 8),
                ChannelEdge::new("ad", "A", "D", 16).with_balances(10, 6),
            ],
        )
        .unwrap();
        let iso = isolate_node(&g, &"A".into(), IsolationMode::Routing).unwrap();
        assert_eq!((iso.cost, iso.spend), (21, 21));
        let bal = |id: &str| {
            let e = iso.drained.channel(id).unwrap();
            (e.balance_ab, e.balance_ba)
        };
        assert_eq!(bal("ab"), (0, 10));
        assert_eq!(bal("ac"), (12, 0));
        assert_eq!(bal("ad"), (0, 16));
        assert_eq!((iso.attacker_channel.balance_ab, iso.attacker_channel.balance_ba), (0, 21));
        assert_eq!(iso.drained.node_count(), 4);
        assert!(!iso.routable.contains(&"A".into()));
        assert_eq!(iso.routable.edge_count(), 0);
    }

    #[test]
    fn isolation_cost_is_total_outbound() {
        let g = PcnGraph::new(
            ["a", "x", "y", "z"].iter().map(|&n| Node::new(n)).collect(),
            vec![
                ChannelEdge::new("1", "a", "x", 75_000),
                ChannelEdge::new("2", "a", "y", 100_000),
                ChannelEdge::new("3", "z", "a", 125_000),
            ],
        )
        .unwrap();
        assert_eq!(isolate_node(&g, &"a".into(), IsolationMode::Routing).unwrap().cost, 300_000);
    }
}
