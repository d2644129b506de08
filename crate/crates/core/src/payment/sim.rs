use std::fmt::Write;

use rand::Rng;

use crate::graph::{NodeId, PcnGraph};
use crate::rng::{self, SimRng};

use super::routing::{apply, outcome, Router};
use super::{PaymentError, PaymentOutcome, PaymentSpec, VolumeModel};

pub const OUTCOME_LOG_HEADER: &str = "attempt,source,target,amount,success,hops,fees_msat";

fn draw_pair(rng: &mut SimRng, n: usize) -> (usize, usize) {
    let s = rng.random_range(0..n);
    loop {
        let t = rng.random_range(0..n);
        if t != s {
            return (s, t);
        }
    }
}

/// Draws `attempts` payments with uniform ordered endpoints (`s ≠ t`, resampled)
/// and volumes drawn uniformly from the pool.
pub fn sample_payments(
    nodes: &[NodeId],
    attempts: usize,
    volumes: &VolumeModel,
    seed: u64,
) -> Result<Vec<PaymentSpec>, PaymentError> {
    sample_payments_in(nodes, attempts, volumes, seed, rng::STREAM_PAYMENTS)
}

pub(crate) fn sample_payments_in(
    nodes: &[NodeId],
    attempts: usize,
    volumes: &VolumeModel,
    seed: u64,
    stream: u64,
) -> Result<Vec<PaymentSpec>, PaymentError> {
    if nodes.len() < 2 {
        return Err(PaymentError::TooFewNodes);
    }
    let mut rng = rng::stream(seed, stream);
    Ok((0..attempts)
        .map(|_| {
            let (s, t) = draw_pair(&mut rng, nodes.len());
            let amount = volumes.draw(&mut rng);
            PaymentSpec {
                source: nodes[s].clone(),
                target: nodes[t].clone(),
                amount,
            }
        })
        .collect())
}

/// Uniform ordered terminal pairs `s ≠ t` for max-flow rounds.
pub fn sample_flow_pairs(nodes: &[NodeId], rounds: usize, seed: u64) -> Result<Vec<(NodeId, NodeId)>, PaymentError> {
    if nodes.len() < 2 {
        return Err(PaymentError::TooFewNodes);
    }
    let mut rng = rng::stream(seed, rng::STREAM_FLOW_PAIRS);
    Ok((0..rounds)
        .map(|_| {
            let (s, t) = draw_pair(&mut rng, nodes.len());
            (nodes[s].clone(), nodes[t].clone())
        })
        .collect())
}

/// Routes every payment in order. With `apply`, balances evolve on a private
/// copy of `g`; otherwise each payment sees the original state. Payments whose
/// endpoints are not in `g` fail.
pub fn simulate_payments(g: &PcnGraph, specs: &[PaymentSpec], apply_mode: bool) -> Vec<PaymentOutcome> {
    let mut state = if apply_mode { Some(g.clone()) } else { None };
    let mut router = Router::new(g.node_count());
    specs
        .iter()
        .map(|spec| {
            let g = state.as_ref().unwrap_or(g);
            let (Some(s), Some(t)) = (g.node_index(&spec.source), g.node_index(&spec.target)) else {
                return PaymentOutcome::failed();
            };
            let Some(route) = router.find(g, s, t, spec.amount) else {
                return PaymentOutcome::failed();
            };
            let out = outcome(g, &route, spec.amount);
            if let Some(state) = state.as_mut() {
                apply(state, &route, spec.amount);
            }
            out
        })
        .collect()
}

pub fn success_count(outcomes: &[PaymentOutcome]) -> usize {
    outcomes.iter().filter(|o| o.success).count()
}

/// Fraction of `attempts` sampled payments that route. A graph with fewer
/// than two nodes, or zero attempts, yields 0.
pub fn success_ratio(g: &PcnGraph, attempts: usize, volumes: &VolumeModel, seed: u64, apply_mode: bool) -> f64 {
    let ids: Vec<NodeId> = g.node_ids().cloned().collect();
    let Ok(specs) = sample_payments(&ids, attempts, volumes, seed) else {
        return 0.0;
    };
    if specs.is_empty() {
        return 0.0;
    }
    success_count(&simulate_payments(g, &specs, apply_mode)) as f64 / specs.len() as f64
}

/// Total fee, in millisatoshi, that `hub` earned as a forwarding node.
pub fn hub_fee_total(outcomes: &[PaymentOutcome], hub: &NodeId) -> u64 {
    outcomes.iter().filter_map(|o| o.per_hop_fees.get(hub)).sum()
}

/// Mean per-payment fee income of `hub` over `payments` stateful payments.
pub fn fee_gain(
    g: &PcnGraph,
    hub: &NodeId,
    payments: usize,
    volumes: &VolumeModel,
    seed: u64,
) -> Result<f64, PaymentError> {
    if !g.contains(hub) {
        return Err(PaymentError::UnknownNode(hub.clone()));
    }
    let ids: Vec<NodeId> = g.node_ids().cloned().collect();
    let specs = sample_payments(&ids, payments, volumes, seed)?;
    if specs.is_empty() {
        return Ok(0.0);
    }
    let outcomes = simulate_payments(g, &specs, true);
    Ok(hub_fee_total(&outcomes, hub) as f64 / specs.len() as f64)
}

/// Per-attempt outcome log, one CSV row per payment.
pub fn outcome_log_csv(specs: &[PaymentSpec], outcomes: &[PaymentOutcome]) -> String {
    let mut out = String::from(OUTCOME_LOG_HEADER);
    out.push('\n');
    for (i, (spec, o)) in specs.iter().zip(outcomes).enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            spec.source,
            spec.target,
            spec.amount,
            o.success,
            o.hops(),
            o.fees_paid
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ChannelEdge, Node};

    fn complete(n: usize, cap: u64) -> PcnGraph {
        let nodes = (0..n).map(|i| Node::new(format!("v{i}").as_str())).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push(ChannelEdge::new(format!("{a}-{b}"), format!("v{a}").as_str(), format!("v{b}").as_str(), cap));
            }
        }
        PcnGraph::new(nodes, edges).unwrap()
    }

    #[test]
    fn ratio_extremes() {
        let g = complete(6, 1000);
        let small = VolumeModel::new(vec![1, 500, 1000]).unwrap();
        let big = VolumeModel::new(vec![1001, 5000]).unwrap();
        assert_eq!(success_ratio(&g, 200, &small, 3, false), 1.0);
        assert_eq!(success_ratio(&g, 200, &big, 3, false), 0.0);
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let g = complete(5, 10);
        let ids: Vec<NodeId> = g.node_ids().cloned().collect();
        let v = VolumeModel::new(vec![1, 2, 3]).unwrap();
        let a = sample_payments(&ids, 100, &v, 9).unwrap();
        assert_eq!(a, sample_payments(&ids, 100, &v, 9).unwrap());
        assert_ne!(a, sample_payments(&ids, 100, &v, 10).unwrap());
        assert!(a.iter().all(|p| p.source != p.target && p.amount >= 1));
        assert!(sample_payments(&ids[..1], 3, &v, 0).is_err());
        let outs = simulate_payments(&g, &a, false);
        assert_eq!(outs, simulate_payments(&g, &a, false));
        let log = outcome_log_csv(&a, &outs);
        assert_eq!(log.lines().count(), 101);
        assert!(log.starts_with(OUTCOME_LOG_HEADER));
    }

    #[test]
    fn line_fee_gain_until_exhaustion() {
        let g = PcnGraph::new(
            vec![Node::new("a"), Node::new("h"), Node::new("b")],
            vec![ChannelEdge::new("ah", "a", "h", 120_000), ChannelEdge::new("hb", "h", "b", 120_000)],
        )
        .unwrap();
        let spec = PaymentSpec::new("a".into(), "b".into(), 50_000).unwrap();
        let specs = vec![spec; 4];
        let outs = simulate_payments(&g, &specs, true);
        let gains: Vec<u64> = outs.iter().map(|o| o.per_hop_fees.get(&NodeId::from("h")).copied().unwrap_or(0)).collect();
        // 120000 both ways routes two 50000 payments, then the a→h side holds 20000
        assert_eq!(gains, [1050, 1050, 0, 0]);
        assert_eq!(hub_fee_total(&outs, &"h".into()), 2100);
        assert_eq!(hub_fee_total(&outs, &"a".into()), 0);
    }

    #[test]
    fn fee_gain_requires_known_hub() {
        let g = complete(4, 100);
        let v = VolumeModel::new(vec![10]).unwrap();
        assert!(fee_gain(&g, &"nope".into(), 10, &v, 0).is_err());
        // complete graph: every payment is direct, nobody forwards
        assert_eq!(fee_gain(&g, &"v0".into(), 50, &v, 0).unwrap(), 0.0);
    }
}
