use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, PcnGraph};
use crate::payment::{sample_flow_pairs, sample_payments_in, simulate_payments, FlowNetwork, VolumeModel};
use crate::rng;
use crate::topology::{betweenness_scores, eigenvector_scores, DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL};

use super::AttackError;

pub const DEFAULT_CUT_SAMPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    Degree,
    /// `adaptive` re-ranks on the shrinking graph after every pick.
    Betweenness {
        adaptive: bool,
    },
    /// Capacity-weighted eigenvector centrality.
    Eigenvector,
    RankedMinCut {
        cut_samples: usize,
        seed: u64,
    },
    ParallelPaths {
        payment_samples: usize,
        hub: Option<NodeId>,
        volumes: VolumeModel,
        seed: u64,
    },
    Random {
        seed: u64,
    },
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Degree => "degree",
            Strategy::Betweenness { .. } => "betweenness",
            Strategy::Eigenvector => "eigenvector",
            Strategy::RankedMinCut { .. } => "ranked-min-cut",
            Strategy::ParallelPaths { .. } => "parallel-paths",
            Strategy::Random { .. } => "random",
        }
    }

    pub fn validate(&self) -> Result<(), AttackError> {
        match self {
            Strategy::RankedMinCut { cut_samples: 0, .. } => Err(AttackError::MissingParam {
                strategy: self.label(),
                param: "cut_samples",
            }),
            Strategy::ParallelPaths { payment_samples: 0, .. } => Err(AttackError::MissingParam {
                strategy: self.label(),
                param: "payment_samples",
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Target {
    /// Node isolation; `cost` is the node's outbound balance at planning time.
    Node { id: NodeId, cost: u64 },
    /// Channel cut, sorted by channel id; `cost` is the summed capacity.
    Cut {
        channels: Vec<String>,
        cost: u64,
        occurrences: usize,
    },
}

impl Target {
    pub fn cost(&self) -> u64 {
        match self {
            Target::Node { cost, .. } | Target::Cut { cost, .. } => *cost,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackPlan {
    pub strategy: Strategy,
    pub targets: Vec<Target>,
}

fn node_targets(g: &PcnGraph, order: impl IntoIterator<Item = usize>) -> Vec<Target> {
    order
        .into_iter()
        .map(|v| Target::Node {
            id: g.node_id(v).clone(),
            cost: g.outbound_balance(v),
        })
        .collect()
}

/// Indices sorted by score descending; equal scores keep index (node id) order.
fn rank_desc<T: PartialOrd + Copy>(scores: &[T], limit: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&x, &y| scores[y].partial_cmp(&scores[x]).unwrap_or(std::cmp::Ordering::Equal).then(x.cmp(&y)));
    order.truncate(limit);
    order
}

fn adaptive_betweenness(g: &PcnGraph, limit: usize) -> Vec<usize> {
    let mut alive = vec![true; g.node_count()];
    let mut picked = Vec::new();
    for _ in 0..limit.min(g.node_count()) {
        let sub = g.induced(&alive);
        let scores = betweenness_scores(&sub.simple_projection(), false);
        let top = rank_desc(&scores, 1)[0];
        let v = g.node_index(sub.node_id(top)).expect("subgraph ids come from g");
        alive[v] = false;
        picked.push(v);
    }
    picked
}

fn ranked_cuts(g: &PcnGraph, samples: usize, seed: u64, limit: usize) -> Result<Vec<Target>, AttackError> {
    let ids: Vec<NodeId> = g.node_ids().cloned().collect();
    let pairs = sample_flow_pairs_in(&ids, samples, seed)?;
    let mut net = FlowNetwork::from_capacities(g);
    let mut counts: BTreeMap<Vec<String>, (usize, u64)> = BTreeMap::new();
    for (s, t) in pairs {
        let (si, ti) = (g.node_index(&s).unwrap(), g.node_index(&t).unwrap());
        let (value, side) = net.min_cut(si, ti);
        let mut cut: Vec<String> = (0..g.edge_count())
            .filter(|&e| {
                let (a, b) = g.ends(e);
                side[a] != side[b]
            })
            .map(|e| g.edge(e).channel_id.clone())
            .collect();
        if cut.is_empty() {
            continue;
        }
        cut.sort();
        counts.entry(cut).or_insert((0, value)).0 += 1;
    }
    let mut ranked: Vec<(Vec<String>, usize, u64)> = counts.into_iter().map(|(c, (n, v))| (c, n, v)).collect();
    // BTreeMap order is lexicographic, so a stable sort on count keeps that as the tie-break
    ranked.sort_by_key(|x| std::cmp::Reverse(x.1));
    ranked.truncate(limit);
    Ok(ranked
        .into_iter()
        .map(|(channels, occurrences, cost)| Target::Cut {
            channels,
            cost,
            occurrences,
        })
        .collect())
}

fn sample_flow_pairs_in(ids: &[NodeId], samples: usize, seed: u64) -> Result<Vec<(NodeId, NodeId)>, AttackError> {
    // strategy draws must not coincide with the metric draws of the same seed
    Ok(sample_flow_pairs(ids, samples, rng::replicate_seed(seed, rng::STREAM_STRATEGY))?)
}

fn parallel_paths(
    g: &PcnGraph,
    samples: usize,
    hub: Option<&NodeId>,
    volumes: &VolumeModel,
    seed: u64,
    limit: usize,
) -> Result<Vec<usize>, AttackError> {
    let ids: Vec<NodeId> = g.node_ids().cloned().collect();
    let specs = sample_payments_in(&ids, samples, volumes, seed, rng::STREAM_STRATEGY)?;
    let mut counts = vec![0usize; g.node_count()];
    for out in simulate_payments(g, &specs, false) {
        if out.path.len() < 3 || hub.is_some_and(|h| out.path.contains(h)) {
            continue;
        }
        for id in &out.path[1..out.path.len() - 1] {
            counts[g.node_index(id).unwrap()] += 1;
        }
    }
    let mut order = rank_desc(&counts, limit);
    order.retain(|&v| counts[v] > 0);
    Ok(order)
}

/// Ordered attack targets, at most `limit` of them.
pub fn plan_targets(g: &PcnGraph, strategy: &Strategy, limit: usize) -> Result<AttackPlan, AttackError> {
    strategy.validate()?;
    if limit == 0 {
        return Err(AttackError::ZeroLimit);
    }
    let targets = match strategy {
        Strategy::Degree => {
            let degrees: Vec<usize> = (0..g.node_count()).map(|v| g.degree(v)).collect();
            node_targets(g, rank_desc(&degrees, limit))
        }
        Strategy::Betweenness { adaptive: false } => {
            let scores = betweenness_scores(&g.simple_projection(), false);
            node_targets(g, rank_desc(&scores, limit))
        }
        Strategy::Betweenness { adaptive: true } => node_targets(g, adaptive_betweenness(g, limit)),
        Strategy::Eigenvector => {
            if g.is_empty() {
                Vec::new()
            } else {
                let scores = eigenvector_scores(g, true, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER)?;
                node_targets(g, rank_desc(&scores, limit))
            }
        }
        Strategy::Random { seed } => {
            let mut order: Vec<usize> = (0..g.node_count()).collect();
            order.shuffle(&mut rng::stream(*seed, rng::STREAM_STRATEGY));
            order.truncate(limit);
            node_targets(g, order)
        }
        Strategy::RankedMinCut { cut_samples, seed } => {
            if g.node_count() < 2 {
                Vec::new()
            } else {
                ranked_cuts(g, *cut_samples, *seed, limit)?
            }
        }
        Strategy::ParallelPaths {
            payment_samples,
            hub,
            volumes,
            seed,
        } => {
            if g.node_count() < 2 {
                Vec::new()
            } else {
                node_targets(g, parallel_paths(g, *payment_samples, hub.as_ref(), volumes, *seed, limit)?)
            }
        }
    };
    Ok(AttackPlan {
        strategy: strategy.clone(),
        targets,
    })
}
