use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ChannelEdge, Node, PcnGraph};
use crate::rng::{stream, STREAM_GENERATOR};

use super::TopologyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    ErdosRenyi,
    BarabasiAlbert,
}

impl ReferenceKind {
    pub fn label(self) -> &'static str {
        match self {
            ReferenceKind::ErdosRenyi => "erdos-renyi",
            ReferenceKind::BarabasiAlbert => "barabasi-albert",
        }
    }
}

/// Reference graph with unit capacities.
///
/// Erdős–Rényi is `G(n, M)` with exactly `target_edges` edges. Barabási–Albert
/// uses attachment `m = round(target_edges / n)` and yields `(n − m)·m`
/// edges.
pub fn generate_reference(kind: ReferenceKind, n: usize, target_edges: usize, seed: u64) -> Result<PcnGraph, TopologyError> {
    match kind {
        ReferenceKind::ErdosRenyi => erdos_renyi(n, target_edges, seed),
        ReferenceKind::BarabasiAlbert => {
            let m = (target_edges as f64 / n.max(1) as f64).round() as usize;
            barabasi_albert(n, m, seed)
        }
    }
}

/// Uniform random graph with `n` nodes and exactly `m` edges.
pub fn erdos_renyi(n: usize, m: usize, seed: u64) -> Result<PcnGraph, TopologyError> {
    let max_edges = n * n.saturating_sub(1) / 2;
    if n < 2 || m > max_edges {
        return Err(TopologyError::Infeasible(format!(
            "G(n, M) needs n >= 2 and M <= {max_edges}, got n={n}, M={m}"
        )));
    }
    let mut rng = stream(seed, STREAM_GENERATOR);
    // draw the smaller of the edge set and its complement
    let complement = m > max_edges / 2;
    let draws = if complement { max_edges - m } else { m };
    let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(draws);
    let mut order = Vec::with_capacity(draws);
    while order.len() < draws {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if chosen.insert(pair) {
            order.push(pair);
        }
    }
    let mut edges = if complement {
        let mut all = Vec::with_capacity(m);
        for a in 0..n {
            for b in a + 1..n {
                if !chosen.contains(&(a, b)) {
                    all.push((a, b));
                }
            }
        }
        all
    } else {
        order
    };
    edges.sort_unstable();
    Ok(assemble(n, &edges))
}

/// Preferential attachment: starts from `m` unconnected nodes; each new node
/// attaches to `m` distinct existing nodes drawn proportionally to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<PcnGraph, TopologyError> {
    if m < 1 || m >= n {
        return Err(TopologyError::Infeasible(format!(
            "Barabási–Albert needs 1 <= m < n, got n={n}, m={m}"
        )));
    }
    let mut rng = stream(seed, STREAM_GENERATOR);
    let mut edges = Vec::with_capacity((n - m) * m);
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * (n - m) * m);
    let mut targets: Vec<usize> = (0..m).collect();
    for source in m..n {
        for &t in &targets {
            edges.push((t, source));
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
        targets.clear();
        while targets.len() < m {
            let pick = *repeated.choose(&mut rng).expect("non-empty");
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        targets.sort_unstable();
    }
    Ok(assemble(n, &edges))
}

/// Builds a unit-capacity graph over nodes `n0..` from index pairs.
pub fn assemble(n: usize, edges: &[(usize, usize)]) -> PcnGraph {
    let width = n.saturating_sub(1).to_string().len();
    let ew = edges.len().saturating_sub(1).to_string().len();
    let name = |i: usize| format!("n{i:0width$}");
    let nodes = (0..n).map(|i| Node::new(name(i).as_str())).collect();
    let channels = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ChannelEdge::new(format!("e{i:0ew$}"), name(a).as_str(), name(b).as_str(), 1))
        .collect();
    PcnGraph::new(nodes, channels).expect("generated graphs are valid")
}
