use std::collections::{BTreeMap, VecDeque};

use crate::graph::{NodeId, PcnGraph, SimpleView};

use super::TopologyError;

pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 1000;

/// Degree histogram `k → number of nodes with k channels`. Parallel channels
/// each count towards the degree.
pub fn degree_distribution(g: &PcnGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in 0..g.node_count() {
        *hist.entry(g.degree(v)).or_insert(0) += 1;
    }
    hist
}

/// Per-node degree list (multigraph degrees), in node-index order.
pub fn degrees(g: &PcnGraph) -> Vec<usize> {
    (0..g.node_count()).map(|v| g.degree(v)).collect()
}

/// Brandes betweenness over hop-count shortest paths of an undirected simple
/// view. Each unordered pair `{s, t}` contributes once.
pub fn betweenness_scores(view: &SimpleView, normalized: bool) -> Vec<f64> {
    let n = view.node_count();
    let mut centrality = vec![0.0_f64; n];
    let mut sigma = vec![0.0_f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0_f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        order.clear();
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        delta.iter_mut().for_each(|x| *x = 0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &view.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        // predecessors are the neighbours one level closer to s
        for &w in order.iter().rev() {
            for &v in &view.adj[w] {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }

    // every unordered pair was visited from both ends
    let scale = if normalized && n > 2 {
        1.0 / ((n - 1) as f64 * (n - 2) as f64)
    } else {
        0.5
    };
    centrality.iter_mut().for_each(|c| *c *= scale);
    centrality
}

/// Betweenness centrality keyed by node id, on the simple projection.
/// Normalised values are divided by `(n−1)(n−2)/2`.
pub fn betweenness_centrality(g: &PcnGraph, normalized: bool) -> BTreeMap<NodeId, f64> {
    let scores = betweenness_scores(&g.simple_projection(), normalized);
    g.node_ids().cloned().zip(scores).collect()
}

/// Maximum normalised betweenness over all nodes; 0 for an empty graph.
pub fn central_point_dominance(g: &PcnGraph) -> f64 {
    betweenness_scores(&g.simple_projection(), true)
        .into_iter()
        .fold(0.0, f64::max)
}

/// Eigenvector centrality by power iteration on the largest component.
///
/// With `weighted`, adjacency entries are summed channel capacities. The
/// iteration runs on `I + A/max(A)`, which has the same dominant eigenvector
/// and does not oscillate on bipartite components. Nodes outside the largest
/// component score 0. The result has unit Euclidean norm.
pub fn eigenvector_scores(g: &PcnGraph, weighted: bool, tol: f64, max_iter: usize) -> Result<Vec<f64>, TopologyError> {
    if g.is_empty() {
        return Err(TopologyError::EmptyGraph);
    }
    let view = g.simple_projection();
    let members = g.largest_component_nodes();

    let max_w = if weighted {
        members
            .iter()
            .flat_map(|&v| view.weights[v].iter().copied())
            .max()
            .unwrap_or(1)
            .max(1) as f64
    } else {
        1.0
    };
    let weight = |v: usize, i: usize| if weighted { view.weights[v][i] as f64 / max_w } else { 1.0 };

    let mut x = vec![0.0; g.node_count()];
    let start = 1.0 / (members.len() as f64).sqrt();
    members.iter().for_each(|&v| x[v] = start);
    let mut next = vec![0.0; g.node_count()];

    for _ in 0..max_iter {
        for &v in &members {
            let mut acc = x[v];
            for (i, &w) in view.adj[v].iter().enumerate() {
                acc += weight(v, i) * x[w];
            }
            next[v] = acc;
        }
        let norm = members.iter().map(|&v| next[v] * next[v]).sum::<f64>().sqrt();
        let mut diff: f64 = 0.0;
        for &v in &members {
            next[v] /= norm;
            diff = diff.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            return Ok(x);
        }
    }
    Err(TopologyError::NonConvergence { iterations: max_iter })
}

/// [`eigenvector_scores`] keyed by node id.
pub fn eigenvector_centrality(
    g: &PcnGraph,
    weighted: bool,
    tol: f64,
    max_iter: usize,
) -> Result<BTreeMap<NodeId, f64>, TopologyError> {
    let scores = eigenvector_scores(g, weighted, tol, max_iter)?;
    Ok(g.node_ids().cloned().zip(scores).collect())
}
