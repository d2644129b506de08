use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{PcnGraph, SimpleView};
use crate::rng::{stream, STREAM_DISTANCES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceMode {
    /// BFS over all ordered pairs.
    Exact,
    /// Average over this many uniformly drawn ordered pairs. The diameter is
    /// still exact.
    Sampled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    pub diameter: usize,
    pub avg_distance: f64,
}

/// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
pub fn bfs_distances(view: &SimpleView, source: usize, dist: &mut Vec<usize>, queue: &mut VecDeque<usize>) {
    dist.clear();
    dist.resize(view.node_count(), usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in &view.adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Diameter and mean shortest-path length of the largest component of `g`.
/// A single node (or empty graph) yields `(0, 0)`.
pub fn distance_stats(g: &PcnGraph, mode: DistanceMode, seed: u64) -> DistanceStats {
    let lcc = g.largest_connected_component();
    let view = lcc.simple_projection();
    let n = view.node_count();
    if n < 2 {
        return DistanceStats {
            diameter: 0,
            avg_distance: 0.0,
        };
    }

    // sampled pairs grouped by source so each BFS serves all its pairs
    let mut targets_by_source: Vec<Vec<usize>> = Vec::new();
    let mut sample_count = 0usize;
    if let DistanceMode::Sampled(pairs) = mode {
        let mut rng = stream(seed, STREAM_DISTANCES);
        targets_by_source = vec![Vec::new(); n];
        for _ in 0..pairs {
            let s = rng.random_range(0..n);
            let mut t = rng.random_range(0..n);
            while t == s {
                t = rng.random_range(0..n);
            }
            targets_by_source[s].push(t);
        }
        sample_count = pairs;
    }

    let mut dist = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    let mut diameter = 0;
    let mut total: u64 = 0;
    // targets_by_source is empty in exact mode
    #[allow(clippy::needless_range_loop)]
    for s in 0..n {
        bfs_distances(&view, s, &mut dist, &mut queue);
        let ecc = dist.iter().copied().max().unwrap_or(0);
        diameter = diameter.max(ecc);
        match mode {
            DistanceMode::Exact => total += dist.iter().map(|&d| d as u64).sum::<u64>(),
            DistanceMode::Sampled(_) => total += targets_by_source[s].iter().map(|&t| dist[t] as u64).sum::<u64>(),
        }
    }
    let pairs = match mode {
        DistanceMode::Exact => (n * (n - 1)) as f64,
        DistanceMode::Sampled(_) => sample_count.max(1) as f64,
    };
    DistanceStats {
        diameter,
        avg_distance: total as f64 / pairs,
    }
}
