use std::collections::VecDeque;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::graph::{PcnGraph, SimpleView};
use crate::rng::{replicate_seed, stream, STREAM_FAILURES};

use super::TopologyError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailurePoint {
    pub failures: usize,
    pub mean_components: f64,
}

/// Connected components of `view` after deleting nodes marked in `removed`.
pub fn components_without(view: &SimpleView, removed: &[bool]) -> usize {
    let n = view.node_count();
    let mut seen = removed.to_vec();
    let mut queue = VecDeque::new();
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in &view.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Mean component count after removing `f` uniformly chosen nodes, for each
/// `f` in `failures`, averaged over `runs`.
pub fn random_failure_experiment(
    g: &PcnGraph,
    failures: &[usize],
    runs: usize,
    seed: u64,
) -> Result<Vec<FailurePoint>, TopologyError> {
    let n = g.node_count();
    if let Some(&f) = failures.iter().find(|&&f| f >= n) {
        return Err(TopologyError::TooManyFailures { failures: f, nodes: n });
    }
    let view = g.simple_projection();
    let mut removed = vec![false; n];
    let mut out = Vec::with_capacity(failures.len());
    for (i, &f) in failures.iter().enumerate() {
        let mut total = 0usize;
        for run in 0..runs {
            let mut rng = stream(replicate_seed(seed, (i * runs + run) as u64), STREAM_FAILURES);
            let picked = index::sample(&mut rng, n, f);
            picked.iter().for_each(|v| removed[v] = true);
            total += components_without(&view, &removed);
            picked.iter().for_each(|v| removed[v] = false);
        }
        out.push(FailurePoint {
            failures: f,
            mean_components: if runs == 0 { 0.0 } else { total as f64 / runs as f64 },
        });
    }
    Ok(out)
}
