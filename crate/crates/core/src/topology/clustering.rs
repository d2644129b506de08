use serde::{Deserialize, Serialize};

use crate::graph::{PcnGraph, SimpleView};
use crate::rng::replicate_seed;

use super::distance::{distance_stats, DistanceMode};
use super::generators::{generate_reference, ReferenceKind};
use super::TopologyError;

/// Triangle count and number of connected triples (paths of length 2).
pub fn triangles_and_triples(view: &SimpleView) -> (u64, u64) {
    let mut triangles = 0u64;
    let mut triples = 0u64;
    for (u, nbrs) in view.adj.iter().enumerate() {
        let d = nbrs.len() as u64;
        triples += d * d.saturating_sub(1) / 2;
        // count u < v < w once, merging sorted neighbour lists
        for &v in nbrs.iter().filter(|&&v| v > u) {
            let (mut i, mut j) = (0, 0);
            let other = &view.adj[v];
            while i < nbrs.len() && j < other.len() {
                let (x, y) = (nbrs[i], other[j]);
                if x < y {
                    i += 1;
                } else if y < x {
                    j += 1;
                } else {
                    if x > v {
                        triangles += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    (triangles, triples)
}

pub fn transitivity_of(view: &SimpleView) -> f64 {
    let (triangles, triples) = triangles_and_triples(view);
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}

/// Global clustering coefficient `3·triangles / paths of length 2` on the
/// simple projection; 0 when there are no length-2 paths.
pub fn transitivity(g: &PcnGraph) -> f64 {
    transitivity_of(&g.simple_projection())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallWorld {
    pub s: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub c_g: f64,
    pub c_r: f64,
    pub l_g: f64,
    pub l_r: f64,
}

/// `S = (C_g / C_r) / (L_g / L_r)`.
pub fn small_world_index(c_g: f64, l_g: f64, c_r: f64, l_r: f64) -> Result<SmallWorld, TopologyError> {
    if c_r <= 0.0 {
        return Err(TopologyError::ZeroReferenceClustering);
    }
    if l_g <= 0.0 || l_r <= 0.0 {
        return Err(TopologyError::DegeneratePathLength);
    }
    let gamma = c_g / c_r;
    let lambda = l_g / l_r;
    Ok(SmallWorld {
        s: gamma / lambda,
        gamma,
        lambda,
        c_g,
        c_r,
        l_g,
        l_r,
    })
}

/// Small-world coefficient of the largest component of `g` against
/// `reference_runs` Erdős–Rényi graphs with the same node and simple-edge
/// counts. Reference clustering and path length are averaged over the runs.
pub fn smallworld_coefficient(g: &PcnGraph, reference_runs: usize, seed: u64) -> Result<SmallWorld, TopologyError> {
    let lcc = g.largest_connected_component();
    let view = lcc.simple_projection();
    let n = view.node_count();
    let m = view.edge_count();
    if n < 2 || reference_runs == 0 {
        return Err(TopologyError::DegeneratePathLength);
    }
    let c_g = transitivity_of(&view);
    let l_g = distance_stats(&lcc, DistanceMode::Exact, seed).avg_distance;

    let mut c_sum = 0.0;
    let mut l_sum = 0.0;
    for run in 0..reference_runs {
        let reference = generate_reference(ReferenceKind::ErdosRenyi, n, m, replicate_seed(seed, run as u64))?;
        c_sum += transitivity(&reference);
        l_sum += distance_stats(&reference, DistanceMode::Exact, seed).avg_distance;
    }
    let runs = reference_runs as f64;
    small_world_index(c_g, l_g, c_sum / runs, l_sum / runs)
}
