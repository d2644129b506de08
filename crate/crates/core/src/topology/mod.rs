//! Graph measures and classification tests.
//!
//! All measures here run on the undirected simple projection of a
//! [`PcnGraph`] (parallel channels collapsed) with hop-count distances.

mod biconnected;
mod centrality;
mod clustering;
mod distance;
mod generators;
mod robustness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::PcnGraph;

pub use biconnected::{articulation_indices, biconnected_analysis, biconnected_components, Biconnected};
pub use centrality::{
    betweenness_centrality, betweenness_scores, central_point_dominance, degree_distribution, degrees,
    eigenvector_centrality, eigenvector_scores, DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL,
};
pub use clustering::{small_world_index, smallworld_coefficient, transitivity, transitivity_of, triangles_and_triples, SmallWorld};
pub use distance::{bfs_distances, distance_stats, DistanceMode, DistanceStats};
pub use generators::{assemble, barabasi_albert, erdos_renyi, generate_reference, ReferenceKind};
pub use robustness::{components_without, random_failure_experiment, FailurePoint};

/// Reference Erdős–Rényi graphs averaged for the small-world coefficient.
pub const DEFAULT_REFERENCE_RUNS: usize = 10;

/// Node count above which [`metric_report`] samples average distances.
pub const SAMPLED_DISTANCE_THRESHOLD: usize = 20_000;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("reference graphs have zero clustering; use a larger graph or more reference runs")]
    ZeroReferenceClustering,
    #[error("average path length is zero; graph too small for a small-world test")]
    DegeneratePathLength,
    #[error("{failures} failures requested but the graph has only {nodes} nodes")]
    TooManyFailures { failures: usize, nodes: usize },
}

/// Table-style summary of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub diameter: usize,
    pub avg_distance: f64,
    pub clustering: f64,
    pub central_point_dominance: f64,
    /// `None` when the references have no triangles or no paths.
    #[serde(rename = "smallworld_S")]
    pub smallworld_s: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
}

impl MetricReport {
    pub const CSV_HEADER: &'static str =
        "node_count,edge_count,diameter,avg_distance,central_point_dominance,clustering,smallworld_S,gamma,lambda";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.node_count,
            self.edge_count,
            self.diameter,
            self.avg_distance,
            self.central_point_dominance,
            self.clustering,
            opt(self.smallworld_s),
            opt(self.gamma),
            opt(self.lambda)
        )
    }
}

/// Computes every [`MetricReport`] field for `g`. Counts refer to `g` itself;
/// distances and the small-world test use its largest component.
pub fn metric_report(g: &PcnGraph, reference_runs: usize, seed: u64) -> Result<MetricReport, TopologyError> {
    if g.is_empty() {
        return Err(TopologyError::EmptyGraph);
    }
    let mode = if g.node_count() > SAMPLED_DISTANCE_THRESHOLD {
        DistanceMode::Sampled(100_000)
    } else {
        DistanceMode::Exact
    };
    let dist = distance_stats(g, mode, seed);
    let sw = match smallworld_coefficient(g, reference_runs, seed) {
        Ok(sw) => Some(sw),
        Err(TopologyError::ZeroReferenceClustering | TopologyError::DegeneratePathLength) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        diameter: dist.diameter,
        avg_distance: dist.avg_distance,
        clustering: transitivity(g),
        central_point_dominance: central_point_dominance(g),
        smallworld_s: sw.as_ref().map(|sw| sw.s),
        gamma: sw.as_ref().map(|sw| sw.gamma),
        lambda: sw.as_ref().map(|sw| sw.lambda),
    })
}
