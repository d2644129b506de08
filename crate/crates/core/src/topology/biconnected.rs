use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, PcnGraph, SimpleView};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biconnected {
    /// Node sets of the biconnected components, each sorted, listed in
    /// lexicographic order.
    pub components: Vec<Vec<NodeId>>,
    pub articulation_points: BTreeSet<NodeId>,
}

const UNSEEN: usize = usize::MAX;

/// Biconnected components of a simple view as sorted node-index lists.
/// Isolated nodes belong to no component; a bridge forms a two-node one.
pub fn biconnected_components(view: &SimpleView) -> Vec<Vec<usize>> {
    let n = view.node_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut clock = 0usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    // (node, parent, next neighbour position)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    let mut out = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN || view.adj[root].is_empty() {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        frames.push((root, UNSEEN, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, parent, pos) = *frame;
            if pos < view.adj[v].len() {
                frame.2 += 1;
                let w = view.adj[v][pos];
                if disc[w] == UNSEEN {
                    edge_stack.push((v, w));
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            if parent == UNSEEN {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                let mut comp = Vec::new();
                while let Some((x, y)) = edge_stack.pop() {
                    comp.push(x);
                    comp.push(y);
                    if (x, y) == (parent, v) {
                        break;
                    }
                }
                comp.sort_unstable();
                comp.dedup();
                out.push(comp);
            }
        }
    }
    out.sort();
    out
}

/// Articulation points as node indices: members of more than one component.
pub fn articulation_indices(components: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut count = vec![0usize; n];
    for comp in components {
        comp.iter().for_each(|&v| count[v] += 1);
    }
    (0..n).filter(|&v| count[v] > 1).collect()
}

/// Biconnected decomposition of the simple projection.
pub fn biconnected_analysis(g: &PcnGraph) -> Biconnected {
    let comps = biconnected_components(&g.simple_projection());
    let articulation_points = articulation_indices(&comps, g.node_count())
        .into_iter()
        .map(|v| g.node_id(v).clone())
        .collect();
    let mut components: Vec<Vec<NodeId>> = comps
        .iter()
        .map(|c| c.iter().map(|&v| g.node_id(v).clone()).collect())
        .collect();
    components.sort();
    Biconnected {
        components,
        articulation_points,
    }
}
