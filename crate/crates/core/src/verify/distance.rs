use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::model::Graph;
use crate::nodeset::NodeSet;

/// Shortest-path distance from every node to the nearest node of `targets`.
fn distances_to(graph: &Graph, targets: &NodeSet) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.node_count()];
    let mut queue = VecDeque::new();
    for v in targets {
        dist[v] = Some(0);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued nodes have a distance");
        for &w in graph.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Largest distance from a seed node to the snapshot; `None` means some seed
/// node cannot reach the snapshot at all. An empty seed has distance 0.
pub fn seed_distance(graph: &Graph, seed: &NodeSet, snapshot: &NodeSet) -> Option<usize> {
    let dist = distances_to(graph, snapshot);
    seed.iter().try_fold(0, |acc, v| dist[v].map(|d| acc.max(d)))
}

/// Smallest distance from a seed node to the snapshot; `None` when no seed
/// node reaches it (or the seed is empty).
pub fn seed_distance_min(graph: &Graph, seed: &NodeSet, snapshot: &NodeSet) -> Option<usize> {
    let dist = distances_to(graph, snapshot);
    seed.iter().filter_map(|v| dist[v]).min()
}

/// Both aggregations; `null` stands for an infinite distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedDistance {
    pub max: Option<usize>,
    pub min: Option<usize>,
}

impl SeedDistance {
    pub fn measure(graph: &Graph, seed: &NodeSet, snapshot: &NodeSet) -> Self {
        SeedDistance {
            max: seed_distance(graph, seed, snapshot),
            min: seed_distance_min(graph, seed, snapshot),
        }
    }
}
