//! Instance, configuration and certificate types, plus the graph utilities
//! the structural checks quantify over.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{ValidationErrors, Violation};
use crate::nodeset::{NodeId, NodeSet};

/// Undirected simple graph on dense ids `0..n` with a label per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph, ValidationErrors> {
        let mut violations = Vec::new();
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                violations.push(Violation::EdgeOutOfRange(u as i64, v as i64));
            } else if u == v {
                violations.push(Violation::SelfLoop(u as i64));
            } else if !adjacency[u].insert(v) {
                violations.push(Violation::DuplicateEdge(u.min(v), u.max(v)));
            } else {
                adjacency[v].insert(u);
            }
        }
        if !violations.is_empty() {
            return Err(ValidationErrors(violations));
        }
        let adjacency = adjacency.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Graph::with_default_labels(adjacency))
    }

    /// Builds a graph from per-node neighbor lists, rejecting asymmetric entries.
    pub fn from_adjacency(adjacency: Vec<Vec<NodeId>>) -> Result<Graph, ValidationErrors> {
        let n = adjacency.len();
        let mut violations = Vec::new();
        let mut sets = vec![BTreeSet::new(); n];
        for (u, list) in adjacency.iter().enumerate() {
            for &v in list {
                if v >= n {
                    violations.push(Violation::EdgeOutOfRange(u as i64, v as i64));
                } else if v == u {
                    violations.push(Violation::SelfLoop(u as i64));
                } else if !sets[u].insert(v) {
                    violations.push(Violation::DuplicateEdge(u.min(v), u.max(v)));
                }
            }
        }
        for (u, set) in sets.iter().enumerate() {
            for &v in set {
                if !sets[v].contains(&u) {
                    violations.push(Violation::AsymmetricAdjacency { from: u, to: v });
                }
            }
        }
        if !violations.is_empty() {
            return Err(ValidationErrors(violations));
        }
        Ok(Graph::with_default_labels(
            sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        ))
    }

    pub fn complete(n: usize) -> Graph {
        let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Graph::with_default_labels(adjacency)
    }

    fn with_default_labels(adjacency: Vec<Vec<NodeId>>) -> Graph {
        let labels: Vec<String> = (0..adjacency.len()).map(|i| i.to_string()).collect();
        let label_index = labels.iter().cloned().zip(0..).collect();
        Graph {
            adjacency,
            labels,
            label_index,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph, ValidationErrors> {
        if labels.len() != self.node_count() {
            return Err(Violation::LabelLengthMismatch {
                expected: self.node_count(),
                found: labels.len(),
            }
            .into());
        }
        let mut label_index = HashMap::with_capacity(labels.len());
        let mut violations = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                violations.push(Violation::DuplicateLabel(l.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(ValidationErrors(violations));
        }
        self.labels = labels;
        self.label_index = label_index;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count())
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of neighbors of `v` inside `active`.
    #[inline]
    pub fn active_neighbors(&self, v: NodeId, active: &NodeSet) -> usize {
        self.adjacency[v].iter().filter(|&&u| active.contains(u)).count()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// First missing edge `(u, v)`, `u < v`, if the graph is not complete.
    pub fn missing_edge(&self) -> Option<(NodeId, NodeId)> {
        let n = self.node_count();
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .find(|&(u, v)| !self.has_edge(u, v))
    }

    pub fn is_clique(&self) -> bool {
        self.missing_edge().is_none()
    }
}

/// Per-node non-negative integer thresholds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Thresholds(Vec<u32>);

impl Thresholds {
    pub fn new(values: Vec<u32>) -> Self {
        Thresholds(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `t_v` as a neighbor count.
    #[inline]
    pub fn of(&self, v: NodeId) -> usize {
        self.0[v] as usize
    }
}

impl Index<NodeId> for Thresholds {
    type Output = u32;

    fn index(&self, v: NodeId) -> &u32 {
        &self.0[v]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Simultaneous,
    Sequential,
}

/// Order dynamics plus whether seed nodes are committed to stay active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DynamicsMode {
    pub order: Order,
    pub monotone: bool,
}

impl DynamicsMode {
    pub const MONOTONE_SIMULTANEOUS: DynamicsMode = DynamicsMode {
        order: Order::Simultaneous,
        monotone: true,
    };
    pub const SIMULTANEOUS: DynamicsMode = DynamicsMode {
        order: Order::Simultaneous,
        monotone: false,
    };
    pub const MONOTONE_SEQUENTIAL: DynamicsMode = DynamicsMode {
        order: Order::Sequential,
        monotone: true,
    };
    pub const SEQUENTIAL: DynamicsMode = DynamicsMode {
        order: Order::Sequential,
        monotone: false,
    };

    pub const ALL: [DynamicsMode; 4] = [
        Self::MONOTONE_SIMULTANEOUS,
        Self::SIMULTANEOUS,
        Self::MONOTONE_SEQUENTIAL,
        Self::SEQUENTIAL,
    ];

    pub fn is_sequential(self) -> bool {
        self.order == Order::Sequential
    }

    /// Short tag used in file names and CSV columns, e.g. `mono-sim`.
    pub fn tag(self) -> &'static str {
        match (self.order, self.monotone) {
            (Order::Simultaneous, true) => "mono-sim",
            (Order::Simultaneous, false) => "sim",
            (Order::Sequential, true) => "mono-seq",
            (Order::Sequential, false) => "seq",
        }
    }
}

impl fmt::Display for DynamicsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = match self.order {
            Order::Simultaneous => "simultaneous",
            Order::Sequential => "sequential",
        };
        if self.monotone {
            write!(f, "monotone {order}")
        } else {
            f.write_str(order)
        }
    }
}

/// Problem input: graph, thresholds, snapshot, budget and dynamics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotInstance {
    pub graph: Graph,
    pub thresholds: Thresholds,
    pub snapshot: NodeSet,
    pub budget: usize,
    pub mode: DynamicsMode,
}

impl SnapshotInstance {
    pub fn new(
        graph: Graph,
        thresholds: Thresholds,
        snapshot: NodeSet,
        budget: usize,
        mode: DynamicsMode,
    ) -> Result<Self, ValidationErrors> {
        let mut violations = Vec::new();
        if thresholds.len() != graph.node_count() {
            violations.push(Violation::ThresholdLengthMismatch {
                expected: graph.node_count(),
                found: thresholds.len(),
            });
        }
        for v in snapshot.iter().filter(|&v| v >= graph.node_count()) {
            violations.push(Violation::SnapshotOutOfRange(v as i64));
        }
        if !violations.is_empty() {
            return Err(ValidationErrors(violations));
        }
        Ok(SnapshotInstance {
            graph,
            thresholds,
            snapshot,
            budget,
            mode,
        })
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn with_mode(&self, mode: DynamicsMode) -> SnapshotInstance {
        SnapshotInstance { mode, ..self.clone() }
    }

    pub fn with_snapshot(&self, snapshot: NodeSet) -> SnapshotInstance {
        assert!(snapshot.bound() <= self.node_count());
        SnapshotInstance {
            snapshot,
            ..self.clone()
        }
    }

    pub fn with_budget(&self, budget: usize) -> SnapshotInstance {
        SnapshotInstance { budget, ..self.clone() }
    }

    /// Formats a node set with the instance's labels, e.g. `{u1, u3}`.
    pub fn labelled(&self, set: &NodeSet) -> String {
        let names: Vec<&str> = set.iter().map(|v| self.graph.label(v)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Active set at one point in time. Equality ignores the time stamp.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Configuration {
    pub active: NodeSet,
    pub time: usize,
}

impl Configuration {
    pub fn new(active: NodeSet, time: usize) -> Self {
        Configuration { active, time }
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.active == other.active
    }
}

impl Eq for Configuration {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeState {
    #[serde(rename = "on")]
    Active,
    #[serde(rename = "off")]
    Inactive,
}

impl NodeState {
    pub fn from_active(active: bool) -> Self {
        if active {
            NodeState::Active
        } else {
            NodeState::Inactive
        }
    }

    pub fn is_active(self) -> bool {
        self == NodeState::Active
    }
}

/// One agent switching to its best response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub node: NodeId,
    pub to: NodeState,
}

impl Move {
    pub fn activate(node: NodeId) -> Self {
        Move {
            node,
            to: NodeState::Active,
        }
    }

    pub fn deactivate(node: NodeId) -> Self {
        Move {
            node,
            to: NodeState::Inactive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    /// Time 0: the seed configuration.
    Seed,
    /// Every node best responded at once.
    Simultaneous,
    /// One selected node best responded; `changed` is false for a no-op selection.
    Select { node: NodeId, to: NodeState, changed: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub time: usize,
    pub kind: StepKind,
    pub active: NodeSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub seed: NodeSet,
    pub mode: DynamicsMode,
    /// `steps[0]` is the seed configuration at time 0.
    pub steps: Vec<TraceStep>,
    pub match_time: Option<usize>,
}

impl Trace {
    pub fn configuration(&self, time: usize) -> Option<Configuration> {
        self.steps
            .get(time)
            .map(|s| Configuration::new(s.active.clone(), s.time))
    }

    pub fn last_active(&self) -> &NodeSet {
        &self.steps.last().expect("trace has a seed step").active
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Witness {
    Simultaneous { match_time: usize },
    Sequential { ordering: Vec<Move>, match_prefix: usize },
}

/// A seed set and a replayable witness that it produces the snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub seed: NodeSet,
    pub witness: Witness,
}

/// `N[s]`: `s` together with every neighbor of a node in `s`.
pub fn closed_neighborhood(graph: &Graph, s: &NodeSet) -> NodeSet {
    let mut out = s.clone();
    for u in s {
        out.extend(graph.neighbors(u).iter().copied());
    }
    out
}

/// Bidirectional map between subgraph ids and original ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    to_original: Vec<NodeId>,
    to_local: HashMap<NodeId, NodeId>,
}

impl IdMap {
    pub fn original(&self, local: NodeId) -> NodeId {
        self.to_original[local]
    }

    pub fn local(&self, original: NodeId) -> Option<NodeId> {
        self.to_local.get(&original).copied()
    }

    pub fn lift(&self, local: &NodeSet) -> NodeSet {
        local.iter().map(|v| self.to_original[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.to_original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_original.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub thresholds: Thresholds,
    pub map: IdMap,
}

/// `G[s]` with thresholds restricted to `s` (values unchanged). Local ids
/// follow ascending original ids; labels are carried over.
pub fn induced_subgraph(graph: &Graph, thresholds: &Thresholds, s: &NodeSet) -> InducedSubgraph {
    let to_original: Vec<NodeId> = s.to_vec();
    let to_local: HashMap<NodeId, NodeId> = to_original.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adjacency = to_original
        .iter()
        .map(|&v| {
            graph
                .neighbors(v)
                .iter()
                .filter_map(|u| to_local.get(u).copied())
                .collect()
        })
        .collect();
    let labels = to_original.iter().map(|&v| graph.label(v).to_owned()).collect();
    let sub = Graph::with_default_labels(adjacency)
        .with_labels(labels)
        .expect("labels of a valid graph are unique");
    let thresholds = Thresholds::new(to_original.iter().map(|&v| thresholds[v]).collect());
    InducedSubgraph {
        graph: sub,
        thresholds,
        map: IdMap { to_original, to_local },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star4() -> Graph {
        Graph::from_edges(4, &[(1, 0), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        let err = Graph::from_edges(4, &[(0, 0)]).unwrap_err();
        assert_eq!(err.0, vec![Violation::SelfLoop(0)]);
        assert!(err.to_string().contains("self-loop"));
        let err = Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err.0, vec![Violation::DuplicateEdge(0, 1)]);
        let err = Graph::from_edges(2, &[(0, 5)]).unwrap_err();
        assert_eq!(err.0, vec![Violation::EdgeOutOfRange(0, 5)]);
    }

    #[test]
    fn rejects_asymmetric_adjacency() {
        let err = Graph::from_adjacency(vec![vec![1], vec![]]).unwrap_err();
        assert_eq!(err.0, vec![Violation::AsymmetricAdjacency { from: 0, to: 1 }]);
        let g = Graph::from_adjacency(vec![vec![1], vec![0]]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn closed_neighborhood_of_star() {
        let g = star4();
        assert_eq!(closed_neighborhood(&g, &NodeSet::singleton(1)), g.all_nodes());
        assert_eq!(
            closed_neighborhood(&g, &NodeSet::singleton(0)),
            [0, 1].into_iter().collect()
        );
        assert!(closed_neighborhood(&g, &NodeSet::new()).is_empty());
    }

    #[test]
    fn induced_subgraph_of_leaves_is_edgeless() {
        let g = star4();
        let t = Thresholds::new(vec![1, 2, 1, 1]);
        let sub = induced_subgraph(&g, &t, &[0, 2].into_iter().collect());
        assert_eq!(sub.graph.node_count(), 2);
        assert_eq!(sub.graph.edge_count(), 0);
        assert_eq!(sub.thresholds.as_slice(), &[1, 1]);
        assert_eq!(sub.map.original(1), 2);
        assert_eq!(sub.map.local(2), Some(1));
        assert_eq!(sub.map.local(1), None);
    }

    #[test]
    fn snapshot_outside_vertex_set() {
        let err = SnapshotInstance::new(
            star4(),
            Thresholds::new(vec![1, 2, 1, 1]),
            NodeSet::singleton(99),
            1,
            DynamicsMode::SEQUENTIAL,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "snapshot node 99 outside V");
    }

    #[test]
    fn configuration_equality_ignores_time() {
        let a = Configuration::new(NodeSet::singleton(1), 0);
        let b = Configuration::new(NodeSet::singleton(1), 7);
        assert_eq!(a, b);
    }
}
