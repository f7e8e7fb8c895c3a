//! Reductions from target set selection to the snapshot variants, and a
//! differential checker that compares both sides with exhaustive oracles.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result, ValidationErrors};
use crate::format::{canonical_json, validate_parts, InstanceFile};
use crate::model::{induced_subgraph, DynamicsMode, Graph, SnapshotInstance, Thresholds};
use crate::nodeset::{NodeId, NodeSet};
use crate::solver::{canonical_seeds, monotone_closure, solve, SearchLimits};

/// Graph, thresholds and budget: does some seed of size `<= k` activate all of `V`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSetInstance {
    pub graph: Graph,
    pub thresholds: Thresholds,
    pub budget: usize,
}

impl TargetSetInstance {
    pub fn new(graph: Graph, thresholds: Thresholds, budget: usize) -> Result<Self, ValidationErrors> {
        // Reuse the snapshot checks for the shared fields.
        let inst = SnapshotInstance::new(
            graph,
            thresholds,
            NodeSet::new(),
            budget,
            DynamicsMode::MONOTONE_SIMULTANEOUS,
        )?;
        Ok(TargetSetInstance {
            graph: inst.graph,
            thresholds: inst.thresholds,
            budget,
        })
    }

    /// Reads the graph part of an instance file; snapshot and dynamics are ignored.
    pub fn from_file(raw: &InstanceFile) -> Result<Self, ValidationErrors> {
        let mut violations = Vec::new();
        match validate_parts(raw, &mut violations) {
            Some((graph, thresholds, budget)) => Ok(TargetSetInstance {
                graph,
                thresholds,
                budget,
            }),
            None => Err(ValidationErrors(violations)),
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile::from_parts(&self.graph, &self.thresholds, self.budget)
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }
}

/// Brute force over all seeds of size `<= k`.
pub fn target_set_exists(ts: &TargetSetInstance) -> bool {
    let all = ts.graph.all_nodes();
    let nodes: Vec<NodeId> = ts.graph.nodes().collect();
    let found =
        canonical_seeds(&nodes, ts.budget).any(|seed| monotone_closure(&ts.graph, &ts.thresholds, &seed, None) == all);
    found
}

/// The target-set question as a snapshot with `S = V`.
pub fn embed_target_set(ts: &TargetSetInstance, mode: DynamicsMode) -> Result<SnapshotInstance> {
    if !mode.monotone {
        return Err(Error::Unsupported(format!(
            "target-set embedding needs monotone dynamics, got {mode}"
        )));
    }
    Ok(SnapshotInstance::new(
        ts.graph.clone(),
        ts.thresholds.clone(),
        ts.graph.all_nodes(),
        ts.budget,
        mode,
    )?)
}

/// Adds, for every node `v`, `t_v` threshold-1 dummies attached only to `v`
/// (labelled `d:<v>:<i>`) and one more threshold-1 dummy `e:<v>` attached to
/// `v` and to those dummies. Snapshot and budget are unchanged; the result
/// uses non-monotone simultaneous dynamics.
pub fn gadget_deactivation_robust(inst: &SnapshotInstance) -> SnapshotInstance {
    let g = &inst.graph;
    let mut labels: Vec<String> = g.labels().to_vec();
    let mut thresholds: Vec<u32> = inst.thresholds.as_slice().to_vec();
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    for v in g.nodes() {
        let base = labels.len();
        let tv = inst.thresholds.of(v);
        for i in 1..=tv {
            labels.push(format!("d:{}:{i}", g.label(v)));
            thresholds.push(1);
            edges.push((v, base + i - 1));
        }
        let extra = labels.len();
        labels.push(format!("e:{}", g.label(v)));
        thresholds.push(1);
        edges.push((v, extra));
        edges.extend((base..extra).map(|d| (d, extra)));
    }
    build(
        labels,
        &edges,
        thresholds,
        inst.snapshot.clone(),
        inst.budget,
        DynamicsMode::SIMULTANEOUS,
    )
}

/// Single-adopter sequential instance from a target-set instance.
///
/// For each `u` with threshold `t_u`: threshold-1 nodes `v:<u>:1..t_u`
/// attached to `u`, and a threshold-1 node `p:<u>` attached to all of them.
/// Finally `v0`, threshold `k + 1`, is attached to every `p:<u>`. The
/// snapshot is everything except `v0`, with budget 1.
pub fn gadget_sequential_k1(ts: &TargetSetInstance) -> Result<SnapshotInstance> {
    let g = &ts.graph;
    if let Some(v) = g.nodes().find(|&v| ts.thresholds[v] == 0) {
        return Err(Error::Unsupported(format!(
            "t_i = 0 unsupported by gadget (node {})",
            g.label(v)
        )));
    }
    let mut labels: Vec<String> = g.labels().to_vec();
    let mut thresholds: Vec<u32> = ts.thresholds.as_slice().to_vec();
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let mut primes = Vec::with_capacity(g.node_count());
    for u in g.nodes() {
        let base = labels.len();
        let tu = ts.thresholds.of(u);
        for j in 1..=tu {
            labels.push(format!("v:{}:{j}", g.label(u)));
            thresholds.push(1);
            edges.push((u, base + j - 1));
        }
        let prime = labels.len();
        labels.push(format!("p:{}", g.label(u)));
        thresholds.push(1);
        edges.extend((base..prime).map(|x| (x, prime)));
        primes.push(prime);
    }
    let v0 = labels.len();
    labels.push("v0".to_owned());
    thresholds.push(ts.budget as u32 + 1);
    edges.extend(primes.iter().map(|&p| (p, v0)));
    let snapshot = NodeSet::full(v0);
    Ok(build(labels, &edges, thresholds, snapshot, 1, DynamicsMode::SEQUENTIAL))
}

fn build(
    labels: Vec<String>,
    edges: &[(NodeId, NodeId)],
    thresholds: Vec<u32>,
    snapshot: NodeSet,
    budget: usize,
    mode: DynamicsMode,
) -> SnapshotInstance {
    let graph = Graph::from_edges(labels.len(), edges)
        .and_then(|g| g.with_labels(labels))
        .expect("gadget construction yields a simple graph");
    SnapshotInstance::new(graph, Thresholds::new(thresholds), snapshot, budget, mode).expect("gadget instance is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetId {
    Embed,
    Dummy,
    Seqk1,
}

impl fmt::Display for GadgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetId::Embed => "embed",
            GadgetId::Dummy => "dummy",
            GadgetId::Seqk1 => "seqk1",
        })
    }
}

/// Input to a reduction: the target-set side or the source snapshot side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionInput {
    TargetSet(TargetSetInstance),
    Snapshot(SnapshotInstance),
}

impl ReductionInput {
    fn node_count(&self) -> usize {
        match self {
            ReductionInput::TargetSet(ts) => ts.node_count(),
            ReductionInput::Snapshot(s) => s.node_count(),
        }
    }

    fn to_file(&self) -> InstanceFile {
        match self {
            ReductionInput::TargetSet(ts) => ts.to_file(),
            ReductionInput::Snapshot(s) => InstanceFile::from_instance(s),
        }
    }

    /// Drops node `v`; thresholds of the remaining nodes are kept.
    fn without(&self, v: NodeId) -> ReductionInput {
        let (graph, thresholds) = match self {
            ReductionInput::TargetSet(ts) => (&ts.graph, &ts.thresholds),
            ReductionInput::Snapshot(s) => (&s.graph, &s.thresholds),
        };
        let mut keep = graph.all_nodes();
        keep.remove(v);
        let sub = induced_subgraph(graph, thresholds, &keep);
        match self {
            ReductionInput::TargetSet(ts) => ReductionInput::TargetSet(TargetSetInstance {
                graph: sub.graph,
                thresholds: sub.thresholds,
                budget: ts.budget,
            }),
            ReductionInput::Snapshot(s) => {
                let snapshot = s.snapshot.iter().filter_map(|u| sub.map.local(u)).collect();
                ReductionInput::Snapshot(
                    SnapshotInstance::new(sub.graph, sub.thresholds, snapshot, s.budget, s.mode)
                        .expect("induced subinstance is valid"),
                )
            }
        }
    }
}

/// Which reduction to apply; the embedding carries its target dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gadget {
    Embed(DynamicsMode),
    Dummy,
    Seqk1,
}

impl Gadget {
    pub fn id(self) -> GadgetId {
        match self {
            Gadget::Embed(_) => GadgetId::Embed,
            Gadget::Dummy => GadgetId::Dummy,
            Gadget::Seqk1 => GadgetId::Seqk1,
        }
    }

    pub fn apply(self, input: &ReductionInput) -> Result<SnapshotInstance> {
        match (self, input) {
            (Gadget::Embed(mode), ReductionInput::TargetSet(ts)) => embed_target_set(ts, mode),
            (Gadget::Seqk1, ReductionInput::TargetSet(ts)) => gadget_sequential_k1(ts),
            (Gadget::Dummy, ReductionInput::Snapshot(s)) => Ok(gadget_deactivation_robust(s)),
            (g, _) => Err(Error::Unsupported(format!(
                "gadget {} does not accept this input kind",
                g.id()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub gadget: GadgetId,
    pub instance_digest: String,
    /// Source side: a target set exists, or the source snapshot is feasible.
    pub left: Option<bool>,
    /// Reduced snapshot is feasible; `None` when the search hit a cap.
    pub right: Option<bool>,
    pub agree: bool,
    /// Input shrunk by greedy node deletion while the disagreement persists.
    pub counterexample: Option<InstanceFile>,
}

fn sides(gadget: Gadget, input: &ReductionInput, limits: &SearchLimits) -> Result<(Option<bool>, Option<bool>)> {
    let left = match input {
        ReductionInput::TargetSet(ts) => Some(target_set_exists(ts)),
        ReductionInput::Snapshot(s) => solve(s, limits).decided(),
    };
    let reduced = gadget.apply(input)?;
    let right = solve(&reduced, limits).decided();
    Ok((left, right))
}

fn disagree(sides: (Option<bool>, Option<bool>)) -> bool {
    matches!(sides, (Some(a), Some(b)) if a != b)
}

/// Computes both sides of a reduction and, on disagreement, shrinks the input.
pub fn check_equivalence(gadget: Gadget, input: &ReductionInput, limits: &SearchLimits) -> Result<EquivalenceVerdict> {
    let (left, right) = sides(gadget, input, limits)?;
    let agree = matches!((left, right), (Some(a), Some(b)) if a == b);
    let counterexample = disagree((left, right)).then(|| shrink(gadget, input, limits).to_file());
    let digest = Sha256::digest(canonical_json(&input.to_file()).as_bytes());
    Ok(EquivalenceVerdict {
        gadget: gadget.id(),
        instance_digest: hex::encode(&digest[..8]),
        left,
        right,
        agree,
        counterexample,
    })
}

/// Greedy single-node deletion; no minimality guarantee.
fn shrink(gadget: Gadget, input: &ReductionInput, limits: &SearchLimits) -> ReductionInput {
    let mut current = input.clone();
    'outer: loop {
        for v in 0..current.node_count() {
            let candidate = current.without(v);
            if sides(gadget, &candidate, limits).is_ok_and(disagree) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}
