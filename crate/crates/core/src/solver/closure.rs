use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{Graph, Move, SnapshotInstance, Thresholds, Witness};
use crate::nodeset::{NodeId, NodeSet};

use super::{canonical_seeds, search_seeds, SearchLimits, SeedEval, SeedResult, SolveOutcome};

/// Activation order of the monotone cascade from `seed`, always activating
/// the lowest-id eligible node next. Only nodes in `restrict_to` (when given)
/// may activate. Seed nodes are not listed.
pub fn closure_order(
    graph: &Graph,
    thresholds: &Thresholds,
    seed: &NodeSet,
    restrict_to: Option<&NodeSet>,
) -> Vec<NodeId> {
    let n = graph.node_count();
    let allowed = |v: NodeId| restrict_to.is_none_or(|r| r.contains(v));
    let mut active = seed.clone();
    let mut count = vec![0usize; n];
    for u in seed {
        for &v in graph.neighbors(u) {
            count[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<NodeId>> = (0..n)
        .filter(|&v| !active.contains(v) && allowed(v) && count[v] >= thresholds.of(v))
        .map(Reverse)
        .collect();
    let mut order = Vec::new();
    while let Some(Reverse(v)) = heap.pop() {
        if !active.insert(v) {
            continue;
        }
        order.push(v);
        for &u in graph.neighbors(v) {
            count[u] += 1;
            if count[u] == thresholds.of(u) && !active.contains(u) && allowed(u) {
                heap.push(Reverse(u));
            }
        }
    }
    order
}

/// Least fixed point of threshold activations from `seed`, optionally confined
/// to `restrict_to`. The result does not depend on activation order.
pub fn monotone_closure(
    graph: &Graph,
    thresholds: &Thresholds,
    seed: &NodeSet,
    restrict_to: Option<&NodeSet>,
) -> NodeSet {
    let mut out = seed.clone();
    out.extend(closure_order(graph, thresholds, seed, restrict_to));
    out
}

/// Monotone sequential: `S` is producible from `seed ⊆ S` iff the cascade
/// confined to `S` reaches all of `S`; nodes outside `S` are never selected.
pub fn solve_monotone_sequential(inst: &SnapshotInstance, limits: &SearchLimits) -> SolveOutcome {
    let candidates = inst.snapshot.to_vec();
    search_seeds(canonical_seeds(&candidates, inst.budget), limits, |seed| {
        let order = closure_order(&inst.graph, &inst.thresholds, seed, Some(&inst.snapshot));
        let states = order.len() + 1;
        let result = if seed.len() + order.len() == inst.snapshot.len() {
            let match_prefix = order.len();
            SeedResult::Found(Witness::Sequential {
                ordering: order.into_iter().map(Move::activate).collect(),
                match_prefix,
            })
        } else {
            SeedResult::Exhausted
        };
        SeedEval { result, states }
    })
}
