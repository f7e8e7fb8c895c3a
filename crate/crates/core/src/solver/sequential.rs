use std::collections::{BTreeSet, HashMap, VecDeque};
use std::iter;

use thiserror::Error;

use crate::dynamics::{run_simultaneous, Termination};
use crate::error::{Error, Result};
use crate::model::{closed_neighborhood, DynamicsMode, Graph, Move, Order, SnapshotInstance, Thresholds, Witness};
use crate::nodeset::{NodeId, NodeSet};

use super::{canonical_seeds, search_seeds, SearchLimits, SeedEval, SeedResult, SolveOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search visited more than {limit} configurations")]
pub struct CapHit {
    pub limit: usize,
}

/// Breadth-first search over configurations. States are stored in discovery
/// order with a parent pointer and the move that produced them.
struct Bfs {
    states: Vec<(NodeSet, u32, Move)>,
    found: Option<u32>,
    capped: bool,
}

impl Bfs {
    fn run<M>(start: NodeSet, goal: Option<&NodeSet>, max_states: usize, mut moves: M) -> Bfs
    where
        M: FnMut(&NodeSet, &mut Vec<Move>),
    {
        let mut bfs = Bfs {
            states: vec![(start.clone(), u32::MAX, Move::activate(0))],
            found: None,
            capped: false,
        };
        if goal == Some(&start) {
            bfs.found = Some(0);
            return bfs;
        }
        let mut index: HashMap<NodeSet, u32> = HashMap::new();
        index.insert(start, 0);
        let mut queue = VecDeque::from([0u32]);
        let mut buf = Vec::new();
        while let Some(i) = queue.pop_front() {
            let current = bfs.states[i as usize].0.clone();
            buf.clear();
            moves(&current, &mut buf);
            for &mv in &buf {
                let mut next = current.clone();
                next.set(mv.node, mv.to.is_active());
                if index.contains_key(&next) {
                    continue;
                }
                if bfs.states.len() >= max_states {
                    bfs.capped = true;
                    return bfs;
                }
                let j = bfs.states.len() as u32;
                index.insert(next.clone(), j);
                let hit = goal == Some(&next);
                bfs.states.push((next, i, mv));
                if hit {
                    bfs.found = Some(j);
                    return bfs;
                }
                queue.push_back(j);
            }
        }
        bfs
    }

    fn path_to(&self, mut i: u32) -> Vec<Move> {
        let mut path = Vec::new();
        while i != 0 {
            let (_, parent, mv) = &self.states[i as usize];
            path.push(*mv);
            i = *parent;
        }
        path.reverse();
        path
    }

    fn into_eval(self) -> SeedEval {
        let states = self.states.len();
        let result = match self.found {
            Some(i) => {
                let ordering = self.path_to(i);
                let match_prefix = ordering.len();
                SeedResult::Found(Witness::Sequential { ordering, match_prefix })
            }
            None if self.capped => SeedResult::Capped,
            None => SeedResult::Exhausted,
        };
        SeedEval { result, states }
    }
}

/// Active-neighbor counts for every node.
fn neighbor_counts(graph: &Graph, active: &NodeSet, counts: &mut Vec<usize>) {
    counts.clear();
    counts.resize(graph.node_count(), 0);
    for u in active {
        for &v in graph.neighbors(u) {
            counts[v] += 1;
        }
    }
}

fn full_moves<'a>(
    graph: &'a Graph,
    thresholds: &'a Thresholds,
    monotone: bool,
) -> impl FnMut(&NodeSet, &mut Vec<Move>) + 'a {
    let mut counts = Vec::new();
    move |active, out| {
        neighbor_counts(graph, active, &mut counts);
        for (v, &c) in counts.iter().enumerate() {
            let br = c >= thresholds.of(v);
            match (active.contains(v), br) {
                (false, true) => out.push(Move::activate(v)),
                (true, false) if !monotone => out.push(Move::deactivate(v)),
                _ => {}
            }
        }
    }
}

/// Non-monotone sequential: breadth-first search over configurations from
/// every seed of size at most `k`. The witness is a shortest move sequence.
pub fn solve_sequential(inst: &SnapshotInstance, limits: &SearchLimits) -> SolveOutcome {
    let candidates: Vec<_> = inst.graph.nodes().collect();
    search_seeds(canonical_seeds(&candidates, inst.budget), limits, |seed| {
        Bfs::run(
            seed.clone(),
            Some(&inst.snapshot),
            limits.max_states,
            full_moves(&inst.graph, &inst.thresholds, false),
        )
        .into_eval()
    })
}

/// Search confined to `S ∪ {u0}`: nodes of `S` may only activate, `u0` follows
/// its best response in both directions. With `u0 = None` the search starts
/// from the empty configuration.
pub fn restricted_search(
    graph: &Graph,
    thresholds: &Thresholds,
    snapshot: &NodeSet,
    u0: Option<NodeId>,
    max_states: usize,
) -> Result<Option<Vec<Move>>, CapHit> {
    let bfs = restricted_bfs(graph, thresholds, snapshot, u0, max_states);
    match bfs.found {
        Some(i) => Ok(Some(bfs.path_to(i))),
        None if bfs.capped => Err(CapHit { limit: max_states }),
        None => Ok(None),
    }
}

fn restricted_bfs(
    graph: &Graph,
    thresholds: &Thresholds,
    snapshot: &NodeSet,
    u0: Option<NodeId>,
    max_states: usize,
) -> Bfs {
    let mut universe = snapshot.clone();
    let start: NodeSet = u0.into_iter().collect();
    universe.extend(u0);
    let universe = universe.to_vec();
    Bfs::run(start, Some(snapshot), max_states, |active, out| {
        for &v in &universe {
            let br = graph.active_neighbors(v, active) >= thresholds.of(v);
            let on = active.contains(v);
            if Some(v) == u0 {
                if on != br {
                    out.push(if br { Move::activate(v) } else { Move::deactivate(v) });
                }
            } else if !on && br {
                out.push(Move::activate(v));
            }
        }
    })
}

/// Sequential dynamics with a single initial adopter.
///
/// Candidates are the empty seed and every node of `N[S]`; for each adopter
/// `u0` only the nodes of `S ∪ {u0}` are searched, with deactivations allowed
/// for `u0` alone. Agrees with [`solve_sequential`] on the verdict.
pub fn solve_sequential_k1(inst: &SnapshotInstance, limits: &SearchLimits) -> Result<SolveOutcome> {
    if inst.budget != 1 {
        return Err(Error::Unsupported(format!(
            "single-adopter solver needs budget 1, got {}",
            inst.budget
        )));
    }
    let candidates = closed_neighborhood(&inst.graph, &inst.snapshot);
    let seeds = iter::once(NodeSet::new()).chain(candidates.iter().map(NodeSet::singleton));
    Ok(search_seeds(seeds, limits, |seed| {
        let u0 = seed.iter().next();
        restricted_bfs(&inst.graph, &inst.thresholds, &inst.snapshot, u0, limits.max_states).into_eval()
    }))
}

/// Every configuration reachable from `seed`: all move sequences for
/// sequential dynamics, the trajectory up to its first repeat for
/// simultaneous dynamics.
pub fn reachable_configs(
    graph: &Graph,
    thresholds: &Thresholds,
    seed: &NodeSet,
    mode: DynamicsMode,
    limits: &SearchLimits,
) -> Result<BTreeSet<NodeSet>, CapHit> {
    match mode.order {
        Order::Sequential => {
            let bfs = Bfs::run(
                seed.clone(),
                None,
                limits.max_states,
                full_moves(graph, thresholds, mode.monotone),
            );
            if bfs.capped {
                return Err(CapHit {
                    limit: limits.max_states,
                });
            }
            Ok(bfs.states.into_iter().map(|(s, _, _)| s).collect())
        }
        Order::Simultaneous => {
            let steps = limits.steps_for(graph.node_count());
            let run = run_simultaneous(graph, thresholds, seed, mode, None, steps);
            if run.termination == Termination::StepCapHit {
                return Err(CapHit { limit: steps });
            }
            Ok(run.trace.steps.into_iter().map(|s| s.active).collect())
        }
    }
}
