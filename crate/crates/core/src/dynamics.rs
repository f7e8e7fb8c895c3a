//! Best responses and the four transition systems.
//!
//! Simultaneous dynamics are deterministic: every node best responds to the
//! previous configuration. Sequential dynamics select one node per step.
//! Under monotone dynamics the seed nodes are committed and stay active.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Certificate, Configuration, DynamicsMode, Graph, Move, NodeState, Order, SnapshotInstance, StepKind, Thresholds,
    Trace, TraceStep, Witness,
};
use crate::nodeset::{NodeId, NodeSet};

/// Cap on simultaneous steps when none is given: `min(2^n, 10^6)`.
pub fn default_max_steps(n: usize) -> usize {
    if n >= 20 {
        1_000_000
    } else {
        (1usize << n).min(1_000_000)
    }
}

/// Active iff at least `t_v` neighbors are active. Threshold 0 is always active.
#[inline]
pub fn best_response(graph: &Graph, thresholds: &Thresholds, active: &NodeSet, node: NodeId) -> NodeState {
    NodeState::from_active(graph.active_neighbors(node, active) >= thresholds.of(node))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub configuration: Configuration,
    /// Nodes whose state flipped in this step.
    pub changed: NodeSet,
}

/// One round of simultaneous best responses.
///
/// # Panics
///
/// If `mode` is sequential, or if under monotone dynamics a non-seed active
/// node would deactivate (which cannot happen from a reachable configuration).
pub fn simultaneous_step(
    graph: &Graph,
    thresholds: &Thresholds,
    config: &Configuration,
    seed: &NodeSet,
    mode: DynamicsMode,
) -> StepOutcome {
    assert_eq!(
        mode.order,
        Order::Simultaneous,
        "simultaneous_step needs simultaneous dynamics"
    );
    let old = &config.active;
    let mut next = NodeSet::new();
    for v in graph.nodes() {
        if best_response(graph, thresholds, old, v).is_active() {
            next.insert(v);
        }
    }
    if mode.monotone {
        for v in old.iter().filter(|&v| !seed.contains(v)) {
            assert!(next.contains(v), "monotone step would deactivate non-seed node {v}");
        }
        next = next.union(old).union(seed);
    }
    let changed = old.symmetric_difference(&next);
    StepOutcome {
        configuration: Configuration::new(next, config.time + 1),
        changed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Matched,
    FixedPoint,
    /// The configuration at `entry_time + period` repeats the one at `entry_time`.
    CycleDetected {
        period: usize,
        entry_time: usize,
    },
    StepCapHit,
    /// A supplied ordering ran out without matching the target.
    OrderingExhausted,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::Matched => "matched",
            Termination::FixedPoint => "fixed_point",
            Termination::CycleDetected { .. } => "cycle_detected",
            Termination::StepCapHit => "step_cap_hit",
            Termination::OrderingExhausted => "ordering_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub trace: Trace,
    pub termination: Termination,
}

/// Iterates simultaneous steps from the seed configuration.
///
/// Stops at the first time (0 included) the active set equals `target`, at the
/// first repeated configuration, or after `max_steps` steps.
pub fn run_simultaneous(
    graph: &Graph,
    thresholds: &Thresholds,
    seed: &NodeSet,
    mode: DynamicsMode,
    target: Option<&NodeSet>,
    max_steps: usize,
) -> RunResult {
    assert_eq!(
        mode.order,
        Order::Simultaneous,
        "run_simultaneous needs simultaneous dynamics"
    );
    let mut trace = Trace {
        seed: seed.clone(),
        mode,
        steps: vec![TraceStep {
            time: 0,
            kind: StepKind::Seed,
            active: seed.clone(),
        }],
        match_time: None,
    };
    if target == Some(seed) {
        trace.match_time = Some(0);
        return RunResult {
            trace,
            termination: Termination::Matched,
        };
    }
    let mut seen: HashMap<NodeSet, usize> = HashMap::new();
    seen.insert(seed.clone(), 0);
    let mut config = Configuration::new(seed.clone(), 0);
    for t in 1..=max_steps {
        let outcome = simultaneous_step(graph, thresholds, &config, seed, mode);
        config = outcome.configuration;
        trace.steps.push(TraceStep {
            time: t,
            kind: StepKind::Simultaneous,
            active: config.active.clone(),
        });
        if target == Some(&config.active) {
            trace.match_time = Some(t);
            return RunResult {
                trace,
                termination: Termination::Matched,
            };
        }
        if let Some(&entry_time) = seen.get(&config.active) {
            let period = t - entry_time;
            let termination = if period == 1 {
                Termination::FixedPoint
            } else {
                if period == 2 {
                    log::debug!("period-2 cycle entered at t={entry_time}");
                }
                Termination::CycleDetected { period, entry_time }
            };
            return RunResult { trace, termination };
        }
        seen.insert(config.active.clone(), t);
    }
    RunResult {
        trace,
        termination: Termination::StepCapHit,
    }
}

/// All state-changing best responses in ascending node order. Deactivations
/// are only offered under non-monotone dynamics.
pub fn legal_moves(graph: &Graph, thresholds: &Thresholds, active: &NodeSet, mode: DynamicsMode) -> Vec<Move> {
    let mut moves = Vec::new();
    for v in graph.nodes() {
        let br = best_response(graph, thresholds, active, v);
        match (active.contains(v), br) {
            (false, NodeState::Active) => moves.push(Move::activate(v)),
            (true, NodeState::Inactive) if !mode.monotone => moves.push(Move::deactivate(v)),
            _ => {}
        }
    }
    moves
}

/// Lets the nodes of `ordering` best respond one at a time.
///
/// Selecting a node whose best response equals its state is a recorded no-op
/// step. Under monotone dynamics selected seed nodes stay active.
pub fn apply_ordering(
    graph: &Graph,
    thresholds: &Thresholds,
    seed: &NodeSet,
    ordering: &[NodeId],
    mode: DynamicsMode,
    target: Option<&NodeSet>,
) -> Result<RunResult> {
    if let Some(&bad) = ordering.iter().find(|&&v| v >= graph.node_count()) {
        return Err(Error::NodeOutOfRange(bad));
    }
    if let Some(bad) = seed.iter().find(|&v| v >= graph.node_count()) {
        return Err(Error::NodeOutOfRange(bad));
    }
    let mut trace = Trace {
        seed: seed.clone(),
        mode,
        steps: vec![TraceStep {
            time: 0,
            kind: StepKind::Seed,
            active: seed.clone(),
        }],
        match_time: (target == Some(seed)).then_some(0),
    };
    let mut active = seed.clone();
    for (i, &v) in ordering.iter().enumerate() {
        let mut to = best_response(graph, thresholds, &active, v);
        if mode.monotone && active.contains(v) {
            assert!(
                seed.contains(v) || to.is_active(),
                "monotone ordering would deactivate non-seed node {v}"
            );
            to = NodeState::Active;
        }
        let changed = active.contains(v) != to.is_active();
        active.set(v, to.is_active());
        let time = i + 1;
        trace.steps.push(TraceStep {
            time,
            kind: StepKind::Select { node: v, to, changed },
            active: active.clone(),
        });
        if trace.match_time.is_none() && target == Some(&active) {
            trace.match_time = Some(time);
        }
    }
    let termination = if trace.match_time.is_some() {
        Termination::Matched
    } else {
        Termination::OrderingExhausted
    };
    Ok(RunResult { trace, termination })
}

/// Replays a certificate against its instance and returns the match time.
///
/// Sequential witnesses must consist of genuine best responses: each move's
/// target state has to equal the node's best response before the move.
pub fn replay_certificate(inst: &SnapshotInstance, cert: &Certificate, max_steps: Option<usize>) -> Result<RunResult> {
    let n = inst.node_count();
    if let Some(bad) = cert.seed.iter().find(|&v| v >= n) {
        return Err(Error::NodeOutOfRange(bad));
    }
    if cert.seed.len() > inst.budget {
        return Err(Error::Replay(format!(
            "seed has {} nodes, budget is {}",
            cert.seed.len(),
            inst.budget
        )));
    }
    match (&cert.witness, inst.mode.order) {
        (Witness::Simultaneous { match_time }, Order::Simultaneous) => {
            let cap = max_steps.unwrap_or_else(|| default_max_steps(n)).max(*match_time);
            let run = run_simultaneous(
                &inst.graph,
                &inst.thresholds,
                &cert.seed,
                inst.mode,
                Some(&inst.snapshot),
                cap,
            );
            if run.trace.match_time != Some(*match_time) {
                return Err(Error::Replay(format!(
                    "claimed match at t={match_time}, replay gives {:?}",
                    run.trace.match_time
                )));
            }
            Ok(run)
        }
        (Witness::Sequential { ordering, match_prefix }, Order::Sequential) => {
            if *match_prefix > ordering.len() {
                return Err(Error::Replay(format!(
                    "match prefix {match_prefix} exceeds ordering length {}",
                    ordering.len()
                )));
            }
            let nodes: Vec<NodeId> = ordering.iter().map(|m| m.node).collect();
            let run = apply_ordering(
                &inst.graph,
                &inst.thresholds,
                &cert.seed,
                &nodes[..*match_prefix],
                inst.mode,
                None,
            )?;
            for (step, mv) in run.trace.steps[1..].iter().zip(ordering) {
                if let StepKind::Select { to, .. } = step.kind {
                    if to != mv.to {
                        return Err(Error::Replay(format!(
                            "move at t={} sets node {} {:?}, best response is {:?}",
                            step.time, mv.node, mv.to, to
                        )));
                    }
                }
            }
            let last = &run.trace.steps[*match_prefix].active;
            if *last != inst.snapshot {
                return Err(Error::Replay(format!(
                    "active set after {match_prefix} moves is {}, snapshot is {}",
                    inst.labelled(last),
                    inst.labelled(&inst.snapshot)
                )));
            }
            let mut run = run;
            run.trace.match_time = run.trace.steps.iter().position(|s| s.active == inst.snapshot);
            run.termination = Termination::Matched;
            Ok(run)
        }
        _ => Err(Error::Replay(format!(
            "witness type does not fit {} dynamics",
            inst.mode
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star4() -> (Graph, Thresholds) {
        (
            Graph::from_edges(4, &[(1, 0), (1, 2), (1, 3)]).unwrap(),
            Thresholds::new(vec![1, 2, 1, 1]),
        )
    }

    fn set(ids: &[usize]) -> NodeSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn best_response_examples() {
        let (g, t) = star4();
        assert_eq!(best_response(&g, &t, &set(&[0, 2]), 1), NodeState::Active);
        assert_eq!(best_response(&g, &t, &set(&[]), 1), NodeState::Inactive);
        assert_eq!(best_response(&g, &t, &set(&[1]), 0), NodeState::Active);
    }

    #[test]
    fn zero_threshold_is_always_active() {
        let g = Graph::from_edges(2, &[]).unwrap();
        let t = Thresholds::new(vec![0, 1]);
        assert!(best_response(&g, &t, &NodeSet::new(), 0).is_active());
        let run = run_simultaneous(&g, &t, &NodeSet::new(), DynamicsMode::SIMULTANEOUS, None, 8);
        assert_eq!(run.trace.steps[1].active, set(&[0]));
        assert_eq!(run.termination, Termination::FixedPoint);
    }

    #[test]
    fn simultaneous_step_examples() {
        let (g, t) = star4();
        let c = Configuration::new(set(&[1]), 0);
        let seed = set(&[1]);
        let out = simultaneous_step(&g, &t, &c, &seed, DynamicsMode::SIMULTANEOUS);
        assert_eq!(out.configuration.active, set(&[0, 2, 3]));
        assert_eq!(out.changed, set(&[0, 1, 2, 3]));
        let out = simultaneous_step(&g, &t, &c, &seed, DynamicsMode::MONOTONE_SIMULTANEOUS);
        assert_eq!(out.configuration.active, set(&[0, 1, 2, 3]));
        let empty = Configuration::new(NodeSet::new(), 0);
        let out = simultaneous_step(&g, &t, &empty, &NodeSet::new(), DynamicsMode::SIMULTANEOUS);
        assert!(out.configuration.active.is_empty());
        assert!(out.changed.is_empty());
    }

    #[test]
    fn match_at_time_one_despite_later_over_activation() {
        let (g, t) = star4();
        let run = run_simultaneous(
            &g,
            &t,
            &set(&[0, 2]),
            DynamicsMode::MONOTONE_SIMULTANEOUS,
            Some(&set(&[0, 1, 2])),
            16,
        );
        assert_eq!(run.termination, Termination::Matched);
        assert_eq!(run.trace.match_time, Some(1));
    }

    #[test]
    fn non_monotone_star_oscillates() {
        let (g, t) = star4();
        let run = run_simultaneous(&g, &t, &set(&[1]), DynamicsMode::SIMULTANEOUS, Some(&g.all_nodes()), 16);
        assert_eq!(
            run.termination,
            Termination::CycleDetected {
                period: 2,
                entry_time: 0
            }
        );
        assert_eq!(run.trace.match_time, None);
        assert_eq!(run.trace.steps[1].active, set(&[0, 2, 3]));
        assert_eq!(run.trace.steps[2].active, set(&[1]));
    }

    #[test]
    fn step_cap_is_reported() {
        let (g, t) = star4();
        let run = run_simultaneous(&g, &t, &set(&[1]), DynamicsMode::SIMULTANEOUS, None, 1);
        assert_eq!(run.termination, Termination::StepCapHit);
    }

    #[test]
    fn legal_moves_examples() {
        let (g, t) = star4();
        let c = set(&[1]);
        assert_eq!(
            legal_moves(&g, &t, &c, DynamicsMode::SEQUENTIAL),
            vec![
                Move::activate(0),
                Move::deactivate(1),
                Move::activate(2),
                Move::activate(3)
            ]
        );
        assert_eq!(
            legal_moves(&g, &t, &c, DynamicsMode::MONOTONE_SEQUENTIAL),
            vec![Move::activate(0), Move::activate(2), Move::activate(3)]
        );
        assert!(legal_moves(&g, &t, &NodeSet::new(), DynamicsMode::SEQUENTIAL).is_empty());
    }

    #[test]
    fn apply_ordering_examples() {
        let (g, t) = star4();
        let seed = set(&[1]);
        let run = apply_ordering(&g, &t, &seed, &[2], DynamicsMode::SEQUENTIAL, Some(&set(&[1, 2]))).unwrap();
        assert_eq!(run.trace.match_time, Some(1));
        let run = apply_ordering(&g, &t, &seed, &[], DynamicsMode::SEQUENTIAL, Some(&seed)).unwrap();
        assert_eq!(run.trace.match_time, Some(0));
        let run = apply_ordering(&g, &t, &seed, &[1], DynamicsMode::SEQUENTIAL, Some(&NodeSet::new())).unwrap();
        assert_eq!(run.trace.match_time, Some(1));
        let run = apply_ordering(&g, &t, &seed, &[1], DynamicsMode::MONOTONE_SEQUENTIAL, None).unwrap();
        assert_eq!(run.trace.last_active(), &seed);
        assert!(matches!(
            apply_ordering(&g, &t, &seed, &[9], DynamicsMode::SEQUENTIAL, None),
            Err(Error::NodeOutOfRange(9))
        ));
    }

    #[test]
    fn no_op_selection_advances_time() {
        let (g, t) = star4();
        let run = apply_ordering(&g, &t, &set(&[1]), &[0, 0], DynamicsMode::SEQUENTIAL, None).unwrap();
        assert_eq!(run.trace.steps.len(), 3);
        assert_eq!(
            run.trace.steps[2].kind,
            StepKind::Select {
                node: 0,
                to: NodeState::Active,
                changed: false
            }
        );
    }
}
