//! Monotone simultaneous snapshots on cliques.
//!
//! On a clique an inactive node sees every active node, so it activates as
//! soon as the number of active nodes reaches its threshold. The whole process
//! is therefore determined by counts, and nodes with equal thresholds are
//! interchangeable. The rules below narrow the seed space before the
//! count-based enumeration in [`solve_clique`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::error::{Error, Result};
use crate::model::{induced_subgraph, Certificate, DynamicsMode, SnapshotInstance, Thresholds, Witness};
use crate::nodeset::{NodeId, NodeSet};
use crate::solver::{monotone_closure, SolveOutcome, SolveStats, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    P1,
    P2,
    P3,
    P4,
    P5,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum RuleAction {
    ForcedSeed {
        nodes: NodeSet,
    },
    Infeasible,
    PrunedNodes {
        nodes: NodeSet,
    },
    /// Seeds whose size lies in `min..=max` cannot produce the snapshot.
    ExcludedSeedSizes {
        min: usize,
        max: usize,
    },
    /// No over-activation is possible; decided by the cascade of the `k`
    /// highest-threshold snapshot nodes inside `G[S]`.
    ReducedToTargetSet {
        feasible: bool,
        seed: NodeSet,
    },
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: RuleId,
    #[serde(flatten)]
    pub action: RuleAction,
    pub justification: String,
}

impl RuleReport {
    fn new(rule: RuleId, action: RuleAction, justification: impl Into<String>) -> Self {
        RuleReport {
            rule,
            action,
            justification: justification.into(),
        }
    }
}

/// Which rules [`solve_clique`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet {
    pub forced_seed: bool,
    pub low_threshold_outside: bool,
    pub threshold_collision: bool,
    pub prune_outside: bool,
    pub isolated_snapshot: bool,
    /// Treat P2 as "infeasible unless |S| <= k" instead of only excluding
    /// seed sizes the rule actually covers. Not verdict-preserving.
    pub literal_p2: bool,
    /// Enumerate one representative per threshold multiset.
    pub dedup_thresholds: bool,
}

impl RuleSet {
    pub const ALL: RuleSet = RuleSet {
        forced_seed: true,
        low_threshold_outside: true,
        threshold_collision: true,
        prune_outside: true,
        isolated_snapshot: true,
        literal_p2: false,
        dedup_thresholds: true,
    };

    pub const NONE: RuleSet = RuleSet {
        forced_seed: false,
        low_threshold_outside: false,
        threshold_collision: false,
        prune_outside: false,
        isolated_snapshot: false,
        literal_p2: false,
        dedup_thresholds: false,
    };

    /// Decodes the low seven bits: P1..P5, literal P2, dedup.
    pub fn from_bits(bits: u8) -> RuleSet {
        RuleSet {
            forced_seed: bits & 1 != 0,
            low_threshold_outside: bits & 2 != 0,
            threshold_collision: bits & 4 != 0,
            prune_outside: bits & 8 != 0,
            isolated_snapshot: bits & 16 != 0,
            literal_p2: bits & 32 != 0,
            dedup_thresholds: bits & 64 != 0,
        }
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::ALL
    }
}

pub fn assert_clique(inst: &SnapshotInstance) -> Result<()> {
    match inst.graph.missing_edge() {
        None => Ok(()),
        Some((u, v)) => Err(Error::Unsupported(format!(
            "not a clique: missing edge ({}, {})",
            inst.graph.label(u),
            inst.graph.label(v)
        ))),
    }
}

fn check_preconditions(inst: &SnapshotInstance) -> Result<()> {
    assert_clique(inst)?;
    if inst.mode != DynamicsMode::MONOTONE_SIMULTANEOUS {
        return Err(Error::WrongMode {
            expected: DynamicsMode::MONOTONE_SIMULTANEOUS.to_string(),
            found: inst.mode.to_string(),
        });
    }
    Ok(())
}

fn outside(inst: &SnapshotInstance) -> NodeSet {
    inst.graph.all_nodes().difference(&inst.snapshot)
}

fn min_outside_threshold(inst: &SnapshotInstance) -> Option<usize> {
    outside(inst).iter().map(|v| inst.thresholds.of(v)).min()
}

/// P1: a snapshot node with `t_u >= |S|` can never activate by best response
/// without over-activation, so it has to be seeded.
pub fn rule_forced_seed(inst: &SnapshotInstance) -> RuleReport {
    let s = inst.snapshot.len();
    let forced: NodeSet = inst.snapshot.iter().filter(|&v| inst.thresholds.of(v) >= s).collect();
    if forced.is_empty() {
        return RuleReport::new(
            RuleId::P1,
            RuleAction::Inapplicable,
            format!("no node of S has threshold >= |S| = {s}"),
        );
    }
    if forced.len() > inst.budget {
        return RuleReport::new(
            RuleId::P1,
            RuleAction::Infeasible,
            format!(
                "{} must be seeded (threshold >= |S| = {s}) but the budget is {}",
                inst.labelled(&forced),
                inst.budget
            ),
        );
    }
    RuleReport::new(
        RuleId::P1,
        RuleAction::ForcedSeed { nodes: forced.clone() },
        format!(
            "{} have threshold >= |S| = {s} and must be seeded",
            inst.labelled(&forced)
        ),
    )
}

/// P2: once the process runs for a round with `s >= t_u` active nodes, the
/// outside node `u` activates. With `|S| > k` every seed needs at least one
/// round, so seeds of size `t_u..=k` are ruled out. `literal` instead reports
/// infeasibility outright.
pub fn rule_low_threshold_outside(inst: &SnapshotInstance, literal: bool) -> RuleReport {
    let k = inst.budget;
    let s = inst.snapshot.len();
    if s <= k {
        return RuleReport::new(
            RuleId::P2,
            RuleAction::Inapplicable,
            format!("|S| = {s} <= k = {k}: S itself is a seed matching at t=0"),
        );
    }
    let low = outside(inst)
        .iter()
        .filter(|&v| inst.thresholds.of(v) <= k)
        .min_by_key(|&v| (inst.thresholds.of(v), v));
    let Some(u) = low else {
        return RuleReport::new(
            RuleId::P2,
            RuleAction::Inapplicable,
            format!("every node outside S has threshold > k = {k}"),
        );
    };
    let t = inst.thresholds.of(u);
    if literal {
        return RuleReport::new(
            RuleId::P2,
            RuleAction::Infeasible,
            format!(
                "{} lies outside S with threshold {t} <= k = {k} and |S| != k",
                inst.graph.label(u)
            ),
        );
    }
    RuleReport::new(
        RuleId::P2,
        RuleAction::ExcludedSeedSizes { min: t.max(1), max: k },
        format!(
            "{} lies outside S with threshold {t}: any seed of size {}..={k} activates it in round 1",
            inst.graph.label(u),
            t.max(1)
        ),
    )
}

/// P3: non-seed nodes with equal thresholds activate in the same round, so a
/// snapshot node sharing its threshold with an outside node must be seeded.
pub fn rule_threshold_collision(inst: &SnapshotInstance) -> RuleReport {
    let outside_thresholds: std::collections::BTreeSet<usize> =
        outside(inst).iter().map(|v| inst.thresholds.of(v)).collect();
    if outside_thresholds.is_empty() {
        return RuleReport::new(RuleId::P3, RuleAction::Inapplicable, "S = V: no outside nodes");
    }
    let forced: NodeSet = inst
        .snapshot
        .iter()
        .filter(|&v| outside_thresholds.contains(&inst.thresholds.of(v)))
        .collect();
    if forced.is_empty() {
        return RuleReport::new(
            RuleId::P3,
            RuleAction::Inapplicable,
            "thresholds inside and outside S are disjoint",
        );
    }
    let high: NodeSet = inst
        .snapshot
        .iter()
        .filter(|&v| inst.thresholds.of(v) >= inst.snapshot.len())
        .collect();
    let all = forced.union(&high);
    if all.len() > inst.budget {
        return RuleReport::new(
            RuleId::P3,
            RuleAction::Infeasible,
            format!(
                "{} must be seeded (with P1 nodes) but the budget is {}",
                inst.labelled(&all),
                inst.budget
            ),
        );
    }
    RuleReport::new(
        RuleId::P3,
        RuleAction::ForcedSeed { nodes: forced.clone() },
        format!("{} share a threshold with a node outside S", inst.labelled(&forced)),
    )
}

/// P4: with `t` the smallest outside threshold, outside nodes of higher
/// threshold activate no earlier than the minimum ones and can be dropped.
/// Returns the reduced instance and the original ids of its nodes.
pub fn rule_prune_outside(inst: &SnapshotInstance) -> (RuleReport, SnapshotInstance, Vec<NodeId>) {
    let identity: Vec<NodeId> = inst.graph.nodes().collect();
    let Some(t) = min_outside_threshold(inst) else {
        return (
            RuleReport::new(RuleId::P4, RuleAction::Inapplicable, "S = V: no outside nodes"),
            inst.clone(),
            identity,
        );
    };
    let pruned: NodeSet = outside(inst).iter().filter(|&v| inst.thresholds.of(v) > t).collect();
    if pruned.is_empty() {
        return (
            RuleReport::new(
                RuleId::P4,
                RuleAction::Inapplicable,
                format!("every outside node has the minimum threshold {t}"),
            ),
            inst.clone(),
            identity,
        );
    }
    let keep = inst.graph.all_nodes().difference(&pruned);
    let sub = induced_subgraph(&inst.graph, &inst.thresholds, &keep);
    let snapshot: NodeSet = inst.snapshot.iter().filter_map(|v| sub.map.local(v)).collect();
    let reduced = SnapshotInstance::new(sub.graph, sub.thresholds, snapshot, inst.budget, inst.mode)
        .expect("induced subinstance is valid");
    let ids = (0..sub.map.len()).map(|i| sub.map.original(i)).collect();
    let report = RuleReport::new(
        RuleId::P4,
        RuleAction::PrunedNodes { nodes: pruned.clone() },
        format!("{} lie outside S with threshold > {t}", inst.labelled(&pruned)),
    );
    (report, reduced, ids)
}

/// The `k` highest-threshold snapshot nodes, ties broken by ascending id.
fn top_threshold_nodes(inst: &SnapshotInstance, k: usize) -> NodeSet {
    let mut nodes = inst.snapshot.to_vec();
    nodes.sort_by_key(|&v| (std::cmp::Reverse(inst.thresholds.of(v)), v));
    nodes.into_iter().take(k).collect()
}

/// P5: if `|S| <` every outside threshold, nothing outside can activate, and
/// the question is whether the `k` highest-threshold nodes of `S` activate all
/// of `G[S]`.
pub fn rule_isolated_snapshot(inst: &SnapshotInstance) -> RuleReport {
    let s = inst.snapshot.len();
    let bound = min_outside_threshold(inst);
    if bound.is_some_and(|t| s >= t) {
        return RuleReport::new(
            RuleId::P5,
            RuleAction::Inapplicable,
            format!("|S| = {s} >= min outside threshold {}", bound.unwrap_or(0)),
        );
    }
    let seed = top_threshold_nodes(inst, inst.budget);
    let closure = monotone_closure(&inst.graph, &inst.thresholds, &seed, Some(&inst.snapshot));
    let feasible = closure == inst.snapshot;
    RuleReport::new(
        RuleId::P5,
        RuleAction::ReducedToTargetSet {
            feasible,
            seed: seed.clone(),
        },
        format!(
            "|S| = {s} is below every outside threshold; cascade from {} inside S {}",
            inst.labelled(&seed),
            if feasible { "covers S" } else { "stalls" }
        ),
    )
}

/// Sizes of successive active sets on a clique, starting from `seed`, up to
/// the fixed point. Uses sorted threshold counts only.
pub fn clique_counts(thresholds: &Thresholds, seed: &NodeSet) -> Vec<usize> {
    let mut rest: Vec<usize> = (0..thresholds.len())
        .filter(|&v| !seed.contains(v))
        .map(|v| thresholds.of(v))
        .collect();
    rest.sort_unstable();
    let mut counts = vec![seed.len()];
    let mut reached = 0;
    loop {
        let c = *counts.last().unwrap();
        while reached < rest.len() && rest[reached] <= c {
            reached += 1;
        }
        let next = seed.len() + reached;
        if next == c {
            return counts;
        }
        counts.push(next);
    }
}

/// Active sets on a clique from `seed`, computed from counts: after a round
/// with `c` active nodes every node of threshold `<= c` is active.
pub fn clique_trajectory(thresholds: &Thresholds, seed: &NodeSet) -> Vec<NodeSet> {
    let rounds = clique_counts(thresholds, seed).len();
    let mut out = vec![seed.clone()];
    for _ in 1..rounds {
        let c = out.last().map_or(0, NodeSet::len);
        let mut next = seed.clone();
        next.extend((0..thresholds.len()).filter(|&v| thresholds.of(v) <= c));
        out.push(next);
    }
    out
}

/// Count-based match test: returns the first time the active set equals `S`.
///
/// `inside` holds thresholds of the non-seed snapshot nodes and `outside` the
/// thresholds of nodes outside `S`, both sorted ascending.
fn count_match_time(seed_size: usize, inside: &[usize], outside: &[usize]) -> (Option<usize>, usize) {
    let target = seed_size + inside.len();
    if inside.is_empty() {
        return (Some(0), 1);
    }
    let mut c = seed_size;
    let (mut i, mut o) = (0, 0);
    let mut t = 0;
    loop {
        while i < inside.len() && inside[i] <= c {
            i += 1;
        }
        while o < outside.len() && outside[o] <= c {
            o += 1;
        }
        t += 1;
        if o == 0 && seed_size + i == target {
            return (Some(t), t + 1);
        }
        let next = seed_size + i + o;
        if next == c {
            return (None, t + 1);
        }
        c = next;
    }
}

#[derive(Debug, Clone)]
pub struct CliqueSolution {
    pub reports: Vec<RuleReport>,
    pub outcome: SolveOutcome,
}

/// Count-based exact solver for monotone simultaneous dynamics on a clique.
///
/// Applies the enabled rules in the order P1, P3, P4, P5, P2, then enumerates
/// seeds inside `S` that contain every forced node, one per threshold
/// multiset when deduplication is on.
pub fn solve_clique(inst: &SnapshotInstance, rules: &RuleSet) -> Result<CliqueSolution> {
    check_preconditions(inst)?;
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut forced = NodeSet::new();
    let done = |reports: Vec<RuleReport>, verdict: Verdict, stats: SolveStats| {
        let mut stats = stats;
        stats.wall_time = start.elapsed();
        Ok(CliqueSolution {
            reports,
            outcome: SolveOutcome { verdict, stats },
        })
    };

    if rules.forced_seed {
        let r = rule_forced_seed(inst);
        let action = r.action.clone();
        reports.push(r);
        match action {
            RuleAction::Infeasible => return done(reports, Verdict::Infeasible, SolveStats::default()),
            RuleAction::ForcedSeed { nodes } => forced = forced.union(&nodes),
            _ => {}
        }
    }
    if rules.threshold_collision {
        let r = rule_threshold_collision(inst);
        let action = r.action.clone();
        reports.push(r);
        match action {
            RuleAction::Infeasible => return done(reports, Verdict::Infeasible, SolveStats::default()),
            RuleAction::ForcedSeed { nodes } => forced = forced.union(&nodes),
            _ => {}
        }
    }
    if forced.len() > inst.budget {
        return done(reports, Verdict::Infeasible, SolveStats::default());
    }

    let (work, ids) = if rules.prune_outside {
        let (r, reduced, ids) = rule_prune_outside(inst);
        reports.push(r);
        (reduced, ids)
    } else {
        (inst.clone(), inst.graph.nodes().collect())
    };
    let local_of = |v: NodeId| ids.binary_search(&v).expect("forced nodes lie in S");
    let forced_local: NodeSet = forced.iter().map(local_of).collect();
    let lift = |s: &NodeSet| -> NodeSet { s.iter().map(|v| ids[v]).collect() };

    let outside_t: Vec<usize> = {
        let mut v: Vec<usize> = outside(&work).iter().map(|v| work.thresholds.of(v)).collect();
        v.sort_unstable();
        v
    };

    if rules.isolated_snapshot {
        let r = rule_isolated_snapshot(&work);
        let action = r.action.clone();
        let r = RuleReport {
            action: match r.action {
                RuleAction::ReducedToTargetSet { feasible, seed } => RuleAction::ReducedToTargetSet {
                    feasible,
                    seed: lift(&seed),
                },
                other => other,
            },
            ..r
        };
        reports.push(r);
        if let RuleAction::ReducedToTargetSet { feasible, seed } = action {
            if !feasible {
                return done(reports, Verdict::Infeasible, SolveStats::default());
            }
            let mut inside: Vec<usize> = work
                .snapshot
                .difference(&seed)
                .iter()
                .map(|v| work.thresholds.of(v))
                .collect();
            inside.sort_unstable();
            let (time, states) = count_match_time(seed.len(), &inside, &outside_t);
            let match_time = time.expect("closure covering S matches");
            let stats = SolveStats {
                seeds_tried: 1,
                states_expanded: states,
                ..Default::default()
            };
            let cert = Certificate {
                seed: lift(&seed),
                witness: Witness::Simultaneous { match_time },
            };
            return done(reports, Verdict::Feasible(cert), stats);
        }
    }

    let mut excluded: Option<(usize, usize)> = None;
    if rules.low_threshold_outside {
        let r = rule_low_threshold_outside(&work, rules.literal_p2);
        let action = r.action.clone();
        reports.push(r);
        match action {
            RuleAction::Infeasible => return done(reports, Verdict::Infeasible, SolveStats::default()),
            RuleAction::ExcludedSeedSizes { min, max } => excluded = Some((min, max)),
            _ => {}
        }
    }

    // Group the free snapshot nodes by threshold.
    let free = work.snapshot.difference(&forced_local);
    let groups: Vec<(usize, Vec<NodeId>)> = if rules.dedup_thresholds {
        let mut by_t: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for v in &free {
            by_t.entry(work.thresholds.of(v)).or_default().push(v);
        }
        by_t.into_iter().collect()
    } else {
        free.iter().map(|v| (work.thresholds.of(v), vec![v])).collect()
    };

    let max_size = work.budget.min(work.snapshot.len());
    let mut stats = SolveStats::default();
    for size in forced_local.len()..=max_size {
        if excluded.is_some_and(|(lo, hi)| (lo..=hi).contains(&size)) {
            continue;
        }
        let extra = size - forced_local.len();
        let mut picks = vec![0usize; groups.len()];
        let mut found = None;
        for_each_composition(&groups, extra, 0, &mut picks, &mut |picks| {
            if found.is_some() {
                return;
            }
            let mut seed = forced_local.clone();
            let mut inside = Vec::new();
            for ((t, nodes), &p) in groups.iter().zip(picks.iter()) {
                seed.extend(nodes[..p].iter().copied());
                inside.extend(std::iter::repeat_n(*t, nodes.len() - p));
            }
            inside.sort_unstable();
            let (time, states) = count_match_time(seed.len(), &inside, &outside_t);
            stats.seeds_tried += 1;
            stats.states_expanded += states;
            if let Some(match_time) = time {
                found = Some(Certificate {
                    seed: lift(&seed),
                    witness: Witness::Simultaneous { match_time },
                });
            }
        });
        if let Some(cert) = found {
            return done(reports, Verdict::Feasible(cert), stats);
        }
    }
    done(reports, Verdict::Infeasible, stats)
}

/// Calls `f` for every way to take `remaining` nodes from the groups, in
/// lexicographic order of the per-group counts (largest first).
fn for_each_composition(
    groups: &[(usize, Vec<NodeId>)],
    remaining: usize,
    at: usize,
    picks: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if at == groups.len() {
        if remaining == 0 {
            f(picks);
        }
        return;
    }
    let capacity: usize = groups[at..].iter().map(|(_, g)| g.len()).sum();
    if capacity < remaining {
        return;
    }
    for p in (0..=remaining.min(groups[at].1.len())).rev() {
        picks[at] = p;
        for_each_composition(groups, remaining - p, at + 1, picks, f);
    }
    picks[at] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Graph;

    fn clique(thresholds: &[u32], snapshot: &[usize], k: usize) -> SnapshotInstance {
        SnapshotInstance::new(
            Graph::complete(thresholds.len()),
            Thresholds::new(thresholds.to_vec()),
            snapshot.iter().copied().collect(),
            k,
            DynamicsMode::MONOTONE_SIMULTANEOUS,
        )
        .unwrap()
    }

    fn set(ids: &[usize]) -> NodeSet {
        ids.iter().copied().collect()
    }

    const CLIQUE10: [u32; 10] = [1, 1, 2, 2, 3, 4, 5, 6, 7, 8];

    #[test]
    fn assert_clique_names_missing_edge() {
        assert!(assert_clique(&clique(&CLIQUE10, &[], 1)).is_ok());
        assert!(assert_clique(&clique(&[3], &[], 1)).is_ok());
        let star = SnapshotInstance::new(
            Graph::from_edges(4, &[(1, 0), (1, 2), (1, 3)]).unwrap(),
            Thresholds::new(vec![1, 2, 1, 1]),
            NodeSet::new(),
            1,
            DynamicsMode::MONOTONE_SIMULTANEOUS,
        )
        .unwrap();
        let err = assert_clique(&star).unwrap_err().to_string();
        assert!(err.contains("missing edge (0, 2)"), "{err}");
    }

    #[test]
    fn forced_seed_examples() {
        let r = rule_forced_seed(&clique(&[1, 5], &[0, 1], 1));
        assert_eq!(r.action, RuleAction::ForcedSeed { nodes: set(&[1]) });
        let r = rule_forced_seed(&clique(&CLIQUE10, &[0, 1, 2, 3, 4, 5, 6], 2));
        assert_eq!(r.action, RuleAction::Inapplicable);
        let r = rule_forced_seed(&clique(&[3, 3, 1], &[0, 1, 2], 1));
        assert_eq!(r.action, RuleAction::Infeasible);
    }

    #[test]
    fn low_threshold_outside_examples() {
        let inst = clique(&[1, 1, 1, 2], &[0, 1, 2], 2);
        let r = rule_low_threshold_outside(&inst, false);
        assert_eq!(r.action, RuleAction::ExcludedSeedSizes { min: 2, max: 2 });
        assert_eq!(rule_low_threshold_outside(&inst, true).action, RuleAction::Infeasible);
        let r = rule_low_threshold_outside(&clique(&CLIQUE10, &[0, 1, 2, 3, 4, 5, 6], 2), false);
        assert_eq!(r.action, RuleAction::Inapplicable);
        let r = rule_low_threshold_outside(&clique(&[1, 1, 1], &[0, 1], 2), false);
        assert_eq!(r.action, RuleAction::Inapplicable);
    }

    #[test]
    fn threshold_collision_examples() {
        let r = rule_threshold_collision(&clique(&[1, 2, 2, 3], &[0, 1], 2));
        assert_eq!(r.action, RuleAction::ForcedSeed { nodes: set(&[1]) });
        let r = rule_threshold_collision(&clique(&CLIQUE10, &[0, 1, 2, 3, 4, 5, 6], 2));
        assert_eq!(r.action, RuleAction::Inapplicable);
        let r = rule_threshold_collision(&clique(&[1, 2, 3], &[0, 1, 2], 1));
        assert_eq!(r.action, RuleAction::Inapplicable);
    }

    #[test]
    fn prune_outside_examples() {
        let (r, reduced, ids) = rule_prune_outside(&clique(&CLIQUE10, &[0, 1, 2, 3, 4, 5, 6], 2));
        assert_eq!(r.action, RuleAction::PrunedNodes { nodes: set(&[8, 9]) });
        assert_eq!(reduced.node_count(), 8);
        assert_eq!(ids, (0..8).collect::<Vec<_>>());
        let (r, _, _) = rule_prune_outside(&clique(&[1, 2], &[0, 1], 1));
        assert_eq!(r.action, RuleAction::Inapplicable);
        let (r, reduced, _) = rule_prune_outside(&clique(&[1, 4, 4, 4], &[0], 1));
        assert_eq!(r.action, RuleAction::Inapplicable);
        assert_eq!(reduced.node_count(), 4);
    }

    #[test]
    fn isolated_snapshot_examples() {
        let r = rule_isolated_snapshot(&clique(&[1, 2, 2, 9], &[0, 1, 2], 1));
        assert_eq!(
            r.action,
            RuleAction::ReducedToTargetSet {
                feasible: true,
                seed: set(&[1])
            }
        );
        let r = rule_isolated_snapshot(&clique(&CLIQUE10, &[0, 1, 2, 3, 4, 5, 6], 2));
        assert_eq!(r.action, RuleAction::Inapplicable);
        let r = rule_isolated_snapshot(&clique(&[1, 2], &[], 1));
        assert!(matches!(
            r.action,
            RuleAction::ReducedToTargetSet { feasible: true, .. }
        ));
    }

    #[test]
    fn counts_follow_sorted_thresholds() {
        let t = Thresholds::new(CLIQUE10.to_vec());
        assert_eq!(clique_counts(&t, &set(&[3, 4])), vec![2, 5, 7, 9, 10]);
        assert_eq!(clique_counts(&t, &set(&[5, 6])), vec![2, 6, 8, 10]);
        let traj = clique_trajectory(&t, &set(&[3, 4]));
        assert_eq!(traj[2], set(&[0, 1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn solve_clique_examples() {
        let s7 = [0, 1, 2, 3, 4, 5, 6];
        let sol = solve_clique(&clique(&CLIQUE10, &s7, 2), &RuleSet::ALL).unwrap();
        assert!(sol.outcome.verdict.is_feasible());
        // {u3}: 1 -> 3 -> 5 -> 7 active, u8 (threshold 6) stays off.
        let sol = solve_clique(&clique(&CLIQUE10, &s7, 1), &RuleSet::ALL).unwrap();
        let cert = sol.outcome.verdict.certificate().unwrap();
        assert_eq!(cert.witness, Witness::Simultaneous { match_time: 3 });
        assert_eq!(
            clique_counts(&Thresholds::new(CLIQUE10.to_vec()), &cert.seed),
            vec![1, 3, 5, 7, 9, 10]
        );
        let sol = solve_clique(&clique(&[1, 1], &[0], 1), &RuleSet::ALL).unwrap();
        let cert = sol.outcome.verdict.certificate().unwrap();
        assert_eq!(cert.witness, Witness::Simultaneous { match_time: 0 });
        let sol = solve_clique(&clique(&[1, 1, 1, 2], &[0, 1, 2], 2), &RuleSet::ALL).unwrap();
        assert!(sol.outcome.verdict.is_feasible());
    }

    #[test]
    fn solve_clique_rejects_other_modes() {
        let inst = clique(&[1, 1], &[0], 1).with_mode(DynamicsMode::SIMULTANEOUS);
        assert!(matches!(
            solve_clique(&inst, &RuleSet::ALL),
            Err(Error::WrongMode { .. })
        ));
    }
}
