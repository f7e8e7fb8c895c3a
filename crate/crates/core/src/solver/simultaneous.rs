use crate::dynamics::{run_simultaneous, Termination};
use crate::model::{SnapshotInstance, Witness};
use crate::nodeset::NodeSet;

use super::{canonical_seeds, search_seeds, SearchLimits, SeedEval, SeedResult, SolveOutcome};

fn eval_run(inst: &SnapshotInstance, seed: &NodeSet, max_steps: usize) -> SeedEval {
    let run = run_simultaneous(
        &inst.graph,
        &inst.thresholds,
        seed,
        inst.mode,
        Some(&inst.snapshot),
        max_steps,
    );
    let states = run.trace.steps.len();
    let result = match (run.termination, run.trace.match_time) {
        (Termination::Matched, Some(match_time)) => SeedResult::Found(Witness::Simultaneous { match_time }),
        (Termination::StepCapHit, _) => SeedResult::Capped,
        _ => SeedResult::Exhausted,
    };
    SeedEval { result, states }
}

/// Committed seed nodes are active at the match, so only seeds inside `S`
/// are enumerated.
pub fn solve_monotone_simultaneous(inst: &SnapshotInstance, limits: &SearchLimits) -> SolveOutcome {
    let candidates = inst.snapshot.to_vec();
    let steps = limits.steps_for(inst.node_count());
    search_seeds(canonical_seeds(&candidates, inst.budget), limits, |seed| {
        eval_run(inst, seed, steps)
    })
}

/// Seeds range over all of `V`: without commitment a seed may sit arbitrarily
/// far from the snapshot.
pub fn solve_simultaneous(inst: &SnapshotInstance, limits: &SearchLimits) -> SolveOutcome {
    let candidates: Vec<_> = inst.graph.nodes().collect();
    let steps = limits.steps_for(inst.node_count());
    search_seeds(canonical_seeds(&candidates, inst.budget), limits, |seed| {
        eval_run(inst, seed, steps)
    })
}
