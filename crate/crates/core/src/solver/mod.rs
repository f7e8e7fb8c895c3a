//! Exact feasibility solvers for the four dynamics.
//!
//! Every solver enumerates candidate seed sets in canonical order (by size,
//! then lexicographically by sorted ids) and returns the first seed that
//! produces the snapshot, with a replayable witness.

mod closure;
mod sequential;
mod simultaneous;

use std::time::Duration;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::dynamics::default_max_steps;
use crate::model::{Certificate, DynamicsMode, SnapshotInstance, Witness};
use crate::nodeset::{NodeId, NodeSet};

pub use closure::{closure_order, monotone_closure, solve_monotone_sequential};
pub use sequential::{reachable_configs, restricted_search, solve_sequential, solve_sequential_k1, CapHit};
pub use simultaneous::{solve_monotone_simultaneous, solve_simultaneous};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Configurations a single seed's search may visit.
    pub max_states: usize,
    /// Simultaneous steps per run; `None` means `min(2^n, 10^6)`.
    pub max_steps: Option<usize>,
    /// Worker threads for seed evaluation. Results do not depend on it.
    pub workers: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_states: 1 << 20,
            max_steps: None,
            workers: 1,
        }
    }
}

impl SearchLimits {
    pub fn steps_for(&self, n: usize) -> usize {
        self.max_steps.unwrap_or_else(|| default_max_steps(n)).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Certificate),
    Infeasible,
    ResourceCapHit,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Feasible(c) => Some(c),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Feasible(_) => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::ResourceCapHit => "cap",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub seeds_tried: usize,
    pub states_expanded: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

impl SolveOutcome {
    /// `Some(true)` feasible, `Some(false)` infeasible, `None` on a cap hit.
    pub fn decided(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Feasible(_) => Some(true),
            Verdict::Infeasible => Some(false),
            Verdict::ResourceCapHit => None,
        }
    }
}

/// Dispatches to the solver for the instance's dynamics.
pub fn solve(inst: &SnapshotInstance, limits: &SearchLimits) -> SolveOutcome {
    match inst.mode {
        DynamicsMode::MONOTONE_SIMULTANEOUS => solve_monotone_simultaneous(inst, limits),
        DynamicsMode::SIMULTANEOUS => solve_simultaneous(inst, limits),
        DynamicsMode::MONOTONE_SEQUENTIAL => solve_monotone_sequential(inst, limits),
        DynamicsMode::SEQUENTIAL => solve_sequential(inst, limits),
    }
}

/// Result of searching from one seed.
#[derive(Debug, Clone)]
pub(crate) enum SeedResult {
    Found(Witness),
    Exhausted,
    Capped,
}

#[derive(Debug, Clone)]
pub(crate) struct SeedEval {
    pub result: SeedResult,
    pub states: usize,
}

/// All subsets of `candidates` (ascending) with size `0..=max_size`, in
/// canonical order.
pub fn canonical_seeds(candidates: &[NodeId], max_size: usize) -> impl Iterator<Item = NodeSet> + '_ {
    (0..=max_size.min(candidates.len()))
        .flat_map(move |size| candidates.iter().copied().combinations(size).map(NodeSet::from_iter))
}

const BATCH: usize = 64;

/// Evaluates seeds in canonical order and keeps the first success.
///
/// With several workers, seeds are evaluated in fixed-size batches; the
/// verdict and the stats only count seeds up to the selected one, so they are
/// identical to a single-threaded run.
pub(crate) fn search_seeds<I, F>(seeds: I, limits: &SearchLimits, eval: F) -> SolveOutcome
where
    I: Iterator<Item = NodeSet>,
    F: Fn(&NodeSet) -> SeedEval + Sync,
{
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut capped = false;
    let mut absorb = |seed: NodeSet, ev: SeedEval, stats: &mut SolveStats| -> Option<Verdict> {
        stats.seeds_tried += 1;
        stats.states_expanded += ev.states;
        match ev.result {
            SeedResult::Found(witness) => Some(Verdict::Feasible(Certificate { seed, witness })),
            SeedResult::Capped => {
                capped = true;
                None
            }
            SeedResult::Exhausted => None,
        }
    };
    let finish = |verdict: Verdict, mut stats: SolveStats| {
        stats.wall_time = start.elapsed();
        SolveOutcome { verdict, stats }
    };

    if limits.workers <= 1 {
        for seed in seeds {
            let ev = eval(&seed);
            if let Some(v) = absorb(seed, ev, &mut stats) {
                return finish(v, stats);
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(limits.workers)
            .build()
            .expect("thread pool");
        let mut seeds = seeds.peekable();
        while seeds.peek().is_some() {
            let batch: Vec<NodeSet> = seeds.by_ref().take(BATCH).collect();
            let evals: Vec<SeedEval> = pool.install(|| batch.par_iter().map(&eval).collect());
            for (seed, ev) in batch.into_iter().zip(evals) {
                if let Some(v) = absorb(seed, ev, &mut stats) {
                    return finish(v, stats);
                }
            }
        }
    }
    let verdict = if capped {
        Verdict::ResourceCapHit
    } else {
        Verdict::Infeasible
    };
    finish(verdict, stats)
}
