//! Random instances, exhaustive feasible-snapshot oracles, structural lemma
//! checks, the example corpus and the seed distance probe.

mod corpus;
mod distance;
mod generator;
mod lemmas;

use std::collections::BTreeSet;

use crate::model::{DynamicsMode, Graph, Thresholds};
use crate::nodeset::{NodeId, NodeSet};
use crate::solver::{canonical_seeds, reachable_configs, CapHit, SearchLimits};

pub use corpus::{
    bundled_corpus, replay_bundled, replay_dir, replay_files, CaseReport, CaseStatus, Check, CheckResult, CorpusCase,
    CorpusReport, Expectation, Manifest,
};
pub use distance::{seed_distance, seed_distance_min, SeedDistance};
pub use generator::{instances, random_instance, GeneratorParams, InstanceStream, SnapshotLaw, ThresholdLaw};
pub use lemmas::{check_lemma, check_lemma_on, write_violations, LemmaId, LemmaVerdict, LemmaViolation, TrialOutcome};

/// Every valid snapshot: the union of reachable configurations over all seeds
/// of size `0..=k`.
pub fn feasible_snapshots(
    graph: &Graph,
    thresholds: &Thresholds,
    k: usize,
    mode: DynamicsMode,
    limits: &SearchLimits,
) -> Result<BTreeSet<NodeSet>, CapHit> {
    let mut out = BTreeSet::new();
    for (_, reach) in reachable_by_seed(graph, thresholds, k, mode, limits)? {
        out.extend(reach);
    }
    Ok(out)
}

/// Reachable configurations per seed, seeds in canonical order.
pub(crate) fn reachable_by_seed(
    graph: &Graph,
    thresholds: &Thresholds,
    k: usize,
    mode: DynamicsMode,
    limits: &SearchLimits,
) -> Result<Vec<(NodeSet, BTreeSet<NodeSet>)>, CapHit> {
    let nodes: Vec<NodeId> = graph.nodes().collect();
    let seeds: Vec<NodeSet> = canonical_seeds(&nodes, k).collect();
    seeds
        .into_iter()
        .map(|seed| {
            let reach = reachable_configs(graph, thresholds, &seed, mode, limits)?;
            Ok((seed, reach))
        })
        .collect()
}
