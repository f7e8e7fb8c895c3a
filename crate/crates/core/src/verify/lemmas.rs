use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::error::{Error, Result};
use crate::format::{instance_digest, InstanceFile};
use crate::model::{closed_neighborhood, DynamicsMode, SnapshotInstance};
use crate::nodeset::NodeSet;
use crate::solver::{restricted_search, CapHit, SearchLimits};

use super::{feasible_snapshots, reachable_by_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// Monotone simultaneous feasible ⇒ monotone sequential feasible.
    Serial,
    /// For `S = V` the two monotone orders agree.
    Serial2,
    /// Monotone sequential feasible ⇒ sequential feasible.
    #[serde(rename = "feasible_sim_2")]
    FeasibleSim2,
    /// Sequential, `k = 1`: some adopter lies in `N[S]`.
    Neighbor,
    /// Sequential, `k = 1`: searching `S ∪ {u0}` alone decides each adopter.
    Clearing,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [
        LemmaId::Serial,
        LemmaId::Serial2,
        LemmaId::FeasibleSim2,
        LemmaId::Neighbor,
        LemmaId::Clearing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Serial => "serial",
            LemmaId::Serial2 => "serial2",
            LemmaId::FeasibleSim2 => "feasible_sim_2",
            LemmaId::Neighbor => "neighbor",
            LemmaId::Clearing => "clearing",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown lemma {s:?}")))
    }
}

/// An instance refuting a lemma, stored with the offending snapshot and the
/// dynamics under which it is feasible so that it can be replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub digest: String,
    pub detail: String,
    pub instance: InstanceFile,
}

impl LemmaViolation {
    fn new(inst: &SnapshotInstance, snapshot: &NodeSet, mode: DynamicsMode, detail: String) -> Self {
        let inst = inst.with_snapshot(snapshot.clone()).with_mode(mode);
        LemmaViolation {
            digest: instance_digest(&inst),
            detail,
            instance: InstanceFile::from_instance(&inst),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma: LemmaId,
    pub trials: usize,
    pub checked: usize,
    /// Trials whose budget lies outside the lemma's hypothesis.
    pub out_of_scope: usize,
    /// Trials abandoned because a search cap was hit.
    pub capped: usize,
    pub violations: Vec<LemmaViolation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl LemmaVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Checked(Vec<LemmaViolation>),
    OutOfScope,
    Capped,
}

/// Checks one lemma on the graph, thresholds and budget of `inst`; the
/// instance's own snapshot and dynamics are ignored.
pub fn check_lemma_on(lemma: LemmaId, inst: &SnapshotInstance, limits: &SearchLimits) -> TrialOutcome {
    match lemma_violations(lemma, inst, limits) {
        Ok(Some(v)) => TrialOutcome::Checked(v),
        Ok(None) => TrialOutcome::OutOfScope,
        Err(CapHit { .. }) => TrialOutcome::Capped,
    }
}

fn lemma_violations(
    lemma: LemmaId,
    inst: &SnapshotInstance,
    limits: &SearchLimits,
) -> Result<Option<Vec<LemmaViolation>>, CapHit> {
    let (g, t, k) = (&inst.graph, &inst.thresholds, inst.budget);
    let feasible = |mode| feasible_snapshots(g, t, k, mode, limits);
    let mut out = Vec::new();
    match lemma {
        LemmaId::Serial => {
            let sim = feasible(DynamicsMode::MONOTONE_SIMULTANEOUS)?;
            let seq = feasible(DynamicsMode::MONOTONE_SEQUENTIAL)?;
            for s in sim.difference(&seq) {
                out.push(LemmaViolation::new(
                    inst,
                    s,
                    DynamicsMode::MONOTONE_SIMULTANEOUS,
                    "feasible under mono-sim but not under mono-seq".to_owned(),
                ));
            }
        }
        LemmaId::Serial2 => {
            let all = g.all_nodes();
            let sim = feasible(DynamicsMode::MONOTONE_SIMULTANEOUS)?.contains(&all);
            let seq = feasible(DynamicsMode::MONOTONE_SEQUENTIAL)?.contains(&all);
            if sim != seq {
                let (mode, detail) = if sim {
                    (DynamicsMode::MONOTONE_SIMULTANEOUS, "V feasible under mono-sim only")
                } else {
                    (DynamicsMode::MONOTONE_SEQUENTIAL, "V feasible under mono-seq only")
                };
                out.push(LemmaViolation::new(inst, &all, mode, detail.to_owned()));
            }
        }
        LemmaId::FeasibleSim2 => {
            let mono = feasible(DynamicsMode::MONOTONE_SEQUENTIAL)?;
            let free = feasible(DynamicsMode::SEQUENTIAL)?;
            for s in mono.difference(&free) {
                out.push(LemmaViolation::new(
                    inst,
                    s,
                    DynamicsMode::MONOTONE_SEQUENTIAL,
                    "feasible under mono-seq but not under seq".to_owned(),
                ));
            }
        }
        LemmaId::Neighbor | LemmaId::Clearing => {
            if k != 1 {
                return Ok(None);
            }
            let per_seed = reachable_by_seed(g, t, 1, DynamicsMode::SEQUENTIAL, limits)?;
            let reaches = |seed: &NodeSet, s: &NodeSet| {
                per_seed
                    .iter()
                    .find(|(x, _)| x == seed)
                    .is_some_and(|(_, r)| r.contains(s))
            };
            let mut feasible_set: Vec<&NodeSet> = per_seed.iter().flat_map(|(_, r)| r).collect();
            feasible_set.sort();
            feasible_set.dedup();
            for s in feasible_set {
                let adopters: Vec<Option<usize>> = std::iter::once(None)
                    .chain(closed_neighborhood(g, s).iter().map(Some))
                    .collect();
                let seed_of = |u0: Option<usize>| u0.map(NodeSet::singleton).unwrap_or_default();
                if lemma == LemmaId::Neighbor {
                    if !adopters.iter().any(|&u0| reaches(&seed_of(u0), s)) {
                        out.push(LemmaViolation::new(
                            inst,
                            s,
                            DynamicsMode::SEQUENTIAL,
                            "no adopter in N[S] produces S".to_owned(),
                        ));
                    }
                    continue;
                }
                for u0 in adopters {
                    let full = reaches(&seed_of(u0), s);
                    let restricted = restricted_search(g, t, s, u0, limits.max_states)?.is_some();
                    if full != restricted {
                        let who = u0.map_or_else(|| "empty seed".to_owned(), |u| g.label(u).to_owned());
                        out.push(LemmaViolation::new(
                            inst,
                            s,
                            DynamicsMode::SEQUENTIAL,
                            format!("adopter {who}: full search {full}, restricted search {restricted}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(Some(out))
}

/// Runs `trials` instances from the stream. Violations are sorted so the
/// verdict does not depend on evaluation order.
pub fn check_lemma(
    lemma: LemmaId,
    stream: impl IntoIterator<Item = SnapshotInstance>,
    trials: usize,
    limits: &SearchLimits,
) -> LemmaVerdict {
    let start = Instant::now();
    let mut verdict = LemmaVerdict {
        lemma,
        trials: 0,
        checked: 0,
        out_of_scope: 0,
        capped: 0,
        violations: Vec::new(),
        elapsed_ms: None,
    };
    for inst in stream.into_iter().take(trials) {
        verdict.trials += 1;
        match check_lemma_on(lemma, &inst, limits) {
            TrialOutcome::Checked(v) => {
                verdict.checked += 1;
                verdict.violations.extend(v);
            }
            TrialOutcome::OutOfScope => verdict.out_of_scope += 1,
            TrialOutcome::Capped => verdict.capped += 1,
        }
    }
    verdict
        .violations
        .sort_by(|a, b| (&a.digest, &a.detail).cmp(&(&b.digest, &b.detail)));
    verdict.violations.dedup();
    verdict.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    verdict
}

/// Writes each violation to `<root>/<lemma>/<digest>.json` as an instance file.
pub fn write_violations(verdict: &LemmaVerdict, root: &Path) -> Result<Vec<PathBuf>> {
    let dir = root.join(verdict.lemma.as_str());
    let mut paths = Vec::new();
    for v in &verdict.violations {
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let path = dir.join(format!("{}.json", v.digest));
        fs::write(&path, v.instance.to_json()).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
