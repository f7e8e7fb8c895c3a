//! JSON instance files and canonical serialization.
//!
//! ```json
//! { "labels": ["u1", "u2"], "edges": [[0, 1]], "thresholds": [1, 1],
//!   "snapshot": [0, 1], "budget": 1,
//!   "dynamics": {"order": "sequential", "monotone": false} }
//! ```
//!
//! Ids index into `labels`. Emitted files list edges as `[i, j]` with `i < j`
//! in ascending order, sorted snapshot ids, and sorted object keys.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result, ValidationErrors, Violation};
use crate::model::{DynamicsMode, Graph, SnapshotInstance, Thresholds};
use crate::nodeset::NodeSet;

/// Raw instance description as it appears on disk, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub labels: Vec<String>,
    pub edges: Vec<[i64; 2]>,
    pub thresholds: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Vec<i64>>,
    pub budget: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsMode>,
}

impl InstanceFile {
    pub fn from_instance(inst: &SnapshotInstance) -> Self {
        let mut file = Self::from_parts(&inst.graph, &inst.thresholds, inst.budget);
        file.snapshot = Some(inst.snapshot.iter().map(|v| v as i64).collect());
        file.dynamics = Some(inst.mode);
        file
    }

    /// A file without snapshot or dynamics, as used for target-set inputs.
    pub fn from_parts(graph: &Graph, thresholds: &Thresholds, budget: usize) -> Self {
        InstanceFile {
            labels: graph.labels().to_vec(),
            edges: graph.edges().map(|(u, v)| [u as i64, v as i64]).collect(),
            thresholds: thresholds.as_slice().iter().map(|&t| t as i64).collect(),
            snapshot: None,
            budget: budget as i64,
            dynamics: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// Graph, thresholds and budget checked together.
pub(crate) fn validate_parts(
    raw: &InstanceFile,
    violations: &mut Vec<Violation>,
) -> Option<(Graph, Thresholds, usize)> {
    let n = raw.labels.len();
    let mut edges = Vec::with_capacity(raw.edges.len());
    for &[u, v] in &raw.edges {
        if u < 0 || v < 0 || u as usize >= n || v as usize >= n {
            violations.push(Violation::EdgeOutOfRange(u, v));
        } else {
            edges.push((u as usize, v as usize));
        }
    }
    let graph = match Graph::from_edges(n, &edges) {
        Ok(g) => match g.with_labels(raw.labels.clone()) {
            Ok(g) => Some(g),
            Err(e) => {
                violations.extend(e.0);
                None
            }
        },
        Err(e) => {
            violations.extend(e.0);
            None
        }
    };
    if raw.thresholds.len() != n {
        violations.push(Violation::ThresholdLengthMismatch {
            expected: n,
            found: raw.thresholds.len(),
        });
    }
    let mut thresholds = Vec::with_capacity(raw.thresholds.len());
    for (node, &t) in raw.thresholds.iter().enumerate() {
        if t < 0 {
            violations.push(Violation::NegativeThreshold { node, value: t });
        } else {
            thresholds.push(t.min(u32::MAX as i64) as u32);
        }
    }
    if raw.budget < 0 {
        violations.push(Violation::NegativeBudget(raw.budget));
    }
    let graph = graph?;
    if !violations.is_empty() {
        return None;
    }
    Some((graph, Thresholds::new(thresholds), raw.budget as usize))
}

/// Checks a raw description and builds the instance, or lists every violation.
///
/// `mode_override` supplies the dynamics when the file omits them; giving both
/// is an error.
pub fn validate_instance(
    raw: &InstanceFile,
    mode_override: Option<DynamicsMode>,
) -> Result<SnapshotInstance, ValidationErrors> {
    let mut violations = Vec::new();
    let parts = validate_parts(raw, &mut violations);
    let n = raw.labels.len();
    let mut snapshot = NodeSet::new();
    match &raw.snapshot {
        None => violations.push(Violation::MissingSnapshot),
        Some(ids) => {
            for &v in ids {
                if v < 0 || v as usize >= n {
                    violations.push(Violation::SnapshotOutOfRange(v));
                } else {
                    snapshot.insert(v as usize);
                }
            }
        }
    }
    let mode = match (raw.dynamics, mode_override) {
        (Some(m), None) | (None, Some(m)) => Some(m),
        (Some(_), Some(_)) => {
            violations.push(Violation::ConflictingDynamics);
            None
        }
        (None, None) => {
            violations.push(Violation::MissingDynamics);
            None
        }
    };
    match (parts, mode) {
        (Some((graph, thresholds, budget)), Some(mode)) if violations.is_empty() => {
            SnapshotInstance::new(graph, thresholds, snapshot, budget, mode)
        }
        _ => Err(ValidationErrors(violations)),
    }
}

pub fn load_instance(path: impl AsRef<Path>, mode_override: Option<DynamicsMode>) -> Result<SnapshotInstance> {
    let raw = read_instance_file(path)?;
    Ok(validate_instance(&raw, mode_override)?)
}

pub fn read_instance_file(path: impl AsRef<Path>) -> Result<InstanceFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    InstanceFile::parse(&text)
}

pub fn save_instance(path: impl AsRef<Path>, inst: &SnapshotInstance) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, InstanceFile::from_instance(inst).to_json()).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with object keys in sorted order.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&value).expect("json value");
    s.push('\n');
    s
}

/// Single-line JSON with object keys in sorted order.
pub fn canonical_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable value");
    serde_json::to_string(&value).expect("json value")
}

/// Short content digest of the canonical instance file.
pub fn instance_digest(inst: &SnapshotInstance) -> String {
    let hash = Sha256::digest(InstanceFile::from_instance(inst).to_json().as_bytes());
    hex::encode(&hash[..8])
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR4: &str = r#"{"labels":["u1","u2","u3","u4"],"edges":[[1,0],[1,2],[1,3]],
        "thresholds":[1,2,1,1],"snapshot":[0,1,2],"budget":2,
        "dynamics":{"order":"simultaneous","monotone":true}}"#;

    #[test]
    fn star4_validates() {
        let inst = validate_instance(&InstanceFile::parse(STAR4).unwrap(), None).unwrap();
        assert_eq!(inst.node_count(), 4);
        assert_eq!(inst.graph.edge_count(), 3);
        assert_eq!(inst.thresholds.as_slice(), &[1, 2, 1, 1]);
        assert_eq!(inst.mode, DynamicsMode::MONOTONE_SIMULTANEOUS);
        assert_eq!(inst.graph.id_of("u3"), Some(2));
    }

    #[test]
    fn violations_are_collected() {
        let mut raw = InstanceFile::parse(STAR4).unwrap();
        raw.snapshot = Some(vec![99]);
        raw.thresholds[2] = -1;
        raw.edges.push([0, 0]);
        let err = validate_instance(&raw, None).unwrap_err();
        assert!(err.0.contains(&Violation::SnapshotOutOfRange(99)));
        assert!(err.0.contains(&Violation::NegativeThreshold { node: 2, value: -1 }));
        assert!(err.0.contains(&Violation::SelfLoop(0)));
        assert!(err.to_string().contains("snapshot node 99 outside V"));
    }

    #[test]
    fn empty_snapshot_and_zero_budget_are_legal() {
        let mut raw = InstanceFile::parse(STAR4).unwrap();
        raw.snapshot = Some(vec![]);
        raw.budget = 0;
        let inst = validate_instance(&raw, None).unwrap();
        assert!(inst.snapshot.is_empty());
        assert_eq!(inst.budget, 0);
    }

    #[test]
    fn dynamics_override_rules() {
        let mut raw = InstanceFile::parse(STAR4).unwrap();
        let err = validate_instance(&raw, Some(DynamicsMode::SEQUENTIAL)).unwrap_err();
        assert_eq!(err.0, vec![Violation::ConflictingDynamics]);
        raw.dynamics = None;
        assert_eq!(
            validate_instance(&raw, None).unwrap_err().0,
            vec![Violation::MissingDynamics]
        );
        let inst = validate_instance(&raw, Some(DynamicsMode::SEQUENTIAL)).unwrap();
        assert_eq!(inst.mode, DynamicsMode::SEQUENTIAL);
    }

    #[test]
    fn missing_field_is_named() {
        let err = InstanceFile::parse(r#"{"labels":[],"edges":[],"budget":0}"#).unwrap_err();
        assert!(err.to_string().contains("thresholds"), "{err}");
    }

    #[test]
    fn emit_is_canonical() {
        let inst = validate_instance(&InstanceFile::parse(STAR4).unwrap(), None).unwrap();
        let text = InstanceFile::from_instance(&inst).to_json();
        assert!(text.contains("[\n      0,\n      1\n    ]"));
        let keys: Vec<usize> = ["budget", "dynamics", "edges", "labels", "snapshot", "thresholds"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let back = validate_instance(&InstanceFile::parse(&text).unwrap(), None).unwrap();
        assert_eq!(back, inst);
    }
}
