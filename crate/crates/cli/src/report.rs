//! Serializable reports. Node sets are printed as label lists in id order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use snapshot_lab::dynamics::{RunResult, Termination};
use snapshot_lab::format::canonical_json;
use snapshot_lab::model::StepKind;
use snapshot_lab::{Error, NodeSet, Result, SnapshotInstance};

use crate::args::{Format, Output};

pub fn labels(inst: &SnapshotInstance, set: &NodeSet) -> Vec<String> {
    set.iter().map(|v| inst.graph.label(v).to_owned()).collect()
}

pub fn braces(inst: &SnapshotInstance, set: &NodeSet) -> String {
    format!("{{{}}}", labels(inst, set).join(","))
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes `value` as canonical JSON, or `text` when text output is requested.
pub fn emit<T: Serialize>(output: &Output, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    let body = match output.format {
        Format::Json => canonical_json(value),
        Format::Text => text(),
    };
    write_text(output.out.as_deref(), &body)
}

pub fn trace_json(inst: &SnapshotInstance, run: &RunResult) -> Value {
    let steps: Vec<Value> = run
        .trace
        .steps
        .iter()
        .map(|s| {
            let mv = match &s.kind {
                StepKind::Seed => json!("seed"),
                StepKind::Simultaneous => json!("step"),
                StepKind::Select { node, to, changed } => {
                    json!({"node": inst.graph.label(*node), "to": to, "changed": changed})
                }
            };
            json!({"time": s.time, "move": mv, "active": labels(inst, &s.active)})
        })
        .collect();
    json!({
        "mode": run.trace.mode.tag(),
        "seed": labels(inst, &run.trace.seed),
        "snapshot": labels(inst, &inst.snapshot),
        "steps": steps,
        "match_time": run.trace.match_time,
        "termination": run.termination,
    })
}

pub fn trace_text(inst: &SnapshotInstance, run: &RunResult) -> String {
    let mut out = String::new();
    for s in &run.trace.steps {
        let what = match &s.kind {
            StepKind::Seed => "seed".to_owned(),
            StepKind::Simultaneous => "step".to_owned(),
            StepKind::Select { node, to, changed } => {
                let state = if to.is_active() { "on" } else { "off" };
                let noop = if *changed { "" } else { " (no-op)" };
                format!("{} -> {state}{noop}", inst.graph.label(*node))
            }
        };
        let _ = writeln!(out, "t={:<4} {:<20} {}", s.time, what, braces(inst, &s.active));
    }
    match (run.trace.match_time, &run.termination) {
        (Some(t), _) => {
            let _ = writeln!(out, "matched {} at t={t}", braces(inst, &inst.snapshot));
        }
        (None, Termination::CycleDetected { period, entry_time }) => {
            let _ = writeln!(out, "no match: cycle of period {period} entered at t={entry_time}");
        }
        (None, term) => {
            let _ = writeln!(out, "no match: {}", term.name());
        }
    }
    out
}
