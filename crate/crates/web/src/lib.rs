//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every operation takes an instance file as JSON text and returns a JSON
//! report. The `*_json` functions carry the logic and are callable natively;
//! the exported wrappers only convert errors into JS exceptions.

use serde_json::{json, Value};
use snapshot_lab::clique::solve_clique;
use snapshot_lab::dynamics::{apply_ordering, replay_certificate, run_simultaneous, RunResult};
use snapshot_lab::format::{validate_instance, InstanceFile};
use snapshot_lab::model::{StepKind, Witness};
use snapshot_lab::{solve, NodeId, NodeSet, SearchLimits, SnapshotInstance};
use wasm_bindgen::prelude::*;

type Report = Result<String, String>;

/// Sequential searches in the browser get a smaller state budget.
const BROWSER_MAX_STATES: usize = 1 << 18;

fn limits() -> SearchLimits {
    SearchLimits {
        max_states: BROWSER_MAX_STATES,
        ..SearchLimits::default()
    }
}

fn load(text: &str) -> Result<SnapshotInstance, String> {
    let raw = InstanceFile::parse(text).map_err(|e| e.to_string())?;
    validate_instance(&raw, None).map_err(|e| e.to_string())
}

fn parse_labels(inst: &SnapshotInstance, csv: &str) -> Result<Vec<NodeId>, String> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|l| inst.graph.id_of(l).ok_or_else(|| format!("unknown node label {l:?}")))
        .collect()
}

fn names(inst: &SnapshotInstance, set: &NodeSet) -> Vec<String> {
    set.iter().map(|v| inst.graph.label(v).to_string()).collect()
}

fn graph_json(inst: &SnapshotInstance) -> Value {
    json!({
        "labels": inst.graph.labels(),
        "edges": inst.graph.edges().collect::<Vec<_>>(),
        "thresholds": inst.thresholds.as_slice(),
        "snapshot": inst.snapshot.to_vec(),
        "budget": inst.budget,
        "mode": inst.mode.tag(),
    })
}

fn frames_json(inst: &SnapshotInstance, run: &RunResult) -> Value {
    let frames: Vec<Value> = run
        .trace
        .steps
        .iter()
        .map(|step| {
            let selected = match step.kind {
                StepKind::Select { node, .. } => Some(inst.graph.label(node)),
                _ => None,
            };
            json!({"time": step.time, "active": step.active.to_vec(), "selected": selected})
        })
        .collect();
    json!({
        "frames": frames,
        "match_time": run.trace.match_time,
        "termination": run.termination.name(),
    })
}

/// Runs the dynamics from `seed` (comma-separated labels). Sequential modes
/// select the nodes of `ordering` in turn.
pub fn simulate_json(instance: &str, seed: &str, ordering: &str) -> Report {
    let inst = load(instance)?;
    let seed: NodeSet = parse_labels(&inst, seed)?.into_iter().collect();
    let run = if inst.mode.is_sequential() {
        let ordering = parse_labels(&inst, ordering)?;
        apply_ordering(
            &inst.graph,
            &inst.thresholds,
            &seed,
            &ordering,
            inst.mode,
            Some(&inst.snapshot),
        )
        .map_err(|e| e.to_string())?
    } else {
        let steps = limits().steps_for(inst.node_count());
        run_simultaneous(
            &inst.graph,
            &inst.thresholds,
            &seed,
            inst.mode,
            Some(&inst.snapshot),
            steps,
        )
    };
    let mut out = graph_json(&inst);
    out["seed"] = json!(names(&inst, &seed));
    out["run"] = frames_json(&inst, &run);
    Ok(out.to_string())
}

/// Decides feasibility and, when feasible, replays the certificate.
pub fn solve_json(instance: &str) -> Report {
    let inst = load(instance)?;
    let outcome = solve(&inst, &limits());
    let mut out = graph_json(&inst);
    out["verdict"] = json!(outcome.verdict.name());
    out["seeds_tried"] = json!(outcome.stats.seeds_tried);
    if let Some(cert) = outcome.verdict.certificate() {
        let run = replay_certificate(&inst, cert, None).map_err(|e| e.to_string())?;
        out["seed"] = json!(names(&inst, &cert.seed));
        if let Witness::Sequential { ordering, .. } = &cert.witness {
            let moves: Vec<&str> = ordering.iter().map(|m| inst.graph.label(m.node)).collect();
            out["ordering"] = json!(moves);
        }
        out["run"] = frames_json(&inst, &run);
    }
    Ok(out.to_string())
}

/// Clique solver with every preprocessing rule, plus the rule reports.
pub fn clique_json(instance: &str) -> Report {
    let inst = load(instance)?;
    let solution = solve_clique(&inst, &Default::default()).map_err(|e| e.to_string())?;
    let mut out = graph_json(&inst);
    out["verdict"] = json!(solution.outcome.verdict.name());
    out["seed"] = json!(solution.outcome.verdict.certificate().map(|c| names(&inst, &c.seed)));
    out["rules"] = serde_json::to_value(&solution.reports).map_err(|e| e.to_string())?;
    Ok(out.to_string())
}

fn to_js(report: Report) -> Result<String, JsError> {
    report.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(instance: &str, seed: &str, ordering: &str) -> Result<String, JsError> {
    to_js(simulate_json(instance, seed, ordering))
}

#[wasm_bindgen(js_name = solveInstance)]
pub fn solve_instance(instance: &str) -> Result<String, JsError> {
    to_js(solve_json(instance))
}

#[wasm_bindgen(js_name = cliqueRules)]
pub fn clique_rules(instance: &str) -> Result<String, JsError> {
    to_js(clique_json(instance))
}
