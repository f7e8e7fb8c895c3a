use std::fmt::Write;

use snapshot_lab::{NodeSet, SnapshotInstance};

/// Graphviz rendering: snapshot nodes filled, seed nodes drawn with a double
/// border. Node labels show the threshold.
pub fn to_dot(inst: &SnapshotInstance, seed: Option<&NodeSet>) -> String {
    let g = &inst.graph;
    let mut out = String::from("graph snapshot {\n  node [shape=circle];\n");
    for v in g.nodes() {
        let mut attrs = vec![format!("label=\"{}\\nt={}\"", escape(g.label(v)), inst.thresholds[v])];
        if inst.snapshot.contains(v) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=\"#f4b942\"".into());
        }
        if seed.is_some_and(|s| s.contains(v)) {
            attrs.push("peripheries=2".into());
        }
        let _ = writeln!(out, "  n{v} [{}];", attrs.join(", "));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  n{u} -- n{v};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
