use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use snapshot_lab::format::{read_instance_file, validate_instance, InstanceFile};
use snapshot_lab::verify::bundled_corpus;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_snapshot-lab"))
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exit_codes_follow_verdict() {
    let star = corpus("star4.json");
    let out = run(&["solve", "--instance", path_str(&star)]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], "feasible");
    assert_eq!(report["seed"], serde_json::json!(["u1", "u3"]));

    let out = run(&["solve", "--instance", path_str(&corpus("hubs11-literal.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdict"], "infeasible");
}

#[test]
fn cap_hit_exits_three() {
    let out = run(&[
        "solve",
        "--instance",
        path_str(&corpus("hubs11-corrected.json")),
        "--max-states",
        "3",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["verdict"], "cap");
}

#[test]
fn every_corpus_certificate_replays() {
    let dir = tempfile::tempdir().unwrap();
    for (name, _) in bundled_corpus().iter().filter(|(n, _)| *n != "manifest.json") {
        let inst = corpus(name);
        let cert = dir.path().join(format!("{name}.cert"));
        let out = run(&["solve", "--instance", path_str(&inst), "--out", path_str(&cert)]);
        if code(&out) != 0 {
            continue;
        }
        let out = run(&["simulate", "--instance", path_str(&inst), "--replay", path_str(&cert)]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let trace = json(&out);
        assert!(trace["match_time"].is_u64());
        assert_eq!(trace["steps"][0]["move"], "seed");
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = corpus("star4.json");
    let cert = dir.path().join("cert.json");
    let bad = serde_json::json!({"seed": [1], "witness": {"type": "simultaneous", "match_time": 1}});
    fs::write(&cert, bad.to_string()).unwrap();
    let out = run(&["simulate", "--instance", path_str(&inst), "--replay", path_str(&cert)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not replay"));
}

#[test]
fn simulate_sequential_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("seq.json");
    let mut raw = read_instance_file(corpus("star4.json")).unwrap();
    raw.snapshot = Some(vec![1, 2]);
    raw.budget = 1;
    raw.dynamics = None;
    fs::write(&inst, raw.to_json()).unwrap();
    let args = [
        "simulate",
        "--instance",
        path_str(&inst),
        "--seed",
        "u2",
        "--ordering",
        "u1,u3",
        "--order",
        "sequential",
        "--monotone",
        "false",
    ];
    let out = run(&args);
    assert_eq!(code(&out), 1, "u1 overshoots");
    let out = run(&[&args[..6], &["u3"], &args[7..]].concat());
    assert_eq!(code(&out), 0);
    let trace = json(&out);
    assert_eq!(trace["match_time"], 1);
    assert_eq!(trace["steps"][1]["move"]["node"], "u3");
    assert_eq!(trace["mode"], "seq");
}

#[test]
fn malformed_instances_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"labels": ["a"], "edges": [], "budget": 1}"#).unwrap();
    let out = run(&["solve", "--instance", path_str(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("thresholds"));

    fs::write(
        &path,
        r#"{"labels": ["a","b"], "edges": [[0,0]], "thresholds": [1,-1], "snapshot": [0], "budget": 1}"#,
    )
    .unwrap();
    let out = run(&["solve", "--instance", path_str(&path), "--order", "simultaneous"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("self-loop") && err.contains("negative threshold"), "{err}");

    let out = run(&[
        "solve",
        "--instance",
        path_str(&corpus("star4.json")),
        "--order",
        "sequential",
    ]);
    assert_eq!(code(&out), 2, "override conflicts with file dynamics");
    let out = run(&["solve"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn override_applies_when_dynamics_omitted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.json");
    let mut raw = read_instance_file(corpus("star4.json")).unwrap();
    raw.dynamics = None;
    raw.snapshot = Some(vec![1, 2]);
    raw.budget = 1;
    fs::write(&path, raw.to_json()).unwrap();
    let out = run(&["solve", "--instance", path_str(&path)]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "solve",
        "--instance",
        path_str(&path),
        "--order",
        "sequential",
        "--monotone",
        "false",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["mode"], "seq");
}

#[test]
fn enumerate_lists_snapshots() {
    let out = run(&[
        "enumerate",
        "--instance",
        path_str(&corpus("star4.json")),
        "--budget",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["count"], 6);
    assert_eq!(report["snapshots"][0], serde_json::json!([]));
}

#[test]
fn reduce_writes_valid_instances() {
    let dir = tempfile::tempdir().unwrap();
    for gadget in ["embed", "dummy", "seqk1"] {
        let out_path = dir.path().join(format!("{gadget}.json"));
        let out = run(&[
            "reduce",
            "--gadget",
            gadget,
            "--instance",
            path_str(&corpus("star4.json")),
            "--out",
            path_str(&out_path),
        ]);
        assert_eq!(code(&out), 0, "{gadget}: {}", String::from_utf8_lossy(&out.stderr));
        let raw = read_instance_file(&out_path).unwrap();
        let inst = validate_instance(&raw, None).unwrap();
        assert_eq!(
            InstanceFile::from_instance(&inst).to_json(),
            fs::read_to_string(&out_path).unwrap()
        );
    }
    let out = run(&[
        "reduce",
        "--gadget",
        "seqk1",
        "--check",
        "--instance",
        path_str(&corpus("star4.json")),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["agree"], true);
    let out = run(&[
        "reduce",
        "--gadget",
        "embed",
        "--order",
        "simultaneous",
        "--monotone",
        "false",
        "--instance",
        path_str(&corpus("star4.json")),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reduce_check_reports_dummy_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edge.json");
    fs::write(
        &path,
        r#"{"labels": ["a","b"], "edges": [[0,1]], "thresholds": [1,1], "snapshot": [0,1], "budget": 1}"#,
    )
    .unwrap();
    let out = run(&["reduce", "--gadget", "dummy", "--check", "--instance", path_str(&path)]);
    assert_eq!(code(&out), 1);
    let verdict = json(&out);
    assert_eq!(verdict["left"], true);
    assert_eq!(verdict["right"], false);
    assert!(verdict["counterexample"].is_object());
}

#[test]
fn seqk1_rejects_zero_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    fs::write(
        &path,
        r#"{"labels": ["a","b"], "edges": [], "thresholds": [0,1], "budget": 1}"#,
    )
    .unwrap();
    let out = run(&["reduce", "--gadget", "seqk1", "--instance", path_str(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("t_i = 0 unsupported by gadget"));
}

#[test]
fn verify_lemma_and_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let viol = dir.path().join("violations");
    let out = run(&[
        "verify",
        "--lemma",
        "feasible_sim_2",
        "--trials",
        "40",
        "--rng-seed",
        "5",
        "--violations-dir",
        path_str(&viol),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdicts"][0]["lemma"], "feasible_sim_2");
    assert_eq!(report["verdicts"][0]["trials"], 40);
    assert!(report["verdicts"][0].get("elapsed_ms").is_none());
    assert!(!viol.exists());

    let out = run(&["verify", "--corpus", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("hubs11/literal"));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = run(&["verify", "--corpus", path_str(&empty)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("corpus missing"));

    let out = run(&["verify", "--lemma", "bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn clique_explain_lists_rules() {
    let out = run(&["clique", "--instance", path_str(&corpus("clique10.json")), "--explain"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let rules: Vec<&str> = report["rules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rule"].as_str().unwrap())
        .collect();
    assert_eq!(rules, ["P1", "P3", "P4", "P5", "P2"]);

    let caveat = corpus("clique-p2-caveat.json");
    assert_eq!(code(&run(&["clique", "--instance", path_str(&caveat)])), 0);
    assert_eq!(
        code(&run(&["clique", "--instance", path_str(&caveat), "--literal-p2"])),
        1
    );
    assert_eq!(
        code(&run(&["clique", "--instance", path_str(&corpus("star4.json"))])),
        2
    );
}

#[test]
fn bench_writes_csv_and_dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let corpus_dir = corpus("");
    let out = run(&["bench", "--dir", path_str(&corpus_dir), "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "file,instance_digest,mode,n,k,verdict,seeds_tried,states_expanded"
    );
    assert_eq!(lines.count(), bundled_corpus().len() - 1);

    let dot = dir.path().join("g.dot");
    let out = run(&[
        "solve",
        "--instance",
        path_str(&corpus("star4.json")),
        "--dot",
        path_str(&dot),
    ]);
    assert_eq!(code(&out), 0);
    let dot = fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("graph snapshot {"));
    assert_eq!(dot.matches("peripheries=2").count(), 2);
    assert_eq!(dot.matches(" -- ").count(), 3);
}
