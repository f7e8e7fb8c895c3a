use std::fs;

use snapshot_lab::verify::{bundled_corpus, replay_bundled, replay_dir, CaseStatus};
use snapshot_lab::{Error, SearchLimits};

fn copy_corpus(dir: &std::path::Path) {
    for (name, text) in bundled_corpus() {
        fs::write(dir.join(name), text).unwrap();
    }
}

#[test]
fn bundled_corpus_passes_except_annotated_entry() {
    let report = replay_bundled(&SearchLimits::default()).unwrap();
    print!("{}", report.table());
    assert!(report.ok());
    let xfail: Vec<_> = report
        .cases
        .iter()
        .filter(|c| c.status == CaseStatus::ExpectedFail)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(xfail, ["hubs11/literal"]);
    assert_eq!(report.passed + 1, report.cases.len());
}

#[test]
fn directory_replay_matches_bundled() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let limits = SearchLimits::default();
    assert_eq!(
        replay_dir(dir.path(), &limits).unwrap(),
        replay_bundled(&limits).unwrap()
    );
}

#[test]
fn corrupted_threshold_fails_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let path = dir.path().join("cascade7.json");
    let text = fs::read_to_string(&path).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["thresholds"][3] = 3.into();
    fs::write(&path, value.to_string()).unwrap();
    let report = replay_dir(dir.path(), &SearchLimits::default()).unwrap();
    assert!(!report.ok());
    let case = report.cases.iter().find(|c| c.name == "cascade7/sim-k1").unwrap();
    assert_eq!(case.status, CaseStatus::Fail);
    let table = report.table();
    assert!(
        table.contains("trajectory: expected {u1} -> {u2,u3,u5,u6} -> {u4,u7}"),
        "{table}"
    );
    assert!(table.contains("trajectory: computed"));
}

#[test]
fn empty_directory_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let err = replay_dir(dir.path(), &SearchLimits::default()).unwrap_err();
    assert!(matches!(err, Error::CorpusMissing(_)));
    assert!(err.to_string().starts_with("corpus missing"));
}
