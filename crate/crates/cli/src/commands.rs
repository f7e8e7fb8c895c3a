use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use snapshot_lab::clique::{solve_clique, RuleAction, RuleSet};
use snapshot_lab::dynamics::{apply_ordering, replay_certificate, run_simultaneous};
use snapshot_lab::error::{ValidationErrors, Violation};
use snapshot_lab::format::{canonical_json, instance_digest, read_instance_file, validate_instance, InstanceFile};
use snapshot_lab::reduction::{check_equivalence, Gadget, ReductionInput, TargetSetInstance};
use snapshot_lab::verify::{
    check_lemma, feasible_snapshots, instances, replay_bundled, replay_dir, write_violations, GeneratorParams, LemmaId,
    SnapshotLaw, ThresholdLaw,
};
use snapshot_lab::{
    solve as solve_instance, Certificate, DynamicsMode, Error, NodeId, NodeSet, Order, Result, SearchLimits,
    SnapshotInstance, SolveOutcome, Verdict,
};

use crate::args::{
    BenchArgs, CliqueArgs, EnumerateArgs, GadgetArg, LimitArgs, ModeArgs, ReduceArgs, SimulateArgs, SolveArgs,
    VerifyArgs,
};
use crate::dot::to_dot;
use crate::report::{braces, emit, labels, trace_json, trace_text, write_text};
use crate::Status;

fn limits(args: &LimitArgs) -> SearchLimits {
    let mut limits = SearchLimits {
        max_steps: args.max_steps,
        workers: args.workers.max(1),
        ..SearchLimits::default()
    };
    if let Some(m) = args.max_states {
        limits.max_states = m;
    }
    limits
}

fn load(path: &Path, mode: &ModeArgs) -> Result<SnapshotInstance> {
    let raw = read_instance_file(path)?;
    Ok(validate_instance(&raw, mode.mode())?)
}

/// Dynamics from the file or the override, under the same rules as
/// instance validation.
fn resolve_mode(raw: &InstanceFile, mode: &ModeArgs, default: Option<DynamicsMode>) -> Result<DynamicsMode> {
    match (raw.dynamics, mode.mode()) {
        (Some(m), None) | (None, Some(m)) => Ok(m),
        (Some(_), Some(_)) => Err(ValidationErrors(vec![Violation::ConflictingDynamics]).into()),
        (None, None) => default.ok_or_else(|| ValidationErrors(vec![Violation::MissingDynamics]).into()),
    }
}

fn resolve_labels(inst: &SnapshotInstance, names: &[String]) -> Result<Vec<NodeId>> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| inst.graph.id_of(n).ok_or_else(|| Error::UnknownNode(n.clone())))
        .collect()
}

fn verdict_status(outcome: &SolveOutcome) -> Status {
    match outcome.verdict {
        Verdict::Feasible(_) => Status::Success,
        Verdict::Infeasible => Status::Negative,
        Verdict::ResourceCapHit => Status::Cap,
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<Status> {
    let inst = load(&args.instance, &args.mode)?;
    let run = if let Some(path) = &args.replay {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut value: Value = serde_json::from_str(&text)?;
        if let Some(cert) = value.get_mut("certificate") {
            value = cert.take();
        }
        let cert: Certificate = serde_json::from_value(value)?;
        replay_certificate(&inst, &cert, args.max_steps)?
    } else {
        let seed: NodeSet = resolve_labels(&inst, &args.seed)?.into_iter().collect();
        if seed.len() > inst.budget {
            log::warn!("seed has {} nodes, budget is {}", seed.len(), inst.budget);
        }
        match inst.mode.order {
            Order::Simultaneous => {
                if args.ordering.is_some() {
                    return Err(Error::Unsupported("--ordering needs sequential dynamics".into()));
                }
                let steps = args
                    .max_steps
                    .unwrap_or_else(|| SearchLimits::default().steps_for(inst.node_count()));
                run_simultaneous(
                    &inst.graph,
                    &inst.thresholds,
                    &seed,
                    inst.mode,
                    Some(&inst.snapshot),
                    steps,
                )
            }
            Order::Sequential => {
                let ordering = resolve_labels(&inst, args.ordering.as_deref().unwrap_or_default())?;
                apply_ordering(
                    &inst.graph,
                    &inst.thresholds,
                    &seed,
                    &ordering,
                    inst.mode,
                    Some(&inst.snapshot),
                )?
            }
        }
    };
    emit(&args.output, &trace_json(&inst, &run), || trace_text(&inst, &run))?;
    Ok(if run.trace.match_time.is_some() {
        Status::Success
    } else {
        Status::Negative
    })
}

fn solve_json(inst: &SnapshotInstance, outcome: &SolveOutcome, timing: bool) -> Value {
    let cert = outcome.verdict.certificate();
    let mut stats = json!({
        "seeds_tried": outcome.stats.seeds_tried,
        "states_expanded": outcome.stats.states_expanded,
    });
    if timing {
        stats["wall_time_ms"] = json!(outcome.stats.wall_time.as_secs_f64() * 1e3);
    }
    json!({
        "instance_digest": instance_digest(inst),
        "mode": inst.mode.tag(),
        "n": inst.node_count(),
        "budget": inst.budget,
        "verdict": outcome.verdict.name(),
        "certificate": cert,
        "seed": cert.map(|c| labels(inst, &c.seed)),
        "stats": stats,
    })
}

fn solve_text(inst: &SnapshotInstance, outcome: &SolveOutcome) -> String {
    let mut out = format!(
        "{} ({}, n={}, k={}, S={})\n",
        outcome.verdict.name(),
        inst.mode.tag(),
        inst.node_count(),
        inst.budget,
        braces(inst, &inst.snapshot)
    );
    if let Some(cert) = outcome.verdict.certificate() {
        let _ = writeln!(out, "seed {}", braces(inst, &cert.seed));
        match &cert.witness {
            snapshot_lab::Witness::Simultaneous { match_time } => {
                let _ = writeln!(out, "match at t={match_time}");
            }
            snapshot_lab::Witness::Sequential { ordering, .. } => {
                let moves: Vec<String> = ordering
                    .iter()
                    .map(|m| {
                        format!(
                            "{}{}",
                            inst.graph.label(m.node),
                            if m.to.is_active() { "+" } else { "-" }
                        )
                    })
                    .collect();
                let _ = writeln!(out, "ordering {}", moves.join(" "));
            }
        }
    }
    let _ = writeln!(
        out,
        "seeds tried {}, states expanded {}",
        outcome.stats.seeds_tried, outcome.stats.states_expanded
    );
    out
}

pub fn solve(args: &SolveArgs) -> Result<Status> {
    let inst = load(&args.instance, &args.mode)?;
    let outcome = solve_instance(&inst, &limits(&args.limits));
    if let Some(path) = &args.dot {
        let seed = outcome.verdict.certificate().map(|c| &c.seed);
        write_text(Some(path), &to_dot(&inst, seed))?;
    }
    emit(&args.output, &solve_json(&inst, &outcome, args.timing), || {
        solve_text(&inst, &outcome)
    })?;
    Ok(verdict_status(&outcome))
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Status> {
    let mut raw = read_instance_file(&args.instance)?;
    let mode = resolve_mode(&raw, &args.mode, None)?;
    let budget = args.budget.unwrap_or(raw.budget.max(0) as usize);
    raw.snapshot.get_or_insert_with(Vec::new);
    raw.dynamics = Some(mode);
    let inst = validate_instance(&raw, None)?.with_budget(budget);
    let found = match feasible_snapshots(&inst.graph, &inst.thresholds, budget, mode, &limits(&args.limits)) {
        Ok(found) => found,
        Err(cap) => {
            eprintln!("error: {cap}");
            return Ok(Status::Cap);
        }
    };
    let report = json!({
        "mode": mode.tag(),
        "budget": budget,
        "count": found.len(),
        "snapshots": found.iter().map(|s| labels(&inst, s)).collect::<Vec<_>>(),
    });
    emit(&args.output, &report, || {
        found.iter().map(|s| format!("{}\n", braces(&inst, s))).collect()
    })?;
    Ok(Status::Success)
}

pub fn reduce(args: &ReduceArgs) -> Result<Status> {
    let raw = read_instance_file(&args.instance)?;
    let (gadget, input) = match args.gadget {
        GadgetArg::Embed => {
            let mode = args.mode.mode().unwrap_or(DynamicsMode::MONOTONE_SIMULTANEOUS);
            (
                Gadget::Embed(mode),
                ReductionInput::TargetSet(TargetSetInstance::from_file(&raw)?),
            )
        }
        GadgetArg::Seqk1 => (
            Gadget::Seqk1,
            ReductionInput::TargetSet(TargetSetInstance::from_file(&raw)?),
        ),
        GadgetArg::Dummy => {
            let mode = resolve_mode(&raw, &args.mode, Some(DynamicsMode::MONOTONE_SIMULTANEOUS))?;
            if mode != DynamicsMode::MONOTONE_SIMULTANEOUS {
                return Err(Error::WrongMode {
                    expected: DynamicsMode::MONOTONE_SIMULTANEOUS.tag().into(),
                    found: mode.tag().into(),
                });
            }
            let mut raw = raw.clone();
            raw.dynamics = Some(mode);
            (Gadget::Dummy, ReductionInput::Snapshot(validate_instance(&raw, None)?))
        }
    };
    let reduced = gadget.apply(&input)?;
    let reduced_json = InstanceFile::from_instance(&reduced).to_json();
    if !args.check {
        write_text(args.out.as_deref(), &reduced_json)?;
        return Ok(Status::Success);
    }
    if let Some(path) = &args.out {
        write_text(Some(path), &reduced_json)?;
    }
    let verdict = check_equivalence(gadget, &input, &limits(&args.limits))?;
    write_text(None, &canonical_json(&verdict))?;
    Ok(match (verdict.left, verdict.right) {
        (Some(_), Some(_)) if verdict.agree => Status::Success,
        (Some(_), Some(_)) => Status::Negative,
        _ => Status::Cap,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    let limits = limits(&args.limits);
    if let Some(dir) = &args.corpus {
        let report = if dir.is_empty() {
            replay_bundled(&limits)?
        } else {
            replay_dir(dir, &limits)?
        };
        emit(&args.output, &report, || report.table())?;
        return Ok(if report.ok() { Status::Success } else { Status::Negative });
    }
    let lemma = args.lemma.as_deref().unwrap_or("all");
    let lemmas: Vec<LemmaId> = if lemma == "all" {
        LemmaId::ALL.to_vec()
    } else {
        vec![lemma.parse()?]
    };
    let params = GeneratorParams {
        nodes: args.min_n..=args.max_n,
        edge_prob: args.edge_prob,
        laws: ThresholdLaw::ALL.to_vec(),
        budget: 1..=args.max_k,
        snapshot: SnapshotLaw::Arbitrary,
        mode: DynamicsMode::SEQUENTIAL,
        rng_seed: args.rng_seed,
    };
    let mut entries = Vec::new();
    let mut failed = false;
    for lemma in lemmas {
        let mut verdict = check_lemma(lemma, instances(&params)?, args.trials, &limits);
        if !args.timing {
            verdict.elapsed_ms = None;
        }
        let files = write_violations(&verdict, &args.violations_dir)?;
        failed |= !verdict.passed();
        let mut entry = serde_json::to_value(&verdict)?;
        entry["violation_files"] = json!(files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
        entries.push(entry);
    }
    let report = json!({ "params": params, "verdicts": entries });
    emit(&args.output, &report, || {
        let mut out = String::new();
        for e in &entries {
            let violations = e["violations"].as_array().map_or(0, Vec::len);
            let _ = writeln!(
                out,
                "{:<15} trials={} checked={} out_of_scope={} capped={} violations={}  {}",
                e["lemma"].as_str().unwrap_or_default(),
                e["trials"],
                e["checked"],
                e["out_of_scope"],
                e["capped"],
                violations,
                if violations == 0 { "pass" } else { "FAIL" }
            );
            for f in e["violation_files"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    {}", f.as_str().unwrap_or_default());
            }
        }
        out
    })?;
    Ok(if failed { Status::Negative } else { Status::Success })
}

fn action_text(inst: &SnapshotInstance, action: &RuleAction) -> String {
    match action {
        RuleAction::ForcedSeed { nodes } => format!("forced seed {}", braces(inst, nodes)),
        RuleAction::Infeasible => "infeasible".into(),
        RuleAction::PrunedNodes { nodes } => format!("pruned {}", braces(inst, nodes)),
        RuleAction::ExcludedSeedSizes { min, max } => format!("excluded seed sizes {min}..={max}"),
        RuleAction::ReducedToTargetSet { feasible, seed } => {
            format!(
                "reduced to target set: feasible={feasible}, seed {}",
                braces(inst, seed)
            )
        }
        RuleAction::Inapplicable => "inapplicable".into(),
    }
}

pub fn clique(args: &CliqueArgs) -> Result<Status> {
    let inst = load(&args.instance, &args.mode)?;
    let rules = RuleSet {
        literal_p2: args.literal_p2,
        ..RuleSet::ALL
    };
    let solution = solve_clique(&inst, &rules)?;
    let mut report = solve_json(&inst, &solution.outcome, args.timing);
    if args.explain {
        report["rules"] = serde_json::to_value(&solution.reports)?;
    }
    emit(&args.output, &report, || {
        let mut out = String::new();
        if args.explain {
            for r in &solution.reports {
                let _ = writeln!(
                    out,
                    "{}: {} ({})",
                    r.rule,
                    action_text(&inst, &r.action),
                    r.justification
                );
            }
        }
        out + &solve_text(&inst, &solution.outcome)
    })?;
    Ok(verdict_status(&solution.outcome))
}

pub fn bench(args: &BenchArgs) -> Result<Status> {
    let limits = limits(&args.limits);
    let mut paths: BTreeSet<_> = BTreeSet::new();
    for entry in fs::read_dir(&args.dir).map_err(|e| Error::io(&args.dir, e))? {
        let path = entry.map_err(|e| Error::io(&args.dir, e))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.insert(path);
        }
    }
    let mut writer = csv::Writer::from_path(&args.out).map_err(|e| Error::io(&args.out, std::io::Error::other(e)))?;
    let mut header = vec![
        "file",
        "instance_digest",
        "mode",
        "n",
        "k",
        "verdict",
        "seeds_tried",
        "states_expanded",
    ];
    if args.timing {
        header.push("wall_time_ms");
    }
    let csv_err = |e: csv::Error| Error::io(&args.out, std::io::Error::other(e));
    writer.write_record(&header).map_err(csv_err)?;
    for path in paths {
        let inst = match read_instance_file(&path).and_then(|raw| Ok(validate_instance(&raw, args.mode.mode())?)) {
            Ok(inst) => inst,
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                continue;
            }
        };
        let outcome = solve_instance(&inst, &limits);
        let mut row = vec![
            path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            instance_digest(&inst),
            inst.mode.tag().to_owned(),
            inst.node_count().to_string(),
            inst.budget.to_string(),
            outcome.verdict.name().to_owned(),
            outcome.stats.seeds_tried.to_string(),
            outcome.stats.states_expanded.to_string(),
        ];
        if args.timing {
            row.push(format!("{:.3}", outcome.stats.wall_time.as_secs_f64() * 1e3));
        }
        writer.write_record(&row).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(&args.out, e))?;
    Ok(Status::Success)
}
