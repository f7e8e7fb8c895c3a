mod common;

use common::{clique_strategy, graph_strategy, instance_strategy, mask, mode_strategy, unmask, Naive};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snapshot_lab::clique::{clique_trajectory, solve_clique, RuleSet};
use snapshot_lab::dynamics::{legal_moves, replay_certificate, run_simultaneous, Termination};
use snapshot_lab::format::{validate_instance, InstanceFile};
use snapshot_lab::solver::{monotone_closure, solve_monotone_simultaneous, solve_sequential, solve_sequential_k1};
use snapshot_lab::verify::feasible_snapshots;
use snapshot_lab::{
    closed_neighborhood, induced_subgraph, solve, DynamicsMode, NodeSet, SearchLimits, Thresholds, Verdict, Witness,
};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solver_matches_oracle(inst in instance_strategy(6, 3, 2, mode_strategy())) {
        let naive = Naive::of(&inst);
        let expected = naive.first_seed(mask(&inst.snapshot), inst.budget, inst.mode);
        let outcome = solve(&inst, &limits());
        match (&outcome.verdict, expected) {
            (Verdict::Feasible(cert), Some(seed)) => {
                prop_assert_eq!(&cert.seed, &unmask(seed), "canonical seed");
                let run = replay_certificate(&inst, cert, None).unwrap();
                prop_assert_eq!(run.trace.last_active(), &inst.snapshot);
            }
            (Verdict::Infeasible, None) => {}
            (v, e) => prop_assert!(false, "solver {:?}, oracle {:?}", v, e),
        }
    }

    #[test]
    fn sequential_witness_is_shortest(inst in instance_strategy(5, 2, 2, Just(DynamicsMode::SEQUENTIAL))) {
        let outcome = solve(&inst, &limits());
        if let Some(cert) = outcome.verdict.certificate() {
            let Witness::Sequential { ordering, .. } = &cert.witness else { panic!("sequential witness") };
            let naive = Naive::of(&inst);
            let seed = mask(&cert.seed);
            let target = mask(&inst.snapshot);
            // Layered search from the seed for the distance to the target.
            let mut frontier = vec![seed];
            let mut seen = std::collections::HashSet::from([seed]);
            let mut dist = 0;
            while !frontier.contains(&target) {
                let mut next = Vec::new();
                for &c in &frontier {
                    for v in 0..naive.n {
                        if (c >> v & 1 == 1) != naive.wants_on(c, v) && seen.insert(c ^ 1 << v) {
                            next.push(c ^ 1 << v);
                        }
                    }
                }
                frontier = next;
                dist += 1;
            }
            prop_assert_eq!(ordering.len(), dist);
        }
    }

    #[test]
    fn feasible_snapshots_match_oracle(
        g in graph_strategy(5),
        t in proptest::collection::vec(0u32..=2, 5),
        k in 0usize..=2,
        mode in mode_strategy(),
    ) {
        let t = Thresholds::new(t[..g.node_count()].to_vec());
        let naive = Naive::new(&g, &t);
        let got: std::collections::BTreeSet<u32> =
            feasible_snapshots(&g, &t, k, mode, &limits()).unwrap().iter().map(mask).collect();
        prop_assert_eq!(got, naive.feasible_set(k, mode));
    }

    #[test]
    fn feasible_snapshots_grow_with_budget(
        g in graph_strategy(5),
        t in proptest::collection::vec(0u32..=2, 5),
        k in 0usize..=2,
        mode in mode_strategy(),
    ) {
        let t = Thresholds::new(t[..g.node_count()].to_vec());
        let small = feasible_snapshots(&g, &t, k, mode, &limits()).unwrap();
        let large = feasible_snapshots(&g, &t, k + 1, mode, &limits()).unwrap();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn single_adopter_solver_agrees(inst in instance_strategy(7, 3, 1, Just(DynamicsMode::SEQUENTIAL))) {
        let inst = inst.with_budget(1);
        let fast = solve_sequential_k1(&inst, &limits()).unwrap();
        let full = solve_sequential(&inst, &limits());
        prop_assert_eq!(fast.decided(), full.decided());
        if let Some(cert) = fast.verdict.certificate() {
            replay_certificate(&inst, cert, None).unwrap();
        }
    }

    #[test]
    fn closure_ignores_activation_order(
        g in graph_strategy(8),
        t in proptest::collection::vec(0u32..=3, 8),
        seed in proptest::collection::vec(any::<bool>(), 8),
        rng_seed in any::<u64>(),
    ) {
        let n = g.node_count();
        let t = Thresholds::new(t[..n].to_vec());
        let seed: NodeSet = (0..n).filter(|&v| seed[v]).collect();
        let closure = mask(&monotone_closure(&g, &t, &seed, None));
        let naive = Naive::new(&g, &t);
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            prop_assert_eq!(naive.closure_in_order(mask(&seed), &order), closure);
        }
    }

    #[test]
    fn simultaneous_runs_match_oracle(
        g in graph_strategy(8),
        t in proptest::collection::vec(0u32..=3, 8),
        seed in proptest::collection::vec(any::<bool>(), 8),
        monotone in any::<bool>(),
    ) {
        let n = g.node_count();
        let t = Thresholds::new(t[..n].to_vec());
        let seed: NodeSet = (0..n).filter(|&v| seed[v]).collect();
        let mode = if monotone { DynamicsMode::MONOTONE_SIMULTANEOUS } else { DynamicsMode::SIMULTANEOUS };
        let run = run_simultaneous(&g, &t, &seed, mode, None, 1 << n);
        let settled = matches!(run.termination, Termination::FixedPoint | Termination::CycleDetected { .. });
        prop_assert!(settled, "{:?}", run.termination);
        // The trace ends with the configuration that repeats.
        let got: Vec<u32> = run.trace.steps.iter().map(|s| mask(&s.active)).collect();
        let expected = Naive::new(&g, &t).trajectory(mask(&seed), monotone);
        prop_assert_eq!(&got[..got.len() - 1], &expected[..]);
        prop_assert!(expected.contains(got.last().unwrap()));
        if monotone {
            for w in run.trace.steps.windows(2) {
                prop_assert!(w[0].active.is_subset(&w[1].active));
            }
        }
    }

    #[test]
    fn legal_moves_change_state(
        g in graph_strategy(7),
        t in proptest::collection::vec(0u32..=3, 7),
        active in proptest::collection::vec(any::<bool>(), 7),
        mode in mode_strategy(),
    ) {
        let n = g.node_count();
        let t = Thresholds::new(t[..n].to_vec());
        let active: NodeSet = (0..n).filter(|&v| active[v]).collect();
        for mv in legal_moves(&g, &t, &active, mode) {
            let mut next = active.clone();
            next.set(mv.node, mv.to.is_active());
            prop_assert_ne!(&next, &active);
            prop_assert!(!legal_moves(&g, &t, &next, mode).contains(&mv));
        }
    }

    #[test]
    fn closed_neighborhood_and_induced_roundtrip(
        g in graph_strategy(9),
        s in proptest::collection::vec(any::<bool>(), 9),
    ) {
        let n = g.node_count();
        let s: NodeSet = (0..n).filter(|&v| s[v]).collect();
        let nb = closed_neighborhood(&g, &s);
        prop_assert!(s.is_subset(&nb));
        let t = Thresholds::new(vec![1; n]);
        let sub = induced_subgraph(&g, &t, &s);
        prop_assert_eq!(sub.graph.node_count(), s.len());
        for a in 0..sub.graph.node_count() {
            prop_assert_eq!(sub.map.local(sub.map.original(a)), Some(a));
            for b in 0..sub.graph.node_count() {
                prop_assert_eq!(
                    sub.graph.has_edge(a, b),
                    g.has_edge(sub.map.original(a), sub.map.original(b))
                );
            }
        }
    }

    #[test]
    fn instance_file_roundtrip(inst in instance_strategy(7, 4, 3, mode_strategy())) {
        let json = InstanceFile::from_instance(&inst).to_json();
        let back = validate_instance(&InstanceFile::parse(&json).unwrap(), None).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(InstanceFile::from_instance(&back).to_json(), json);
    }

    #[test]
    fn clique_counting_matches_engine(inst in clique_strategy(9), seed in proptest::collection::vec(any::<bool>(), 9)) {
        let n = inst.node_count();
        let seed: NodeSet = (0..n).filter(|&v| seed[v]).collect();
        let engine = run_simultaneous(&inst.graph, &inst.thresholds, &seed, inst.mode, None, 1 << n);
        let steps = &engine.trace.steps;
        let engine: Vec<&NodeSet> = steps[..steps.len() - 1].iter().map(|s| &s.active).collect();
        let counted = clique_trajectory(&inst.thresholds, &seed);
        prop_assert_eq!(engine, counted.iter().collect::<Vec<_>>());
    }

    #[test]
    fn clique_rules_are_sound(inst in clique_strategy(9), bits in 0u8..128) {
        let reference = solve_monotone_simultaneous(&inst, &limits()).decided();
        // Everything except the literal variant of the outside-threshold rule.
        let rules = RuleSet::from_bits(bits & !32);
        let solution = solve_clique(&inst, &rules).unwrap();
        prop_assert_eq!(solution.outcome.decided(), reference, "rules {:?}", rules);
        if let Some(cert) = solution.outcome.verdict.certificate() {
            replay_certificate(&inst, cert, None).unwrap();
        }
    }
}
