//! Brute-force reference implementation over `u32` bitmasks. Shares no code
//! with the library beyond the instance types used to read inputs.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use snapshot_lab::{DynamicsMode, Graph, NodeSet, Order, SnapshotInstance, Thresholds};

pub fn mask(set: &NodeSet) -> u32 {
    set.iter().fold(0, |m, v| m | 1 << v)
}

pub fn unmask(m: u32) -> NodeSet {
    (0..32).filter(|&v| m >> v & 1 == 1).collect()
}

pub struct Naive {
    pub n: usize,
    adj: Vec<u32>,
    t: Vec<u32>,
}

impl Naive {
    pub fn new(graph: &Graph, thresholds: &Thresholds) -> Self {
        let n = graph.node_count();
        assert!(n <= 16, "oracle sized for small graphs");
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| graph.has_edge(u, v)).fold(0, |m, u| m | 1 << u))
            .collect();
        Naive {
            n,
            adj,
            t: thresholds.as_slice().to_vec(),
        }
    }

    pub fn of(inst: &SnapshotInstance) -> Self {
        Naive::new(&inst.graph, &inst.thresholds)
    }

    pub fn wants_on(&self, active: u32, v: usize) -> bool {
        (self.adj[v] & active).count_ones() >= self.t[v]
    }

    pub fn step(&self, active: u32, seed: u32, monotone: bool) -> u32 {
        let mut next = 0;
        for v in 0..self.n {
            let committed = monotone && seed >> v & 1 == 1;
            if committed || self.wants_on(active, v) {
                next |= 1 << v;
            }
        }
        next
    }

    /// Configurations visited by the simultaneous trajectory, in order, up to
    /// the first repeat.
    pub fn trajectory(&self, seed: u32, monotone: bool) -> Vec<u32> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut cur = seed;
        while seen.insert(cur) {
            out.push(cur);
            cur = self.step(cur, seed, monotone);
        }
        out
    }

    /// All configurations reachable by single best-response updates.
    pub fn sequential_reach(&self, seed: u32, monotone: bool) -> HashSet<u32> {
        let mut seen = HashSet::from([seed]);
        let mut stack = vec![seed];
        while let Some(cur) = stack.pop() {
            for v in 0..self.n {
                let on = cur >> v & 1 == 1;
                let want = self.wants_on(cur, v);
                if on == want || (monotone && on && seed >> v & 1 == 1) {
                    continue;
                }
                let next = cur ^ 1 << v;
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen
    }

    pub fn reach(&self, seed: u32, mode: DynamicsMode) -> HashSet<u32> {
        match mode.order {
            Order::Simultaneous => self.trajectory(seed, mode.monotone).into_iter().collect(),
            Order::Sequential => self.sequential_reach(seed, mode.monotone),
        }
    }

    /// Seeds of size `<= k` in canonical order: by size, then by sorted ids.
    pub fn seeds(&self, k: usize) -> Vec<u32> {
        let mut seeds: Vec<u32> = (0..1u32 << self.n).filter(|s| s.count_ones() as usize <= k).collect();
        seeds.sort_by_key(|&s| (s.count_ones(), unmask(s).to_vec()));
        seeds
    }

    pub fn first_seed(&self, target: u32, k: usize, mode: DynamicsMode) -> Option<u32> {
        self.seeds(k)
            .into_iter()
            .find(|&s| self.reach(s, mode).contains(&target))
    }

    pub fn feasible(&self, target: u32, k: usize, mode: DynamicsMode) -> bool {
        self.first_seed(target, k, mode).is_some()
    }

    pub fn feasible_set(&self, k: usize, mode: DynamicsMode) -> BTreeSet<u32> {
        self.seeds(k).into_iter().flat_map(|s| self.reach(s, mode)).collect()
    }

    /// Monotone closure activating eligible nodes in the given priority order.
    pub fn closure_in_order(&self, seed: u32, order: &[usize]) -> u32 {
        let mut cur = seed;
        loop {
            let Some(&v) = order.iter().find(|&&v| cur >> v & 1 == 0 && self.wants_on(cur, v)) else {
                return cur;
            };
            cur |= 1 << v;
        }
    }

    pub fn target_set_exists(&self, k: usize) -> bool {
        let all = (1u32 << self.n) - 1;
        let order: Vec<usize> = (0..self.n).collect();
        self.seeds(k)
            .into_iter()
            .any(|s| self.closure_in_order(s, &order) == all)
    }
}

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

pub fn mode_strategy() -> impl Strategy<Value = DynamicsMode> {
    proptest::sample::select(DynamicsMode::ALL.to_vec())
}

/// Random instance with thresholds in `0..=max_t` and budget in `0..=max_k`.
pub fn instance_strategy(
    max_n: usize,
    max_t: u32,
    max_k: usize,
    mode: impl Strategy<Value = DynamicsMode>,
) -> impl Strategy<Value = SnapshotInstance> {
    (graph_strategy(max_n), mode, 0..=max_k).prop_flat_map(move |(g, mode, k)| {
        let n = g.node_count();
        (
            proptest::collection::vec(0..=max_t, n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(t, s)| {
                let snapshot = (0..n).filter(|&v| s[v]).collect();
                SnapshotInstance::new(g.clone(), Thresholds::new(t), snapshot, k, mode).unwrap()
            })
    })
}

pub fn clique_strategy(max_n: usize) -> impl Strategy<Value = SnapshotInstance> {
    (1..=max_n, 0..=3usize).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(0..=n as u32, n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(t, s)| {
                let snapshot = (0..n).filter(|&v| s[v]).collect();
                SnapshotInstance::new(
                    Graph::complete(n),
                    Thresholds::new(t),
                    snapshot,
                    k,
                    DynamicsMode::MONOTONE_SIMULTANEOUS,
                )
                .unwrap()
            })
    })
}
