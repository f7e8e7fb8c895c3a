use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{legal_moves, run_simultaneous};
use crate::error::{Error, Result};
use crate::model::{DynamicsMode, Graph, Order, SnapshotInstance, Thresholds};
use crate::nodeset::{NodeId, NodeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdLaw {
    /// Uniform on `0..=deg(v)`.
    UpToDegree,
    /// Uniform on `1..=max(deg(v), 1)`.
    OneToDegree,
    /// Uniform on `0..=2`, independent of degree.
    AtMostTwo,
}

impl ThresholdLaw {
    pub const ALL: [ThresholdLaw; 3] = [
        ThresholdLaw::UpToDegree,
        ThresholdLaw::OneToDegree,
        ThresholdLaw::AtMostTwo,
    ];

    fn sample(self, rng: &mut ChaCha8Rng, degree: usize) -> u32 {
        let t = match self {
            ThresholdLaw::UpToDegree => rng.gen_range(0..=degree),
            ThresholdLaw::OneToDegree => rng.gen_range(1..=degree.max(1)),
            ThresholdLaw::AtMostTwo => rng.gen_range(0..=2),
        };
        t as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnapshotLaw {
    /// Each node independently with probability 1/2.
    Arbitrary,
    /// A configuration visited by the dynamics from a random seed of size `<= k`.
    Reachable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub nodes: RangeInclusive<usize>,
    pub edge_prob: f64,
    /// Laws are used in turn, one per instance.
    pub laws: Vec<ThresholdLaw>,
    pub budget: RangeInclusive<usize>,
    pub snapshot: SnapshotLaw,
    pub mode: DynamicsMode,
    pub rng_seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            nodes: 3..=7,
            edge_prob: 0.5,
            laws: ThresholdLaw::ALL.to_vec(),
            budget: 1..=2,
            snapshot: SnapshotLaw::Arbitrary,
            mode: DynamicsMode::SEQUENTIAL,
            rng_seed: 0,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let problem = if self.nodes.is_empty() {
            Some("empty node-count range")
        } else if self.budget.is_empty() {
            Some("empty budget range")
        } else if !(0.0..=1.0).contains(&self.edge_prob) {
            Some("edge probability outside [0, 1]")
        } else if self.laws.is_empty() {
            Some("no threshold law given")
        } else {
            None
        };
        match problem {
            Some(p) => Err(Error::Unsupported(format!("invalid generator parameters: {p}"))),
            None => Ok(()),
        }
    }
}

/// Endless, reproducible stream of instances.
#[derive(Debug, Clone)]
pub struct InstanceStream {
    params: GeneratorParams,
    rng: ChaCha8Rng,
    produced: usize,
}

pub fn instances(params: &GeneratorParams) -> Result<InstanceStream> {
    params.validate()?;
    Ok(InstanceStream {
        params: params.clone(),
        rng: ChaCha8Rng::seed_from_u64(params.rng_seed),
        produced: 0,
    })
}

/// The first instance of the stream for `params`.
pub fn random_instance(params: &GeneratorParams) -> Result<SnapshotInstance> {
    Ok(instances(params)?.next().expect("stream is endless"))
}

impl Iterator for InstanceStream {
    type Item = SnapshotInstance;

    fn next(&mut self) -> Option<SnapshotInstance> {
        let law = self.params.laws[self.produced % self.params.laws.len()];
        self.produced += 1;
        Some(generate(&self.params, law, &mut self.rng))
    }
}

fn generate(params: &GeneratorParams, law: ThresholdLaw, rng: &mut ChaCha8Rng) -> SnapshotInstance {
    let n = rng.gen_range(params.nodes.clone());
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(params.edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let labels = (1..=n).map(|i| format!("u{i}")).collect();
    let graph = Graph::from_edges(n, &edges)
        .and_then(|g| g.with_labels(labels))
        .expect("sampled edges form a simple graph");
    let thresholds = Thresholds::new(graph.nodes().map(|v| law.sample(rng, graph.degree(v))).collect());
    let budget = rng.gen_range(params.budget.clone());
    let snapshot = match params.snapshot {
        SnapshotLaw::Arbitrary => graph.nodes().filter(|_| rng.gen_bool(0.5)).collect(),
        SnapshotLaw::Reachable => reachable_sample(&graph, &thresholds, budget, params.mode, rng),
    };
    SnapshotInstance::new(graph, thresholds, snapshot, budget, params.mode).expect("generated instance is valid")
}

fn reachable_sample(
    graph: &Graph,
    thresholds: &Thresholds,
    k: usize,
    mode: DynamicsMode,
    rng: &mut ChaCha8Rng,
) -> NodeSet {
    let n = graph.node_count();
    let size = rng.gen_range(0..=k.min(n));
    let nodes: Vec<NodeId> = graph.nodes().collect();
    let seed: NodeSet = nodes.choose_multiple(rng, size).copied().collect();
    match mode.order {
        Order::Simultaneous => {
            let run = run_simultaneous(graph, thresholds, &seed, mode, None, 4 * n + 4);
            let steps = &run.trace.steps;
            steps[rng.gen_range(0..steps.len())].active.clone()
        }
        Order::Sequential => {
            let mut active = seed;
            for _ in 0..rng.gen_range(0..=2 * n) {
                let moves = legal_moves(graph, thresholds, &active, mode);
                let Some(mv) = moves.choose(rng) else { break };
                active.set(mv.node, mv.to.is_active());
            }
            active
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_empty_edge_probability() {
        let params = GeneratorParams {
            nodes: 4..=4,
            edge_prob: 1.0,
            laws: vec![ThresholdLaw::AtMostTwo],
            ..GeneratorParams::default()
        };
        let inst = random_instance(&params).unwrap();
        assert!(inst.graph.is_clique());
        assert_eq!(inst.graph.edge_count(), 6);
        let params = GeneratorParams {
            nodes: 5..=5,
            edge_prob: 0.0,
            ..params
        };
        assert_eq!(random_instance(&params).unwrap().graph.edge_count(), 0);
    }

    #[test]
    fn same_seed_same_stream() {
        let params = GeneratorParams {
            rng_seed: 99,
            snapshot: SnapshotLaw::Reachable,
            ..GeneratorParams::default()
        };
        let a: Vec<_> = instances(&params).unwrap().take(20).collect();
        let b: Vec<_> = instances(&params).unwrap().take(20).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_laws_respect_bounds() {
        let params = GeneratorParams {
            rng_seed: 3,
            ..GeneratorParams::default()
        };
        for (i, inst) in instances(&params).unwrap().take(60).enumerate() {
            for v in inst.graph.nodes() {
                let (t, d) = (inst.thresholds.of(v), inst.graph.degree(v));
                match ThresholdLaw::ALL[i % 3] {
                    ThresholdLaw::UpToDegree => assert!(t <= d),
                    ThresholdLaw::OneToDegree => assert!(t >= 1 && t <= d.max(1)),
                    ThresholdLaw::AtMostTwo => assert!(t <= 2),
                }
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        let params = GeneratorParams {
            edge_prob: 1.5,
            ..GeneratorParams::default()
        };
        assert!(instances(&params).is_err());
    }
}
