//! Feasibility of diffusion snapshots under linear-threshold best-response
//! dynamics.
//!
//! Given a graph, per-node thresholds, a snapshot `S` and a budget `k`, the
//! question is whether some seed set of at most `k` nodes makes the active set
//! equal to exactly `S` at some finite time. Four dynamics are supported:
//! simultaneous or sequential best responses, each with or without seed
//! commitment ("monotone").

pub mod clique;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod model;
pub mod nodeset;
pub mod reduction;
pub mod solver;
pub mod verify;

pub use error::{Error, Result, ValidationErrors, Violation};
pub use model::{
    closed_neighborhood, induced_subgraph, Certificate, Configuration, DynamicsMode, Graph, Move, NodeState, Order,
    SnapshotInstance, Thresholds, Trace, Witness,
};
pub use nodeset::{NodeId, NodeSet};
pub use solver::{solve, SearchLimits, SolveOutcome, Verdict};
