//! Proactive recovery-path computation for single node and link failures.
//!
//! Traffic toward a sink follows the shortest-path tree until it hits a
//! failed node; recovery then continues along a precomputed alternate route
//! that avoids the failure. This crate computes those routes with a
//! distributed protocol — every node acts on local knowledge and messages
//! from its tree neighbors — hosted on a deterministic discrete-event
//! simulator, and verifies the outcome against a centralized reference and
//! exact optimality oracles.
//!
//! The pipeline, phase by phase:
//!
//! 1. [`dijkstra_spt`] builds the shortest-path tree of the sink.
//! 2. Wake/count/allocation messages assign every node a depth-first label
//!    interval ([`protocol::Network::run_labeling`]).
//! 3. Each non-tree edge climbs to its endpoints' nearest common ancestor,
//!    filling per-node stores with the cheapest escape and bridge edges
//!    ([`protocol::Network::collect_non_tree_edges`]).
//! 4. Any node can then answer "how do my children reach the sink if I
//!    fail?" by a small on-demand shortest-path search that pulls bridge
//!    edges from children only as needed
//!    ([`protocol::Network::compute_recovery`]).
//!
//! The book under `book/` walks through the concepts; its code snippets
//! compile and run as doctests of this crate.

pub mod biconn;
pub mod cost;
pub mod error;
pub mod generate;
pub mod graph;
pub mod labels;
pub mod oracle;
pub mod protocol;
pub mod recovery;
pub mod report;
pub mod run;
pub mod sim;
pub mod spt;
pub mod stores;

#[cfg(test)]
pub(crate) mod fixtures;

#[cfg(doctest)]
mod book;

pub use biconn::is_biconnected;
pub use cost::Cost;
pub use error::{Error, Result};
pub use generate::{generate_biconnected, random_tree};
pub use graph::{Edge, Graph, NodeId};
pub use labels::{centralized_labels, DfsLabels};
pub use oracle::{
    centralized_link_recovery, centralized_snfr, optimal_alternate, optimal_link_alternate,
    stretch_report, StretchReport,
};
pub use protocol::Network;
pub use recovery::{
    blue_weight_from_green, expand_path, HopEdge, LinkRecoveryEntry, RecoveryAudit,
    RecoveryEntry, RecoveryTable,
};
pub use run::{run_distributed, FailureMode, RunOptions, RunOutput};
pub use sim::{Actor, Message, Outbox, Payload, SimConfig, SimNetwork, SimStats};
pub use spt::{dijkstra_spt, ShortestPathTree};
