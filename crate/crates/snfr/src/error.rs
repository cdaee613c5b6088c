//! Crate-wide error type.

use thiserror::Error;

use crate::graph::NodeId;

/// Errors surfaced by graph construction, the simulator, and the protocol.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph disconnected: node {0} unreachable from the sink")]
    Disconnected(NodeId),

    #[error("too small: need at least {min} nodes, got {n}")]
    TooSmall { n: usize, min: usize },

    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: u32, v: u32, reason: &'static str },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("node {ancestor} is not an ancestor of node {node}")]
    NotAncestor { node: NodeId, ancestor: NodeId },

    #[error("illegal topology bypass: {from} -> {to} is not a link and not a self-delivery")]
    IllegalSend { from: NodeId, to: NodeId },

    #[error("non-quiescent protocol: tick budget {budget} exceeded")]
    NonQuiescent { budget: u64 },

    #[error("protocol stalled: event queue drained before the phase completed")]
    PhaseStalled,

    #[error("count corruption at node {0}: allocated widths exceed the parent interval")]
    CountCorruption(NodeId),

    #[error("label inconsistency at node {node}: endpoint {endpoint} matches no sibling interval")]
    LabelInconsistency { node: NodeId, endpoint: NodeId },

    #[error("sink cannot fail")]
    SinkCannotFail,

    #[error("graph not biconnected for {failed}: child {child} has no recovery path")]
    NotBiconnectedFor { failed: NodeId, child: NodeId },

    #[error("weight inconsistency: subtracting {subtract} from {from} underflows")]
    WeightInconsistency { from: String, subtract: String },

    #[error("bridge edge: no edge leaves the subtree of node {0}")]
    BridgeEdge(NodeId),

    #[error("input not biconnected")]
    NotBiconnected,

    #[error("hop chain invalid: {0}")]
    BadHopChain(String),

    #[error("{0}")]
    Verify(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
