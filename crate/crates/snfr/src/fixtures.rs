//! Tiny hand-traceable graphs shared by unit tests.

use crate::cost::Cost;
use crate::graph::{Graph, NodeId};

pub const RING_S: NodeId = NodeId(0);
pub const RING_A: NodeId = NodeId(1);
pub const RING_B: NodeId = NodeId(2);
pub const RING_C: NodeId = NodeId(3);
pub const RING_D: NodeId = NodeId(4);

/// Unit-cost five-cycle s-a-b-c-d-s.
pub fn ring5() -> Graph {
    Graph::from_edges(
        5,
        [
            (0, 1, Cost::from_units(1)),
            (1, 2, Cost::from_units(1)),
            (2, 3, Cost::from_units(1)),
            (3, 4, Cost::from_units(1)),
            (4, 0, Cost::from_units(1)),
        ],
    )
    .unwrap()
}

pub const G2_S: NodeId = NodeId(0);
pub const G2_X: NodeId = NodeId(1);
pub const G2_X1: NodeId = NodeId(2);
pub const G2_X2: NodeId = NodeId(3);

/// Four nodes: sink s, inner node x with children x1 and x2, a cheap chord
/// between the children, and an expensive escape edge x2-s.
pub fn g2() -> Graph {
    Graph::from_edges(
        4,
        [
            (0, 1, Cost::from_units(1)),
            (1, 2, Cost::from_units(1)),
            (1, 3, Cost::from_units(1)),
            (2, 3, Cost::from_units(1)),
            (3, 0, Cost::from_units(10)),
        ],
    )
    .unwrap()
}
