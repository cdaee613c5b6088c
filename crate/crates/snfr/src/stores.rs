//! Per-node edge stores populated by the collection protocol.
//!
//! Every non-tree edge is summarized once per interested node: the cheapest
//! escape edge per child subtree (green) and the cheapest bridge per sibling
//! subtree (blue). Cheapness is measured by the fixed weight
//! `d(s,u) + cost(u,v) + d(v,s)`, which orders edges identically in every
//! recovery graph they appear in, so a single number travels with each edge.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cost::Cost;
use crate::graph::{Edge, NodeId};

/// A non-tree edge retained in a store, oriented by the storing node:
/// `near` lies inside the relevant subtree, `far` outside it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StoredEdge {
    pub near: NodeId,
    pub far: NodeId,
    pub cost: Cost,
    pub fgw: Cost,
}

impl StoredEdge {
    /// Canonical `(min, max)` endpoint pair used for tie-breaking.
    pub fn pair(&self) -> (NodeId, NodeId) {
        if self.near <= self.far {
            (self.near, self.far)
        } else {
            (self.far, self.near)
        }
    }

    /// Total order used by min-selection: fixed weight first, then the
    /// lexicographically smallest endpoint pair.
    pub fn rank(&self) -> (Cost, NodeId, NodeId) {
        let (a, b) = self.pair();
        (self.fgw, a, b)
    }
}

/// Map from a child or sibling id to the single best edge seen for it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MinEdgeMap(BTreeMap<NodeId, StoredEdge>);

impl MinEdgeMap {
    pub fn new() -> MinEdgeMap {
        MinEdgeMap(BTreeMap::new())
    }

    /// Keeps `edge` under `key` iff it beats the stored one.
    /// Returns true when the entry changed.
    pub fn insert_min(&mut self, key: NodeId, edge: StoredEdge) -> bool {
        match self.0.get(&key) {
            Some(existing) if existing.rank() <= edge.rank() => false,
            _ => {
                self.0.insert(key, edge);
                true
            }
        }
    }

    pub fn get(&self, key: NodeId) -> Option<&StoredEdge> {
        self.0.get(&key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries ascending by key.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &StoredEdge)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }
}

/// Cheapest green edge per child subtree.
pub type ChildrenGreenEdges = MinEdgeMap;
/// Cheapest blue edge per sibling subtree.
pub type ParentBlueEdges = MinEdgeMap;

/// The record a node forwards up the tree for one non-tree edge.
///
/// Label positions ride along so every receiver can place the endpoints
/// against its own interval without remote lookups, mirroring how the fixed
/// weight rides along to avoid remote distance lookups.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct NonTreeEdgeMsg {
    pub p1: NodeId,
    pub p2: NodeId,
    /// dfsStart positions of the endpoints.
    pub p1_pos: u32,
    pub p2_pos: u32,
    pub cost: Cost,
    pub fixed_green_weight: Cost,
}

/// `d(s,u) + cost(u,v) + d(v,s)`: the weight of the best recovery detour
/// through the edge, independent of which node's failure is being planned.
pub fn fixed_green_weight(edge: &Edge, dist: &[Cost]) -> Cost {
    dist[edge.u.idx()] + edge.cost + dist[edge.v.idx()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g2, ring5, G2_S, G2_X1, G2_X2, RING_B, RING_C, RING_S};
    use crate::spt::dijkstra_spt;

    #[test]
    fn fixed_green_weight_examples() {
        let g = g2();
        let tree = dijkstra_spt(&g, G2_S).unwrap();
        let edge = |a, b| Edge::new(a, b, g.edge_cost(a, b).unwrap());
        assert_eq!(
            fixed_green_weight(&edge(G2_X2, G2_S), tree.dists()),
            Cost::from_units(12),
            "2 + 10 + 0"
        );
        assert_eq!(
            fixed_green_weight(&edge(G2_X1, G2_X2), tree.dists()),
            Cost::from_units(5),
            "2 + 1 + 2"
        );

        let ring = ring5();
        let rtree = dijkstra_spt(&ring, RING_S).unwrap();
        let bc = Edge::new(RING_B, RING_C, ring.edge_cost(RING_B, RING_C).unwrap());
        assert_eq!(fixed_green_weight(&bc, rtree.dists()), Cost::from_units(5));
    }

    #[test]
    fn insert_min_keeps_cheapest_with_lexicographic_ties() {
        let mut map = MinEdgeMap::new();
        let mk = |near: u32, far: u32, fgw: u64| StoredEdge {
            near: NodeId(near),
            far: NodeId(far),
            cost: Cost::from_units(1),
            fgw: Cost::from_units(fgw),
        };
        assert!(map.insert_min(NodeId(9), mk(5, 2, 10)));
        assert!(!map.insert_min(NodeId(9), mk(6, 3, 11)), "worse weight ignored");
        assert!(map.insert_min(NodeId(9), mk(7, 4, 9)), "better weight wins");
        // Equal weight: (2,5) < (4,7), so the stored entry is replaced.
        assert!(map.insert_min(NodeId(9), mk(2, 5, 9)));
        // Equal weight and equal pair: no change.
        assert!(!map.insert_min(NodeId(9), mk(5, 2, 9)));
        assert_eq!(map.get(NodeId(9)).unwrap().pair(), (NodeId(2), NodeId(5)));
        assert_eq!(map.len(), 1);
    }
}
