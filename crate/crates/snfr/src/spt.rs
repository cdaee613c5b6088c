//! Single-source shortest-path trees rooted at the traffic sink.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Shortest-path tree rooted at a sink node `s`.
///
/// Every tree path toward the root is a shortest path in the underlying
/// graph. Ties between candidate parents of equal distance resolve to the
/// smaller parent id, which makes the tree a pure function of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPathTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    dist: Vec<Cost>,
    children: Vec<Vec<NodeId>>,
}

impl ShortestPathTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.dist.len()
    }

    /// Parent of `v`, `None` for the root.
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.idx()]
    }

    /// Shortest distance from `v` to the root.
    pub fn dist(&self, v: NodeId) -> Cost {
        self.dist[v.idx()]
    }

    pub fn dists(&self) -> &[Cost] {
        &self.dist
    }

    /// Children of `v`, ascending by node id.
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.idx()]
    }

    pub fn is_tree_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.parent[a.idx()] == Some(b) || self.parent[b.idx()] == Some(a)
    }

    /// Walks `u, parent(u), …, ancestor`. Errors when `ancestor` does not lie
    /// on the path from `u` to the root.
    pub fn tree_path(&self, u: NodeId, ancestor: NodeId) -> Result<Vec<NodeId>> {
        let mut path = vec![u];
        let mut cur = u;
        while cur != ancestor {
            match self.parent[cur.idx()] {
                Some(p) => {
                    path.push(p);
                    cur = p;
                }
                None => return Err(Error::NotAncestor { node: u, ancestor }),
            }
        }
        Ok(path)
    }

    /// Number of nodes in each subtree.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![1u32; self.dist.len()];
        let order = self.topological_order();
        for &v in order.iter().rev() {
            if let Some(p) = self.parent[v.idx()] {
                sizes[p.idx()] += sizes[v.idx()];
            }
        }
        sizes
    }

    /// Hop count from `v` up to the root.
    pub fn depth(&self, v: NodeId) -> u32 {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent[cur.idx()] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Nodes ordered root first, every parent before its children.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.dist.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v.idx()].iter().copied());
        }
        order
    }
}

/// Builds the shortest-path tree of `root` by Dijkstra's algorithm.
///
/// Determinism: the heap is keyed by `(distance, node)`, and a relaxation
/// that matches the current tentative distance exactly switches to the
/// smaller parent id. Returns an error if some node is unreachable.
pub fn dijkstra_spt(graph: &Graph, root: NodeId) -> Result<ShortestPathTree> {
    let n = graph.node_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();

    dist[root.idx()] = Some(Cost::ZERO);
    heap.push(Reverse((Cost::ZERO, root)));

    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v.idx()] {
            continue;
        }
        settled[v.idx()] = true;
        for &(nb, cost) in graph.neighbors(v) {
            if settled[nb.idx()] || nb == root {
                continue;
            }
            let candidate = d + cost;
            match dist[nb.idx()] {
                Some(cur) if candidate > cur => {}
                Some(cur) if candidate == cur => {
                    // Equal-distance tie: prefer the smaller parent id.
                    if parent[nb.idx()].is_none_or(|p| v < p) {
                        parent[nb.idx()] = Some(v);
                    }
                }
                _ => {
                    dist[nb.idx()] = Some(candidate);
                    parent[nb.idx()] = Some(v);
                    heap.push(Reverse((candidate, nb)));
                }
            }
        }
    }

    let mut final_dist = Vec::with_capacity(n);
    for v in graph.nodes() {
        match dist[v.idx()] {
            Some(d) => final_dist.push(d),
            None => return Err(Error::Disconnected(v)),
        }
    }
    let mut children = vec![Vec::new(); n];
    for v in graph.nodes() {
        if let Some(p) = parent[v.idx()] {
            children[p.idx()].push(v);
        }
    }
    // Pushed in ascending v, so each list is already sorted.
    Ok(ShortestPathTree { root, parent, dist: final_dist, children })
}
