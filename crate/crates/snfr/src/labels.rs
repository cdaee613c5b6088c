//! Depth-first interval labels over the shortest-path tree.
//!
//! Each node carries an interval `[start, end]` within `[1, 2n]`: a traversal
//! that visits children in ascending id order consumes one label on entry and
//! one on exit. Subtree membership is then a pair of integer comparisons, and
//! a single label position is enough to place a remote node relative to any
//! known interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::spt::ShortestPathTree;

/// Per-node `dfsStart`/`dfsEnd` labels in `[1, 2n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfsLabels {
    start: Vec<u32>,
    end: Vec<u32>,
}

impl DfsLabels {
    pub fn new(start: Vec<u32>, end: Vec<u32>) -> DfsLabels {
        DfsLabels { start, end }
    }

    pub fn node_count(&self) -> usize {
        self.start.len()
    }

    pub fn start(&self, v: NodeId) -> u32 {
        self.start[v.idx()]
    }

    pub fn end(&self, v: NodeId) -> u32 {
        self.end[v.idx()]
    }

    pub fn interval(&self, v: NodeId) -> (u32, u32) {
        (self.start[v.idx()], self.end[v.idx()])
    }

    /// True iff `u` lies in the subtree of `v` (reflexive).
    pub fn is_descendant(&self, u: NodeId, v: NodeId) -> bool {
        self.start[v.idx()] <= self.start[u.idx()] && self.end[u.idx()] <= self.end[v.idx()]
    }

    /// Nearest common ancestor of `u` and `v`: climb from `u` until the
    /// interval swallows `v`.
    pub fn nca(&self, tree: &ShortestPathTree, u: NodeId, v: NodeId) -> NodeId {
        let mut w = u;
        while !self.is_descendant(v, w) {
            w = tree
                .parent(w)
                .expect("root interval contains every node");
        }
        w
    }

    /// Checks every structural invariant against the tree. Width must be
    /// twice the subtree size, child intervals disjoint and strictly nested,
    /// the root interval exactly `[1, 2n]`.
    pub fn validate(&self, tree: &ShortestPathTree) -> Result<()> {
        let n = tree.node_count();
        let fail = |node: NodeId, what: &str| {
            Err(Error::Verify(format!("label invariant broken at node {node}: {what}")))
        };
        if self.start.len() != n || self.end.len() != n {
            return Err(Error::Verify("label arrays sized differently from tree".into()));
        }
        let sizes = tree.subtree_sizes();
        let root = tree.root();
        if self.interval(root) != (1, 2 * n as u32) {
            return fail(root, "root interval is not [1, 2n]");
        }
        for v in (0..n as u32).map(NodeId) {
            let (lo, hi) = self.interval(v);
            if lo >= hi {
                return fail(v, "start must precede end");
            }
            if hi - lo + 1 != 2 * sizes[v.idx()] {
                return fail(v, "interval width is not twice the subtree size");
            }
            let mut cursor = lo;
            for &c in tree.children(v) {
                let (clo, chi) = self.interval(c);
                if clo != cursor + 1 {
                    return fail(c, "child interval not consecutive");
                }
                if chi >= hi {
                    return fail(c, "child interval escapes the parent");
                }
                cursor = chi;
            }
            if cursor + 1 != hi {
                return fail(v, "children do not fill the interval");
            }
        }
        Ok(())
    }
}

/// Reference labeling: a centralized traversal of the tree that visits
/// children in ascending id order. The distributed protocol must reproduce
/// this exactly.
pub fn centralized_labels(tree: &ShortestPathTree) -> DfsLabels {
    let n = tree.node_count();
    let mut start = vec![0u32; n];
    let mut end = vec![0u32; n];
    let mut counter = 1u32;
    // (node, next child index)
    let mut stack: Vec<(NodeId, usize)> = vec![(tree.root(), 0)];
    start[tree.root().idx()] = counter;
    counter += 1;
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        let children = tree.children(v);
        if top.1 < children.len() {
            let c = children[top.1];
            top.1 += 1;
            start[c.idx()] = counter;
            counter += 1;
            stack.push((c, 0));
        } else {
            end[v.idx()] = counter;
            counter += 1;
            stack.pop();
        }
    }
    DfsLabels { start, end }
}
