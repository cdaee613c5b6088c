//! Recovery-path domain types, weight algebra, and path expansion.
//!
//! When a node `x` fails, the tree splits into the component holding the
//! sink plus one component per child of `x`. The recovery graph of `x` has a
//! node per child and one for the sink side; green arcs jump from a child's
//! subtree straight out of `x`'s subtree, blue arcs bridge two sibling
//! subtrees. Shortest paths in that small graph, expanded back through tree
//! paths, are the recovery routes.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spt::ShortestPathTree;
use crate::stores::StoredEdge;

/// One witness edge of a recovery route, oriented along the walk:
/// `near` is inside the subtree the walk is currently in, `far` is where it
/// crosses to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopEdge {
    pub near: NodeId,
    pub far: NodeId,
}

/// Recovery route for one child of a failed node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryEntry {
    pub child: NodeId,
    pub cost: Cost,
    /// Blue witnesses first, one green witness last.
    pub hop_chain: Vec<HopEdge>,
    /// Expanded walk from the child to the sink.
    pub path: Vec<NodeId>,
}

/// All recovery routes around one failed node, one entry per child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryTable {
    pub failed: NodeId,
    pub entries: Vec<RecoveryEntry>,
}

/// Alternate route used when the tree link from `node` to its parent fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecoveryEntry {
    pub node: NodeId,
    pub cost: Cost,
    pub witness: HopEdge,
    pub path: Vec<NodeId>,
}

/// Work counters from one recovery computation.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecoveryAudit {
    pub failed: NodeId,
    pub children: u32,
    pub blue_fetches: u32,
    pub extract_mins: u32,
    pub relaxations: u32,
}

/// Green arc of a recovery graph: jumps from inside one child's subtree to
/// outside the failed node's subtree. `weight` is the full detour cost from
/// the child itself.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GreenArc {
    pub edge: StoredEdge,
    pub weight: Cost,
}

/// Blue arc: bridges the subtrees of two children. `near_lo` is the endpoint
/// inside the smaller-id child's subtree.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BlueArc {
    pub lo: NodeId,
    pub hi: NodeId,
    pub near_lo: NodeId,
    pub near_hi: NodeId,
    pub cost: Cost,
    pub fgw: Cost,
    pub weight: Cost,
}

/// Fully materialized recovery graph, as built by the centralized reference.
/// The distributed protocol never materializes this; it discovers blue arcs
/// lazily by querying children.
#[derive(Clone, Debug, Default)]
pub struct RecoveryGraph {
    pub failed: NodeId,
    pub children: Vec<NodeId>,
    pub greens: BTreeMap<NodeId, GreenArc>,
    pub blues: BTreeMap<(NodeId, NodeId), BlueArc>,
}

impl RecoveryGraph {
    /// One node per child plus the sink-side node.
    pub fn node_count(&self) -> usize {
        self.children.len() + 1
    }
}

/// Derives a blue weight from the fixed green weight of the same edge:
/// subtracting twice the failed node's distance and the two child link costs
/// leaves exactly the in-subtree legs plus the edge itself.
pub fn blue_weight_from_green(
    fgw: Cost,
    d_s_w: Cost,
    cost_w_wu: Cost,
    cost_w_wv: Cost,
) -> Result<Cost> {
    let subtract = d_s_w + d_s_w + cost_w_wu + cost_w_wv;
    fgw.checked_sub(subtract).ok_or_else(|| Error::WeightInconsistency {
        from: fgw.to_string(),
        subtract: subtract.to_string(),
    })
}

/// Expands a witness chain into the physical walk it stands for.
///
/// Starting at `child`, each blue witness descends the current subtree to
/// `near`, crosses to `far`, and climbs to the sibling subtree's root; the
/// final green witness crosses and then climbs all the way to the sink.
/// The result is a walk: nodes may repeat, edges never include the failed
/// node's links.
pub fn expand_path(
    tree: &ShortestPathTree,
    child: NodeId,
    chain: &[HopEdge],
) -> Result<Vec<NodeId>> {
    if chain.is_empty() {
        return Err(Error::BadHopChain("empty witness chain".into()));
    }
    let mut path: Vec<NodeId> = Vec::new();
    let push = |path: &mut Vec<NodeId>, v: NodeId| {
        if path.last() != Some(&v) {
            path.push(v);
        }
    };
    let mut segment_root = child;
    for (i, hop) in chain.iter().enumerate() {
        // Descend from the segment root to the near endpoint.
        let down = tree.tree_path(hop.near, segment_root).map_err(|_| {
            Error::BadHopChain(format!(
                "witness endpoint {} is outside the subtree of {}",
                hop.near, segment_root
            ))
        })?;
        for &v in down.iter().rev() {
            push(&mut path, v);
        }
        push(&mut path, hop.far);
        if i + 1 < chain.len() {
            // Blue hop: climb to the sibling root, i.e. the child of the
            // failed node whose subtree holds `far`.
            let failed = tree.parent(segment_root).ok_or_else(|| {
                Error::BadHopChain("blue witness chained at the tree root".into())
            })?;
            let up = tree.tree_path(hop.far, failed)?;
            if up.len() < 2 {
                return Err(Error::BadHopChain(format!(
                    "blue witness endpoint {} is not inside a sibling subtree",
                    hop.far
                )));
            }
            // Path runs far .. sibling_root, failed; drop the failed node.
            for &v in &up[1..up.len() - 1] {
                push(&mut path, v);
            }
            segment_root = up[up.len() - 2];
        } else {
            // Green hop: climb from far to the sink.
            let up = tree.tree_path(hop.far, tree.root())?;
            for &v in &up[1..] {
                push(&mut path, v);
            }
        }
    }
    Ok(path)
}

/// Sum of edge costs along a walk; errors if a step is not a graph edge.
pub fn walk_cost(graph: &Graph, path: &[NodeId]) -> Result<Cost> {
    let mut total = Cost::ZERO;
    for pair in path.windows(2) {
        total += graph.edge_cost(pair[0], pair[1]).ok_or(Error::InvalidEdge {
            u: pair[0].0,
            v: pair[1].0,
            reason: "walk step is not an edge",
        })?;
    }
    Ok(total)
}
