//! Ground-truth engines: a centralized reference that rebuilds every
//! recovery table from global knowledge, exact optimal alternates computed
//! on the node- or link-deleted graph, and stretch reporting.
//!
//! The reference classifies edges by nearest common ancestor and weighs arcs
//! with the direct leg-sum formulas, while the protocol derives the same
//! numbers by carrying fixed weights and subtracting locally known terms.
//! Agreement between the two routes is the core conformance check.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::labels::{centralized_labels, DfsLabels};
use crate::recovery::{
    expand_path, BlueArc, GreenArc, HopEdge, LinkRecoveryEntry, RecoveryEntry, RecoveryGraph,
    RecoveryTable,
};
use crate::spt::{dijkstra_spt, ShortestPathTree};
use crate::stores::{fixed_green_weight, StoredEdge};

/// Shortest distances and parents from `source` in the graph with an
/// optional node removed (plus all its edges) and an optional edge removed.
fn masked_dijkstra(
    graph: &Graph,
    source: NodeId,
    skip_node: Option<NodeId>,
    skip_edge: Option<(NodeId, NodeId)>,
) -> (Vec<Option<Cost>>, Vec<Option<NodeId>>) {
    let n = graph.node_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    let skipped = |a: NodeId, b: NodeId| {
        skip_edge.is_some_and(|(u, v)| (a, b) == (u, v) || (b, a) == (u, v))
    };
    if Some(source) == skip_node {
        return (dist, parent);
    }
    dist[source.idx()] = Some(Cost::ZERO);
    heap.push(Reverse((Cost::ZERO, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v.idx()] {
            continue;
        }
        settled[v.idx()] = true;
        for &(nb, cost) in graph.neighbors(v) {
            if Some(nb) == skip_node || nb == source || settled[nb.idx()] || skipped(v, nb) {
                continue;
            }
            let candidate = d + cost;
            match dist[nb.idx()] {
                Some(cur) if candidate > cur => {}
                Some(cur) if candidate == cur => {
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
    (dist, parent)
}

fn walk_to_source(parent: &[Option<NodeId>], from: NodeId, source: NodeId) -> Vec<NodeId> {
    let mut path = vec![from];
    let mut cur = from;
    while cur != source {
        cur = parent[cur.idx()].expect("reachable");
        path.push(cur);
    }
    path
}

/// Exact best alternate for one child of a failed node: a fresh shortest
/// path from the child to the sink in the graph without the failed node and
/// its edges.
pub fn optimal_alternate(
    graph: &Graph,
    sink: NodeId,
    failed: NodeId,
    child: NodeId,
) -> Result<(Cost, Vec<NodeId>)> {
    let (dist, parent) = masked_dijkstra(graph, sink, Some(failed), None);
    match dist[child.idx()] {
        Some(d) => Ok((d, walk_to_source(&parent, child, sink))),
        None => Err(Error::NotBiconnectedFor { failed, child }),
    }
}

/// Exact best alternates for every child of `failed` in one sweep.
pub fn optimal_alternates_for(
    graph: &Graph,
    sink: NodeId,
    tree: &ShortestPathTree,
    failed: NodeId,
) -> Result<Vec<(NodeId, Cost)>> {
    let (dist, _) = masked_dijkstra(graph, sink, Some(failed), None);
    tree.children(failed)
        .iter()
        .map(|&c| match dist[c.idx()] {
            Some(d) => Ok((c, d)),
            None => Err(Error::NotBiconnectedFor { failed, child: c }),
        })
        .collect()
}

/// Exact best alternate when the tree link from `node` to its parent fails.
pub fn optimal_link_alternate(graph: &Graph, sink: NodeId, tree: &ShortestPathTree, node: NodeId)
    -> Result<(Cost, Vec<NodeId>)>
{
    let parent = tree.parent(node).ok_or(Error::SinkCannotFail)?;
    let (dist, parents) = masked_dijkstra(graph, sink, None, Some((node, parent)));
    match dist[node.idx()] {
        Some(d) => Ok((d, walk_to_source(&parents, node, sink))),
        None => Err(Error::BridgeEdge(node)),
    }
}

/// Builds every recovery graph by classifying each non-tree edge at its
/// endpoints' nearest common ancestor and along the two climbing paths.
pub fn build_recovery_graphs(
    graph: &Graph,
    tree: &ShortestPathTree,
    labels: &DfsLabels,
) -> Vec<RecoveryGraph> {
    let dist = tree.dists();
    let mut graphs: Vec<RecoveryGraph> = graph
        .nodes()
        .map(|x| RecoveryGraph {
            failed: x,
            children: tree.children(x).to_vec(),
            ..RecoveryGraph::default()
        })
        .collect();

    for edge in graph.edges() {
        if tree.is_tree_edge(edge.u, edge.v) {
            continue;
        }
        let fgw = fixed_green_weight(edge, dist);
        let w = labels.nca(tree, edge.u, edge.v);

        // Green along both climbing paths, excluding the endpoints and the
        // ancestor itself: each intermediate node z sees the edge escape its
        // subtree from the side of the child it came up through.
        let mut climb = |endpoint: NodeId, other: NodeId| {
            // When the ancestor is the endpoint itself this side contributes
            // nothing: the edge never leaves any subtree on the way up.
            if endpoint == w {
                return endpoint;
            }
            let mut below = endpoint;
            let mut z = tree.parent(endpoint);
            while let Some(zn) = z {
                if zn == w {
                    break;
                }
                let stored = StoredEdge { near: endpoint, far: other, cost: edge.cost, fgw };
                // Direct leg-sum weight: descent within the child's subtree,
                // the edge itself, then the far endpoint's way home.
                let green_weight = (dist[endpoint.idx()]
                    .checked_sub(dist[below.idx()])
                    .expect("descendant is farther"))
                    + edge.cost
                    + dist[other.idx()];
                let arc = GreenArc { edge: stored, weight: green_weight };
                let g = &mut graphs[zn.idx()];
                match g.greens.get(&below) {
                    Some(cur)
                        if (cur.weight, cur.edge.pair()) <= (arc.weight, arc.edge.pair()) => {}
                    _ => {
                        g.greens.insert(below, arc);
                    }
                }
                below = zn;
                z = tree.parent(zn);
            }
            below
        };
        let wu = climb(edge.u, edge.v);
        let wv = climb(edge.v, edge.u);

        // Blue exactly at the ancestor, keyed by its two children whose
        // subtrees hold the endpoints; skipped when the ancestor is an
        // endpoint (the edge is useless in its own recovery graph).
        if w != edge.u && w != edge.v {
            let (lo, hi, near_lo, near_hi) = if wu < wv {
                (wu, wv, edge.u, edge.v)
            } else {
                (wv, wu, edge.v, edge.u)
            };
            // Leg-sum weight: distance from each subtree root to its
            // endpoint, plus the edge itself.
            let weight = (dist[near_lo.idx()].checked_sub(dist[lo.idx()]).expect("descendant"))
                + edge.cost
                + (dist[near_hi.idx()].checked_sub(dist[hi.idx()]).expect("descendant"));
            let arc = BlueArc { lo, hi, near_lo, near_hi, cost: edge.cost, fgw, weight };
            let g = &mut graphs[w.idx()];
            let key = (lo, hi);
            match g.blues.get(&key) {
                Some(cur)
                    if (cur.weight, edge_pair(cur)) <= (arc.weight, edge_pair(&arc)) => {}
                _ => {
                    g.blues.insert(key, arc);
                }
            }
        }
    }
    graphs
}

fn edge_pair(arc: &BlueArc) -> (NodeId, NodeId) {
    let (a, b) = (arc.near_lo, arc.near_hi);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Solves one recovery graph: shortest distances from the sink-side node to
/// every child node, with the same tie-breaking the protocol uses, then
/// expands witness chains to physical routes.
fn solve_recovery_graph(
    rg: &RecoveryGraph,
    tree: &ShortestPathTree,
) -> Result<RecoveryTable> {
    #[derive(Copy, Clone)]
    struct Route {
        cost: Cost,
        witness: HopEdge,
        pred: Option<NodeId>,
    }
    let mut tentative: std::collections::BTreeMap<NodeId, Route> = Default::default();
    let mut settled: std::collections::BTreeMap<NodeId, Route> = Default::default();
    let mut heap = BinaryHeap::new();
    for (&c, green) in &rg.greens {
        let route = Route {
            cost: green.weight,
            witness: HopEdge { near: green.edge.near, far: green.edge.far },
            pred: None,
        };
        tentative.insert(c, route);
        heap.push(Reverse((green.weight, c)));
    }
    while settled.len() < rg.children.len() {
        let c = loop {
            match heap.pop() {
                None => {
                    let stuck = rg
                        .children
                        .iter()
                        .copied()
                        .find(|c| !settled.contains_key(c))
                        .expect("unsettled child exists");
                    return Err(Error::NotBiconnectedFor { failed: rg.failed, child: stuck });
                }
                Some(Reverse((cost, c))) => {
                    if settled.contains_key(&c) {
                        continue;
                    }
                    match tentative.get(&c) {
                        Some(r) if r.cost == cost => break c,
                        _ => continue,
                    }
                }
            }
        };
        let route = tentative.remove(&c).expect("fresh");
        settled.insert(c, route);
        // Relax this child's blue bridges toward still-unsettled siblings.
        for (&(lo, hi), blue) in &rg.blues {
            let (other, near_self, near_other) = if lo == c {
                (hi, blue.near_lo, blue.near_hi)
            } else if hi == c {
                (lo, blue.near_hi, blue.near_lo)
            } else {
                continue;
            };
            if settled.contains_key(&other) {
                continue;
            }
            let candidate = route.cost + blue.weight;
            let better = tentative.get(&other).is_none_or(|cur| candidate < cur.cost);
            if better {
                tentative.insert(
                    other,
                    Route {
                        cost: candidate,
                        witness: HopEdge { near: near_other, far: near_self },
                        pred: Some(c),
                    },
                );
                heap.push(Reverse((candidate, other)));
            }
        }
    }

    let mut entries = Vec::with_capacity(rg.children.len());
    for &child in &rg.children {
        let route = settled[&child];
        let mut chain = Vec::new();
        let mut cursor = child;
        loop {
            let r = settled[&cursor];
            chain.push(r.witness);
            match r.pred {
                Some(p) => cursor = p,
                None => break,
            }
        }
        let path = expand_path(tree, child, &chain)?;
        entries.push(RecoveryEntry { child, cost: route.cost, hop_chain: chain, path });
    }
    Ok(RecoveryTable { failed: rg.failed, entries })
}

/// Centralized reference for the whole network: recovery tables for every
/// node except the sink, identical in form and content to the protocol's.
pub fn centralized_snfr(graph: &Graph, sink: NodeId) -> Result<Vec<RecoveryTable>> {
    let tree = dijkstra_spt(graph, sink)?;
    let labels = centralized_labels(&tree);
    let graphs = build_recovery_graphs(graph, &tree, &labels);
    graph
        .nodes()
        .filter(|&x| x != sink)
        .map(|x| solve_recovery_graph(&graphs[x.idx()], &tree))
        .collect()
}

/// Centralized link-failure reference: for every non-sink node, the best
/// edge leaving its subtree, expanded like a green-only route.
pub fn centralized_link_recovery(graph: &Graph, sink: NodeId) -> Result<Vec<LinkRecoveryEntry>> {
    let tree = dijkstra_spt(graph, sink)?;
    let labels = centralized_labels(&tree);
    let dist = tree.dists();
    let mut best: Vec<Option<StoredEdge>> = vec![None; graph.node_count()];
    for edge in graph.edges() {
        if tree.is_tree_edge(edge.u, edge.v) {
            continue;
        }
        let fgw = fixed_green_weight(edge, dist);
        // The edge leaves the subtree of every node on either climbing path
        // below the common ancestor, endpoints included this time.
        let w = labels.nca(&tree, edge.u, edge.v);
        let mut climb = |endpoint: NodeId, other: NodeId| {
            let mut z = endpoint;
            while z != w {
                let stored = StoredEdge { near: endpoint, far: other, cost: edge.cost, fgw };
                let slot = &mut best[z.idx()];
                if slot.is_none_or(|cur| stored.rank() < cur.rank()) {
                    *slot = Some(stored);
                }
                z = tree.parent(z).expect("ancestor above");
            }
        };
        climb(edge.u, edge.v);
        climb(edge.v, edge.u);
    }
    let mut entries = Vec::new();
    for x in graph.nodes().filter(|&x| x != sink) {
        let edge = best[x.idx()].ok_or(Error::BridgeEdge(x))?;
        let cost = edge.fgw.checked_sub(tree.dist(x)).expect("near endpoint below x");
        let witness = HopEdge { near: edge.near, far: edge.far };
        let path = expand_path(&tree, x, &[witness])?;
        entries.push(LinkRecoveryEntry { node: x, cost, witness, path });
    }
    Ok(entries)
}

/// Ratio of protocol route cost to the optimal alternate, per entry.
#[derive(Clone, Debug, Serialize)]
pub struct StretchEntry {
    pub failed: NodeId,
    pub child: NodeId,
    pub optimal: Cost,
    pub protocol: Cost,
    pub ratio: f64,
}

/// Comparison of every protocol route against the exact optimum.
#[derive(Clone, Debug, Serialize)]
pub struct StretchReport {
    pub entries: Vec<StretchEntry>,
    pub mean_ratio: f64,
    pub max_ratio: f64,
}

/// Compares each table entry against a fresh optimal alternate.
pub fn stretch_report(
    graph: &Graph,
    sink: NodeId,
    tables: &[RecoveryTable],
) -> Result<StretchReport> {
    let tree = dijkstra_spt(graph, sink)?;
    let mut entries = Vec::new();
    for table in tables {
        if table.entries.is_empty() {
            continue;
        }
        let optima = optimal_alternates_for(graph, sink, &tree, table.failed)?;
        for entry in &table.entries {
            let (_, optimal) = optima
                .iter()
                .find(|(c, _)| *c == entry.child)
                .copied()
                .ok_or_else(|| Error::Verify(format!(
                    "entry for ({}, {}) missing from the oracle sweep",
                    table.failed, entry.child
                )))?;
            let ratio = entry.cost.as_f64() / optimal.as_f64();
            entries.push(StretchEntry {
                failed: table.failed,
                child: entry.child,
                optimal,
                protocol: entry.cost,
                ratio,
            });
        }
    }
    let (mean_ratio, max_ratio) = if entries.is_empty() {
        (1.0, 1.0)
    } else {
        let sum: f64 = entries.iter().map(|e| e.ratio).sum();
        let max = entries.iter().map(|e| e.ratio).fold(1.0f64, f64::max);
        (sum / entries.len() as f64, max)
    };
    Ok(StretchReport { entries, mean_ratio, max_ratio })
}

/// Checks one recovery entry for feasibility: right endpoints, failed node
/// and its edges avoided, and the exact cost identity.
pub fn validate_recovery_entry(
    graph: &Graph,
    sink: NodeId,
    failed: NodeId,
    entry: &RecoveryEntry,
) -> Result<()> {
    let fail = |what: String| Err(Error::Verify(format!(
        "entry ({failed}, {}): {what}",
        entry.child
    )));
    if entry.path.first() != Some(&entry.child) {
        return fail("path does not start at the child".into());
    }
    if entry.path.last() != Some(&sink) {
        return fail("path does not end at the sink".into());
    }
    if entry.path.contains(&failed) {
        return fail("path visits the failed node".into());
    }
    let total = crate::recovery::walk_cost(graph, &entry.path)?;
    if total != entry.cost {
        return fail(format!("path sums to {total}, table says {}", entry.cost));
    }
    if entry.hop_chain.is_empty() {
        return fail("empty hop chain".into());
    }
    Ok(())
}

/// The exact number of edge-report deliveries collection must perform:
/// each non-tree edge climbs from both endpoints to their nearest common
/// ancestor, one delivery per hop; a side vanishes when the ancestor is the
/// endpoint itself.
pub fn expected_edge_report_deliveries(graph: &Graph, tree: &ShortestPathTree) -> u64 {
    let mut total = 0u64;
    for edge in graph.edges() {
        if tree.is_tree_edge(edge.u, edge.v) {
            continue;
        }
        let w = nca_by_parent_walk(tree, edge.u, edge.v);
        total += (tree.depth(edge.u) - tree.depth(w)) as u64;
        total += (tree.depth(edge.v) - tree.depth(w)) as u64;
    }
    total
}

/// Ancestor oracle independent of interval labels: climb both nodes to the
/// same depth, then in lockstep.
pub fn nca_by_parent_walk(tree: &ShortestPathTree, u: NodeId, v: NodeId) -> NodeId {
    let (mut a, mut b) = (u, v);
    let (mut da, mut db) = (tree.depth(a), tree.depth(b));
    while da > db {
        a = tree.parent(a).expect("depth positive");
        da -= 1;
    }
    while db > da {
        b = tree.parent(b).expect("depth positive");
        db -= 1;
    }
    while a != b {
        a = tree.parent(a).expect("common root exists");
        b = tree.parent(b).expect("common root exists");
    }
    a
}
