//! Shared helpers for the integration suites: brute-force oracles that stay
//! deliberately independent of the library's algorithms.

// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use snfr::{Cost, Graph, NodeId, ShortestPathTree};

/// Exhaustive shortest path by enumerating every simple path. Exponential;
/// keep `n` small.
pub fn enumerated_shortest(graph: &Graph, from: NodeId, to: NodeId) -> Option<Cost> {
    fn explore(
        graph: &Graph,
        at: NodeId,
        to: NodeId,
        visited: &mut Vec<bool>,
        cost: Cost,
        best: &mut Option<Cost>,
    ) {
        if at == to {
            if best.is_none() || cost < best.unwrap() {
                *best = Some(cost);
            }
            return;
        }
        for &(nb, edge_cost) in graph.neighbors(at) {
            if !visited[nb.idx()] {
                visited[nb.idx()] = true;
                explore(graph, nb, to, visited, cost + edge_cost, best);
                visited[nb.idx()] = false;
            }
        }
    }
    let mut visited = vec![false; graph.node_count()];
    visited[from.idx()] = true;
    let mut best = None;
    explore(graph, from, to, &mut visited, Cost::ZERO, &mut best);
    best
}

/// Exhaustive shortest path in the graph with one node (and its edges)
/// removed.
pub fn enumerated_alternate(
    graph: &Graph,
    sink: NodeId,
    failed: NodeId,
    child: NodeId,
) -> Option<Cost> {
    let filtered: Vec<(u32, u32, Cost)> = graph
        .edges()
        .iter()
        .filter(|e| e.u != failed && e.v != failed)
        .map(|e| (e.u.0, e.v.0, e.cost))
        .collect();
    let masked = Graph::from_edges(graph.node_count(), filtered).unwrap();
    enumerated_shortest(&masked, child, sink)
}

/// Biconnectivity by definition: delete each node in turn and flood fill.
pub fn naive_biconnected(graph: &Graph) -> bool {
    let n = graph.node_count();
    for skip in 0..n as u32 {
        let start = (0..n as u32).find(|&v| v != skip).unwrap();
        let mut seen = vec![false; n];
        seen[start as usize] = true;
        let mut stack = vec![NodeId(start)];
        while let Some(v) = stack.pop() {
            for &(nb, _) in graph.neighbors(v) {
                if nb.0 != skip && !seen[nb.idx()] {
                    seen[nb.idx()] = true;
                    stack.push(nb);
                }
            }
        }
        if seen.iter().filter(|&&s| s).count() != n - 1 {
            return false;
        }
    }
    true
}

/// Ancestor test by raw parent-pointer walking.
pub fn is_ancestor_by_walk(tree: &ShortestPathTree, node: NodeId, ancestor: NodeId) -> bool {
    let mut cur = node;
    loop {
        if cur == ancestor {
            return true;
        }
        match tree.parent(cur) {
            Some(p) => cur = p,
            None => return false,
        }
    }
}

