//! Biconnectivity testing.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// True iff the graph is connected and has no articulation point, i.e.
/// deleting any single node leaves it connected. Requires `n >= 3`.
///
/// Iterative lowpoint depth-first search, so deep graphs cannot overflow
/// the call stack.
pub fn is_biconnected(graph: &Graph) -> Result<bool> {
    let n = graph.node_count();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }

    let mut disc = vec![u32::MAX; n]; // discovery order, MAX = unvisited
    let mut low = vec![u32::MAX; n];
    let mut timer = 0u32;

    // Stack frames: (node, parent, next neighbor index).
    let root = NodeId(0);
    let mut stack: Vec<(NodeId, Option<NodeId>, usize)> = vec![(root, None, 0)];
    disc[root.idx()] = 0;
    low[root.idx()] = 0;
    timer += 1;
    let mut root_children = 0u32;

    while let Some(top) = stack.last_mut() {
        let (v, parent) = (top.0, top.1);
        let neighbors = graph.neighbors(v);
        if top.2 < neighbors.len() {
            let (nb, _) = neighbors[top.2];
            top.2 += 1;
            if Some(nb) == parent {
                continue;
            }
            if disc[nb.idx()] == u32::MAX {
                disc[nb.idx()] = timer;
                low[nb.idx()] = timer;
                timer += 1;
                if v == root {
                    root_children += 1;
                }
                stack.push((nb, Some(v), 0));
            } else {
                low[v.idx()] = low[v.idx()].min(disc[nb.idx()]);
            }
        } else {
            stack.pop();
            if let Some(p) = parent {
                low[p.idx()] = low[p.idx()].min(low[v.idx()]);
                // Non-root p is an articulation point if no back edge from
                // v's subtree climbs strictly above p.
                if p != root && low[v.idx()] >= disc[p.idx()] {
                    return Ok(false);
                }
            }
        }
    }

    if disc.contains(&u32::MAX) {
        return Ok(false); // disconnected
    }
    Ok(root_children < 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::fixtures::g2;

    fn unit_graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, Cost::from_units(1)))).unwrap()
    }

    /// Deletes each node in turn and checks the remainder stays connected.
    fn naive_biconnected(graph: &Graph) -> bool {
        let n = graph.node_count();
        for skip in 0..n as u32 {
            let mut seen = vec![false; n];
            let start = (0..n as u32).find(|&v| v != skip).unwrap();
            let mut stack = vec![NodeId(start)];
            seen[start as usize] = true;
            while let Some(v) = stack.pop() {
                for &(nb, _) in graph.neighbors(v) {
                    if nb.0 != skip && !seen[nb.idx()] {
                        seen[nb.idx()] = true;
                        stack.push(nb);
                    }
                }
            }
            let reached = seen.iter().filter(|&&s| s).count();
            if reached != n - 1 {
                return false;
            }
        }
        true
    }

    #[test]
    fn four_cycle_is_biconnected() {
        let g = unit_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(is_biconnected(&g).unwrap());
    }

    #[test]
    fn path_has_a_cut_vertex() {
        let g = unit_graph(3, &[(0, 1), (1, 2)]);
        assert!(!is_biconnected(&g).unwrap());
    }

    #[test]
    fn g2_is_biconnected_and_matches_naive_oracle() {
        let g = g2();
        assert!(is_biconnected(&g).unwrap());
        assert!(naive_biconnected(&g));
    }

    #[test]
    fn too_small_errors() {
        let g = unit_graph(2, &[(0, 1)]);
        assert!(matches!(is_biconnected(&g), Err(Error::TooSmall { n: 2, min: 3 })));
    }

    #[test]
    fn disconnected_is_not_biconnected() {
        let g = unit_graph(4, &[(0, 1), (2, 3)]);
        assert!(!is_biconnected(&g).unwrap());
    }

    #[test]
    fn agrees_with_naive_oracle_on_assorted_graphs() {
        let cases: Vec<(usize, Vec<(u32, u32)>)> = vec![
            (4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
            (5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]), // hinge at 2
            (5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]),
            (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
            (4, vec![(0, 1), (1, 2), (2, 3)]),
        ];
        for (n, edges) in cases {
            let g = unit_graph(n, &edges);
            assert_eq!(
                is_biconnected(&g).unwrap(),
                naive_biconnected(&g),
                "disagreement on {edges:?}"
            );
        }
    }
}
