//! Undirected edge-weighted network graph and its text format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};

/// Identifier of a network node, `0..n-1`.
#[derive(
    Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Index into per-node arrays.
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// An undirected edge with canonical endpoint order `u < v`.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Cost,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, cost: Cost) -> Edge {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, cost }
    }

    /// The endpoint that is not `node`; `None` if `node` is not an endpoint.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if node == self.u {
            Some(self.v)
        } else if node == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

/// Simple undirected graph: no self loops, at most one edge per pair,
/// non-negative finite costs.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(NodeId, Cost)>>,
}

impl Graph {
    /// Builds a graph from raw `(u, v, cost)` triples. Duplicate pairs keep
    /// the cheapest cost; self loops and out-of-range ids are errors.
    pub fn from_edges(
        n: usize,
        raw: impl IntoIterator<Item = (u32, u32, Cost)>,
    ) -> Result<Graph> {
        let mut cheapest: BTreeMap<(u32, u32), Cost> = BTreeMap::new();
        for (a, b, cost) in raw {
            if a == b {
                return Err(Error::InvalidEdge { u: a, v: b, reason: "self loop" });
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidEdge { u: a, v: b, reason: "node id out of range" });
            }
            let key = (a.min(b), a.max(b));
            let entry = cheapest.entry(key).or_insert(cost);
            if cost < *entry {
                *entry = cost;
            }
        }
        let edges: Vec<Edge> = cheapest
            .into_iter()
            .map(|((u, v), cost)| Edge { u: NodeId(u), v: NodeId(v), cost })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u.idx()].push((e.v, e.cost));
            adj[e.v.idx()].push((e.u, e.cost));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|(nb, _)| *nb);
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical `(u, v)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with edge costs, ascending by neighbor id.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Cost)] {
        &self.adj[v.idx()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n as u32).map(NodeId)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edge_cost(a, b).is_some()
    }

    pub fn edge_cost(&self, a: NodeId, b: NodeId) -> Option<Cost> {
        self.adj[a.idx()]
            .binary_search_by_key(&b, |(nb, _)| *nb)
            .ok()
            .map(|i| self.adj[a.idx()][i].1)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v.idx()].len()
    }

    /// Parses the text format: first line `n m`, then `m` lines `u v cost`.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, reason: "missing header line".into() })?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: line_no, reason: "bad node count".into() })?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: line_no, reason: "bad edge count".into() })?;
        if parts.next().is_some() {
            return Err(Error::Parse { line: line_no, reason: "trailing tokens in header".into() });
        }

        let mut raw = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| Error::Parse { line: 0, reason: "fewer edges than declared".into() })?;
            let mut parts = line.split_whitespace();
            let mut field = |name: &str| {
                parts.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    reason: format!("missing {name}"),
                })
            };
            let u: u32 = field("u")?
                .parse()
                .map_err(|_| Error::Parse { line: line_no, reason: "bad node id".into() })?;
            let v: u32 = field("v")?
                .parse()
                .map_err(|_| Error::Parse { line: line_no, reason: "bad node id".into() })?;
            let cost: Cost = field("cost")?
                .parse()
                .map_err(|e| Error::Parse { line: line_no, reason: format!("bad cost: {e}") })?;
            raw.push((u, v, cost));
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse { line: line_no, reason: "more edges than declared".into() });
        }
        Graph::from_edges(n, raw)
    }

    /// Renders the text format consumed by [`Graph::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.cost));
        }
        out
    }
}
