//! The distributed protocol: one actor per node, driven over the simulator.
//!
//! A node knows only local facts: its distance to the sink, its tree parent
//! and children with the connecting link costs, its incident edges with the
//! neighbors' distances (and, once labeling finishes, the neighbors' label
//! positions). Everything else it learns from messages.
//!
//! The pipeline is: interval labeling (wakeup, count, allocation), non-tree
//! edge collection into the per-node stores, then on-demand recovery
//! computations that fetch blue edges from children as the search needs them.

mod collect;
mod labeling;
mod recovery_run;

use std::collections::BTreeMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::labels::DfsLabels;
use crate::sim::{Actor, Message, Outbox, Payload, SimConfig, SimNetwork, SimStats};
use crate::spt::{dijkstra_spt, ShortestPathTree};
use crate::stores::{MinEdgeMap, NonTreeEdgeMsg, StoredEdge};

pub use recovery_run::BlueFetch;

/// Interval of one sibling, piggybacked on allocation messages.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SiblingInterval {
    pub node: NodeId,
    pub start: u32,
    pub end: u32,
}

/// Protocol message payloads.
#[derive(Clone, Debug)]
pub enum ProtocolMsg {
    /// Top-down: start counting your subtree.
    Wake,
    /// Bottom-up: my subtree holds this many nodes.
    Count { size: u32 },
    /// Top-down: your interval, plus your parent's and siblings' intervals.
    Allocate {
        start: u32,
        end: u32,
        parent: SiblingInterval,
        siblings: Vec<SiblingInterval>,
    },
    /// A non-tree edge climbing toward the endpoints' common ancestor.
    EdgeReport(NonTreeEdgeMsg),
    /// Parent asks a child for its blue-edge store.
    BlueFetchRequest,
    /// The child's entire blue store, one entry per sibling.
    BlueFetchResponse { edges: Vec<(NodeId, StoredEdge)> },
}

impl Payload for ProtocolMsg {
    fn kind(&self) -> &'static str {
        match self {
            ProtocolMsg::Wake => "wake",
            ProtocolMsg::Count { .. } => "count",
            ProtocolMsg::Allocate { .. } => "allocate",
            ProtocolMsg::EdgeReport(_) => "edge-report",
            ProtocolMsg::BlueFetchRequest => "blue-fetch-request",
            ProtocolMsg::BlueFetchResponse { .. } => "blue-fetch-response",
        }
    }
}

/// Message kinds that belong to the labeling phases.
pub const LABEL_KINDS: [&str; 3] = ["wake", "count", "allocate"];

/// A fault a handler records instead of returning, surfaced after the run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Fault {
    CountCorruption,
    LabelInconsistency { endpoint: NodeId },
}

/// One incident edge as the owning node sees it.
#[derive(Copy, Clone, Debug)]
pub(crate) struct IncidentEdge {
    pub neighbor: NodeId,
    pub cost: Cost,
    /// Neighbor's distance to the sink; known locally, like next-hop tables.
    pub neighbor_dist: Cost,
    pub is_tree: bool,
    /// Neighbor's dfsStart, installed after labeling.
    pub neighbor_pos: Option<u32>,
}

/// Per-node protocol state machine.
#[derive(Clone, Debug)]
pub struct NodeActor {
    pub(crate) id: NodeId,
    pub(crate) parent: Option<NodeId>,
    pub(crate) parent_is_root: bool,
    pub(crate) children: Vec<NodeId>,
    pub(crate) dist: Cost,
    pub(crate) incident: Vec<IncidentEdge>,

    // Labeling state.
    pub(crate) woken: bool,
    pub(crate) pending_counts: usize,
    pub(crate) subtree_size: u32,
    pub(crate) child_sizes: BTreeMap<NodeId, u32>,
    pub(crate) interval: Option<(u32, u32)>,
    pub(crate) parent_interval: Option<(u32, u32)>,
    pub(crate) sibling_intervals: Vec<SiblingInterval>,
    pub(crate) child_intervals: BTreeMap<NodeId, (u32, u32)>,
    /// Set at the root once every child reported its subtree size.
    pub(crate) total_nodes: Option<u32>,

    // Edge stores.
    pub(crate) green: MinEdgeMap,
    pub(crate) blue: MinEdgeMap,

    // In-flight recovery computation, if any.
    pub(crate) run: Option<recovery_run::RecoveryRun>,
    /// Response to a standalone blue fetch issued outside a recovery run.
    pub(crate) standalone_fetch: Option<BlueFetch>,

    pub(crate) fault: Option<Fault>,
}

impl NodeActor {
    fn new(
        id: NodeId,
        tree: &ShortestPathTree,
        graph: &Graph,
    ) -> NodeActor {
        let parent = tree.parent(id);
        let incident = graph
            .neighbors(id)
            .iter()
            .map(|&(nb, cost)| IncidentEdge {
                neighbor: nb,
                cost,
                neighbor_dist: tree.dist(nb),
                is_tree: tree.is_tree_edge(id, nb),
                neighbor_pos: None,
            })
            .collect();
        NodeActor {
            id,
            parent,
            parent_is_root: parent == Some(tree.root()),
            children: tree.children(id).to_vec(),
            dist: tree.dist(id),
            incident,
            woken: false,
            pending_counts: 0,
            subtree_size: 0,
            child_sizes: BTreeMap::new(),
            interval: None,
            parent_interval: None,
            sibling_intervals: Vec::new(),
            child_intervals: BTreeMap::new(),
            total_nodes: None,
            green: MinEdgeMap::new(),
            blue: MinEdgeMap::new(),
            run: None,
            standalone_fetch: None,
            fault: None,
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    /// This node's label interval, once allocated.
    pub fn interval(&self) -> Option<(u32, u32)> {
        self.interval
    }

    pub fn sibling_intervals(&self) -> &[SiblingInterval] {
        &self.sibling_intervals
    }

    /// Cheapest green edge per child subtree.
    pub fn green_store(&self) -> &MinEdgeMap {
        &self.green
    }

    /// Cheapest blue edge per sibling subtree.
    pub fn blue_store(&self) -> &MinEdgeMap {
        &self.blue
    }

    pub(crate) fn cost_to(&self, neighbor: NodeId) -> Option<Cost> {
        self.incident.iter().find(|e| e.neighbor == neighbor).map(|e| e.cost)
    }

    /// True iff a label position falls inside this node's interval, i.e. the
    /// labeled node lies in this node's subtree.
    pub(crate) fn contains_pos(&self, pos: u32) -> bool {
        let (lo, hi) = self.interval.expect("labels assigned");
        lo <= pos && pos <= hi
    }
}

impl Actor for NodeActor {
    type Payload = ProtocolMsg;

    fn on_message(&mut self, msg: Message<ProtocolMsg>, ctx: &mut Outbox<ProtocolMsg>) {
        match msg.payload {
            ProtocolMsg::Wake => self.on_wake(ctx),
            ProtocolMsg::Count { size } => self.on_count(msg.from, size, ctx),
            ProtocolMsg::Allocate { start, end, parent, siblings } => {
                self.on_allocate(start, end, parent, siblings, ctx)
            }
            ProtocolMsg::EdgeReport(report) => self.record_non_tree_edge(msg.from, report, ctx),
            ProtocolMsg::BlueFetchRequest => {
                let edges = self.blue.iter().map(|(k, e)| (k, *e)).collect();
                ctx.reply(msg.from, ProtocolMsg::BlueFetchResponse { edges });
            }
            ProtocolMsg::BlueFetchResponse { edges } => {
                self.on_blue_fetch_response(msg.from, edges, ctx)
            }
        }
    }
}

/// The simulated network plus the static topology the operator knows.
///
/// Drives the protocol phase by phase; actors only ever exchange messages
/// along tree and graph edges.
pub struct Network {
    pub(crate) sim: SimNetwork<NodeActor>,
    graph: Graph,
    tree: ShortestPathTree,
}

impl Network {
    /// Builds the shortest-path tree of `sink` and installs one actor per
    /// node with its local view.
    pub fn new(graph: Graph, sink: NodeId, config: SimConfig) -> Result<Network> {
        let tree = dijkstra_spt(&graph, sink)?;
        let actors = graph.nodes().map(|v| NodeActor::new(v, &tree, &graph)).collect();
        let sim = SimNetwork::new(&graph, actors, config);
        Ok(Network { sim, graph, tree })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tree(&self) -> &ShortestPathTree {
        &self.tree
    }

    pub fn sink(&self) -> NodeId {
        self.tree.root()
    }

    pub fn actor(&self, id: NodeId) -> &NodeActor {
        self.sim.actor(id)
    }

    pub fn stats(&self) -> SimStats {
        self.sim.stats()
    }

    /// Total label-phase messages sent so far.
    pub fn label_message_total(&self) -> u64 {
        let stats = self.sim.stats();
        LABEL_KINDS.iter().map(|k| stats.sends_of(k)).sum()
    }

    /// Labels gathered from the actors; errors if any node is unlabeled.
    pub fn labels(&self) -> Result<DfsLabels> {
        let n = self.graph.node_count();
        let mut start = vec![0u32; n];
        let mut end = vec![0u32; n];
        for v in self.graph.nodes() {
            let (lo, hi) = self
                .actor(v)
                .interval
                .ok_or_else(|| Error::Verify(format!("node {v} has no labels")))?;
            start[v.idx()] = lo;
            end[v.idx()] = hi;
        }
        Ok(DfsLabels::new(start, end))
    }

    /// Surfaces the first recorded handler fault, by node id.
    pub(crate) fn check_faults(&self) -> Result<()> {
        for v in self.graph.nodes() {
            match self.actor(v).fault {
                None => {}
                Some(Fault::CountCorruption) => return Err(Error::CountCorruption(v)),
                Some(Fault::LabelInconsistency { endpoint }) => {
                    return Err(Error::LabelInconsistency { node: v, endpoint })
                }
            }
        }
        Ok(())
    }

    /// Store dump: one `BLUE`/`GREEN` line per store entry, nodes ascending.
    pub fn store_dump(&self) -> String {
        let mut out = String::new();
        for v in self.graph.nodes() {
            let actor = self.actor(v);
            out.push_str(&format!("node {v}\n"));
            for (sibling, e) in actor.blue.iter() {
                out.push_str(&format!(
                    "BLUE {sibling} {} {} {} {}\n",
                    e.near, e.far, e.cost, e.fgw
                ));
            }
            for (child, e) in actor.green.iter() {
                out.push_str(&format!(
                    "GREEN {child} {} {} {} {}\n",
                    e.near, e.far, e.cost, e.fgw
                ));
            }
        }
        out
    }
}
