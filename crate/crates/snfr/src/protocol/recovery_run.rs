//! On-demand recovery computation at a (hypothetically) failing node.
//!
//! The failing node runs a shortest-path search over its recovery graph
//! without ever materializing it: green arcs come from its own store, blue
//! arcs are fetched from a child only at the moment that child's distance is
//! finalized — each child is queried at most once, and the transient state
//! stays proportional to the child count.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::recovery::{
    blue_weight_from_green, expand_path, HopEdge, LinkRecoveryEntry, RecoveryAudit,
    RecoveryEntry, RecoveryTable,
};
use crate::sim::Outbox;
use crate::stores::StoredEdge;

use super::{Network, NodeActor, ProtocolMsg};

/// A finalized or tentative route for one child node of the recovery graph.
#[derive(Copy, Clone, Debug)]
struct Route {
    cost: Cost,
    witness: HopEdge,
    pred: Option<NodeId>,
}

/// Errors that can end a conversation; surfaced by the driver.
#[derive(Clone, Debug)]
enum RunError {
    NotBiconnected { child: NodeId },
    Weight { from: String, subtract: String },
    BadResponse { sibling: NodeId },
}

/// State of one in-flight recovery computation.
#[derive(Clone, Debug)]
pub(crate) struct RecoveryRun {
    children: Vec<NodeId>,
    heap: BinaryHeap<Reverse<(Cost, NodeId)>>,
    tentative: BTreeMap<NodeId, Route>,
    settled: BTreeMap<NodeId, Route>,
    awaiting: Option<NodeId>,
    audit: RecoveryAudit,
    error: Option<RunError>,
    done: bool,
}

/// A standalone blue-store fetch result.
#[derive(Clone, Debug)]
pub struct BlueFetch {
    pub child: NodeId,
    pub edges: Vec<(NodeId, StoredEdge)>,
}

impl NodeActor {
    /// Initializes the candidate queue from the green store: one entry per
    /// child, priority equal to the child's best direct escape (or absent,
    /// standing for infinity), then starts settling.
    pub(crate) fn start_recovery(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        let mut run = RecoveryRun {
            children: self.children.clone(),
            heap: BinaryHeap::new(),
            tentative: BTreeMap::new(),
            settled: BTreeMap::new(),
            awaiting: None,
            audit: RecoveryAudit {
                failed: self.id,
                children: self.children.len() as u32,
                ..RecoveryAudit::default()
            },
            error: None,
            done: false,
        };
        for &c in &self.children {
            let Some(green) = self.green.get(c) else { continue };
            // Full detour weight minus the distance of the child itself:
            // both quantities are known right here.
            let child_dist = self.dist + self.cost_to(c).expect("tree link");
            match green.fgw.checked_sub(child_dist) {
                Some(weight) => {
                    run.audit.relaxations += 1;
                    run.tentative.insert(
                        c,
                        Route {
                            cost: weight,
                            witness: HopEdge { near: green.near, far: green.far },
                            pred: None,
                        },
                    );
                    run.heap.push(Reverse((weight, c)));
                }
                None => {
                    run.error = Some(RunError::Weight {
                        from: green.fgw.to_string(),
                        subtract: child_dist.to_string(),
                    });
                    run.done = true;
                    self.run = Some(run);
                    return;
                }
            }
        }
        self.run = Some(run);
        self.advance_recovery(ctx);
    }

    /// Settles the next queue entry. Either the run completes, or a fetch
    /// goes out and the run resumes when the response arrives.
    fn advance_recovery(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        let Some(mut run) = self.run.take() else { return };
        if run.settled.len() == run.children.len() {
            run.done = true;
            self.run = Some(run);
            return;
        }
        // Lazy-deletion pop: skip stale entries.
        let next = loop {
            match run.heap.pop() {
                None => break None,
                Some(Reverse((cost, c))) => {
                    if run.settled.contains_key(&c) {
                        continue;
                    }
                    match run.tentative.get(&c) {
                        Some(route) if route.cost == cost => break Some(c),
                        _ => continue,
                    }
                }
            }
        };
        match next {
            None => {
                // Queue exhausted with unsettled children: they sit at
                // infinite priority, so no recovery path exists.
                let stuck = run
                    .children
                    .iter()
                    .copied()
                    .find(|c| !run.settled.contains_key(c))
                    .expect("some child unsettled");
                run.error = Some(RunError::NotBiconnected { child: stuck });
                run.done = true;
            }
            Some(c) => {
                let route = run.tentative.remove(&c).expect("fresh entry");
                run.settled.insert(c, route);
                run.audit.extract_mins += 1;
                if run.settled.len() == run.children.len() {
                    run.done = true;
                } else {
                    // Blue edges of a child are pulled exactly once, when it
                    // settles; the final settle needs none.
                    run.audit.blue_fetches += 1;
                    run.awaiting = Some(c);
                    ctx.send(c, ProtocolMsg::BlueFetchRequest);
                }
            }
        }
        self.run = Some(run);
    }

    pub(crate) fn on_blue_fetch_response(
        &mut self,
        from: NodeId,
        edges: Vec<(NodeId, StoredEdge)>,
        ctx: &mut Outbox<ProtocolMsg>,
    ) {
        let awaited = self.run.as_ref().is_some_and(|r| r.awaiting == Some(from));
        if !awaited {
            self.standalone_fetch = Some(BlueFetch { child: from, edges });
            return;
        }
        let mut run = self.run.take().expect("checked above");
        run.awaiting = None;
        let settled_cost = run.settled[&from].cost;
        for (sibling, edge) in edges {
            if run.error.is_some() {
                break;
            }
            let (Some(cost_from), Some(cost_sib)) =
                (self.cost_to(from), self.cost_to(sibling))
            else {
                run.error = Some(RunError::BadResponse { sibling });
                run.done = true;
                break;
            };
            let blue = match blue_weight_from_green(edge.fgw, self.dist, cost_from, cost_sib) {
                Ok(w) => w,
                Err(Error::WeightInconsistency { from, subtract }) => {
                    run.error = Some(RunError::Weight { from, subtract });
                    run.done = true;
                    break;
                }
                Err(_) => unreachable!("blue weight derivation has one error kind"),
            };
            if run.settled.contains_key(&sibling) {
                continue;
            }
            run.audit.relaxations += 1;
            let candidate = settled_cost + blue;
            let better = run
                .tentative
                .get(&sibling)
                .is_none_or(|cur| candidate < cur.cost);
            if better {
                // The stored edge is oriented from the fetched child's side;
                // the sibling crosses it the other way.
                run.tentative.insert(
                    sibling,
                    Route {
                        cost: candidate,
                        witness: HopEdge { near: edge.far, far: edge.near },
                        pred: Some(from),
                    },
                );
                run.heap.push(Reverse((candidate, sibling)));
            }
        }
        self.run = Some(run);
        if self.run.as_ref().is_some_and(|r| !r.done) {
            self.advance_recovery(ctx);
        }
    }

    fn recovery_finished(&self) -> bool {
        self.run.as_ref().is_some_and(|r| r.done)
    }
}

impl Network {
    /// Runs the full recovery conversation for a failing node `x` and
    /// expands the result into physical routes for each of its children.
    pub fn compute_recovery(&mut self, x: NodeId) -> Result<(RecoveryTable, RecoveryAudit)> {
        if x == self.sink() {
            return Err(Error::SinkCannotFail);
        }
        self.sim.invoke(x, |actor, ctx| actor.start_recovery(ctx))?;
        self.sim.run_until(|sim| sim.actor(x).recovery_finished())?;
        let run = self
            .sim
            .invoke(x, |actor, _| actor.run.take())?
            .expect("finished run present");

        if let Some(err) = run.error {
            return Err(match err {
                RunError::NotBiconnected { child } => {
                    Error::NotBiconnectedFor { failed: x, child }
                }
                RunError::Weight { from, subtract } => {
                    Error::WeightInconsistency { from, subtract }
                }
                RunError::BadResponse { sibling } => Error::Verify(format!(
                    "blue fetch answered with unknown sibling {sibling}"
                )),
            });
        }

        let mut entries = Vec::with_capacity(run.children.len());
        for &child in &run.children {
            let route = run.settled[&child];
            let mut chain = Vec::new();
            let mut cursor = child;
            loop {
                let r = run.settled[&cursor];
                chain.push(r.witness);
                match r.pred {
                    Some(p) => cursor = p,
                    None => break,
                }
            }
            let path = expand_path(self.tree(), child, &chain)?;
            entries.push(RecoveryEntry { child, cost: route.cost, hop_chain: chain, path });
        }
        Ok((RecoveryTable { failed: x, entries }, run.audit))
    }

    /// One standalone blue-store fetch: ask `child` for its per-sibling
    /// cheapest bridges, as the recovery conversation would.
    pub fn fetch_blue_edges(
        &mut self,
        x: NodeId,
        child: NodeId,
    ) -> Result<Vec<(NodeId, StoredEdge)>> {
        self.sim.invoke(x, |_, ctx| ctx.send(child, ProtocolMsg::BlueFetchRequest))?;
        self.sim.run_until(|sim| sim.actor(x).standalone_fetch.is_some())?;
        let fetch = self
            .sim
            .invoke(x, |actor, _| actor.standalone_fetch.take())?
            .expect("fetch landed");
        debug_assert_eq!(fetch.child, child);
        Ok(fetch.edges)
    }

    /// Best alternate route for the failure of the tree link between `x`
    /// and its parent: the cheapest edge leaving the subtree of `x`,
    /// drawn from the local stores plus `x`'s own incident edges.
    pub fn compute_link_recovery(&mut self, x: NodeId) -> Result<LinkRecoveryEntry> {
        if x == self.sink() {
            return Err(Error::SinkCannotFail);
        }
        let actor = self.sim.actor(x);
        let mut best: Option<StoredEdge> = None;
        let mut consider = |edge: StoredEdge| {
            if best.is_none_or(|b| edge.rank() < b.rank()) {
                best = Some(edge);
            }
        };
        for (_, e) in actor.green.iter() {
            consider(*e);
        }
        for (_, e) in actor.blue.iter() {
            consider(*e);
        }
        for inc in &actor.incident {
            if inc.is_tree {
                continue;
            }
            let pos = inc.neighbor_pos.expect("labels installed");
            if actor.contains_pos(pos) {
                continue;
            }
            consider(StoredEdge {
                near: x,
                far: inc.neighbor,
                cost: inc.cost,
                fgw: actor.dist + inc.cost + inc.neighbor_dist,
            });
        }
        let Some(edge) = best else {
            return Err(Error::BridgeEdge(x));
        };
        let cost = edge
            .fgw
            .checked_sub(actor.dist)
            .ok_or_else(|| Error::WeightInconsistency {
                from: edge.fgw.to_string(),
                subtract: actor.dist.to_string(),
            })?;
        let witness = HopEdge { near: edge.near, far: edge.far };
        let path = expand_path(self.tree(), x, &[witness])?;
        Ok(LinkRecoveryEntry { node: x, cost, witness, path })
    }
}
