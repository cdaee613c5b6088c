//! Non-tree edge collection.
//!
//! Every node starts by classifying its own incident non-tree edges, then
//! forwards each one to its parent; each receiver classifies again and
//! forwards further, so a report climbs exactly to the endpoints' nearest
//! common ancestor, where both endpoints finally fall inside one subtree and
//! the report is dropped. Along the way the green and blue stores pick up
//! the cheapest qualifying edges.

use crate::error::Result;
use crate::graph::NodeId;
use crate::sim::Outbox;
use crate::stores::{NonTreeEdgeMsg, StoredEdge};

use super::{Fault, Network, NodeActor, ProtocolMsg};

impl NodeActor {
    /// Feeds this node's own incident non-tree edges into the classifier,
    /// as if reported by itself.
    pub(crate) fn start_collect(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        let own_pos = self.interval.expect("labels assigned before collection").0;
        let reports: Vec<NonTreeEdgeMsg> = self
            .incident
            .iter()
            .filter(|e| !e.is_tree)
            .map(|e| NonTreeEdgeMsg {
                p1: self.id,
                p2: e.neighbor,
                p1_pos: own_pos,
                p2_pos: e.neighbor_pos.expect("neighbor positions installed"),
                cost: e.cost,
                fixed_green_weight: self.dist + e.cost + e.neighbor_dist,
            })
            .collect();
        for report in reports {
            self.record_non_tree_edge(self.id, report, ctx);
        }
    }

    /// Classifies one reported edge and forwards it upward unless both
    /// endpoints already lie in this node's subtree.
    pub(crate) fn record_non_tree_edge(
        &mut self,
        sender: NodeId,
        report: NonTreeEdgeMsg,
        ctx: &mut Outbox<ProtocolMsg>,
    ) {
        let p1_inside = self.contains_pos(report.p1_pos);
        let p2_inside = self.contains_pos(report.p2_pos);
        if p1_inside && p2_inside {
            // Useless above this point: it can never escape our subtree.
            return;
        }
        debug_assert!(
            p1_inside || p2_inside,
            "a report always has an endpoint in the handling node's subtree"
        );
        let (near, far, far_pos) = if p1_inside {
            (report.p1, report.p2, report.p2_pos)
        } else {
            (report.p2, report.p1, report.p1_pos)
        };
        let stored = StoredEdge {
            near,
            far,
            cost: report.cost,
            fgw: report.fixed_green_weight,
        };

        if sender != self.id {
            // Forwarded by a child: the near endpoint is in that child's
            // subtree and the far one escapes ours, so it is a green
            // candidate for the sender.
            self.green.insert_min(sender, stored);
        }

        if self.edge_is_blue_for_parent(far, far_pos) {
            match self.sibling_containing(far_pos) {
                Some(sibling) => {
                    self.blue.insert_min(sibling, stored);
                }
                None => {
                    self.fault = Some(Fault::LabelInconsistency { endpoint: far });
                    return;
                }
            }
        }

        if let Some(parent) = self.parent {
            // The sender id travels in the message envelope, so forwarding
            // re-stamps it with this node automatically.
            ctx.send(parent, ProtocolMsg::EdgeReport(report));
        }
    }

    /// Classifies a raw endpoint pair the way the store update does: blue
    /// for the parent iff exactly one endpoint is in this node's subtree and
    /// the other sits in a sibling's subtree.
    pub fn classifies_blue_for_parent(
        &self,
        p1: NodeId,
        p1_pos: u32,
        p2: NodeId,
        p2_pos: u32,
    ) -> bool {
        let p1_inside = self.contains_pos(p1_pos);
        let p2_inside = self.contains_pos(p2_pos);
        if p1_inside == p2_inside {
            return false;
        }
        let (far, far_pos) = if p1_inside { (p2, p2_pos) } else { (p1, p1_pos) };
        self.edge_is_blue_for_parent(far, far_pos)
    }

    /// True iff the far endpoint sits inside the parent's subtree, outside
    /// ours, and is not the parent itself — exactly the edges that bridge us
    /// to a sibling subtree. Children of the root skip this bookkeeping:
    /// there is no recovery plan for a failing sink.
    pub(crate) fn edge_is_blue_for_parent(&self, far: NodeId, far_pos: u32) -> bool {
        if self.parent.is_none() || self.parent_is_root {
            return false;
        }
        if far == self.parent.expect("checked above") {
            return false;
        }
        let (plo, phi) = self.parent_interval.expect("parent interval piggybacked");
        plo <= far_pos && far_pos <= phi && !self.contains_pos(far_pos)
    }

    fn sibling_containing(&self, pos: u32) -> Option<NodeId> {
        self.sibling_intervals
            .iter()
            .find(|s| s.start <= pos && pos <= s.end)
            .map(|s| s.node)
    }
}

impl Network {
    /// Starts edge collection at every node and drains the cascade. After
    /// this the green and blue stores are final.
    pub fn collect_non_tree_edges(&mut self) -> Result<()> {
        for v in self.graph().nodes() {
            self.sim.invoke(v, |actor, ctx| actor.start_collect(ctx))?;
        }
        self.sim.run_until_quiescent()?;
        self.check_faults()
    }
}
