//! The three labeling phases: wakeup, count, allocation.
//!
//! The phases pipeline freely — a leaf starts counting the moment it wakes,
//! without waiting for the rest of the tree — so the drivers below advance
//! the shared event loop until each phase's completion condition holds
//! rather than imposing barriers.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::labels::DfsLabels;
use crate::sim::Outbox;

use super::{Fault, Network, NodeActor, ProtocolMsg, SiblingInterval};

impl NodeActor {
    /// Wakeup: remember we are awake, wake the children, and if there is
    /// nothing below, report a subtree of one straight away.
    pub(crate) fn on_wake(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        debug_assert!(!self.woken, "each node wakes exactly once");
        self.woken = true;
        self.subtree_size = 1;
        self.pending_counts = self.children.len();
        if self.children.is_empty() {
            self.report_count(ctx);
        } else {
            for &c in &self.children {
                ctx.send(c, ProtocolMsg::Wake);
            }
        }
    }

    pub(crate) fn on_count(
        &mut self,
        from: NodeId,
        size: u32,
        ctx: &mut Outbox<ProtocolMsg>,
    ) {
        self.child_sizes.insert(from, size);
        self.subtree_size += size;
        self.pending_counts -= 1;
        if self.pending_counts == 0 {
            self.report_count(ctx);
        }
    }

    fn report_count(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        match self.parent {
            Some(p) => ctx.send(p, ProtocolMsg::Count { size: self.subtree_size }),
            None => self.total_nodes = Some(self.subtree_size),
        }
    }

    /// Root-side entry into the allocation phase: take `[1, 2n]` and split
    /// the rest among the children.
    pub(crate) fn begin_allocation(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        let n = self.total_nodes.expect("count phase complete at the root");
        self.interval = Some((1, 2 * n));
        self.allocate_children(ctx);
    }

    pub(crate) fn on_allocate(
        &mut self,
        start: u32,
        end: u32,
        parent: SiblingInterval,
        siblings: Vec<SiblingInterval>,
        ctx: &mut Outbox<ProtocolMsg>,
    ) {
        if end - start + 1 != 2 * self.subtree_size {
            self.fault = Some(Fault::CountCorruption);
            return;
        }
        self.interval = Some((start, end));
        self.parent_interval = Some((parent.start, parent.end));
        self.sibling_intervals = siblings;
        self.allocate_children(ctx);
    }

    /// Hands each child, in ascending id order, a consecutive sub-interval
    /// of width twice its subtree size, starting right after our own start
    /// label. Sibling intervals ride along so children can bucket blue
    /// edges locally later.
    fn allocate_children(&mut self, ctx: &mut Outbox<ProtocolMsg>) {
        let (lo, hi) = self.interval.expect("own interval set before allocating");
        let mut cursor = lo;
        let mut assigned: Vec<SiblingInterval> = Vec::with_capacity(self.children.len());
        for &c in &self.children {
            let size = self.child_sizes[&c];
            let start = cursor + 1;
            let end = cursor + 2 * size;
            if end >= hi {
                self.fault = Some(Fault::CountCorruption);
                return;
            }
            assigned.push(SiblingInterval { node: c, start, end });
            self.child_intervals.insert(c, (start, end));
            cursor = end;
        }
        if cursor + 1 != hi {
            self.fault = Some(Fault::CountCorruption);
            return;
        }
        let own = SiblingInterval {
            node: self.id,
            start: lo,
            end: hi,
        };
        for (i, &c) in self.children.iter().enumerate() {
            let iv = assigned[i];
            let siblings: Vec<SiblingInterval> =
                assigned.iter().filter(|s| s.node != c).copied().collect();
            ctx.send(
                c,
                ProtocolMsg::Allocate { start: iv.start, end: iv.end, parent: own, siblings },
            );
        }
    }
}

impl Network {
    /// Wakes the root locally (no link traffic) and advances the simulation
    /// until every node has been woken. Leaves will already have started the
    /// count phase by then; that is fine.
    pub fn run_wake_phase(&mut self) -> Result<()> {
        let root = self.tree().root();
        self.sim.invoke(root, |actor, ctx| actor.on_wake(ctx))?;
        self.sim.run_until(|sim| sim.actors().iter().all(|a| a.woken))?;
        self.check_faults()
    }

    /// Advances until the root has learned the total node count, which
    /// happens only after every count message has been delivered.
    pub fn run_count_phase(&mut self) -> Result<()> {
        let root = self.tree().root();
        self.sim.run_until(|sim| sim.actor(root).total_nodes.is_some())?;
        self.check_faults()
    }

    /// Tells the root to allocate, drains the allocation cascade, and
    /// returns the assembled labels.
    pub fn run_allocation_phase(&mut self) -> Result<DfsLabels> {
        let root = self.tree().root();
        if self.sim.actor(root).total_nodes.is_none() {
            return Err(Error::PhaseStalled);
        }
        self.sim.invoke(root, |actor, ctx| actor.begin_allocation(ctx))?;
        self.sim.run_until_quiescent()?;
        self.check_faults()?;
        self.install_neighbor_positions();
        self.labels()
    }

    /// Runs all three phases back to back.
    pub fn run_labeling(&mut self) -> Result<DfsLabels> {
        self.run_wake_phase()?;
        self.run_count_phase()?;
        self.run_allocation_phase()
    }

    /// After labeling, every node learns the label position of each direct
    /// neighbor, the same way it already knows their distances. Edge reports
    /// then carry these positions so receivers never need remote lookups.
    fn install_neighbor_positions(&mut self) {
        let positions: Vec<u32> = self
            .graph()
            .nodes()
            .map(|v| self.sim.actor(v).interval.expect("labeled").0)
            .collect();
        for v in self.graph().nodes() {
            let actor = self.sim.actor_mut(v);
            for edge in &mut actor.incident {
                edge.neighbor_pos = Some(positions[edge.neighbor.idx()]);
            }
        }
    }
}
