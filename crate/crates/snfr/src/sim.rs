//! Deterministic discrete-event message-passing simulator.
//!
//! One actor per network node; messages travel only along physical links (or
//! to self) with a uniform one-tick latency. Delivery order is a pure
//! function of the initial state: events are processed in `(tick, sequence)`
//! order and nothing else introduces nondeterminism.
//!
//! The optional bounded-inbox mode models a consumer that can only accept a
//! fixed number of messages per tick. A delivery attempt beyond the capacity
//! is rejected and the send is retried after a fixed delay, which realizes
//! consumer-driven backpressure without any global coordination.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Protocol payloads report a stable kind string used as the counter key.
pub trait Payload {
    fn kind(&self) -> &'static str;
}

/// A message in flight between two adjacent nodes (or a self-delivery).
#[derive(Clone, Debug)]
pub struct Message<P> {
    pub from: NodeId,
    pub to: NodeId,
    pub payload: P,
    pub is_reply: bool,
}

/// Node behavior hosted by the simulator.
pub trait Actor {
    type Payload: Payload;

    fn on_message(&mut self, msg: Message<Self::Payload>, ctx: &mut Outbox<Self::Payload>);
}

/// Collects the messages an actor emits while handling one delivery or one
/// locally scheduled task.
pub struct Outbox<P> {
    self_id: NodeId,
    queued: Vec<Message<P>>,
}

impl<P> Outbox<P> {
    pub fn self_id(&self) -> NodeId {
        self.self_id
    }

    pub fn send(&mut self, to: NodeId, payload: P) {
        self.queued.push(Message { from: self.self_id, to, payload, is_reply: false });
    }

    pub fn reply(&mut self, to: NodeId, payload: P) {
        self.queued.push(Message { from: self.self_id, to, payload, is_reply: true });
    }
}

/// Snapshot of simulator counters.
///
/// `sends` counts send operations per payload kind, including retried sends;
/// `delivered` counts accepted handler invocations. `max_inbox` holds, per
/// node, the largest number of messages accepted within a single tick.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimStats {
    pub sends: BTreeMap<String, u64>,
    pub delivered: BTreeMap<String, u64>,
    pub ticks: u64,
    pub events: u64,
    pub rejections: u64,
    pub retries: u64,
    pub max_inbox: Vec<u32>,
}

impl SimStats {
    pub fn sends_of(&self, kind: &str) -> u64 {
        self.sends.get(kind).copied().unwrap_or(0)
    }

    pub fn delivered_of(&self, kind: &str) -> u64 {
        self.delivered.get(kind).copied().unwrap_or(0)
    }

    /// Difference of two snapshots taken from the same run (later minus
    /// earlier), used for per-phase accounting.
    pub fn since(&self, earlier: &SimStats) -> SimStats {
        let diff_map = |a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>| {
            a.iter()
                .map(|(k, v)| (k.clone(), v - b.get(k).copied().unwrap_or(0)))
                .filter(|(_, v)| *v > 0)
                .collect()
        };
        SimStats {
            sends: diff_map(&self.sends, &earlier.sends),
            delivered: diff_map(&self.delivered, &earlier.delivered),
            ticks: self.ticks - earlier.ticks,
            events: self.events - earlier.events,
            rejections: self.rejections - earlier.rejections,
            retries: self.retries - earlier.retries,
            max_inbox: self.max_inbox.clone(),
        }
    }
}

/// Simulator configuration.
#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Messages a node accepts per tick; `None` means unbounded.
    pub inbox_capacity: Option<u32>,
    /// Delay before a rejected delivery is attempted again.
    pub retry_delay: u64,
    /// Hard tick ceiling; exceeding it signals a livelocked protocol.
    pub tick_budget: u64,
    /// Recorded seed for scheduling policies; the default policy is
    /// deterministic and does not consume randomness.
    pub rng_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { inbox_capacity: None, retry_delay: 8, tick_budget: 1_000_000_000, rng_seed: 0 }
    }
}

struct Pending<P> {
    at: u64,
    seq: u64,
    msg: Message<P>,
}

impl<P> PartialEq for Pending<P> {
    fn eq(&self, other: &Self) -> bool {
        (self.at, self.seq) == (other.at, other.seq)
    }
}
impl<P> Eq for Pending<P> {}
impl<P> PartialOrd for Pending<P> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<P> Ord for Pending<P> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.at, self.seq).cmp(&(other.at, other.seq))
    }
}

/// The event loop: actors, the link topology they may talk across, and the
/// pending delivery queue.
pub struct SimNetwork<A: Actor> {
    actors: Vec<A>,
    adjacency: Vec<Vec<NodeId>>,
    queue: BinaryHeap<Reverse<Pending<A::Payload>>>,
    now: u64,
    seq: u64,
    config: SimConfig,
    sends: BTreeMap<&'static str, u64>,
    delivered: BTreeMap<&'static str, u64>,
    events: u64,
    rejections: u64,
    retries: u64,
    // (tick, accepted-in-tick) per node, reset lazily.
    inbox: Vec<(u64, u32)>,
    max_inbox: Vec<u32>,
}

impl<A: Actor> SimNetwork<A> {
    /// Hosts `actors` (index = node id) over the links of `graph`.
    pub fn new(graph: &Graph, actors: Vec<A>, config: SimConfig) -> SimNetwork<A> {
        assert_eq!(graph.node_count(), actors.len(), "one actor per node");
        let adjacency = graph
            .nodes()
            .map(|v| graph.neighbors(v).iter().map(|&(nb, _)| nb).collect())
            .collect();
        let n = actors.len();
        SimNetwork {
            actors,
            adjacency,
            queue: BinaryHeap::new(),
            now: 0,
            seq: 0,
            config,
            sends: BTreeMap::new(),
            delivered: BTreeMap::new(),
            events: 0,
            rejections: 0,
            retries: 0,
            inbox: vec![(0, 0); n],
            max_inbox: vec![0; n],
        }
    }

    pub fn now(&self) -> u64 {
        self.now
    }

    pub fn actor(&self, id: NodeId) -> &A {
        &self.actors[id.idx()]
    }

    pub fn actor_mut(&mut self, id: NodeId) -> &mut A {
        &mut self.actors[id.idx()]
    }

    pub fn actors(&self) -> &[A] {
        &self.actors
    }

    fn legal(&self, from: NodeId, to: NodeId) -> bool {
        from == to || self.adjacency[from.idx()].contains(&to)
    }

    fn enqueue(&mut self, msg: Message<A::Payload>, at: u64) -> Result<()> {
        if !self.legal(msg.from, msg.to) {
            return Err(Error::IllegalSend { from: msg.from, to: msg.to });
        }
        *self.sends.entry(msg.payload.kind()).or_insert(0) += 1;
        self.queue.push(Reverse(Pending { at, seq: self.seq, msg }));
        self.seq += 1;
        Ok(())
    }

    /// Injects a message from outside a handler; it is delivered one tick
    /// from now like any other send.
    pub fn send(&mut self, msg: Message<A::Payload>) -> Result<()> {
        self.enqueue(msg, self.now + 1)
    }

    /// Runs a local task on one actor, enqueueing whatever it sends.
    /// This models operator-initiated work at a node, not network traffic.
    pub fn invoke<R>(
        &mut self,
        id: NodeId,
        task: impl FnOnce(&mut A, &mut Outbox<A::Payload>) -> R,
    ) -> Result<R> {
        let mut outbox = Outbox { self_id: id, queued: Vec::new() };
        let out = task(&mut self.actors[id.idx()], &mut outbox);
        for msg in outbox.queued {
            self.enqueue(msg, self.now + 1)?;
        }
        Ok(out)
    }

    /// Delivers the next pending message. Returns `false` when the queue is
    /// empty. A full inbox rejects the attempt and schedules the retry.
    pub fn step(&mut self) -> Result<bool> {
        let Some(Reverse(pending)) = self.queue.pop() else {
            return Ok(false);
        };
        let Pending { at, msg, .. } = pending;
        if at > self.config.tick_budget {
            return Err(Error::NonQuiescent { budget: self.config.tick_budget });
        }
        self.now = at;

        let slot = &mut self.inbox[msg.to.idx()];
        if slot.0 != at {
            *slot = (at, 0);
        }
        if let Some(cap) = self.config.inbox_capacity {
            if slot.1 >= cap {
                self.rejections += 1;
                self.retries += 1;
                let retry_at = at + self.config.retry_delay;
                *self.sends.entry(msg.payload.kind()).or_insert(0) += 1;
                self.queue.push(Reverse(Pending { at: retry_at, seq: self.seq, msg }));
                self.seq += 1;
                return Ok(true);
            }
        }
        slot.1 += 1;
        let occupancy = slot.1;
        let to = msg.to;
        if occupancy > self.max_inbox[to.idx()] {
            self.max_inbox[to.idx()] = occupancy;
        }
        *self.delivered.entry(msg.payload.kind()).or_insert(0) += 1;
        self.events += 1;

        let mut outbox = Outbox { self_id: to, queued: Vec::new() };
        self.actors[to.idx()].on_message(msg, &mut outbox);
        for out in outbox.queued {
            self.enqueue(out, self.now + 1)?;
        }
        Ok(true)
    }

    /// Processes events until the queue drains, then reports statistics.
    pub fn run_until_quiescent(&mut self) -> Result<SimStats> {
        while self.step()? {}
        Ok(self.stats())
    }

    /// Processes events until `pred` holds. Errors with
    /// [`Error::PhaseStalled`] if the queue drains first.
    pub fn run_until(&mut self, pred: impl Fn(&Self) -> bool) -> Result<()> {
        while !pred(self) {
            if !self.step()? {
                return Err(Error::PhaseStalled);
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> SimStats {
        let own = |m: &BTreeMap<&'static str, u64>| {
            m.iter().map(|(k, v)| (k.to_string(), *v)).collect()
        };
        SimStats {
            sends: own(&self.sends),
            delivered: own(&self.delivered),
            ticks: self.now,
            events: self.events,
            rejections: self.rejections,
            retries: self.retries,
            max_inbox: self.max_inbox.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;

    #[derive(Clone, Debug)]
    enum Ping {
        Request { hops_left: u32 },
        Response,
    }

    impl Payload for Ping {
        fn kind(&self) -> &'static str {
            match self {
                Ping::Request { .. } => "request",
                Ping::Response => "response",
            }
        }
    }

    #[derive(Default)]
    struct Echo {
        handled: u32,
        order: Vec<u32>,
    }

    impl Actor for Echo {
        type Payload = Ping;
        fn on_message(&mut self, msg: Message<Ping>, ctx: &mut Outbox<Ping>) {
            self.handled += 1;
            match msg.payload {
                Ping::Request { hops_left } => {
                    if hops_left > 0 {
                        ctx.send(msg.from, Ping::Request { hops_left: hops_left - 1 });
                    } else {
                        ctx.reply(msg.from, Ping::Response);
                    }
                    self.order.push(hops_left);
                }
                Ping::Response => {}
            }
        }
    }

    fn line_graph(n: usize) -> Graph {
        Graph::from_edges(
            n,
            (0..n as u32 - 1).map(|i| (i, i + 1, Cost::from_units(1))),
        )
        .unwrap()
    }

    fn net(n: usize, config: SimConfig) -> SimNetwork<Echo> {
        SimNetwork::new(&line_graph(n), (0..n).map(|_| Echo::default()).collect(), config)
    }

    fn msg(from: u32, to: u32, payload: Ping) -> Message<Ping> {
        Message { from: NodeId(from), to: NodeId(to), payload, is_reply: false }
    }

    #[test]
    fn empty_run_is_zero() {
        let mut net = net(2, SimConfig::default());
        let stats = net.run_until_quiescent().unwrap();
        assert_eq!(stats.events, 0);
        assert_eq!(stats.ticks, 0);
    }

    #[test]
    fn request_response_counts_two() {
        let mut net = net(2, SimConfig::default());
        net.send(msg(0, 1, Ping::Request { hops_left: 0 })).unwrap();
        let stats = net.run_until_quiescent().unwrap();
        assert_eq!(stats.sends_of("request"), 1);
        assert_eq!(stats.sends_of("response"), 1);
        assert_eq!(stats.events, 2);
        assert_eq!(net.actor(NodeId(1)).handled, 1, "handler invoked exactly once");
    }

    #[test]
    fn same_tick_delivery_follows_sequence_order() {
        let mut net = net(3, SimConfig::default());
        net.send(msg(0, 1, Ping::Request { hops_left: 7 })).unwrap();
        net.send(msg(2, 1, Ping::Request { hops_left: 9 })).unwrap();
        net.run_until_quiescent().unwrap();
        // Both land on tick 1; the earlier send is handled first.
        assert_eq!(net.actor(NodeId(1)).order[..2], [7, 9]);
    }

    #[test]
    fn non_adjacent_send_is_rejected() {
        let mut net = net(3, SimConfig::default());
        let err = net.send(msg(0, 2, Ping::Response)).unwrap_err();
        assert!(matches!(err, Error::IllegalSend { .. }), "{err}");
        // Self-delivery is fine.
        net.send(msg(1, 1, Ping::Request { hops_left: 0 })).unwrap();
        net.run_until_quiescent().unwrap();
    }

    #[test]
    fn bounded_inbox_rejects_and_retries() {
        let config = SimConfig { inbox_capacity: Some(1), ..SimConfig::default() };
        let mut net = net(3, config);
        net.send(msg(0, 1, Ping::Request { hops_left: 0 })).unwrap();
        net.send(msg(2, 1, Ping::Request { hops_left: 0 })).unwrap();
        let stats = net.run_until_quiescent().unwrap();
        assert_eq!(stats.rejections, 1);
        assert_eq!(stats.retries, 1);
        // Retried send counted again.
        assert_eq!(stats.sends_of("request"), 3);
        assert_eq!(stats.delivered_of("request"), 2);
        assert_eq!(net.actor(NodeId(1)).handled, 2, "both eventually delivered");
        assert_eq!(net.actor(NodeId(1)).order, vec![0, 0]);
    }

    #[test]
    fn livelock_hits_the_tick_budget() {
        let config = SimConfig { tick_budget: 50, ..SimConfig::default() };
        let mut net = net(2, config);
        // Large hop budget bounces forever relative to the 50-tick budget.
        net.send(msg(0, 1, Ping::Request { hops_left: 1_000_000 })).unwrap();
        let err = net.run_until_quiescent().unwrap_err();
        assert!(matches!(err, Error::NonQuiescent { budget: 50 }), "{err}");
    }

    #[test]
    fn replay_is_byte_identical() {
        let run = || {
            let mut net = net(4, SimConfig::default());
            net.send(msg(0, 1, Ping::Request { hops_left: 3 })).unwrap();
            net.send(msg(3, 2, Ping::Request { hops_left: 2 })).unwrap();
            net.run_until_quiescent().unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn max_inbox_tracks_burst_size() {
        let mut net = net(3, SimConfig::default());
        net.send(msg(0, 1, Ping::Response)).unwrap();
        net.send(msg(2, 1, Ping::Response)).unwrap();
        let stats = net.run_until_quiescent().unwrap();
        assert_eq!(stats.max_inbox[1], 2);
    }
}
