//! End-to-end protocol orchestration: labeling, collection, then recovery
//! computations for every possible failure, with per-phase accounting.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::labels::DfsLabels;
use crate::oracle::expected_edge_report_deliveries;
use crate::protocol::Network;
use crate::recovery::{LinkRecoveryEntry, RecoveryAudit, RecoveryTable};
use crate::sim::{SimConfig, SimStats};

/// Which failure tables to compute.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FailureMode {
    Node,
    Link,
    Both,
}

impl FailureMode {
    pub fn wants_node(self) -> bool {
        matches!(self, FailureMode::Node | FailureMode::Both)
    }

    pub fn wants_link(self) -> bool {
        matches!(self, FailureMode::Link | FailureMode::Both)
    }
}

/// Options for one protocol run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub mode: FailureMode,
    pub inbox_capacity: Option<u32>,
    pub retry_delay: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { mode: FailureMode::Node, inbox_capacity: None, retry_delay: 8 }
    }
}

/// Message accounting for one run, split by phase.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetrics {
    pub labeling: SimStats,
    pub collection: SimStats,
    pub recovery: SimStats,
    pub total: SimStats,
    /// Accepted edge-report deliveries during collection.
    pub edge_report_deliveries: u64,
    /// The analytic hop-count prediction the measurement must equal.
    pub predicted_edge_report_deliveries: u64,
    /// The m + n yardstick, emitted for comparison against the measurement.
    pub edges_plus_nodes: u64,
}

/// Everything a full protocol run produces.
pub struct RunOutput {
    pub sink: NodeId,
    pub labels: DfsLabels,
    pub tables: Vec<RecoveryTable>,
    pub audits: Vec<RecoveryAudit>,
    pub link_entries: Vec<LinkRecoveryEntry>,
    pub metrics: RunMetrics,
    pub store_dump: String,
}

/// Runs the complete protocol over the simulator and collects the tables
/// for every non-sink node, in ascending node order.
pub fn run_distributed(graph: &Graph, sink: NodeId, options: &RunOptions) -> Result<RunOutput> {
    let config = SimConfig {
        inbox_capacity: options.inbox_capacity,
        retry_delay: options.retry_delay,
        ..SimConfig::default()
    };
    let mut net = Network::new(graph.clone(), sink, config)?;

    let labels = net.run_labeling()?;
    let after_labeling = net.stats();

    net.collect_non_tree_edges()?;
    let after_collection = net.stats();

    let mut tables = Vec::new();
    let mut audits = Vec::new();
    if options.mode.wants_node() {
        for x in graph.nodes().filter(|&x| x != sink) {
            let (table, audit) = net.compute_recovery(x)?;
            tables.push(table);
            audits.push(audit);
        }
    }
    let mut link_entries = Vec::new();
    if options.mode.wants_link() {
        for x in graph.nodes().filter(|&x| x != sink) {
            link_entries.push(net.compute_link_recovery(x)?);
        }
    }
    let total = net.stats();

    let collection = after_collection.since(&after_labeling);
    let metrics = RunMetrics {
        labeling: after_labeling.clone(),
        recovery: total.since(&after_collection),
        edge_report_deliveries: collection.delivered_of("edge-report"),
        collection,
        predicted_edge_report_deliveries: expected_edge_report_deliveries(graph, net.tree()),
        edges_plus_nodes: (graph.edge_count() + graph.node_count()) as u64,
        total,
    };

    Ok(RunOutput {
        sink,
        labels,
        tables,
        audits,
        link_entries,
        metrics,
        store_dump: net.store_dump(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g2, G2_S};
    use crate::oracle::centralized_snfr;
    use crate::report::render_tables;

    #[test]
    fn full_run_matches_centralized_reference() {
        let graph = g2();
        let out = run_distributed(&graph, G2_S, &RunOptions::default()).unwrap();
        let reference = centralized_snfr(&graph, G2_S).unwrap();
        assert_eq!(
            render_tables(G2_S, &out.tables),
            render_tables(G2_S, &reference)
        );
        assert_eq!(out.metrics.edge_report_deliveries, 4);
        assert_eq!(out.metrics.predicted_edge_report_deliveries, 4);
    }

    #[test]
    fn bounded_inbox_changes_traffic_but_not_results() {
        let graph = crate::generate::generate_biconnected(24, 5.0, 41).unwrap();
        let unbounded = run_distributed(&graph, NodeId(0), &RunOptions::default()).unwrap();
        let bounded = run_distributed(
            &graph,
            NodeId(0),
            &RunOptions { inbox_capacity: Some(1), ..RunOptions::default() },
        )
        .unwrap();
        assert!(bounded.metrics.total.retries > 0, "capacity one must reject something");
        assert_eq!(unbounded.store_dump, bounded.store_dump);
        assert_eq!(
            render_tables(NodeId(0), &unbounded.tables),
            render_tables(NodeId(0), &bounded.tables)
        );
    }

    #[test]
    fn runs_are_reproducible() {
        let graph = crate::generate::generate_biconnected(15, 4.0, 9).unwrap();
        let opts = RunOptions { mode: FailureMode::Both, ..RunOptions::default() };
        let a = run_distributed(&graph, NodeId(0), &opts).unwrap();
        let b = run_distributed(&graph, NodeId(0), &opts).unwrap();
        assert_eq!(a.metrics.total, b.metrics.total);
        assert_eq!(a.tables, b.tables);
        assert_eq!(a.link_entries, b.link_entries);
    }
}
