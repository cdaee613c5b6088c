//! Canonical text rendering of run artifacts, plus the parser used to
//! verify previously written tables.
//!
//! The text forms are deterministic: equal values render to equal bytes, so
//! conformance checks can compare documents directly.

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::labels::DfsLabels;
use crate::oracle::StretchReport;
use crate::recovery::{HopEdge, LinkRecoveryEntry, RecoveryEntry, RecoveryTable};
use crate::sim::SimStats;

/// Renders recovery tables, one `table` header per failed node and one
/// `entry` line per child:
///
/// ```text
/// snfr-tables v1
/// sink 0
/// table failed=1 children=2
/// entry child=2 cost=11 chain=2-3,3-0 path=2,3,0
/// ```
pub fn render_tables(sink: NodeId, tables: &[RecoveryTable]) -> String {
    let mut out = String::new();
    out.push_str("snfr-tables v1\n");
    out.push_str(&format!("sink {sink}\n"));
    for table in tables {
        out.push_str(&format!(
            "table failed={} children={}\n",
            table.failed,
            table.entries.len()
        ));
        for e in &table.entries {
            let chain = e
                .hop_chain
                .iter()
                .map(|h| format!("{}-{}", h.near, h.far))
                .collect::<Vec<_>>()
                .join(",");
            let path = e
                .path
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "entry child={} cost={} chain={} path={}\n",
                e.child, e.cost, chain, path
            ));
        }
    }
    out
}

/// Parses a document produced by [`render_tables`].
pub fn parse_tables(text: &str) -> Result<(NodeId, Vec<RecoveryTable>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let bad = |line: usize, reason: &str| Error::Parse { line, reason: reason.to_string() };

    let (l, header) = lines.next().ok_or_else(|| bad(0, "empty document"))?;
    if header != "snfr-tables v1" {
        return Err(bad(l, "unknown document header"));
    }
    let (l, sink_line) = lines.next().ok_or_else(|| bad(0, "missing sink line"))?;
    let sink = sink_line
        .strip_prefix("sink ")
        .and_then(|t| t.parse::<u32>().ok())
        .map(NodeId)
        .ok_or_else(|| bad(l, "bad sink line"))?;

    let mut tables: Vec<RecoveryTable> = Vec::new();
    for (l, line) in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("table ") {
            let failed = field(rest, "failed")
                .and_then(|t| t.parse::<u32>().ok())
                .map(NodeId)
                .ok_or_else(|| bad(l, "bad table line"))?;
            tables.push(RecoveryTable { failed, entries: Vec::new() });
        } else if let Some(rest) = line.strip_prefix("entry ") {
            let table = tables.last_mut().ok_or_else(|| bad(l, "entry before any table"))?;
            let child = field(rest, "child")
                .and_then(|t| t.parse::<u32>().ok())
                .map(NodeId)
                .ok_or_else(|| bad(l, "bad child field"))?;
            let cost: Cost = field(rest, "cost")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(l, "bad cost field"))?;
            let chain_text = field(rest, "chain").ok_or_else(|| bad(l, "missing chain"))?;
            let mut hop_chain = Vec::new();
            if !chain_text.is_empty() {
                for hop in chain_text.split(',') {
                    let (near, far) = hop
                        .split_once('-')
                        .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)))
                        .ok_or_else(|| bad(l, "bad chain hop"))?;
                    hop_chain.push(HopEdge { near: NodeId(near), far: NodeId(far) });
                }
            }
            let path_text = field(rest, "path").ok_or_else(|| bad(l, "missing path"))?;
            let path = path_text
                .split(',')
                .map(|t| t.parse::<u32>().map(NodeId))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad(l, "bad path"))?;
            table.entries.push(RecoveryEntry { child, cost, hop_chain, path });
        } else {
            return Err(bad(l, "unrecognized line"));
        }
    }
    Ok((sink, tables))
}

fn field<'a>(line: &'a str, name: &str) -> Option<&'a str> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(name)?.strip_prefix('='))
}

/// Link-failure table: one line per non-sink node.
pub fn render_link_tables(sink: NodeId, entries: &[LinkRecoveryEntry]) -> String {
    let mut out = String::new();
    out.push_str("snfr-link-tables v1\n");
    out.push_str(&format!("sink {sink}\n"));
    for e in entries {
        let path = e.path.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        out.push_str(&format!(
            "link node={} cost={} witness={}-{} path={}\n",
            e.node, e.cost, e.witness.near, e.witness.far, path
        ));
    }
    out
}

/// Label dump: `node dfsStart dfsEnd` per line.
pub fn render_labels(labels: &DfsLabels) -> String {
    let mut out = String::new();
    for v in 0..labels.node_count() as u32 {
        let v = NodeId(v);
        out.push_str(&format!("{} {} {}\n", v, labels.start(v), labels.end(v)));
    }
    out
}

/// Stretch report: one line per entry plus summary lines.
pub fn render_stretch(report: &StretchReport) -> String {
    let mut out = String::new();
    out.push_str("x child optimal protocol ratio\n");
    for e in &report.entries {
        out.push_str(&format!(
            "{} {} {} {} {:.6}\n",
            e.failed, e.child, e.optimal, e.protocol, e.ratio
        ));
    }
    out.push_str(&format!("mean_ratio {:.6}\n", report.mean_ratio));
    out.push_str(&format!("max_ratio {:.6}\n", report.max_ratio));
    out
}

/// Flat named counters for one simulation phase or a whole run.
pub fn render_stats(stats: &SimStats) -> String {
    let mut out = String::new();
    for (kind, count) in &stats.sends {
        out.push_str(&format!("sends.{kind} {count}\n"));
    }
    for (kind, count) in &stats.delivered {
        out.push_str(&format!("delivered.{kind} {count}\n"));
    }
    out.push_str(&format!("ticks {}\n", stats.ticks));
    out.push_str(&format!("events {}\n", stats.events));
    out.push_str(&format!("rejections {}\n", stats.rejections));
    out.push_str(&format!("retries {}\n", stats.retries));
    let max_inbox = stats.max_inbox.iter().copied().max().unwrap_or(0);
    out.push_str(&format!("max_inbox_occupancy {max_inbox}\n"));
    out
}
