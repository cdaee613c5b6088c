//! Acceptance suite: every release gate in one target, run as
//!
//! ```text
//! cargo test --test acceptance -- --nocapture --test-threads=1
//! ```
//!
//! Each criterion prints a single PASS line with its headline numbers; a
//! failing assertion names the first offending instance.

mod common;

use std::sync::LazyLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snfr::protocol::Network;
use snfr::{
    centralized_labels, centralized_snfr, dijkstra_spt, generate_biconnected, oracle,
    random_tree, report, Graph, LinkRecoveryEntry, NodeId, RecoveryAudit, RecoveryTable,
    SimConfig,
};

const SINK: NodeId = NodeId(0);

/// One fully processed corpus graph: the distributed run next to the
/// centralized reference.
struct CorpusRun {
    graph: Graph,
    tables: Vec<RecoveryTable>,
    audits: Vec<RecoveryAudit>,
    link_entries: Vec<LinkRecoveryEntry>,
    centralized_text: String,
    distributed_text: String,
    store_dump: String,
    /// (blue entries, siblings, green entries, children) per node.
    store_bounds: Vec<(usize, usize, usize, usize)>,
    edge_report_deliveries: u64,
    predicted_deliveries: u64,
    retries: u64,
}

fn corpus_params(i: usize) -> (usize, f64, u64) {
    let sizes = [10, 25, 50, 100, 200];
    let degrees = [3.0f64, 6.0, 10.0];
    let n = sizes[i % 5];
    // Degree 10 is infeasible on 10 nodes; cap within simple-graph density.
    let degree = degrees[(i / 5) % 3].min((n as f64 - 1.0) * 0.8);
    (n, degree, 1000 + i as u64)
}

fn process(graph: &Graph, inbox_capacity: Option<u32>) -> CorpusRun {
    let config = SimConfig { inbox_capacity, ..SimConfig::default() };
    let mut net = Network::new(graph.clone(), SINK, config).unwrap();
    net.run_labeling().unwrap();
    let after_labeling = net.stats();
    net.collect_non_tree_edges().unwrap();
    let after_collection = net.stats();

    let tree = net.tree().clone();
    let store_bounds = graph
        .nodes()
        .map(|v| {
            let actor = net.actor(v);
            let siblings = tree.parent(v).map(|p| tree.children(p).len() - 1).unwrap_or(0);
            (
                actor.blue_store().len(),
                siblings,
                actor.green_store().len(),
                tree.children(v).len(),
            )
        })
        .collect();
    let store_dump = net.store_dump();

    let mut tables = Vec::new();
    let mut audits = Vec::new();
    let mut link_entries = Vec::new();
    for x in graph.nodes().filter(|&x| x != SINK) {
        let (table, audit) = net.compute_recovery(x).unwrap();
        tables.push(table);
        audits.push(audit);
        link_entries.push(net.compute_link_recovery(x).unwrap());
    }

    let centralized = centralized_snfr(graph, SINK).unwrap();
    let collection = after_collection.since(&after_labeling);

    CorpusRun {
        distributed_text: report::render_tables(SINK, &tables),
        centralized_text: report::render_tables(SINK, &centralized),
        tables,
        audits,
        link_entries,
        store_dump,
        store_bounds,
        edge_report_deliveries: collection.delivered_of("edge-report"),
        predicted_deliveries: oracle::expected_edge_report_deliveries(graph, &tree),
        retries: net.stats().retries,
        graph: graph.clone(),
    }
}

static CORPUS: LazyLock<Vec<CorpusRun>> = LazyLock::new(|| {
    (0..200)
        .map(|i| {
            let (n, degree, seed) = corpus_params(i);
            let graph = generate_biconnected(n, degree, seed).unwrap();
            process(&graph, None)
        })
        .collect()
});

#[test]
fn criterion_01_distributed_equals_centralized_byte_for_byte() {
    for (i, run) in CORPUS.iter().enumerate() {
        assert_eq!(
            run.distributed_text, run.centralized_text,
            "tables diverge on corpus graph {i} (params {:?})",
            corpus_params(i)
        );
    }
    println!(
        "criterion 1 (distributed vs centralized, {} graphs, byte-for-byte): PASS",
        CORPUS.len()
    );
}

#[test]
fn criterion_02_every_route_is_valid() {
    let mut entries = 0u64;
    for run in CORPUS.iter() {
        for table in &run.tables {
            for entry in &table.entries {
                oracle::validate_recovery_entry(&run.graph, SINK, table.failed, entry).unwrap();
                entries += 1;
            }
        }
    }
    println!(
        "criterion 2 (validity: endpoints, failure avoidance, exact cost sums; {entries} routes): PASS"
    );
}

#[test]
fn criterion_03_routes_never_beat_the_optimum_and_the_oracle_is_exact() {
    let mut checked = 0u64;
    for run in CORPUS.iter() {
        let tree = dijkstra_spt(&run.graph, SINK).unwrap();
        for table in &run.tables {
            if table.entries.is_empty() {
                continue;
            }
            let optima =
                oracle::optimal_alternates_for(&run.graph, SINK, &tree, table.failed).unwrap();
            for entry in &table.entries {
                let (_, optimal) =
                    optima.iter().find(|(c, _)| *c == entry.child).copied().unwrap();
                assert!(
                    entry.cost >= optimal,
                    "route for ({}, {}) undercuts the optimum",
                    table.failed,
                    entry.child
                );
                checked += 1;
            }
        }
    }

    // The oracle itself against exhaustive enumeration at desk scale.
    let mut enumerated = 0u64;
    for seed in 0..30u64 {
        let n = 4 + (seed % 5) as usize; // 4..=8
        let graph = generate_biconnected(n, 2.5_f64.min((n as f64 - 1.0) * 0.8), 7000 + seed)
            .unwrap();
        let tree = dijkstra_spt(&graph, SINK).unwrap();
        for x in graph.nodes().filter(|&x| x != SINK) {
            for &child in tree.children(x) {
                let (cost, _) = oracle::optimal_alternate(&graph, SINK, x, child).unwrap();
                let brute = common::enumerated_alternate(&graph, SINK, x, child).unwrap();
                assert_eq!(cost, brute, "oracle disagrees with enumeration at ({x}, {child})");
                enumerated += 1;
            }
        }
    }
    println!(
        "criterion 3 (oracle bound on {checked} routes; enumeration agreement on {enumerated} cases): PASS"
    );
}

#[test]
fn criterion_04_stretch_report() {
    let mut ratios: Vec<f64> = Vec::new();
    for i in 0..30usize {
        let n = [100, 200, 300][i % 3];
        let degree = 6.0 + 29.0 * (i as f64 / 29.0);
        let graph = generate_biconnected(n, degree, 4000 + i as u64).unwrap();
        let tables = centralized_snfr(&graph, SINK).unwrap();
        let report = oracle::stretch_report(&graph, SINK, &tables).unwrap();
        ratios.extend(report.entries.iter().map(|e| e.ratio));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max = ratios.iter().fold(1.0f64, |a, &b| a.max(b));
    let flag = if mean <= 1.15 { "within expectation" } else { "FLAG: above 1.15 expectation" };
    println!(
        "criterion 4 (stretch on 30 graphs, {} routes: mean {mean:.4}, max {max:.4} — {flag}): PASS",
        ratios.len()
    );
}

#[test]
fn criterion_05_labeling_on_large_trees() {
    for (n, seed) in [(10, 1u64), (100, 2), (400, 3), (1000, 4), (1000, 5)] {
        let graph = random_tree(n, seed).unwrap();
        let mut net = Network::new(graph, SINK, SimConfig::default()).unwrap();
        let labels = net.run_labeling().unwrap();
        let sent = net.label_message_total();
        assert!(sent <= 3 * n as u64, "{sent} label messages on {n} nodes");
        labels.validate(net.tree()).unwrap();
    }

    // Descendant queries against the parent-walk oracle.
    let graph = random_tree(1000, 6).unwrap();
    let mut net = Network::new(graph, SINK, SimConfig::default()).unwrap();
    let labels = net.run_labeling().unwrap();
    let tree = net.tree();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100_000 {
        let u = NodeId(rng.random_range(0..1000));
        let v = NodeId(rng.random_range(0..1000));
        assert_eq!(
            labels.is_descendant(u, v),
            common::is_ancestor_by_walk(tree, u, v),
            "descendant query ({u}, {v})"
        );
    }
    println!(
        "criterion 5 (3n label messages up to n=1000; invariants; 100000 descendant queries): PASS"
    );
}

#[test]
fn criterion_06_store_sizes_respect_family_bounds() {
    let mut nodes = 0u64;
    for run in CORPUS.iter() {
        for &(blue, siblings, green, children) in &run.store_bounds {
            assert!(blue <= siblings, "blue store exceeds sibling count");
            assert!(green <= children, "green store exceeds child count");
            nodes += 1;
        }
    }
    println!("criterion 6 (store bounds over {nodes} nodes): PASS");
}

#[test]
fn criterion_07_message_accounting_is_exact() {
    let mut measured_total = 0u64;
    let mut baseline_total = 0u64;
    for (i, run) in CORPUS.iter().enumerate() {
        assert_eq!(
            run.edge_report_deliveries, run.predicted_deliveries,
            "edge-report deliveries diverge from the hop-count prediction on graph {i}"
        );
        measured_total += run.edge_report_deliveries;
        baseline_total += (run.graph.edge_count() + run.graph.node_count()) as u64;
    }
    println!(
        "criterion 7 (exact delivery accounting; measured {measured_total} vs m+n baseline {baseline_total}): PASS"
    );
}

#[test]
fn criterion_08_lazy_fetches_and_work_bounds() {
    for (i, run) in CORPUS.iter().enumerate() {
        let tree = dijkstra_spt(&run.graph, SINK).unwrap();
        let labels = centralized_labels(&tree);
        let graphs = oracle::build_recovery_graphs(&run.graph, &tree, &labels);
        for audit in &run.audits {
            assert!(
                audit.blue_fetches <= audit.children,
                "graph {i}: node {} fetched more than once per child",
                audit.failed
            );
            assert_eq!(
                audit.extract_mins, audit.children,
                "graph {i}: settle count differs from child count at {}",
                audit.failed
            );
            let rg = &graphs[audit.failed.idx()];
            let arcs = (rg.greens.len() + rg.blues.len()) as u32;
            assert!(
                audit.relaxations <= arcs,
                "graph {i}: {} relaxations exceed {arcs} arcs at {}",
                audit.relaxations,
                audit.failed
            );
        }
    }
    println!("criterion 8 (fetch-once laziness, settle and relaxation bounds): PASS");
}

#[test]
fn criterion_09_bounded_inbox_reaches_identical_results() {
    let mut total_retries = 0u64;
    for i in 0..20usize {
        let (n, degree, seed) = corpus_params(i);
        let graph = generate_biconnected(n, degree, seed).unwrap();
        let bounded = process(&graph, Some(1));
        let unbounded = &CORPUS[i];
        assert_eq!(bounded.store_dump, unbounded.store_dump, "stores diverge on graph {i}");
        assert_eq!(
            bounded.distributed_text, unbounded.distributed_text,
            "tables diverge on graph {i}"
        );
        assert_eq!(bounded.link_entries, unbounded.link_entries);
        total_retries += bounded.retries;
    }
    assert!(total_retries > 0, "capacity one never exercised the retry path");
    println!(
        "criterion 9 (inbox capacity 1 on 20 graphs, identical outputs, {total_retries} retries): PASS"
    );
}

#[test]
fn criterion_10_link_failure_variant() {
    // Corpus-wide: feasibility and the oracle lower bound.
    for (i, run) in CORPUS.iter().enumerate() {
        let tree = dijkstra_spt(&run.graph, SINK).unwrap();
        for entry in &run.link_entries {
            let parent = tree.parent(entry.node).unwrap();
            for pair in entry.path.windows(2) {
                assert!(
                    !(pair[0] == entry.node && pair[1] == parent)
                        && !(pair[0] == parent && pair[1] == entry.node),
                    "graph {i}: link route for {} uses the failed link",
                    entry.node
                );
            }
            let summed = snfr::recovery::walk_cost(&run.graph, &entry.path).unwrap();
            assert_eq!(summed, entry.cost);
            let (optimal, _) =
                oracle::optimal_link_alternate(&run.graph, SINK, &tree, entry.node).unwrap();
            assert!(entry.cost >= optimal, "graph {i}: link route beats the oracle");
        }
    }

    // Small instances: when the oracle's best route is itself green-shaped
    // (descend, cross once, climb home), the protocol must match it exactly.
    let mut green_shaped = 0u64;
    let mut checked = 0u64;
    for seed in 0..40u64 {
        let n = 4 + (seed % 5) as usize;
        let degree = 2.5_f64.min((n as f64 - 1.0) * 0.8);
        let graph = generate_biconnected(n, degree, 8000 + seed).unwrap();
        let tree = dijkstra_spt(&graph, SINK).unwrap();
        let run = process(&graph, None);
        for entry in &run.link_entries {
            checked += 1;
            let x = entry.node;
            let (optimal, oracle_path) =
                oracle::optimal_link_alternate(&graph, SINK, &tree, x).unwrap();
            let in_subtree = |v: NodeId| common::is_ancestor_by_walk(&tree, v, x);
            let crossings: Vec<(NodeId, NodeId)> = oracle_path
                .windows(2)
                .filter(|p| in_subtree(p[0]) != in_subtree(p[1]))
                .map(|p| (p[0], p[1]))
                .collect();
            if let [(u, v)] = crossings[..] {
                let shape_cost = tree
                    .dist(u)
                    .checked_sub(tree.dist(x))
                    .map(|down| down + graph.edge_cost(u, v).unwrap() + tree.dist(v));
                if shape_cost == Some(optimal) {
                    green_shaped += 1;
                    assert_eq!(
                        entry.cost, optimal,
                        "green-shaped optimum not matched for node {x} (seed {seed})"
                    );
                }
            }
        }
    }
    assert!(green_shaped > 0, "classification never fired; corpus too small");
    println!(
        "criterion 10 (link variant: bound + avoidance on the corpus; exact on {green_shaped}/{checked} green-shaped small cases): PASS"
    );
}
