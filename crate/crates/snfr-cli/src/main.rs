//! Command-line front end: graph generation, protocol runs, verification
//! against the centralized reference and optimality oracles, and metrics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use snfr::oracle;
use snfr::report;
use snfr::{
    generate_biconnected, is_biconnected, run_distributed, FailureMode, Graph, NodeId,
    RunOptions, RunOutput,
};

#[derive(Parser)]
#[command(name = "snfr", version, about = "Recovery paths around single node and link failures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random biconnected graph.
    Gen {
        /// Number of nodes (at least 3).
        n: usize,
        /// Target average degree (at least 2).
        avg_degree: f64,
        /// Generator seed; identical seeds give identical graphs.
        seed: u64,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the distributed protocol and emit recovery tables.
    Run(RunArgs),
    /// Run and check: distributed vs centralized equality, route validity,
    /// and the stretch report. Nonzero exit on any mismatch.
    Verify(RunArgs),
    /// Run and print message-accounting metrics only.
    Stats(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Graph file in the text format (see `gen`).
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generate the input instead: "n,avg_degree" with --seed.
    #[arg(long, value_name = "N,AVG_DEGREE")]
    gen: Option<String>,
    /// Seed for --gen.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sink node the recovery paths lead to.
    #[arg(long, default_value_t = 0)]
    sink: u32,
    /// Which failure tables to compute.
    #[arg(long, value_enum, default_value_t = ModeArg::Node)]
    mode: ModeArg,
    /// Bound each node to this many accepted messages per tick.
    #[arg(long)]
    inbox_capacity: Option<u32>,
    /// Write artifacts (tables, labels, stores, metrics) into this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output flavor: canonical text or JSON.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Node,
    Link,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

impl From<ModeArg> for FailureMode {
    fn from(m: ModeArg) -> FailureMode {
        match m {
            ModeArg::Node => FailureMode::Node,
            ModeArg::Link => FailureMode::Link,
            ModeArg::Both => FailureMode::Both,
        }
    }
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Gen { n, avg_degree, seed, out } => cmd_gen(n, avg_degree, seed, out),
        Command::Run(args) => cmd_run(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Stats(args) => cmd_stats(&args),
    }
}

fn cmd_gen(n: usize, avg_degree: f64, seed: u64, out: Option<PathBuf>) -> Result<ExitCode> {
    let graph = generate_biconnected(n, avg_degree, seed)?;
    let biconnected = is_biconnected(&graph)?;
    let summary = format!(
        "n={} m={} biconnected={}",
        graph.node_count(),
        graph.edge_count(),
        biconnected
    );
    match out {
        Some(path) => {
            fs::write(&path, graph.render())
                .with_context(|| format!("writing {}", path.display()))?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{}", graph.render());
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_graph(args: &RunArgs) -> Result<Graph> {
    match (&args.graph, &args.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(Graph::parse(&text)?)
        }
        (None, Some(spec)) => {
            let (n, avg) = spec
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .context("--gen expects \"n,avg_degree\"")?;
            Ok(generate_biconnected(n, avg, args.seed)?)
        }
        _ => bail!("exactly one of --graph or --gen is required"),
    }
}

fn prepare(args: &RunArgs) -> Result<(Graph, NodeId, RunOutput)> {
    let graph = load_graph(args)?;
    let sink = NodeId(args.sink);
    if sink.idx() >= graph.node_count() {
        bail!("sink {} out of range for {} nodes", args.sink, graph.node_count());
    }
    if !is_biconnected(&graph)? {
        bail!("input not biconnected");
    }
    let options = RunOptions {
        mode: args.mode.into(),
        inbox_capacity: args.inbox_capacity,
        ..RunOptions::default()
    };
    let output = run_distributed(&graph, sink, &options)?;
    Ok((graph, sink, output))
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode> {
    let (_, sink, output) = prepare(args)?;
    let tables_text = report::render_tables(sink, &output.tables);
    let link_text = report::render_link_tables(sink, &output.link_entries);
    let metrics_text = report::render_stats(&output.metrics.total);

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        match args.format {
            FormatArg::Text => {
                if args.mode != ModeArg::Link {
                    write_artifact(dir, "tables.txt", &tables_text)?;
                }
                if args.mode != ModeArg::Node {
                    write_artifact(dir, "link-tables.txt", &link_text)?;
                }
                write_artifact(dir, "labels.txt", &report::render_labels(&output.labels))?;
                write_artifact(dir, "stores.txt", &output.store_dump)?;
                write_artifact(dir, "metrics.txt", &render_metrics(&output))?;
            }
            FormatArg::Structured => {
                if args.mode != ModeArg::Link {
                    write_artifact(dir, "tables.json", &to_json(&output.tables)?)?;
                }
                if args.mode != ModeArg::Node {
                    write_artifact(dir, "link-tables.json", &to_json(&output.link_entries)?)?;
                }
                write_artifact(dir, "labels.json", &to_json(&output.labels)?)?;
                write_artifact(dir, "stores.txt", &output.store_dump)?;
                write_artifact(dir, "metrics.json", &to_json(&output.metrics)?)?;
            }
        }
        println!("wrote artifacts to {}", dir.display());
    } else {
        match args.format {
            FormatArg::Text => {
                if args.mode != ModeArg::Link {
                    print!("{tables_text}");
                }
                if args.mode != ModeArg::Node {
                    print!("{link_text}");
                }
                print!("{metrics_text}");
            }
            FormatArg::Structured => {
                if args.mode != ModeArg::Link {
                    println!("{}", to_json(&output.tables)?);
                }
                if args.mode != ModeArg::Node {
                    println!("{}", to_json(&output.link_entries)?);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn render_metrics(output: &RunOutput) -> String {
    let m = &output.metrics;
    let mut out = String::new();
    out.push_str("# labeling\n");
    out.push_str(&report::render_stats(&m.labeling));
    out.push_str("# collection\n");
    out.push_str(&report::render_stats(&m.collection));
    out.push_str("# recovery\n");
    out.push_str(&report::render_stats(&m.recovery));
    out.push_str("# totals\n");
    out.push_str(&report::render_stats(&m.total));
    out.push_str(&format!("edge_report_deliveries {}\n", m.edge_report_deliveries));
    out.push_str(&format!(
        "predicted_edge_report_deliveries {}\n",
        m.predicted_edge_report_deliveries
    ));
    out.push_str(&format!("edges_plus_nodes {}\n", m.edges_plus_nodes));
    out
}

fn cmd_stats(args: &RunArgs) -> Result<ExitCode> {
    let (_, _, output) = prepare(args)?;
    match args.format {
        FormatArg::Text => print!("{}", render_metrics(&output)),
        FormatArg::Structured => println!("{}", to_json(&output.metrics)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &RunArgs) -> Result<ExitCode> {
    let (graph, sink, output) = prepare(args)?;
    let mut failed = false;

    // (a) Distributed vs centralized, byte for byte. A previously written
    // tables artifact takes the distributed side's place when present, so
    // stored runs can be audited later.
    if args.mode != ModeArg::Link {
        let reference = oracle::centralized_snfr(&graph, sink)?;
        let reference_text = report::render_tables(sink, &reference);
        let distributed_text = match &args.out_dir {
            Some(dir) if dir.join("tables.txt").is_file() => {
                let text = fs::read_to_string(dir.join("tables.txt"))?;
                let (file_sink, tables) = report::parse_tables(&text)?;
                if file_sink != sink {
                    bail!("tables file was computed for sink {file_sink}, not {sink}");
                }
                report::render_tables(file_sink, &tables)
            }
            _ => report::render_tables(sink, &output.tables),
        };
        if distributed_text == reference_text {
            println!("equality: OK");
        } else {
            failed = true;
            println!("equality: MISMATCH");
            report_first_divergence(&distributed_text, &reference_text);
        }

        // (b) Route validity: endpoints, avoidance, exact cost sums.
        let mut validity_ok = true;
        for table in &output.tables {
            for entry in &table.entries {
                if let Err(err) =
                    oracle::validate_recovery_entry(&graph, sink, table.failed, entry)
                {
                    validity_ok = false;
                    failed = true;
                    println!("validity: FAIL {err}");
                }
            }
        }
        if validity_ok {
            println!("validity: OK");
        }

        // (c) Stretch against the exact optimum.
        let stretch = oracle::stretch_report(&graph, sink, &output.tables)?;
        print!("{}", report::render_stretch(&stretch));
    }

    if args.mode != ModeArg::Node {
        let reference = oracle::centralized_link_recovery(&graph, sink)?;
        let ref_text = report::render_link_tables(sink, &reference);
        let got_text = report::render_link_tables(sink, &output.link_entries);
        if ref_text == got_text {
            println!("link-equality: OK");
        } else {
            failed = true;
            println!("link-equality: MISMATCH");
            report_first_divergence(&got_text, &ref_text);
        }
    }

    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn report_first_divergence(got: &str, expected: &str) {
    for (g, e) in got.lines().zip(expected.lines()) {
        if g != e {
            println!("  first divergence:");
            println!("    distributed: {g}");
            println!("    centralized: {e}");
            return;
        }
    }
    println!("  one document is a prefix of the other");
}
