//! Compiles every code snippet in the guide as a doctest, keeping the book
//! and the library in lockstep.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub mod $name {}
    };
}

chapter!(introduction, "../../../book/src/introduction.md");
chapter!(network_model, "../../../book/src/network-model.md");
chapter!(interval_labels, "../../../book/src/interval-labels.md");
chapter!(edge_collection, "../../../book/src/edge-collection.md");
chapter!(recovery_graphs, "../../../book/src/recovery-graphs.md");
chapter!(link_failures, "../../../book/src/link-failures.md");
chapter!(simulator, "../../../book/src/simulator.md");
chapter!(verification, "../../../book/src/verification.md");
chapter!(cli, "../../../book/src/cli.md");
