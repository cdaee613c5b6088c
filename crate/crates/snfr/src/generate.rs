//! Seeded random graph generation for benchmarks and conformance sweeps.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Cost range for generated edges: uniform over the fixed-point grid [1, 100].
fn random_cost(rng: &mut ChaCha8Rng) -> Cost {
    Cost::from_micros(rng.random_range(1_000_000..=100_000_000))
}

/// Generates a biconnected graph with `n` nodes and roughly `n * avg_degree / 2`
/// edges. Identical arguments always yield the identical graph.
///
/// Construction: a random Hamiltonian cycle (biconnected by itself) plus
/// random chords until the edge target is met.
pub fn generate_biconnected(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    if !avg_degree.is_finite() || avg_degree < 2.0 {
        return Err(Error::Generation(format!(
            "average degree {avg_degree} cannot yield a biconnected graph (need >= 2)"
        )));
    }
    let target = ((n as f64) * avg_degree / 2.0).round() as u64;
    let max_edges = (n as u64) * (n as u64 - 1) / 2;
    if target > max_edges {
        return Err(Error::Generation(format!(
            "average degree {avg_degree} asks for {target} edges but a simple graph on {n} nodes holds at most {max_edges}"
        )));
    }
    let target = target.max(n as u64); // the cycle is the biconnected minimum

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);

    let mut present: HashSet<(u32, u32)> = HashSet::new();
    let mut raw = Vec::with_capacity(target as usize);
    for i in 0..n {
        let a = order[i];
        let b = order[(i + 1) % n];
        present.insert((a.min(b), a.max(b)));
        raw.push((a, b, random_cost(&mut rng)));
    }

    let mut attempts = 0u64;
    let attempt_budget = 100 * target + 10_000;
    while (raw.len() as u64) < target {
        attempts += 1;
        if attempts > attempt_budget {
            return Err(Error::Generation(
                "chord sampling budget exhausted; density too close to complete".into(),
            ));
        }
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a == b || !present.insert((a.min(b), a.max(b))) {
            continue;
        }
        raw.push((a, b, random_cost(&mut rng)));
    }

    Graph::from_edges(n, raw)
}

/// Generates a random tree on `n` nodes with uniform random costs,
/// deterministic per seed. Useful for exercising tree protocols at sizes
/// where biconnectivity is irrelevant.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut raw = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let attach = rng.random_range(0..v);
        raw.push((order[v], order[attach], random_cost(&mut rng)));
    }
    Graph::from_edges(n, raw)
}
