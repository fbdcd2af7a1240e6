//! Benchmark fixtures shared by the criterion targets.

use smc_kernel::gen::{gen_split, random_clique_forest, random_signed_graph, seeded, SplitPartition};
use smc_kernel::SignedGraph;

use rand::Rng;

/// Connected random signed graph on `n` vertices.
pub fn signed(n: usize, seed: u64) -> SignedGraph {
    random_signed_graph(n, 0.4, 0.3, seed).expect("valid parameters")
}

/// Negative clique-forest with random vertex weights.
pub fn weighted_forest(n: usize, seed: u64) -> (SignedGraph, Vec<u64>, Vec<u64>) {
    let t = random_clique_forest(n, 4, 0.2, seed).expect("valid parameters");
    let mut rng = seeded(seed);
    let w1 = (0..n).map(|_| rng.random_range(0..8)).collect();
    let w2 = (0..n).map(|_| rng.random_range(0..8)).collect();
    (t, w1, w2)
}

/// Connected all-negative split graph with a sparse independent side.
pub fn split(clique: usize, independent: usize, seed: u64) -> (SignedGraph, SplitPartition) {
    (seed..)
        .map(|s| gen_split(clique, independent, 0.1, 0.0, s).expect("valid parameters"))
        .find(|(g, _)| g.is_connected())
        .expect("some seed is connected")
}
