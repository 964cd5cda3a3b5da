//! Fixtures shared by the benchmarks.

use discgeom::generators::{random_connected_graph, random_vector};
use discgeom::{GraphSpace, VertexFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Connected random graph of `n` vertices, fixed by `seed`.
pub fn graph(n: usize, density: f64, seed: u64) -> GraphSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_connected_graph(&mut rng, n, density)
}

pub fn signal(n: usize, seed: u64) -> VertexFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VertexFunction::new(random_vector(&mut rng, n))
}
