//! Small graph families and seeded random instances.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::calculus::GraphSpace;

/// Unit-weight path on `n` vertices, unit measure.
pub fn path_graph(n: usize) -> GraphSpace {
    let mut w = DMatrix::zeros(n, n);
    for i in 1..n {
        w[(i - 1, i)] = 1.0;
        w[(i, i - 1)] = 1.0;
    }
    GraphSpace::with_unit_measure(w).expect("path weights are valid")
}

/// Unit-weight complete graph, unit measure.
pub fn complete_graph(n: usize) -> GraphSpace {
    let w = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
    GraphSpace::with_unit_measure(w).expect("complete weights are valid")
}

/// Unit-weight star with centre 0, unit measure.
pub fn star_graph(n: usize) -> GraphSpace {
    let mut w = DMatrix::zeros(n, n);
    for i in 1..n {
        w[(0, i)] = 1.0;
        w[(i, 0)] = 1.0;
    }
    GraphSpace::with_unit_measure(w).expect("star weights are valid")
}

/// Random symmetric weights on a connected graph.
///
/// A random spanning tree guarantees connectivity; every other pair gets an
/// edge with probability `density`. Weights are uniform in `[0.1, 2)` and
/// the measure is uniform in `[0.2, 3)`.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> GraphSpace {
    let mut w = DMatrix::zeros(n, n);
    for i in 1..n {
        let j = rng.random_range(0..i);
        let x = rng.random_range(0.1..2.0);
        w[(i, j)] = x;
        w[(j, i)] = x;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if w[(i, j)] == 0.0 && rng.random_bool(density) {
                let x = rng.random_range(0.1..2.0);
                w[(i, j)] = x;
                w[(j, i)] = x;
            }
        }
    }
    let mu = DVector::from_fn(n, |_, _| rng.random_range(0.2..3.0));
    GraphSpace::new(mu, w).expect("generated weights are valid")
}

/// Random values uniform in `[-1, 1)`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Random `rows x cols` matrix with entries uniform in `[-1, 1)`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}
