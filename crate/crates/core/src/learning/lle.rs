//! Locally linear embedding: reconstruction weights, the curvature identity
//! under `mu = deg = 1`, and the bottom-eigenvector embedding.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::Embedding;
use crate::linalg::{fix_sign, symmetric_eigen};

/// Relative Tikhonov term used when a vertex has more neighbors than the
/// ambient dimension and no explicit value is given.
pub const DEFAULT_LLE_REG: f64 = 1e-3;

const ROW_SUM_TOL: f64 = 1e-9;

/// The `k` nearest other points of each point in Euclidean distance, ties
/// broken by index.
pub fn knn_neighbors(coords: &Embedding, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = coords.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("k = {k} outside [1, {}]", n.saturating_sub(1))));
    }
    let x = coords.coords();
    Ok((0..n)
        .map(|i| {
            let mut others: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| ((x.row(i) - x.row(j)).norm_squared(), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect())
}

/// Symmetric unit-weight adjacency of the k-nearest-neighbor relation.
pub fn knn_adjacency(coords: &Embedding, k: usize) -> Result<DMatrix<f64>> {
    let nb = knn_neighbors(coords, k)?;
    let n = coords.n();
    let mut w = DMatrix::zeros(n, n);
    for (i, row) in nb.iter().enumerate() {
        for &j in row {
            w[(i, j)] = 1.0;
            w[(j, i)] = 1.0;
        }
    }
    Ok(w)
}

// Sets the last entry to `1 - (sum of the others)`. When that partial sum
// lies in [0.5, 2] the subtraction is exact, so the left-to-right row sum is
// exactly one; otherwise the last entry is nudged by single ulps.
fn normalize_row(w: &mut [f64]) {
    let sum = |w: &[f64]| w.iter().sum::<f64>();
    // Absorb the residual into one entry, trying later entries first.
    for j in (0..w.len()).rev() {
        let saved = w[j];
        for _ in 0..8 {
            let s = sum(w);
            if s == 1.0 {
                return;
            }
            w[j] += 1.0 - s;
        }
        let base = w[j];
        for step in [f64::next_up, f64::next_down] {
            w[j] = base;
            for _ in 0..64 {
                if sum(w) == 1.0 {
                    return;
                }
                w[j] = step(w[j]);
            }
        }
        w[j] = saved;
    }
}

fn local_weights(x: &DMatrix<f64>, i: usize, nb: &[usize], reg: Option<f64>) -> Result<Vec<f64>> {
    let k = nb.len();
    let d = x.ncols();
    let z = DMatrix::from_fn(k, d, |a, s| x[(nb[a], s)] - x[(i, s)]);
    let mut gram = &z * z.transpose();
    let reg = reg.unwrap_or(if k > d { DEFAULT_LLE_REG } else { 0.0 });
    if reg > 0.0 {
        let tr = gram.trace();
        let scale = if tr > 0.0 { reg * tr } else { reg };
        for a in 0..k {
            gram[(a, a)] += scale;
        }
    }
    // Stationarity of |sum_a w_a z_a|^2 under sum_a w_a = 1.
    let mut kkt = DMatrix::zeros(k + 1, k + 1);
    kkt.view_mut((0, 0), (k, k)).copy_from(&gram);
    for a in 0..k {
        kkt[(a, k)] = 1.0;
        kkt[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = match kkt.clone().lu().solve(&rhs) {
        Some(s) if s.iter().all(|v| v.is_finite()) => s,
        _ => kkt
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::Singular(format!("local Gram system at vertex {i}: {e}")))?
            * rhs,
    };
    Ok(sol.rows(0, k).iter().copied().collect())
}

/// Row-stochastic weights `w~` minimizing `|r(i) - sum_j w~_ij r(j)|^2` over
/// each neighbor set. `reg` is relative to the trace of the local Gram matrix;
/// `None` applies [`DEFAULT_LLE_REG`] when a set is larger than the dimension.
pub fn lle_weights(coords: &Embedding, neighbors: &[Vec<usize>], reg: Option<f64>) -> Result<DMatrix<f64>> {
    let n = coords.n();
    if neighbors.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: neighbors.len(),
        });
    }
    if let Some(r) = reg {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("reg = {r} must be >= 0")));
        }
    }
    let mut w = DMatrix::zeros(n, n);
    for (i, nb) in neighbors.iter().enumerate() {
        if nb.is_empty() {
            return Err(Error::InvalidParameter(format!("vertex {i} has no neighbors")));
        }
        if let Some(&j) = nb.iter().find(|&&j| j >= n || j == i) {
            return Err(Error::InvalidParameter(format!("vertex {i} has invalid neighbor {j}")));
        }
        let mut seen = nb.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != nb.len() {
            return Err(Error::InvalidParameter(format!("vertex {i} lists a neighbor twice")));
        }
        let row = local_weights(coords.coords(), i, nb, reg)?;
        // Normalize in column order so the stored row sums to one exactly.
        let mut pairs: Vec<(usize, f64)> = nb.iter().copied().zip(row).collect();
        pairs.sort_by_key(|p| p.0);
        let mut vals: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        normalize_row(&mut vals);
        for (&(j, _), v) in pairs.iter().zip(vals) {
            w[(i, j)] = v;
        }
    }
    Ok(w)
}

/// Both sides of `sum_i |r(i) - sum_j w~_ij r(j)|^2 = sum_s |H_s|_A^2` with
/// `mu = 1` and `H_s = -(I - W~) r_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LleIdentityReport {
    /// Reconstruction energy summed over vertices.
    pub reconstruction: f64,
    /// Curvature norms summed over coordinates.
    pub curvature: f64,
    pub error: f64,
    /// `max_i |sum_j w~_ij - 1|`.
    pub row_sum_error: f64,
}

pub fn lle_curvature_identity(coords: &Embedding, w: &DMatrix<f64>) -> Result<LleIdentityReport> {
    let n = coords.n();
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.nrows(),
        });
    }
    let row_sum_error = w.row_iter().map(|r| (r.sum() - 1.0).abs()).fold(0.0, f64::max);
    if row_sum_error > ROW_SUM_TOL {
        return Err(Error::InvalidWeights(format!(
            "rows of w~ must sum to 1 (max deviation {row_sum_error:e})"
        )));
    }
    let x = coords.coords();
    let mut reconstruction = 0.0;
    for i in 0..n {
        let mut r = x.row(i).into_owned();
        for j in 0..n {
            if w[(i, j)] != 0.0 {
                r -= x.row(j) * w[(i, j)];
            }
        }
        reconstruction += r.norm_squared();
    }
    let mut curvature = 0.0;
    for s in 0..coords.dim() {
        let col = x.column(s);
        let h = -(col - w * col);
        curvature += h.norm_squared();
    }
    Ok(LleIdentityReport {
        reconstruction,
        curvature,
        error: (reconstruction - curvature).abs(),
        row_sum_error,
    })
}

/// `sum_i |y(i) - sum_j w~_ij y(j)|^2`.
pub fn lle_embedding_cost(w: &DMatrix<f64>, y: &Embedding) -> Result<f64> {
    if w.nrows() != y.n() || w.ncols() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: y.n(),
            found: w.nrows(),
        });
    }
    let y = y.coords();
    Ok((y - w * y).norm_squared())
}

// Orthonormal basis of the complement of the constants (Helmert).
fn helmert(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n - 1, |i, k| {
        let m = (k + 1) as f64;
        let scale = (m * (m + 1.0)).sqrt();
        if i <= k {
            1.0 / scale
        } else if i == k + 1 {
            -m / scale
        } else {
            0.0
        }
    })
}

/// Bottom eigenvectors of `(I - W~)^T (I - W~)` restricted to functions
/// orthogonal to the constants, orthonormal under `mu = 1`.
pub fn lle_embed(w: &DMatrix<f64>, dims: usize) -> Result<Embedding> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ncols(),
        });
    }
    if n == 0 || dims > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "dims = {dims} exceeds n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let m = DMatrix::identity(n, n) - w;
    let q = helmert(n);
    let mq = &m * &q;
    let (_, vecs) = symmetric_eigen(&(mq.transpose() * &mq))?;
    let mut y = &q * vecs.columns(0, dims);
    for mut col in y.column_iter_mut() {
        let mut v = col.clone_owned();
        fix_sign(&mut v);
        col.copy_from(&v);
    }
    Ok(Embedding::new(y))
}
