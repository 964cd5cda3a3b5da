//! Embedding and clustering methods expressed through the Laplacian:
//! eigenmaps, graph-cut loss, kernel k-means, PCA/LPP and LLE.

mod clustering;
mod lle;
mod statistics;

pub use clustering::{spectral_clustering, weighted_kmeans, ClusterMode, ClusterResult, KMeansRun, DEFAULT_RESTARTS};
pub use lle::{
    knn_adjacency, knn_neighbors, lle_curvature_identity, lle_embed, lle_embedding_cost, lle_weights,
    LleIdentityReport, DEFAULT_LLE_REG,
};
pub use statistics::{
    bridge_weights, covariance_bridge, covariance_matrix, lpp, pca, BridgeReport, LppResult, PcaResult,
};

use nalgebra::DMatrix;

use crate::calculus::{GraphSpace, Partition, VertexFunction};
use crate::error::{check_len, Error, Result};
use crate::geometry::Embedding;
use crate::spectral::Spectrum;

/// `x -> (v_2(x), ..., v_{dims+1}(x))`.
pub fn laplacian_eigenmaps(spec: &Spectrum, dims: usize) -> Result<Embedding> {
    spec.graph().require_connected()?;
    let n = spec.len();
    if dims > n.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "dims = {dims} exceeds n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    Ok(Embedding::new(spec.eigenfunctions().columns(1, dims).into_owned()))
}

/// `Loss_GC = sum_l E(chi_l, chi_l) / ||chi_l||_A^2`.
pub fn graph_cut_loss(g: &GraphSpace, p: &Partition) -> Result<f64> {
    check_len(g.n(), p.n())?;
    p.blocks().iter().try_fold(0.0, |acc, block| {
        let chi = VertexFunction::indicator(g.n(), block);
        let norm2 = g.inner(&chi, &chi)?;
        if norm2 <= 0.0 {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        Ok(acc + g.dirichlet_energy(&chi, &chi)? / norm2)
    })
}

/// The graph-cut loss rebuilt from the spectrum of `S_c`:
///
/// `Loss_GC = sum_i rho_i - (n - k) c
///            + sum_l sum_i c lambda_i / (2 vol(A_l)) iint_{A_l x A_l} (v_i(x) - v_i(y))^2 dmu dmu`
///
/// with `lambda_i = 1 - rho_i / c`. The `-(n - k) c` term comes from
/// `sum_l c vol(A_l) / vol(A_l) = k c` against `sum_i c lambda_i ||v_i||^2 = n c - sum_i rho_i`.
pub fn graph_cut_loss_spectral(spec: &Spectrum, p: &Partition, c: f64) -> Result<f64> {
    let g = spec.graph();
    check_len(g.n(), p.n())?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("c = {c} must be > 0")));
    }
    let n = spec.len();
    let mu = g.measure();
    let v = spec.eigenfunctions();
    let rho_sum: f64 = spec.eigenvalues().sum();
    let mut dispersion = 0.0;
    for block in p.blocks() {
        let vol = g.volume(&block)?;
        for i in 0..n {
            let lambda = 1.0 - spec.eigenvalue(i) / c;
            let mut pair_sum = 0.0;
            for &x in &block {
                for &y in &block {
                    let d = v[(x, i)] - v[(y, i)];
                    pair_sum += d * d * mu[x] * mu[y];
                }
            }
            dispersion += c * lambda / (2.0 * vol) * pair_sum;
        }
    }
    Ok(rho_sum - (n - p.k()) as f64 * c + dispersion)
}

/// Kernel k-means features: row `x` is `(sqrt(lambda_i) v_i(x))_i` with
/// `lambda_i = 1 - rho_i / c`. Requires `c >= rho_n`.
pub fn kernel_kmeans_features(spec: &Spectrum, c: f64) -> Result<DMatrix<f64>> {
    let rho_n = spec.max_eigenvalue();
    if !(c.is_finite() && c >= rho_n && c > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel features need c >= rho_n = {rho_n}, got {c}")));
    }
    let n = spec.len();
    let v = spec.eigenfunctions();
    Ok(DMatrix::from_fn(n, n, |x, i| {
        let lambda = (1.0 - spec.eigenvalue(i) / c).max(0.0);
        lambda.sqrt() * v[(x, i)]
    }))
}
