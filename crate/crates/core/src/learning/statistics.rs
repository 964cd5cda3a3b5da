//! Covariance as Dirichlet energy, PCA and locality preserving projections.
//!
//! `(V, 2^V, mu / vol(V))` is treated as a probability space and each column
//! of `X` as a random variable. With weights `w_ij = mu_i mu_j / vol(V)^2`
//! the covariance of two columns equals their Dirichlet energy.

use nalgebra::{DMatrix, DVector};

use crate::calculus::{GraphSpace, VertexFunction};
use crate::error::{check_len, Error, Result};
use crate::geometry::Embedding;
use crate::linalg::{cholesky, fix_sign, symmetric_eigen};
use crate::spectral::eigendecompose;

fn check_measure(mu: &DVector<f64>) -> Result<f64> {
    if mu.is_empty() {
        return Err(Error::InvalidMeasure("measure is empty".into()));
    }
    if let Some(i) = mu.iter().position(|&m| !(m.is_finite() && m > 0.0)) {
        return Err(Error::InvalidMeasure(format!("mu[{i}] = {} is not positive", mu[i])));
    }
    Ok(mu.sum())
}

/// `w_ij = mu_i mu_j / vol(V)^2` for `i != j`.
pub fn bridge_weights(mu: &DVector<f64>) -> Result<DMatrix<f64>> {
    let vol = check_measure(mu)?;
    let n = mu.len();
    Ok(DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { mu[i] * mu[j] / (vol * vol) }))
}

/// `C(X_s, X_t) = E[X_s X_t] - E[X_s] E[X_t]` under `mu / vol(V)`.
pub fn covariance_matrix(mu: &DVector<f64>, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let vol = check_measure(mu)?;
    check_len(mu.len(), x.nrows())?;
    let p = mu / vol;
    let mean = x.tr_mul(&p);
    let d = x.ncols();
    Ok(DMatrix::from_fn(d, d, |s, t| {
        let exy: f64 = (0..x.nrows()).map(|i| p[i] * x[(i, s)] * x[(i, t)]).sum();
        exy - mean[s] * mean[t]
    }))
}

/// Residuals of the covariance/energy correspondence.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeReport {
    /// `max_{s,t} |C(X_s, X_t) - E(X_s, X_t)|`.
    pub covariance_error: f64,
    /// `max_s |L X_s - (X_s - E[X_s] 1) / vol(V)|`.
    pub laplacian_error: f64,
    /// `max_{i >= 2} |rho_i - 1 / vol(V)|`, plus `|rho_1|`.
    pub spectrum_error: f64,
}

/// Builds the bridge graph for `mu` and checks it against the columns of `x`.
pub fn covariance_bridge(mu: &DVector<f64>, x: &DMatrix<f64>) -> Result<(GraphSpace, BridgeReport)> {
    let w = bridge_weights(mu)?;
    check_len(mu.len(), x.nrows())?;
    let g = GraphSpace::new(mu.clone(), w)?;
    let vol = g.total_volume();
    let cov = covariance_matrix(mu, x)?;
    let d = x.ncols();
    let cols: Vec<VertexFunction> = (0..d).map(|s| VertexFunction::new(x.column(s).into_owned())).collect();

    let mut covariance_error: f64 = 0.0;
    for s in 0..d {
        for t in 0..d {
            let e = g.dirichlet_energy(&cols[s], &cols[t])?;
            covariance_error = covariance_error.max((cov[(s, t)] - e).abs());
        }
    }
    let mut laplacian_error: f64 = 0.0;
    for col in &cols {
        let lx = g.laplacian_apply(col)?;
        let m = g.mean(col)?;
        for i in 0..g.n() {
            laplacian_error = laplacian_error.max((lx[i] - (col[i] - m) / vol).abs());
        }
    }
    let spec = eigendecompose(&g)?;
    let mut spectrum_error = spec.eigenvalue(0).abs();
    for i in 1..spec.len() {
        spectrum_error = spectrum_error.max((spec.eigenvalue(i) - 1.0 / vol).abs());
    }
    Ok((
        g,
        BridgeReport {
            covariance_error,
            laplacian_error,
            spectrum_error,
        },
    ))
}

/// Principal components under the probability `mu / vol(V)`.
#[derive(Debug, Clone)]
pub struct PcaResult {
    /// `xi_s(i) = <X(i) - E[X], u_s>`, one column per component.
    pub scores: Embedding,
    /// Unit directions `u_s` as columns, by decreasing variance.
    pub directions: DMatrix<f64>,
    /// Variances `alpha_s`.
    pub variances: DVector<f64>,
    pub mean: DVector<f64>,
    /// `max_s |E[xi_s]|`.
    pub mean_error: f64,
    /// `max_{s,t} |E[xi_s xi_t] - alpha_s delta_st|`.
    pub moment_error: f64,
}

/// Projects the centred data onto the top eigenvectors of the covariance.
pub fn pca(mu: &DVector<f64>, x: &DMatrix<f64>, components: usize) -> Result<PcaResult> {
    let vol = check_measure(mu)?;
    check_len(mu.len(), x.nrows())?;
    let d = x.ncols();
    if components > d {
        return Err(Error::InvalidParameter(format!(
            "components = {components} exceeds dimension {d}"
        )));
    }
    let cov = covariance_matrix(mu, x)?;
    let (vals, vecs) = symmetric_eigen(&cov)?;
    let mut directions = DMatrix::zeros(d, components);
    let mut variances = DVector::zeros(components);
    for s in 0..components {
        let src = d - 1 - s;
        let mut u = vecs.column(src).into_owned();
        fix_sign(&mut u);
        directions.set_column(s, &u);
        variances[s] = vals[src];
    }
    let p = mu / vol;
    let mean = x.tr_mul(&p);
    let mut centred = x.clone();
    for mut row in centred.row_iter_mut() {
        row -= mean.transpose();
    }
    let scores = &centred * &directions;

    let mean_error = scores.tr_mul(&p).amax();
    let mut moment_error: f64 = 0.0;
    for s in 0..components {
        for t in 0..components {
            let m: f64 = (0..x.nrows()).map(|i| p[i] * scores[(i, s)] * scores[(i, t)]).sum();
            let want = if s == t { variances[s] } else { 0.0 };
            moment_error = moment_error.max((m - want).abs());
        }
    }
    Ok(PcaResult {
        scores: Embedding::new(scores),
        directions,
        variances,
        mean,
        mean_error,
        moment_error,
    })
}

/// Locality preserving projection directions.
#[derive(Debug, Clone)]
pub struct LppResult {
    /// Coefficient vectors `a` as columns, smallest energy first.
    pub directions: DMatrix<f64>,
    /// Generalized eigenvalues `a^T E a` (with `||X a||_A = 1`).
    pub eigenvalues: DVector<f64>,
    /// Projected functions `r = sum_s a_s X_s`, one column per direction.
    pub embedding: Embedding,
    /// Whether the `<., .>_A` Gram matrix needed regularization.
    pub regularized: bool,
}

/// Minimizes `sum_{s,t} a_s a_t E(X_s, X_t)` subject to `||sum_s a_s X_s||_A = 1`
/// through the pencil `(X^T (D - W) X) a = lambda (X^T M X) a`.
pub fn lpp(g: &GraphSpace, x: &DMatrix<f64>, components: usize) -> Result<LppResult> {
    check_len(g.n(), x.nrows())?;
    let d = x.ncols();
    if components > d {
        return Err(Error::InvalidParameter(format!(
            "components = {components} exceeds dimension {d}"
        )));
    }
    let energy_gram = x.transpose() * g.combinatorial_matrix() * x;
    let mx = DMatrix::from_fn(x.nrows(), d, |i, s| g.measure()[i] * x[(i, s)]);
    let mass_gram = x.transpose() * mx;

    let (mvals, _) = symmetric_eigen(&mass_gram)?;
    let max_ev = mvals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let rank_deficient = d > 0 && mvals[0] <= 1e-12 * max_ev.max(f64::MIN_POSITIVE);
    let mass_gram = if rank_deficient {
        let reg = 1e-10 * mass_gram.trace().max(f64::MIN_POSITIVE);
        mass_gram + DMatrix::identity(d, d) * reg
    } else {
        mass_gram
    };
    let chol = cholesky(mass_gram, "X^T M X")?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("Cholesky factor of X^T M X".into()))?;
    let reduced = &linv * &energy_gram * linv.transpose();
    let (vals, vecs) = symmetric_eigen(&reduced)?;
    let mut directions = DMatrix::zeros(d, components);
    for s in 0..components {
        let mut a = linv.transpose() * vecs.column(s);
        fix_sign(&mut a);
        directions.set_column(s, &a);
    }
    let eigenvalues = DVector::from_fn(components, |s, _| vals[s]);
    let embedding = Embedding::new(x * &directions);
    Ok(LppResult {
        directions,
        eigenvalues,
        embedding,
        regularized: rank_deficient,
    })
}
