//! Curvature-flow smoothing with fixed weights.

use nalgebra::{DMatrix, DVector};

use super::{curvature, embedding_energy, Embedding};
use crate::calculus::GraphSpace;
use crate::error::{check_len, Result};
use crate::linalg::cholesky;
use crate::spectral::{eigendecompose, FilterKind};

/// One-step update rule of a smoothing flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothingMethod {
    /// `r <- r - eps L r = r + eps H`.
    Explicit { eps: f64 },
    /// `r <- (id - eps2 L)(id - eps L) r`, with `eps > 0` and `eps + eps2 < 0`.
    Taubin { eps: f64, eps2: f64 },
    /// `(id + eps L) r' = r`.
    Implicit { eps: f64 },
    /// `(id + eps L^2) r' = r`.
    BiImplicit { eps: f64 },
}

impl SmoothingMethod {
    /// The spectral response of one step.
    pub fn filter_kind(&self) -> FilterKind {
        match *self {
            SmoothingMethod::Explicit { eps } => FilterKind::Explicit { eps },
            SmoothingMethod::Taubin { eps, eps2 } => FilterKind::Taubin { eps, eps2 },
            SmoothingMethod::Implicit { eps } => FilterKind::Implicit { eps },
            SmoothingMethod::BiImplicit { eps } => FilterKind::BiImplicit { eps },
        }
    }
}

/// Applies `iterations` steps of `method` to every coordinate of `r`.
pub fn smooth(g: &GraphSpace, r: &Embedding, method: SmoothingMethod, iterations: usize) -> Result<Embedding> {
    method.filter_kind().validate()?;
    check_len(g.n(), r.n())?;
    match method {
        SmoothingMethod::Explicit { eps } => explicit(g, r.clone(), &[eps], iterations),
        SmoothingMethod::Taubin { eps, eps2 } => explicit(g, r.clone(), &[eps, eps2], iterations),
        SmoothingMethod::Implicit { eps } => {
            let s = g.symmetric_laplacian_matrix();
            let n = g.n();
            implicit(g, r, DMatrix::identity(n, n) + s * eps, iterations)
        }
        SmoothingMethod::BiImplicit { eps } => {
            let s = g.symmetric_laplacian_matrix();
            let n = g.n();
            implicit(g, r, DMatrix::identity(n, n) + (&s * &s) * eps, iterations)
        }
    }
}

fn explicit(g: &GraphSpace, mut r: Embedding, steps: &[f64], iterations: usize) -> Result<Embedding> {
    for _ in 0..iterations {
        for &eps in steps {
            let h = curvature(g, &r)?;
            r = Embedding::new(r.coords() + h.vectors * eps);
        }
    }
    Ok(r)
}

// Solved on the {e~_i} basis, r~ = M^{1/2} r, where the operator is symmetric.
fn implicit(g: &GraphSpace, r: &Embedding, system: DMatrix<f64>, iterations: usize) -> Result<Embedding> {
    let chol = cholesky(system, "implicit smoothing operator")?;
    let sqrt_mu: DVector<f64> = g.measure().map(f64::sqrt);
    let mut x = r.coords().clone();
    for mut col in x.column_iter_mut() {
        col.component_mul_assign(&sqrt_mu);
    }
    for _ in 0..iterations {
        chol.solve_mut(&mut x);
    }
    for mut col in x.column_iter_mut() {
        col.component_div_assign(&sqrt_mu);
    }
    Ok(Embedding::new(x))
}

/// Energies along an explicit flow.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub eps: f64,
    pub rho_max: f64,
    /// Whether `0 < eps < 2 / rho_max`, the range where the flow contracts every mode.
    pub stable_step: bool,
    /// Energy before the first step and after each step.
    pub energies: Vec<f64>,
    /// Whether no step increased the energy (up to round-off).
    pub monotone: bool,
}

/// Runs `steps` explicit steps and records the embedding energy after each.
pub fn energy_monotonicity_check(g: &GraphSpace, r: &Embedding, eps: f64, steps: usize) -> Result<MonotonicityReport> {
    let rho_max = eigendecompose(g)?.max_eigenvalue();
    let mut energies = vec![embedding_energy(g, r)?];
    let mut cur = r.clone();
    for _ in 0..steps {
        cur = explicit(g, cur, &[eps], 1)?;
        energies.push(embedding_energy(g, &cur)?);
    }
    let slack = 1e-12 * energies[0].max(f64::MIN_POSITIVE);
    let monotone = energies.windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(MonotonicityReport {
        eps,
        rho_max,
        stable_step: eps > 0.0 && eps * rho_max < 2.0,
        energies,
        monotone,
    })
}
