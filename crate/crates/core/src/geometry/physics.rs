//! Point masses under Hooke springs and Newtonian gravity.
//!
//! With `w = k` and `mu = m` the spring force is `m_i H(i)` and the spring
//! potential is the embedding energy. With the gravitational weights
//! `w_ij = CG m_i m_j / |r(i) - r(j)|^d` the field is `(d - 2) H(i)` and the
//! potential is minus the embedding energy.

use nalgebra::{DMatrix, DVector};

use super::{curvature, Embedding};
use crate::calculus::GraphSpace;
use crate::error::{check_len, Error, Result};
use crate::spectral::{eigendecompose, Spectrum};

/// Points closer than this are treated as collided.
pub const COLLISION_TOL: f64 = 1e-9;

/// Masses joined pairwise by zero-length springs.
#[derive(Debug, Clone)]
pub struct HookeSystem {
    graph: GraphSpace,
}

/// Spring force per point and total potential.
#[derive(Debug, Clone, PartialEq)]
pub struct HookeState {
    pub force: DMatrix<f64>,
    pub potential: f64,
}

impl HookeSystem {
    /// Spring constants must be symmetric, non-negative, zero on the diagonal.
    pub fn new(masses: DVector<f64>, springs: DMatrix<f64>) -> Result<Self> {
        Ok(Self {
            graph: GraphSpace::new(masses, springs)?,
        })
    }

    /// The graph space with `w = k` and `mu = m`.
    pub fn graph(&self) -> &GraphSpace {
        &self.graph
    }

    pub fn masses(&self) -> &DVector<f64> {
        self.graph.measure()
    }

    pub fn springs(&self) -> &DMatrix<f64> {
        self.graph.weights()
    }

    /// Hooke's law evaluated directly:
    /// `F(i) = sum_j k_ij (r(j) - r(i))`, `U = 1/2 sum_ij k_ij |r(i) - r(j)|^2`.
    pub fn force(&self, r: &Embedding) -> Result<HookeState> {
        let n = self.graph.n();
        check_len(n, r.n())?;
        let k = self.springs();
        let mut force = DMatrix::zeros(n, r.dim());
        let mut potential = 0.0;
        for i in 0..n {
            for j in 0..n {
                let diff = r.coords().row(j) - r.coords().row(i);
                let mut row = force.row_mut(i);
                row += &diff * k[(i, j)];
                potential += 0.5 * k[(i, j)] * diff.norm_squared();
            }
        }
        Ok(HookeState { force, potential })
    }

    /// Normal modes: the Laplacian spectrum of `(k, m)`. Mode `i` oscillates
    /// with angular frequency `sqrt(rho_i)`.
    pub fn oscillation_frequencies(&self) -> Result<Spectrum> {
        eigendecompose(&self.graph)
    }

    /// Largest leapfrog step accepted by [`leapfrog`](Self::leapfrog),
    /// `0.1 / sqrt(rho_n)`.
    pub fn max_step(&self) -> Result<f64> {
        let rho = self.oscillation_frequencies()?.max_eigenvalue();
        Ok(if rho > 0.0 { 0.1 / rho.sqrt() } else { f64::INFINITY })
    }

    /// Integrates `r'' = -L r` with velocity Verlet.
    ///
    /// `observe(step, r, v)` is called for the initial state and after every
    /// step. Returns the final positions and velocities.
    pub fn leapfrog<F>(
        &self,
        r0: &Embedding,
        v0: &DMatrix<f64>,
        dt: f64,
        steps: usize,
        mut observe: F,
    ) -> Result<(DMatrix<f64>, DMatrix<f64>)>
    where
        F: FnMut(usize, &DMatrix<f64>, &DMatrix<f64>),
    {
        check_len(self.graph.n(), r0.n())?;
        if v0.shape() != r0.coords().shape() {
            return Err(Error::DimensionMismatch {
                expected: r0.coords().len(),
                found: v0.len(),
            });
        }
        let bound = self.max_step()?;
        if !(dt > 0.0 && dt <= bound) {
            return Err(Error::InvalidParameter(format!(
                "leapfrog step {dt} outside (0, {bound}]"
            )));
        }
        let l = self.graph.laplacian_matrix();
        let mut r = r0.coords().clone();
        let mut v = v0.clone();
        let mut a = -(&l * &r);
        observe(0, &r, &v);
        for step in 1..=steps {
            v += &a * (0.5 * dt);
            r += &v * dt;
            a = -(&l * &r);
            v += &a * (0.5 * dt);
            observe(step, &r, &v);
        }
        Ok((r, v))
    }
}

/// Gravitational weights, field and potential of a point configuration.
#[derive(Debug, Clone)]
pub struct NewtonState {
    /// Graph with `w_ij = CG m_i m_j / |r(i) - r(j)|^d` and `mu = m`.
    pub graph: GraphSpace,
    /// `g(i) = -CG (d - 2) sum_{j != i} m_j (r(i) - r(j)) / |r(i) - r(j)|^d`.
    pub field: DMatrix<f64>,
    /// `U = -(CG / 2) sum_{i != j} m_i m_j / |r(i) - r(j)|^{d-2}`.
    pub potential: f64,
}

fn check_newton_inputs(masses: &DVector<f64>, r: &Embedding, cg: f64) -> Result<()> {
    check_len(masses.len(), r.n())?;
    if r.dim() < 3 {
        return Err(Error::InvalidParameter(format!(
            "gravitation needs ambient dimension >= 3, got {}",
            r.dim()
        )));
    }
    if !(cg.is_finite() && cg > 0.0) {
        return Err(Error::InvalidParameter(format!("CG = {cg} must be > 0")));
    }
    if let Some(i) = masses.iter().position(|&m| !(m.is_finite() && m > 0.0)) {
        return Err(Error::InvalidMeasure(format!("mass {i} is not positive")));
    }
    Ok(())
}

fn closest_pair(r: &Embedding) -> Option<(usize, usize, f64)> {
    let n = r.n();
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (r.coords().row(i) - r.coords().row(j)).norm();
            if best.is_none_or(|(_, _, b)| d < b) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// `w_ij = CG m_i m_j / |r(i) - r(j)|^d` off the diagonal.
pub fn newton_weights(masses: &DVector<f64>, r: &Embedding, cg: f64) -> Result<DMatrix<f64>> {
    check_newton_inputs(masses, r, cg)?;
    if let Some((i, j, d)) = closest_pair(r) {
        if d <= COLLISION_TOL {
            return Err(Error::InvalidParameter(format!(
                "points {i} and {j} coincide (distance {d})"
            )));
        }
    }
    let n = r.n();
    let d = r.dim() as i32;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            let dist = (r.coords().row(i) - r.coords().row(j)).norm();
            cg * masses[i] * masses[j] / dist.powi(d)
        }
    }))
}

/// Evaluates the gravitational field and potential directly, alongside the
/// graph space whose curvature reproduces them.
pub fn newton_system(masses: &DVector<f64>, r: &Embedding, cg: f64) -> Result<NewtonState> {
    let w = newton_weights(masses, r, cg)?;
    let n = r.n();
    let d = r.dim();
    let mut field = DMatrix::zeros(n, d);
    let mut potential = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let diff = r.coords().row(i) - r.coords().row(j);
            let dist = diff.norm();
            let mut row = field.row_mut(i);
            row -= &diff * (cg * (d as f64 - 2.0) * masses[j] / dist.powi(d as i32));
            potential -= 0.5 * cg * masses[i] * masses[j] / dist.powi(d as i32 - 2);
        }
    }
    Ok(NewtonState {
        graph: GraphSpace::new(masses.clone(), w)?,
        field,
        potential,
    })
}

/// Result of [`variable_weight_flow`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowOutcome {
    pub embedding: Embedding,
    /// Steps actually taken.
    pub completed: usize,
    /// Pair that came within [`COLLISION_TOL`], if the flow halted early.
    pub collision: Option<(usize, usize)>,
}

/// Explicit flow `r <- r + eps H` with gravitational weights recomputed
/// from the current positions before every step.
pub fn variable_weight_flow(
    masses: &DVector<f64>,
    r: &Embedding,
    cg: f64,
    eps: f64,
    iterations: usize,
) -> Result<FlowOutcome> {
    check_newton_inputs(masses, r, cg)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("flow step eps = {eps} must be > 0")));
    }
    let mut cur = r.clone();
    for step in 0..iterations {
        if let Some((i, j, d)) = closest_pair(&cur) {
            if d <= COLLISION_TOL {
                return Ok(FlowOutcome {
                    embedding: cur,
                    completed: step,
                    collision: Some((i, j)),
                });
            }
        }
        let w = newton_weights(masses, &cur, cg)?;
        let g = GraphSpace::new(masses.clone(), w)?;
        let h = curvature(&g, &cur)?;
        cur = Embedding::new(cur.coords() + h.vectors * eps);
    }
    Ok(FlowOutcome {
        embedding: cur,
        completed: iterations,
        collision: None,
    })
}
