//! Lazy random walks `S_c = id - L / c`, heat semigroups, hitting times and
//! the commute-time distance.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::calculus::{GraphSpace, VertexFunction};
use crate::error::{Error, Result};
use crate::geometry::Embedding;
use crate::linalg::lu_solve;
use crate::spectral::{eigendecompose, Spectrum};

/// The transition operator `S_c` of a graph space.
///
/// `theta[x][x] = c mu_x - deg(x)` and `theta[x][y] = w_xy`, so that
/// `(S_c e_y)(x) = theta[x][y] / (c mu_x)`.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    graph: GraphSpace,
    c: f64,
    theta: DMatrix<f64>,
    spectrum: OnceLock<Spectrum>,
}

/// Builds `S_c`. A non-positive `c` selects the default `c = delta`, the
/// smallest value for which the walk is stochastic.
pub fn walk_operator(g: &GraphSpace, c: f64) -> Result<WalkOperator> {
    WalkOperator::new(g, c)
}

impl WalkOperator {
    pub fn new(g: &GraphSpace, c: f64) -> Result<Self> {
        if c.is_nan() || c.is_infinite() {
            return Err(Error::InvalidParameter(format!("walk constant c = {c} is not finite")));
        }
        let c = if c > 0.0 { c } else { default_c(g) };
        let n = g.n();
        let theta = DMatrix::from_fn(n, n, |x, y| {
            if x == y {
                c * g.measure()[x] - g.degree(x)
            } else {
                g.weight(x, y)
            }
        });
        Ok(Self {
            graph: g.clone(),
            c,
            theta,
            spectrum: OnceLock::new(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn graph(&self) -> &GraphSpace {
        &self.graph
    }

    pub fn theta(&self) -> &DMatrix<f64> {
        &self.theta
    }

    /// True when `c >= delta`, i.e. all `theta >= 0`.
    pub fn is_stochastic(&self) -> bool {
        self.c >= self.graph.delta()
    }

    fn require_stochastic(&self) -> Result<()> {
        if self.is_stochastic() {
            Ok(())
        } else {
            Err(Error::NotStochastic {
                c: self.c,
                delta: self.graph.delta(),
            })
        }
    }

    /// `P(x, y) = theta[x][y] / (c mu_x)`.
    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let mut p = self.theta.clone();
        for x in 0..self.graph.n() {
            p.row_mut(x).scale_mut(1.0 / (self.c * self.graph.measure()[x]));
        }
        p
    }

    /// Spectrum of the underlying Laplacian, computed once.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = eigendecompose(&self.graph)?;
        Ok(self.spectrum.get_or_init(|| s))
    }

    /// `S_c f = f - L f / c`.
    pub fn step(&self, f: &VertexFunction) -> Result<VertexFunction> {
        let lf = self.graph.laplacian_apply(f)?;
        Ok(VertexFunction::new(f.values() - lf.values() / self.c))
    }

    /// `p_k = S_c^k f`.
    pub fn evolve_discrete(&self, f: &VertexFunction, k: usize) -> Result<VertexFunction> {
        self.graph.check(f)?;
        let mut p = f.clone();
        for _ in 0..k {
            p = self.step(&p)?;
        }
        Ok(p)
    }

    /// `q_t = exp(-t L / c) f`, evaluated spectrally.
    pub fn evolve_continuous(&self, f: &VertexFunction, t: f64) -> Result<VertexFunction> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time t = {t} must be >= 0")));
        }
        let c = self.c;
        self.spectrum()?.apply_response(|rho| (-t * rho / c).exp(), f)
    }

    /// Transition density `p_k(x, y) = (P_k e_y)(x) / mu_y`.
    pub fn transition_density(&self, x: usize, y: usize, k: usize) -> Result<f64> {
        self.require_stochastic()?;
        let n = self.graph.n();
        if x >= n || y >= n {
            return Err(Error::InvalidParameter(format!("vertex out of range for n = {n}")));
        }
        let pk = self.evolve_discrete(&VertexFunction::basis(n, y), k)?;
        Ok(pk[x] / self.graph.measure()[y])
    }

    /// Expected first hitting times `m(x, y) = E^x[tau_+]` for a fixed target `y`.
    ///
    /// Solves the `(n - 1)`-dimensional system `(I - P) m = 1` on `V \ {y}`
    /// with `m(y, y) = vol(V) / mu_y` pinned.
    pub fn expected_hitting(&self, y: usize) -> Result<VertexFunction> {
        self.require_stochastic()?;
        let n = self.graph.n();
        if y >= n {
            return Err(Error::InvalidParameter(format!("target {y} out of range for n = {n}")));
        }
        self.graph.require_connected()?;
        let p = self.transition_matrix();
        let free: Vec<usize> = (0..n).filter(|&x| x != y).collect();
        let mut m = DVector::zeros(n);
        m[y] = self.graph.total_volume() / self.graph.measure()[y];
        if !free.is_empty() {
            let k = free.len();
            let a = DMatrix::from_fn(k, k, |r, s| {
                let delta = if r == s { 1.0 } else { 0.0 };
                delta - p[(free[r], free[s])]
            });
            let sol = lu_solve(a, &DMatrix::from_element(k, 1, 1.0), "hitting-time system")?;
            for (r, &x) in free.iter().enumerate() {
                m[x] = sol[(r, 0)];
            }
        }
        Ok(VertexFunction::new(m))
    }

    /// Largest entrywise residual of `m = 1 + S_c m - m(y, y) S_c e_y`.
    pub fn hitting_residual(&self, y: usize, m: &VertexFunction) -> Result<f64> {
        let n = self.graph.n();
        let sm = self.step(m)?;
        let sey = self.step(&VertexFunction::basis(n, y))?;
        Ok((0..n)
            .map(|x| (m[x] - (1.0 + sm[x] - m[y] * sey[x])).abs())
            .fold(0.0, f64::max))
    }

    /// Monte-Carlo estimate of `m(x, y)` from `walks` simulated walks.
    ///
    /// Next states are drawn by inverse-CDF sampling of `P(x, .)`.
    pub fn simulate_hitting<R: Rng + ?Sized>(
        &self,
        x: usize,
        y: usize,
        walks: usize,
        rng: &mut R,
    ) -> Result<HittingEstimate> {
        self.require_stochastic()?;
        self.graph.require_connected()?;
        let n = self.graph.n();
        if x >= n || y >= n {
            return Err(Error::InvalidParameter(format!("vertex out of range for n = {n}")));
        }
        if walks == 0 {
            return Err(Error::InvalidParameter("need at least one walk".into()));
        }
        let p = self.transition_matrix();
        let cdf: Vec<Vec<f64>> = (0..n)
            .map(|r| {
                let mut acc = 0.0;
                (0..n)
                    .map(|s| {
                        acc += p[(r, s)].max(0.0);
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..walks {
            let mut state = x;
            let mut steps = 0u64;
            loop {
                let row = &cdf[state];
                let u = rng.random::<f64>() * row[n - 1];
                state = row.partition_point(|&c| c <= u).min(n - 1);
                steps += 1;
                if state == y {
                    break;
                }
            }
            let s = steps as f64;
            sum += s;
            sum_sq += s * s;
        }
        let count = walks as f64;
        let mean = sum / count;
        let var = if walks > 1 {
            (sum_sq - count * mean * mean) / (count - 1.0)
        } else {
            0.0
        };
        Ok(HittingEstimate {
            mean,
            std_error: (var.max(0.0) / count).sqrt(),
            walks,
        })
    }
}

fn default_c(g: &GraphSpace) -> f64 {
    let delta = g.delta();
    if delta > 0.0 {
        delta
    } else {
        1.0
    }
}

/// Sample mean and standard error of simulated hitting times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub walks: usize,
}

/// Normalized commute times `n(x, y) = (T(x, y) + T(y, x)) / (c vol(V))`
/// from expected hitting times. A non-positive `c` selects `c = delta`.
pub fn commute_distance(g: &GraphSpace, c: f64) -> Result<DMatrix<f64>> {
    let wop = WalkOperator::new(g, c)?;
    wop.require_stochastic()?;
    g.require_connected()?;
    let n = g.n();
    // t[(x, y)] = T(x, y) = m(x, y) - m(y, y) delta_xy
    let mut t = DMatrix::zeros(n, n);
    for y in 0..n {
        let m = wop.expected_hitting(y)?;
        for x in 0..n {
            if x != y {
                t[(x, y)] = m[x];
            }
        }
    }
    let scale = 1.0 / (wop.c() * g.total_volume());
    Ok(DMatrix::from_fn(n, n, |x, y| (t[(x, y)] + t[(y, x)]) * scale))
}

/// `n(x, y) = sum_{i >= 2} (v_i(y) - v_i(x))^2 / rho_i`.
pub fn commute_distance_spectral(spec: &Spectrum) -> Result<DMatrix<f64>> {
    spec.graph().require_connected()?;
    let n = spec.len();
    let v = spec.eigenfunctions();
    Ok(DMatrix::from_fn(n, n, |x, y| {
        (1..n)
            .map(|i| {
                let d = v[(y, i)] - v[(x, i)];
                d * d / spec.eigenvalue(i)
            })
            .sum()
    }))
}

/// Embedding `x -> (rho_2^{-1/2} v_2(x), ..., rho_{dims+1}^{-1/2} v_{dims+1}(x))`,
/// whose squared Euclidean distances are the commute distances when
/// `dims = n - 1`.
pub fn commute_embedding(spec: &Spectrum, dims: usize) -> Result<Embedding> {
    spec.graph().require_connected()?;
    let n = spec.len();
    if dims > n.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "dims = {dims} exceeds n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let v = spec.eigenfunctions();
    let coords = DMatrix::from_fn(n, dims, |x, s| v[(x, s + 1)] / spec.eigenvalue(s + 1).sqrt());
    Ok(Embedding::new(coords))
}
