//! Laplacian eigenpairs, the graph Fourier transform, convolution and
//! spectral filters.
//!
//! The generalized problem `(D - W) f = rho M f` is solved through the
//! symmetric matrix `M^{-1/2}(D - W)M^{-1/2}`; eigenvectors are mapped back
//! with `v = M^{-1/2} v~`, which makes them orthonormal in `<., .>_A`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::calculus::{Basis, GraphSpace, VertexFunction};
use crate::error::{check_len, Error, Result};
use crate::linalg::{fix_sign, symmetric_eigen};

/// Computed eigenvalues in `(-CLAMP_TOL, 0)` are set to zero.
pub const CLAMP_TOL: f64 = 1e-9;

/// Eigenvalues `rho_1 <= ... <= rho_n` and `<., .>_A`-orthonormal eigenfunctions.
#[derive(Debug, Clone)]
pub struct Spectrum {
    graph: GraphSpace,
    eigenvalues: DVector<f64>,
    /// Column `i` holds `v_{i+1}`.
    eigenfunctions: DMatrix<f64>,
}

/// Solves the Laplacian eigenproblem of `g`.
pub fn eigendecompose(g: &GraphSpace) -> Result<Spectrum> {
    let n = g.n();
    let (mut values, tilde) = symmetric_eigen(&g.symmetric_laplacian_matrix())?;
    for v in values.iter_mut() {
        if *v < 0.0 && *v > -CLAMP_TOL {
            *v = 0.0;
        }
    }
    let inv_sqrt = g.measure().map(|m| 1.0 / m.sqrt());
    let mu = g.measure();
    let mut vectors = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut v = tilde.column(k).component_mul(&inv_sqrt);
        // Gram-Schmidt against earlier columns in <., .>_A.
        for prev in 0..k {
            let p = vectors.column(prev);
            let proj: f64 = (0..n).map(|i| v[i] * p[i] * mu[i]).sum();
            v.axpy(-proj, &p, 1.0);
        }
        let norm = (0..n).map(|i| v[i] * v[i] * mu[i]).sum::<f64>().sqrt();
        v /= norm;
        fix_sign(&mut v);
        vectors.set_column(k, &v);
    }
    Ok(Spectrum {
        graph: g.clone(),
        eigenvalues: values,
        eigenfunctions: vectors,
    })
}

impl Spectrum {
    pub fn graph(&self) -> &GraphSpace {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `rho_{i+1}` (zero-based index).
    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    /// Largest eigenvalue `rho_n`.
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    /// Matrix whose columns are the eigenfunctions.
    pub fn eigenfunctions(&self) -> &DMatrix<f64> {
        &self.eigenfunctions
    }

    /// `v_{i+1}` (zero-based index).
    pub fn eigenfunction(&self, i: usize) -> VertexFunction {
        VertexFunction::new(self.eigenfunctions.column(i).into_owned())
    }

    /// Largest `||L v_i - rho_i v_i||_A`.
    pub fn max_residual(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let v = self.eigenfunction(i);
                let lv = self.graph.laplacian_apply(&v).expect("matching dimensions");
                let r = VertexFunction::new(lv.values() - v.values() * self.eigenvalues[i]);
                self.graph.norm(&r).expect("matching dimensions")
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients `F[f]_i = <f, v_i>_A`.
    pub fn fourier(&self, f: &VertexFunction) -> Result<DVector<f64>> {
        self.graph.check(f)?;
        let weighted = f.component_mul(self.graph.measure());
        Ok(self.eigenfunctions.tr_mul(&weighted))
    }

    /// `f = sum_i coeffs_i v_i`.
    pub fn inverse_fourier(&self, coeffs: &DVector<f64>) -> Result<VertexFunction> {
        check_len(self.len(), coeffs.len())?;
        Ok(VertexFunction::new(&self.eigenfunctions * coeffs))
    }

    /// Convolution, defined by `F[f * h]_i = F[f]_i F[h]_i`.
    pub fn convolve(&self, f: &VertexFunction, h: &VertexFunction) -> Result<VertexFunction> {
        let coeffs = self.fourier(f)?.component_mul(&self.fourier(h)?);
        self.inverse_fourier(&coeffs)
    }

    /// Exact spectral application `sum_i g(rho_i) F[f]_i v_i`.
    pub fn apply_response<G: Fn(f64) -> f64>(&self, response: G, f: &VertexFunction) -> Result<VertexFunction> {
        let mut coeffs = self.fourier(f)?;
        for (c, &rho) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= response(rho);
        }
        self.inverse_fourier(&coeffs)
    }

    /// Applies a filter, exactly or by Chebyshev approximation depending on
    /// `spec.chebyshev_order`.
    pub fn apply_filter(&self, spec: &FilterSpec, f: &VertexFunction) -> Result<VertexFunction> {
        self.graph.check(f)?;
        if spec.chebyshev_order == 0 {
            return self.apply_response(|x| spec.kind.response(x), f);
        }
        let upper = self.max_eigenvalue() * (1.0 + 1e-6);
        chebyshev_apply(&self.graph, |x| spec.kind.response(x), spec.chebyshev_order, upper, f)
    }
}

/// Shape of a spectral filter `g(rho)`.
#[derive(Clone)]
pub enum FilterKind {
    /// Arbitrary response function.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// `exp(-t x / c)`.
    Heat { t: f64, c: f64 },
    /// `1 - eps x`, one explicit curvature-flow step.
    Explicit { eps: f64 },
    /// `(1 - eps2 x)(1 - eps x)`.
    Taubin { eps: f64, eps2: f64 },
    /// `(1 + eps x)^{-1}`.
    Implicit { eps: f64 },
    /// `(1 + eps x^2)^{-1}`.
    BiImplicit { eps: f64 },
}

impl fmt::Debug for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterKind::Custom(_) => f.write_str("Custom(..)"),
            FilterKind::Heat { t, c } => write!(f, "Heat {{ t: {t}, c: {c} }}"),
            FilterKind::Explicit { eps } => write!(f, "Explicit {{ eps: {eps} }}"),
            FilterKind::Taubin { eps, eps2 } => write!(f, "Taubin {{ eps: {eps}, eps2: {eps2} }}"),
            FilterKind::Implicit { eps } => write!(f, "Implicit {{ eps: {eps} }}"),
            FilterKind::BiImplicit { eps } => write!(f, "BiImplicit {{ eps: {eps} }}"),
        }
    }
}

impl FilterKind {
    pub fn custom<G: Fn(f64) -> f64 + Send + Sync + 'static>(g: G) -> Self {
        FilterKind::Custom(Arc::new(g))
    }

    pub fn response(&self, x: f64) -> f64 {
        match self {
            FilterKind::Custom(g) => g(x),
            FilterKind::Heat { t, c } => (-t * x / c).exp(),
            FilterKind::Explicit { eps } => 1.0 - eps * x,
            FilterKind::Taubin { eps, eps2 } => (1.0 - eps2 * x) * (1.0 - eps * x),
            FilterKind::Implicit { eps } => 1.0 / (1.0 + eps * x),
            FilterKind::BiImplicit { eps } => 1.0 / (1.0 + eps * x * x),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            FilterKind::Custom(_) => Ok(()),
            FilterKind::Heat { t, c } => {
                if !(t.is_finite() && t >= 0.0) {
                    bad(format!("heat filter needs t >= 0, got {t}"))
                } else if !(c.is_finite() && c > 0.0) {
                    bad(format!("heat filter needs c > 0, got {c}"))
                } else {
                    Ok(())
                }
            }
            FilterKind::Explicit { eps } => {
                if eps.is_finite() && eps >= 0.0 {
                    Ok(())
                } else {
                    bad(format!("explicit step needs eps >= 0, got {eps}"))
                }
            }
            FilterKind::Taubin { eps, eps2 } => {
                if !(eps.is_finite() && eps > 0.0) {
                    bad(format!("taubin needs eps > 0, got {eps}"))
                } else if !(eps2.is_finite() && eps + eps2 < 0.0) {
                    bad(format!("taubin needs eps + eps2 < 0, got {eps} + {eps2}"))
                } else {
                    Ok(())
                }
            }
            FilterKind::Implicit { eps } | FilterKind::BiImplicit { eps } => {
                if eps.is_finite() && eps > 0.0 {
                    Ok(())
                } else {
                    bad(format!("implicit step needs eps > 0, got {eps}"))
                }
            }
        }
    }
}

/// A validated filter plus the Chebyshev order used to apply it
/// (`0` means exact spectral application).
#[derive(Debug, Clone)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub chebyshev_order: usize,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, chebyshev_order: usize) -> Result<Self> {
        kind.validate()?;
        Ok(Self { kind, chebyshev_order })
    }

    pub fn exact(kind: FilterKind) -> Result<Self> {
        Self::new(kind, 0)
    }
}

/// Chebyshev coefficients of `g` on `[0, upper]`, from discrete cosine
/// quadrature at `order + 1` Chebyshev nodes.
///
/// The approximation is `c_0 / 2 + sum_{k >= 1} c_k T_k(2x / upper - 1)`.
pub fn chebyshev_coefficients<G: Fn(f64) -> f64>(g: G, order: usize, upper: f64) -> Vec<f64> {
    let nodes = order + 1;
    let samples: Vec<f64> = (0..nodes)
        .map(|j| {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64;
            g(0.5 * upper * (theta.cos() + 1.0))
        })
        .collect();
    (0..nodes)
        .map(|k| {
            let s: f64 = samples
                .iter()
                .enumerate()
                .map(|(j, &y)| {
                    let theta = std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64;
                    y * (k as f64 * theta).cos()
                })
                .sum();
            2.0 * s / nodes as f64
        })
        .collect()
}

/// Applies the Chebyshev approximation of `g(L)` to `f` using only
/// Laplacian applications (three-term recurrence, no eigenvectors).
pub fn chebyshev_apply<G: Fn(f64) -> f64>(
    g: &GraphSpace,
    response: G,
    order: usize,
    upper: f64,
    f: &VertexFunction,
) -> Result<VertexFunction> {
    g.check(f)?;
    if !(upper.is_finite() && upper > 0.0) {
        // Zero spectrum: L = 0 and g(L) = g(0).
        return Ok(VertexFunction::new(f.values() * response(0.0)));
    }
    let coeffs = chebyshev_coefficients(response, order, upper);
    // Y = (2 / upper) L - I maps the spectrum into [-1, 1].
    let shifted = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let lx = g.laplacian_apply(&VertexFunction::new(x.clone()))?;
        Ok(lx.values() * (2.0 / upper) - x)
    };
    let t0 = f.values().clone();
    let mut acc = &t0 * (0.5 * coeffs[0]);
    if order == 0 {
        return Ok(VertexFunction::new(acc));
    }
    let mut prev = t0;
    let mut cur = shifted(&prev)?;
    acc.axpy(coeffs[1], &cur, 1.0);
    for &c in &coeffs[2..] {
        let next = shifted(&cur)? * 2.0 - &prev;
        acc.axpy(c, &next, 1.0);
        prev = cur;
        cur = next;
    }
    Ok(VertexFunction::new(acc))
}

/// The three classical Laplacians as choices of measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianVariant {
    /// `mu = 1`: `D - W`.
    Combinatorial,
    /// `mu = deg`: `I - D^{-1} W`.
    RandomWalk,
    /// `mu = deg`, reported in the normalized basis: `I - D^{-1/2} W D^{-1/2}`.
    Normalized,
}

/// Replaces the measure of `g` to obtain the requested Laplacian.
pub fn laplacian_variant(g: &GraphSpace, variant: LaplacianVariant) -> Result<GraphSpace> {
    match variant {
        LaplacianVariant::Combinatorial => g.with_measure(DVector::from_element(g.n(), 1.0)),
        LaplacianVariant::RandomWalk => GraphSpace::with_degree_measure(g.weights().clone()),
        LaplacianVariant::Normalized => {
            Ok(GraphSpace::with_degree_measure(g.weights().clone())?.with_basis(Basis::Normalized))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, path_graph, random_connected_graph, random_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_spectra() {
        let s = eigendecompose(&complete_graph(2)).unwrap();
        assert!(s.eigenvalue(0).abs() < 1e-12);
        assert!((s.eigenvalue(1) - 2.0).abs() < 1e-12);

        let s = eigendecompose(&path_graph(3)).unwrap();
        for (got, want) in s.eigenvalues().iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn spectrum_invariants_on_random_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_connected_graph(&mut rng, 9, 0.4);
        let s = eigendecompose(&g).unwrap();
        assert!(s.eigenvalue(0).abs() < 1e-9);
        assert!(s.eigenvalue(1) > 0.0);
        assert!(s.max_residual() <= 1e-9 * s.max_eigenvalue().max(1.0));
        for i in 0..9 {
            for j in 0..9 {
                let ip = g.inner(&s.eigenfunction(i), &s.eigenfunction(j)).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10);
            }
        }
        let c = g.total_volume().powf(-0.5);
        for x in s.eigenfunction(0).iter() {
            assert!((x - c).abs() < 1e-10);
        }
        // Each eigenfunction's first non-negligible entry is positive.
        for i in 0..9 {
            let v = s.eigenfunction(i);
            assert!(*v.iter().find(|x| x.abs() > 1e-12).unwrap() > 0.0);
        }
    }

    #[test]
    fn fourier_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_connected_graph(&mut rng, 7, 0.5);
        let s = eigendecompose(&g).unwrap();
        let coeffs = s.fourier(&VertexFunction::ones(7)).unwrap();
        assert!((coeffs[0] - g.total_volume().sqrt()).abs() < 1e-10);
        for c in coeffs.iter().skip(1) {
            assert!(c.abs() < 1e-10);
        }

        let f = VertexFunction::new(random_vector(&mut rng, 7));
        let lf = g.laplacian_apply(&f).unwrap();
        let ff = s.fourier(&f).unwrap();
        let flf = s.fourier(&lf).unwrap();
        for i in 0..7 {
            assert!((flf[i] - s.eigenvalue(i) * ff[i]).abs() < 1e-10);
        }
        assert!(s.inverse_fourier(&DVector::zeros(3)).is_err());
    }

    #[test]
    fn convolution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_connected_graph(&mut rng, 6, 0.5);
        let s = eigendecompose(&g).unwrap();
        let f = VertexFunction::new(random_vector(&mut rng, 6));
        let h = VertexFunction::new(random_vector(&mut rng, 6));

        // vol^{1/2} v_1 = 1_A, and f * 1_A = vol^{1/2} m_f 1_A.
        let v1 = VertexFunction::new(s.eigenfunction(0).values() * g.total_volume().sqrt());
        let fm = s.convolve(&f, &v1).unwrap();
        let mean = g.mean(&f).unwrap() * g.total_volume().sqrt();
        assert!(fm.iter().all(|x| (x - mean).abs() < 1e-10));

        // The unit of convolution has every coefficient equal to one.
        let unit = s.inverse_fourier(&DVector::from_element(6, 1.0)).unwrap();
        let fu = s.convolve(&f, &unit).unwrap();
        assert!((fu.values() - f.values()).amax() < 1e-10);

        let z = s.convolve(&f, &VertexFunction::zeros(6)).unwrap();
        assert!(z.amax() < 1e-14);

        let fh = s.convolve(&f, &h).unwrap();
        let hf = s.convolve(&h, &f).unwrap();
        assert!((fh.values() - hf.values()).amax() < 1e-14);
    }

    #[test]
    fn identity_and_laplacian_filters() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_connected_graph(&mut rng, 8, 0.4);
        let s = eigendecompose(&g).unwrap();
        let f = VertexFunction::new(random_vector(&mut rng, 8));
        for order in [0, 3] {
            let id = FilterSpec::new(FilterKind::custom(|_| 1.0), order).unwrap();
            assert!((s.apply_filter(&id, &f).unwrap().values() - f.values()).amax() < 1e-10);
            let lap = FilterSpec::new(FilterKind::custom(|x| x), order).unwrap();
            let lf = g.laplacian_apply(&f).unwrap();
            assert!((s.apply_filter(&lap, &f).unwrap().values() - lf.values()).amax() < 1e-10);
        }
    }

    #[test]
    fn chebyshev_heat_filter_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_connected_graph(&mut rng, 20, 0.3);
        let s = eigendecompose(&g).unwrap();
        let f = VertexFunction::new(random_vector(&mut rng, 20));
        let kind = FilterKind::Heat { t: 1.0, c: 1.0 };
        let exact = s.apply_filter(&FilterSpec::exact(kind.clone()).unwrap(), &f).unwrap();
        let approx = s.apply_filter(&FilterSpec::new(kind, 30).unwrap(), &f).unwrap();
        assert!((exact.values() - approx.values()).amax() <= 1e-6);
    }

    #[test]
    fn filter_validation() {
        assert!(FilterSpec::exact(FilterKind::Heat { t: -1.0, c: 1.0 }).is_err());
        assert!(FilterSpec::exact(FilterKind::Heat { t: 1.0, c: 0.0 }).is_err());
        assert!(FilterSpec::exact(FilterKind::Taubin { eps: 0.5, eps2: -0.4 }).is_err());
        assert!(FilterSpec::exact(FilterKind::Taubin { eps: 0.5, eps2: -0.53 }).is_ok());
        assert!(FilterSpec::exact(FilterKind::Implicit { eps: 0.0 }).is_err());
        assert!(FilterSpec::exact(FilterKind::BiImplicit { eps: -1.0 }).is_err());
    }

    #[test]
    fn variants() {
        let k2 = complete_graph(2);
        let comb = laplacian_variant(&k2, LaplacianVariant::Combinatorial).unwrap();
        assert_eq!(comb.operator_matrix(), DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let rw = laplacian_variant(&k2, LaplacianVariant::RandomWalk).unwrap();
        assert_eq!(rw.operator_matrix(), DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let s = eigendecompose(&rw).unwrap();
        assert!(s.eigenvalue(0).abs() < 1e-12 && (s.eigenvalue(1) - 2.0).abs() < 1e-12);

        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = 1.0;
        w[(1, 0)] = 1.0;
        let isolated = GraphSpace::with_unit_measure(w).unwrap();
        assert!(laplacian_variant(&isolated, LaplacianVariant::RandomWalk).is_err());
    }

    #[test]
    fn normalized_and_random_walk_share_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let g = random_connected_graph(&mut rng, 8, 0.4);
            let rw = laplacian_variant(&g, LaplacianVariant::RandomWalk).unwrap();
            let norm = laplacian_variant(&g, LaplacianVariant::Normalized).unwrap();
            let a = eigendecompose(&rw).unwrap();
            let sym = norm.operator_matrix();
            let (b, _) = symmetric_eigen(&sym).unwrap();
            assert!((a.eigenvalues() - b).amax() < 1e-10);
        }
    }
}
