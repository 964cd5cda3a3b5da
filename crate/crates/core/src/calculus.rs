//! The universal first-order differential calculus on a finite vertex set.
//!
//! Functions on `V` form the algebra `A`; 1-forms are coefficient arrays
//! `u[i][j]` over ordered pairs `i != j`. A [`GraphSpace`] equips the vertex
//! set with a measure `mu` (the inner product on `A`) and symmetric weights
//! `w` (the inner product on 1-forms). The Dirichlet energy, co-differential
//! and Laplacian all follow from these two inner products.

use std::collections::VecDeque;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

/// Absolute tolerance used when validating symmetry, signs and diagonals.
pub const VALIDATION_TOL: f64 = 1e-12;

/// A real value per vertex (an element of the function algebra).
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(DVector<f64>);

impl VertexFunction {
    pub fn new(values: DVector<f64>) -> Self {
        Self(values)
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        Self(DVector::from_vec(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    /// The unit `1_A`.
    pub fn ones(n: usize) -> Self {
        Self::constant(n, 1.0)
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(DVector::from_element(n, value))
    }

    /// The basis function `e_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        Self(v)
    }

    /// Indicator `chi_A = sum_{i in A} e_i`.
    pub fn indicator(n: usize, subset: &[usize]) -> Self {
        let mut v = DVector::zeros(n);
        for &i in subset {
            v[i] = 1.0;
        }
        Self(v)
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }
}

impl Deref for VertexFunction {
    type Target = DVector<f64>;

    fn deref(&self) -> &DVector<f64> {
        &self.0
    }
}

impl From<DVector<f64>> for VertexFunction {
    fn from(values: DVector<f64>) -> Self {
        Self(values)
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        Self::from_vec(values)
    }
}

/// Pointwise product `(f.h)(i) = f(i) h(i)`.
pub fn pointwise_product(f: &VertexFunction, h: &VertexFunction) -> Result<VertexFunction> {
    check_len(f.len(), h.len())?;
    Ok(VertexFunction(f.component_mul(h)))
}

/// A 1-form: coefficients on ordered pairs `(i, j)` with `i != j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm(DMatrix<f64>);

impl OneForm {
    /// Wraps a square coefficient matrix. Diagonal entries within
    /// [`VALIDATION_TOL`] of zero are set to zero; larger ones are rejected.
    pub fn new(mut coeffs: DMatrix<f64>) -> Result<Self> {
        if !coeffs.is_square() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.nrows(),
                found: coeffs.ncols(),
            });
        }
        for i in 0..coeffs.nrows() {
            if coeffs[(i, i)].abs() > VALIDATION_TOL {
                return Err(Error::InvalidParameter(format!(
                    "1-form has nonzero diagonal coefficient {} at {}",
                    coeffs[(i, i)],
                    i
                )));
            }
            coeffs[(i, i)] = 0.0;
        }
        Ok(Self(coeffs))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Bimodule action `f . u . h`, i.e. `result[i][j] = f[i] u[i][j] h[j]`.
pub fn module_actions(f: &VertexFunction, u: &OneForm, h: &VertexFunction) -> Result<OneForm> {
    let n = u.n();
    check_len(n, f.len())?;
    check_len(n, h.len())?;
    let coeffs = DMatrix::from_fn(n, n, |i, j| f[i] * u.get(i, j) * h[j]);
    Ok(OneForm(coeffs))
}

/// Which basis operator matrices are reported in.
///
/// `Normalized` marks a degree-measure space whose Laplacian is reported
/// in the `e~_i = e_i / sqrt(mu_i)` basis, i.e. `I - D^{-1/2} W D^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Basis {
    #[default]
    Standard,
    Normalized,
}

/// A finite vertex set with a positive measure and symmetric non-negative
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpace {
    mu: DVector<f64>,
    weights: DMatrix<f64>,
    degrees: DVector<f64>,
    basis: Basis,
}

impl GraphSpace {
    /// Validates and builds a space.
    ///
    /// Weights must be symmetric and non-negative with a zero diagonal, all
    /// up to [`VALIDATION_TOL`]; inputs within tolerance are symmetrized by
    /// averaging and clamped, anything else is rejected.
    pub fn new(mu: DVector<f64>, mut weights: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::InvalidMeasure("vertex set is empty".into()));
        }
        if weights.nrows() != n || weights.ncols() != n {
            return Err(Error::InvalidWeights(format!(
                "weight matrix is {}x{}, expected {n}x{n}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        for (i, &m) in mu.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidMeasure(format!("mu[{i}] = {m} is not positive")));
            }
        }
        for i in 0..n {
            let d = weights[(i, i)];
            if !d.is_finite() || d.abs() > VALIDATION_TOL {
                return Err(Error::InvalidWeights(format!("diagonal weight w[{i}][{i}] = {d}")));
            }
            weights[(i, i)] = 0.0;
            for j in (i + 1)..n {
                let (a, b) = (weights[(i, j)], weights[(j, i)]);
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidWeights(format!("non-finite weight at ({i}, {j})")));
                }
                if (a - b).abs() > VALIDATION_TOL {
                    return Err(Error::InvalidWeights(format!(
                        "asymmetric weights w[{i}][{j}] = {a}, w[{j}][{i}] = {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                if avg < -VALIDATION_TOL {
                    return Err(Error::InvalidWeights(format!("negative weight w[{i}][{j}] = {avg}")));
                }
                let w = avg.max(0.0);
                weights[(i, j)] = w;
                weights[(j, i)] = w;
            }
        }
        let degrees = DVector::from_fn(n, |i, _| weights.row(i).sum());
        Ok(Self {
            mu,
            weights,
            degrees,
            basis: Basis::Standard,
        })
    }

    /// Space with the counting measure `mu = 1`.
    pub fn with_unit_measure(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        Self::new(DVector::from_element(n, 1.0), weights)
    }

    /// Space with `mu_i = deg(i)`. Fails on isolated vertices.
    pub fn with_degree_measure(weights: DMatrix<f64>) -> Result<Self> {
        let unit = Self::with_unit_measure(weights)?;
        unit.degree_measured()
    }

    /// Same weights, new measure.
    pub fn with_measure(&self, mu: DVector<f64>) -> Result<Self> {
        Self::new(mu, self.weights.clone())
    }

    fn degree_measured(&self) -> Result<Self> {
        if let Some(i) = self.degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "vertex {i} is isolated (degree 0); degree measure undefined"
            )));
        }
        Ok(Self {
            mu: self.degrees.clone(),
            weights: self.weights.clone(),
            degrees: self.degrees.clone(),
            basis: Basis::Standard,
        })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn measure(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &DVector<f64> {
        &self.degrees
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub(crate) fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    /// `delta = max_i deg(i) / mu_i`.
    pub fn delta(&self) -> f64 {
        self.degrees
            .iter()
            .zip(self.mu.iter())
            .map(|(d, m)| d / m)
            .fold(0.0, f64::max)
    }

    /// `vol(V)`.
    pub fn total_volume(&self) -> f64 {
        self.mu.sum()
    }

    pub(crate) fn check(&self, f: &VertexFunction) -> Result<()> {
        check_len(self.n(), f.len())
    }

    fn check_form(&self, u: &OneForm) -> Result<()> {
        check_len(self.n(), u.n())
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|&&i| i >= self.n()) {
            Some(&i) => Err(Error::InvalidParameter(format!(
                "vertex {i} out of range for n = {}",
                self.n()
            ))),
            None => Ok(()),
        }
    }

    /// `(df)[i][j] = f[j] - f[i]` for `i != j`.
    pub fn differential(&self, f: &VertexFunction) -> Result<OneForm> {
        self.check(f)?;
        let n = self.n();
        let coeffs = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { f[j] - f[i] });
        Ok(OneForm(coeffs))
    }

    /// `sum_i f_i mu_i`.
    pub fn integral(&self, f: &VertexFunction) -> Result<f64> {
        self.check(f)?;
        Ok(f.dot(&self.mu))
    }

    /// `<f, h>_A = sum_i f_i h_i mu_i`.
    pub fn inner(&self, f: &VertexFunction, h: &VertexFunction) -> Result<f64> {
        self.check(f)?;
        self.check(h)?;
        Ok(f.iter().zip(h.iter()).zip(self.mu.iter()).map(|((a, b), m)| a * b * m).sum())
    }

    pub fn norm(&self, f: &VertexFunction) -> Result<f64> {
        Ok(self.inner(f, f)?.sqrt())
    }

    /// `<u, v> = sum_{i != j} w_ij u_ij v_ij`.
    pub fn inner_form(&self, u: &OneForm, v: &OneForm) -> Result<f64> {
        self.check_form(u)?;
        self.check_form(v)?;
        let n = self.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.weights[(i, j)] * u.get(i, j) * v.get(i, j);
                }
            }
        }
        Ok(acc)
    }

    /// `E(f, h) = 1/2 sum_ij w_ij (f_i - f_j)(h_i - h_j)`. Does not depend on `mu`.
    pub fn dirichlet_energy(&self, f: &VertexFunction, h: &VertexFunction) -> Result<f64> {
        self.check(f)?;
        self.check(h)?;
        let n = self.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += self.weights[(i, j)] * (f[i] - f[j]) * (h[i] - h[j]);
            }
        }
        Ok(acc)
    }

    /// Adjoint of [`differential`](Self::differential):
    /// `(d*u)_i = mu_i^{-1} sum_j w_ij (u_ji - u_ij)`.
    pub fn codifferential(&self, u: &OneForm) -> Result<VertexFunction> {
        self.check_form(u)?;
        let n = self.n();
        let values = DVector::from_fn(n, |i, _| {
            let s: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| self.weights[(i, j)] * (u.get(j, i) - u.get(i, j)))
                .sum();
            s / self.mu[i]
        });
        Ok(VertexFunction(values))
    }

    /// `(Lf)_i = sum_j (w_ij / mu_i)(f_i - f_j)`.
    pub fn laplacian_apply(&self, f: &VertexFunction) -> Result<VertexFunction> {
        self.check(f)?;
        let wf = &self.weights * f.values();
        let values = DVector::from_fn(self.n(), |i, _| {
            (self.degrees[i] * f[i] - wf[i]) / self.mu[i]
        });
        Ok(VertexFunction(values))
    }

    /// `vol(A) = sum_{i in A} mu_i`; duplicate indices count once.
    pub fn volume(&self, subset: &[usize]) -> Result<f64> {
        self.check_subset(subset)?;
        let mut seen = vec![false; self.n()];
        let mut vol = 0.0;
        for &i in subset {
            if !seen[i] {
                seen[i] = true;
                vol += self.mu[i];
            }
        }
        Ok(vol)
    }

    /// `m_f = vol(V)^{-1} int_V f dmu`.
    pub fn mean(&self, f: &VertexFunction) -> Result<f64> {
        Ok(self.integral(f)? / self.total_volume())
    }

    /// Combinatorial matrix `D - W`.
    pub fn combinatorial_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.degrees) - &self.weights
    }

    /// Matrix of the Laplacian in the `{e_i}` basis, `M^{-1}(D - W)`.
    pub fn laplacian_matrix(&self) -> DMatrix<f64> {
        let mut m = self.combinatorial_matrix();
        for i in 0..self.n() {
            let s = 1.0 / self.mu[i];
            m.row_mut(i).scale_mut(s);
        }
        m
    }

    /// Symmetric form `M^{-1/2}(D - W)M^{-1/2}` (the `{e~_i}` basis).
    pub fn symmetric_laplacian_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let s = self.mu.map(|m| 1.0 / m.sqrt());
        let k = self.combinatorial_matrix();
        DMatrix::from_fn(n, n, |i, j| s[i] * k[(i, j)] * s[j])
    }

    /// The Laplacian matrix in the basis this space is flagged to report in.
    pub fn operator_matrix(&self) -> DMatrix<f64> {
        match self.basis {
            Basis::Standard => self.laplacian_matrix(),
            Basis::Normalized => self.symmetric_laplacian_matrix(),
        }
    }

    /// Component label per vertex over edges with `w_ij > 0`, labels in
    /// order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if label[j] == usize::MAX && self.weights[(i, j)] > 0.0 {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }
}

/// A partition of `V` into `k` non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            if l >= k {
                return Err(Error::InvalidPartition(format!(
                    "vertex {i} has label {l} outside [0, {k})"
                )));
            }
            sizes[l] += 1;
        }
        if let Some(l) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("block {l} is empty")));
        }
        Ok(Self { labels, k })
    }

    /// Infers `k` as `max label + 1`.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        Self::new(labels, k)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> GraphSpace {
        GraphSpace::with_unit_measure(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        ))
        .unwrap()
    }

    fn k2() -> GraphSpace {
        GraphSpace::with_unit_measure(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap()
    }

    #[test]
    fn differential_examples() {
        let g = path3();
        let du = g.differential(&VertexFunction::ones(3)).unwrap();
        assert_eq!(du, OneForm::zeros(3));

        let du = k2().differential(&VertexFunction::from_vec(vec![0.0, 1.0])).unwrap();
        assert_eq!(du.get(0, 1), 1.0);
        assert_eq!(du.get(1, 0), -1.0);

        let du = g.differential(&VertexFunction::from_vec(vec![1.0, 4.0, 9.0])).unwrap();
        assert_eq!(du.get(0, 1), 3.0);
        assert_eq!(du.get(0, 2), 8.0);
        assert_eq!(du.get(1, 2), 5.0);
        assert_eq!(du.get(1, 0), -3.0);
        assert_eq!(du.get(2, 0), -8.0);
        assert_eq!(du.get(2, 1), -5.0);
        assert_eq!(du.get(1, 1), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = path3().differential(&VertexFunction::ones(2)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
        assert!(pointwise_product(&VertexFunction::ones(2), &VertexFunction::ones(3)).is_err());
    }

    #[test]
    fn products_and_actions() {
        let f = VertexFunction::from_vec(vec![1.0, 2.0]);
        let h = VertexFunction::from_vec(vec![3.0, 4.0]);
        assert_eq!(pointwise_product(&f, &h).unwrap().as_slice(), &[3.0, 8.0]);
        assert_eq!(pointwise_product(&f, &VertexFunction::ones(2)).unwrap(), f);
        for i in 0..3 {
            for j in 0..3 {
                let p = pointwise_product(&VertexFunction::basis(3, i), &VertexFunction::basis(3, j)).unwrap();
                let expected = if i == j { VertexFunction::basis(3, i) } else { VertexFunction::zeros(3) };
                assert_eq!(p, expected);
            }
        }

        let u = path3().differential(&VertexFunction::from_vec(vec![1.0, 4.0, 9.0])).unwrap();
        let one = VertexFunction::ones(3);
        assert_eq!(module_actions(&one, &u, &one).unwrap(), u);
        let left = module_actions(&VertexFunction::basis(3, 1), &u, &one).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == 1 { u.get(i, j) } else { 0.0 };
                assert_eq!(left.get(i, j), expected);
            }
        }
    }

    #[test]
    fn integrals_and_inner_products() {
        let g = GraphSpace::new(DVector::from_vec(vec![1.0, 2.0]), DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(g.integral(&VertexFunction::from_vec(vec![3.0, 4.0])).unwrap(), 11.0);
        assert_eq!(g.integral(&VertexFunction::ones(2)).unwrap(), 3.0);
        assert_eq!(g.integral(&VertexFunction::basis(2, 1)).unwrap(), 2.0);

        let g = GraphSpace::new(DVector::from_vec(vec![2.0, 3.0]), DMatrix::zeros(2, 2)).unwrap();
        let f = VertexFunction::from_vec(vec![1.0, 1.0]);
        let h = VertexFunction::from_vec(vec![1.0, -1.0]);
        assert_eq!(g.inner(&f, &h).unwrap(), -1.0);

        // <mu_i^{-1} e_i, f> = f_i
        let f = VertexFunction::from_vec(vec![5.0, -7.0]);
        for i in 0..2 {
            let e = VertexFunction::new(VertexFunction::basis(2, i).values() / g.measure()[i]);
            assert!((g.inner(&e, &f).unwrap() - f[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn form_inner_product_examples() {
        let w = DMatrix::from_row_slice(3, 3, &[0.0, 5.0, 1.0, 5.0, 0.0, 2.0, 1.0, 2.0, 0.0]);
        let g = GraphSpace::with_unit_measure(w).unwrap();
        let mut c = DMatrix::zeros(3, 3);
        c[(0, 1)] = 1.0;
        let u = OneForm::new(c).unwrap();
        assert_eq!(g.inner_form(&u, &u).unwrap(), 5.0);

        for i in 0..3 {
            let e = VertexFunction::basis(3, i);
            let de = g.differential(&e).unwrap();
            let f = module_actions(&e, &de, &VertexFunction::ones(3)).unwrap();
            assert!((g.inner_form(&f, &f).unwrap() - g.degree(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn energy_examples() {
        let g = path3();
        let f = VertexFunction::from_vec(vec![0.0, 1.0, 2.0]);
        assert_eq!(g.dirichlet_energy(&f, &f).unwrap(), 2.0);
        assert_eq!(g.dirichlet_energy(&VertexFunction::ones(3), &f).unwrap(), 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let e = g
                    .dirichlet_energy(&VertexFunction::basis(3, i), &VertexFunction::basis(3, j))
                    .unwrap();
                let expected = if i == j { g.degree(i) } else { -g.weight(i, j) };
                assert_eq!(e, expected);
            }
        }
    }

    #[test]
    fn codifferential_of_symmetric_form_vanishes() {
        let g = path3();
        let c = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 3.0, 2.0, 0.0, -1.0, 3.0, -1.0, 0.0]);
        let u = OneForm::new(c).unwrap();
        assert_eq!(g.codifferential(&u).unwrap(), VertexFunction::zeros(3));
        assert_eq!(g.codifferential(&OneForm::zeros(3)).unwrap(), VertexFunction::zeros(3));
    }

    #[test]
    fn laplacian_examples() {
        let g = k2();
        assert_eq!(g.laplacian_apply(&VertexFunction::ones(2)).unwrap(), VertexFunction::zeros(2));
        let lf = g.laplacian_apply(&VertexFunction::from_vec(vec![0.0, 1.0])).unwrap();
        assert_eq!(lf.as_slice(), &[-1.0, 1.0]);
    }

    #[test]
    fn volumes_and_means() {
        let g = GraphSpace::new(DVector::from_vec(vec![1.0, 2.0, 3.0]), DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(g.volume(&[]).unwrap(), 0.0);
        assert_eq!(g.volume(&[0, 1, 2]).unwrap(), 6.0);
        assert_eq!(g.volume(&[0, 2]).unwrap(), 4.0);
        assert!(g.volume(&[3]).is_err());
        let g = GraphSpace::with_unit_measure(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(g.mean(&VertexFunction::from_vec(vec![0.0, 2.0])).unwrap(), 1.0);
    }

    #[test]
    fn construction_validates_and_symmetrizes() {
        let w = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0 + 5e-13, 0.0]);
        let g = GraphSpace::with_unit_measure(w).unwrap();
        assert_eq!(g.weight(0, 1), g.weight(1, 0));

        let w = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.1, 0.0]);
        assert!(matches!(GraphSpace::with_unit_measure(w), Err(Error::InvalidWeights(_))));
        let w = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(matches!(GraphSpace::with_unit_measure(w), Err(Error::InvalidWeights(_))));
        let w = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        assert!(matches!(GraphSpace::with_unit_measure(w), Err(Error::InvalidWeights(_))));
        let mu = DVector::from_vec(vec![1.0, 0.0]);
        assert!(matches!(GraphSpace::new(mu, DMatrix::zeros(2, 2)), Err(Error::InvalidMeasure(_))));
        assert!(GraphSpace::with_degree_measure(DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        let w = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let g = GraphSpace::with_unit_measure(w).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components(), vec![0, 0, 1]);
    }

    #[test]
    fn partitions() {
        let p = Partition::from_labels(vec![0, 1, 1]).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.blocks(), vec![vec![0], vec![1, 2]]);
        assert!(Partition::new(vec![0, 0], 2).is_err());
        assert!(Partition::new(vec![0, 3], 2).is_err());
    }
}
