//! Embeddings `V -> R^d`, curvature vectors and embedding energy, plus the
//! smoothing flows and many-body identities built on them.

mod physics;
mod smoothing;

pub use physics::{
    newton_system, newton_weights, variable_weight_flow, FlowOutcome, HookeState, HookeSystem, NewtonState,
    COLLISION_TOL,
};
pub use smoothing::{energy_monotonicity_check, smooth, MonotonicityReport, SmoothingMethod};

use nalgebra::{DMatrix, DVector};

use crate::calculus::{GraphSpace, VertexFunction};
use crate::error::{check_len, Error, Result};
use crate::linalg::cholesky;

/// `n x d` coordinates, one row per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coords: DMatrix<f64>,
}

impl Embedding {
    pub fn new(coords: DMatrix<f64>) -> Self {
        Self { coords }
    }

    /// Builds from row vectors; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        for row in rows {
            check_len(d, row.len())?;
        }
        Ok(Self::new(DMatrix::from_fn(rows.len(), d, |i, s| rows[i][s])))
    }

    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DMatrix<f64> {
        self.coords
    }

    /// Coordinate function `r_s`.
    pub fn column(&self, s: usize) -> VertexFunction {
        VertexFunction::new(self.coords.column(s).into_owned())
    }

    /// `r(i)` as a vector in `R^d`.
    pub fn point(&self, i: usize) -> DVector<f64> {
        self.coords.row(i).transpose()
    }

    /// Rigid motion `r R + u` (points as rows).
    pub fn transformed(&self, rotation: &DMatrix<f64>, translation: &DVector<f64>) -> Result<Self> {
        check_len(self.dim(), rotation.nrows())?;
        check_len(self.dim(), translation.len())?;
        let mut coords = &self.coords * rotation;
        for mut row in coords.row_iter_mut() {
            row += translation.transpose();
        }
        Ok(Self::new(coords))
    }
}

/// Curvature vectors `H = -L r`, one row per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    pub vectors: DMatrix<f64>,
}

fn check_embedding(g: &GraphSpace, r: &Embedding) -> Result<()> {
    check_len(g.n(), r.n())
}

/// `H_s = -L r_s` for every coordinate.
pub fn curvature(g: &GraphSpace, r: &Embedding) -> Result<CurvatureField> {
    check_embedding(g, r)?;
    let lr = g.laplacian_matrix() * r.coords();
    Ok(CurvatureField { vectors: -lr })
}

/// `E(r, r) = sum_s E(r_s, r_s)`.
pub fn embedding_energy(g: &GraphSpace, r: &Embedding) -> Result<f64> {
    check_embedding(g, r)?;
    (0..r.dim()).try_fold(0.0, |acc, s| {
        let col = r.column(s);
        Ok(acc + g.dirichlet_energy(&col, &col)?)
    })
}

/// `int_V <r, -H> dmu`, which equals the embedding energy.
pub fn energy_integral_form(g: &GraphSpace, r: &Embedding) -> Result<f64> {
    let h = curvature(g, r)?;
    Ok((0..g.n())
        .map(|i| -g.measure()[i] * r.coords().row(i).dot(&h.vectors.row(i)))
        .sum())
}

/// `w_ij = C exp(-|r(i) - r(j)|^2 / (2 sigma^2))` off the diagonal.
pub fn gaussian_weights(r: &Embedding, scale: f64, sigma: f64) -> Result<DMatrix<f64>> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("gaussian scale C = {scale} must be > 0")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("gaussian sigma = {sigma} must be > 0")));
    }
    let n = r.n();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2 = (r.coords().row(i) - r.coords().row(j)).norm_squared();
            let v = scale * (-d2 / (2.0 * sigma * sigma)).exp();
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    Ok(w)
}

/// Harmonic extension: `L r(i) = 0` on free vertices, `r = values` on `boundary`.
///
/// `values` has one row per boundary vertex, in the order given.
pub fn dirichlet_solve(g: &GraphSpace, boundary: &[usize], values: &DMatrix<f64>) -> Result<Embedding> {
    let n = g.n();
    if boundary.is_empty() {
        return Err(Error::InvalidParameter("boundary set is empty".into()));
    }
    check_len(boundary.len(), values.nrows())?;
    let d = values.ncols();
    let mut is_boundary = vec![false; n];
    for &b in boundary {
        if b >= n {
            return Err(Error::InvalidParameter(format!("boundary vertex {b} out of range")));
        }
        if is_boundary[b] {
            return Err(Error::InvalidParameter(format!("boundary vertex {b} listed twice")));
        }
        is_boundary[b] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&i| !is_boundary[i]).collect();
    let mut coords = DMatrix::zeros(n, d);
    for (row, &b) in boundary.iter().enumerate() {
        coords.set_row(b, &values.row(row));
    }
    if free.is_empty() {
        return Ok(Embedding::new(coords));
    }
    if let Some(i) = unreachable_free_vertex(g, &is_boundary) {
        return Err(Error::Singular(format!(
            "free vertex {i} has no path to the boundary"
        )));
    }
    // Multiplying L r = 0 by M gives (D - W)_FF r_F = W_FB r_B.
    let k = free.len();
    let a = DMatrix::from_fn(k, k, |p, q| {
        let (i, j) = (free[p], free[q]);
        if i == j {
            g.degree(i)
        } else {
            -g.weight(i, j)
        }
    });
    let rhs = DMatrix::from_fn(k, d, |p, s| {
        let i = free[p];
        boundary
            .iter()
            .enumerate()
            .map(|(row, &b)| g.weight(i, b) * values[(row, s)])
            .sum()
    });
    let sol = cholesky(a, "interior Dirichlet system")?.solve(&rhs);
    for (p, &i) in free.iter().enumerate() {
        coords.set_row(i, &sol.row(p));
    }
    Ok(Embedding::new(coords))
}

fn unreachable_free_vertex(g: &GraphSpace, is_boundary: &[bool]) -> Option<usize> {
    let n = g.n();
    let mut reached = is_boundary.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&i| is_boundary[i]).collect();
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !reached[j] && g.weight(i, j) > 0.0 {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.iter().position(|&r| !r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, path_graph, random_connected_graph, random_matrix};
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
        random_matrix(rng, d, d).qr().q()
    }

    #[test]
    fn curvature_examples() {
        let g = complete_graph(2);
        let r = Embedding::new(DMatrix::from_column_slice(2, 1, &[0.0, 1.0]));
        let h = curvature(&g, &r).unwrap();
        assert_eq!(h.vectors.as_slice(), &[1.0, -1.0]);
        assert_eq!(embedding_energy(&g, &r).unwrap(), 1.0);

        let c = Embedding::new(DMatrix::from_element(2, 3, 4.5));
        assert!(curvature(&g, &c).unwrap().vectors.amax() < 1e-15);
        assert!(curvature(&path_graph(3), &r).is_err());
    }

    #[test]
    fn energy_is_euclidean_invariant_and_matches_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = random_connected_graph(&mut rng, 9, 0.4);
        let r = Embedding::new(random_matrix(&mut rng, 9, 3));
        let e = embedding_energy(&g, &r).unwrap();
        assert!((e - energy_integral_form(&g, &r).unwrap()).abs() < 1e-10);

        let rot = random_rotation(&mut rng, 3);
        let t = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let moved = r.transformed(&rot, &t).unwrap();
        assert!((embedding_energy(&g, &moved).unwrap() - e).abs() < 1e-10);
        let h = curvature(&g, &r).unwrap().vectors;
        let hm = curvature(&g, &moved).unwrap().vectors;
        assert!((hm - h * rot).amax() < 1e-10);
    }

    #[test]
    fn gaussian_weight_examples() {
        let sigma = 0.7;
        let r = Embedding::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0], vec![sigma * 2f64.sqrt(), 0.0]]).unwrap();
        let w = gaussian_weights(&r, 3.0, sigma).unwrap();
        assert_eq!(w[(0, 1)], 3.0);
        assert!((w[(0, 2)] - 3.0 / std::f64::consts::E).abs() < 1e-14);
        assert_eq!(w, w.transpose());
        assert_eq!(w[(2, 2)], 0.0);
        assert!(gaussian_weights(&r, 0.0, 1.0).is_err());
        assert!(gaussian_weights(&r, 1.0, -1.0).is_err());
    }

    #[test]
    fn dirichlet_on_path() {
        let g = path_graph(3);
        let vals = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let r = dirichlet_solve(&g, &[0, 2], &vals).unwrap();
        assert!((r.coords()[(1, 0)] - 0.5).abs() < 1e-15);

        let all = DMatrix::from_row_slice(3, 1, &[3.0, 1.0, 2.0]);
        let r = dirichlet_solve(&g, &[0, 1, 2], &all).unwrap();
        assert_eq!(r.coords(), &all);
        assert!(dirichlet_solve(&g, &[], &DMatrix::zeros(0, 1)).is_err());
    }

    #[test]
    fn dirichlet_rejects_floating_component() {
        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = 1.0;
        w[(1, 0)] = 1.0;
        let g = GraphSpace::with_unit_measure(w).unwrap();
        let err = dirichlet_solve(&g, &[0], &DMatrix::zeros(1, 1)).unwrap_err();
        assert!(matches!(err, Error::Singular(_)));
    }

    #[test]
    fn dirichlet_is_harmonic_and_energy_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let g = random_connected_graph(&mut rng, 10, 0.3);
        let boundary = [0, 3, 7];
        let vals = random_matrix(&mut rng, 3, 2);
        let r = dirichlet_solve(&g, &boundary, &vals).unwrap();
        let lr = g.laplacian_matrix() * r.coords();
        for i in (0..10).filter(|i| !boundary.contains(i)) {
            assert!(lr.row(i).amax() <= 1e-10);
        }
        let e = embedding_energy(&g, &r).unwrap();
        for _ in 0..50 {
            let mut p = r.coords().clone();
            for i in (0..10).filter(|i| !boundary.contains(i)) {
                for s in 0..2 {
                    p[(i, s)] += 0.1 * rand::Rng::random_range(&mut rng, -1.0..1.0);
                }
            }
            assert!(embedding_energy(&g, &Embedding::new(p)).unwrap() >= e);
        }
    }
}
