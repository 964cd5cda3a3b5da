//! Dense linear-algebra helpers shared by the spectral routines.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

/// Entries at or below this magnitude are skipped when fixing signs.
pub const SIGN_TOL: f64 = 1e-12;

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted
/// ascending and each eigenvector sign-fixed by [`fix_sign`].
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    let max_iterations = 1000 * n.max(10);
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, max_iterations)
        .ok_or(Error::EigenNonConvergence { n, max_iterations })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_sign(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((values, vectors))
}

/// Flips `v` so that its first entry with magnitude above [`SIGN_TOL`] is positive.
pub fn fix_sign(v: &mut DVector<f64>) {
    if let Some(x) = v.iter().find(|x| x.abs() > SIGN_TOL) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
}

/// Cholesky factorization, reporting a non-positive-definite matrix as singular.
pub fn cholesky(m: DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m).ok_or_else(|| Error::Singular(format!("{what} is not positive definite")))
}

/// Solves a general square system by LU with partial pivoting.
pub fn lu_solve(a: DMatrix<f64>, b: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    a.lu()
        .solve(b)
        .ok_or_else(|| Error::Singular(format!("{what} is singular")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_and_signed() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        for j in 0..2 {
            assert!(vecs[(0, j)] > 0.0);
        }
    }

    #[test]
    fn sign_fix_skips_tiny_entries() {
        let mut v = DVector::from_vec(vec![1e-14, -2.0, 1.0]);
        fix_sign(&mut v);
        assert!(v[1] > 0.0);
    }
}
