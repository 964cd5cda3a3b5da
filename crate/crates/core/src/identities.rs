//! Identity checks evaluated on a user-supplied space with seeded random
//! test functions.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{verify_bounds, BOUND_TOL, MAX_EXHAUSTIVE_N};
use crate::calculus::{module_actions, pointwise_product, GraphSpace, OneForm, VertexFunction};
use crate::error::Result;
use crate::generators::{random_matrix, random_vector};
use crate::random_walk::{commute_distance, commute_distance_spectral, WalkOperator};
use crate::spectral::eigendecompose;

/// One identity with its observed error and the tolerance it is held to.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, error: f64, tolerance: f64) -> Self {
        Self {
            name,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

/// Runs the calculus, spectral and walk identities on `g`; the Cheeger
/// bounds and commute-distance agreement are added when `g` is connected
/// (the bounds only up to [`MAX_EXHAUSTIVE_N`] vertices).
pub fn run_identity_checks(g: &GraphSpace, seed: u64) -> Result<Vec<IdentityCheck>> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = VertexFunction::new(random_vector(&mut rng, n));
    let h = VertexFunction::new(random_vector(&mut rng, n));
    let mut u = random_matrix(&mut rng, n, n);
    u.fill_diagonal(0.0);
    let u = OneForm::new(u)?;
    let one = VertexFunction::ones(n);
    let mut out = Vec::new();

    let df = g.differential(&f)?;
    let dh = g.differential(&h)?;
    let lhs = g.differential(&pointwise_product(&f, &h)?)?;
    let rhs = module_actions(&f, &dh, &one)?.coeffs() + module_actions(&one, &df, &h)?.coeffs();
    out.push(IdentityCheck::new(
        "leibniz",
        rel((lhs.coeffs() - &rhs).amax(), rhs.amax()),
        1e-12,
    ));

    let a = g.inner(&g.codifferential(&u)?, &f)?;
    let b = g.inner_form(&u, &df)?;
    out.push(IdentityCheck::new("adjointness", rel((a - b).abs(), b.abs()), 1e-10));

    let e = g.dirichlet_energy(&f, &h)?;
    let flh = g.inner(&f, &g.laplacian_apply(&h)?)?;
    out.push(IdentityCheck::new("energy = <f, L h>", rel((e - flh).abs(), e.abs()), 1e-10));

    let spec = eigendecompose(g)?;
    let scale = spec.max_eigenvalue().max(1.0);
    out.push(IdentityCheck::new("eigen residual", spec.max_residual() / scale, 1e-9));
    let coeffs = spec.fourier(&f)?;
    let norm2 = g.inner(&f, &f)?;
    out.push(IdentityCheck::new(
        "parseval",
        rel((coeffs.norm_squared() - norm2).abs(), norm2),
        1e-10,
    ));
    let back = spec.inverse_fourier(&coeffs)?;
    out.push(IdentityCheck::new(
        "fourier round trip",
        rel((back.values() - f.values()).amax(), f.amax()),
        1e-10,
    ));

    let walk = WalkOperator::new(g, 0.0)?;
    let p = walk.transition_matrix();
    let mu = g.measure();
    let balance = DMatrix::from_fn(n, n, |x, y| mu[x] * p[(x, y)] - mu[y] * p[(y, x)]);
    out.push(IdentityCheck::new("detailed balance", balance.amax(), 1e-12));
    let s1 = walk.evolve_continuous(&f, 0.7)?;
    let s2 = walk.evolve_continuous(&walk.evolve_continuous(&f, 0.3)?, 0.4)?;
    out.push(IdentityCheck::new(
        "heat semigroup",
        rel((s1.values() - s2.values()).amax(), s1.amax()),
        1e-10,
    ));

    if g.is_connected() && n >= 2 {
        let direct = commute_distance(g, 0.0)?;
        let spectral = commute_distance_spectral(&spec)?;
        out.push(IdentityCheck::new(
            "commute distance: hitting times = spectral sum",
            rel((&direct - &spectral).amax(), spectral.amax()),
            1e-9,
        ));
        if n <= MAX_EXHAUSTIVE_N {
            let report = verify_bounds(g)?;
            for c in report.checks {
                out.push(IdentityCheck::new(c.name, (-c.slack).max(0.0), BOUND_TOL));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, path_graph, random_connected_graph};

    #[test]
    fn all_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let graphs = [complete_graph(2), path_graph(3), random_connected_graph(&mut rng, 10, 0.4)];
        for g in &graphs {
            let checks = run_identity_checks(g, 5).unwrap();
            assert_eq!(checks.len(), 12);
            for c in &checks {
                assert!(c.pass, "{c:?}");
            }
        }
    }

    #[test]
    fn disconnected_graph_skips_global_checks() {
        let mut w = DMatrix::zeros(4, 4);
        w[(0, 1)] = 1.0;
        w[(1, 0)] = 1.0;
        w[(2, 3)] = 2.0;
        w[(3, 2)] = 2.0;
        let g = GraphSpace::with_unit_measure(w).unwrap();
        let checks = run_identity_checks(&g, 1).unwrap();
        assert_eq!(checks.len(), 8);
        assert!(checks.iter().all(|c| c.pass));
    }
}
