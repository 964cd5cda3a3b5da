//! Isoperimetric constant by exhaustive search, and the eigenvalue bounds
//! `rho_n <= 2 delta`, `rho_2 <= 2 beta` and `rho_2 >= beta^2 / (2 delta)`.

use rayon::prelude::*;

use crate::calculus::GraphSpace;
use crate::error::{Error, Result};
use crate::spectral::eigendecompose;

/// Largest vertex count accepted by [`isoperimetric_constant`].
pub const MAX_EXHAUSTIVE_N: usize = 24;

/// Slack allowed on each bound.
pub const BOUND_TOL: f64 = 1e-9;

/// `vol(dA) = sum_{i in A, j not in A} w_ij`.
pub fn boundary_volume(g: &GraphSpace, subset: &[usize]) -> Result<f64> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::InvalidParameter(format!("vertex {i} out of range for n = {n}")));
        }
        inside[i] = true;
    }
    let mut cut = 0.0;
    for i in (0..n).filter(|&i| inside[i]) {
        for j in (0..n).filter(|&j| !inside[j]) {
            cut += g.weight(i, j);
        }
    }
    Ok(cut)
}

/// Minimizer of `vol(dA) / vol(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isoperimetric {
    pub beta: f64,
    /// Sorted vertex indices of the minimizing set.
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Candidate {
    ratio: f64,
    mask: u32,
}

// Sorted index lists compared lexicographically, for sets given as bitmasks.
fn lex_less(a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    let e = (a ^ b).trailing_zeros();
    let above = !((2u64 << e) - 1) as u32;
    if b & (1 << e) != 0 {
        // b holds the first differing element; a is smaller only if it ends first.
        a & above == 0
    } else {
        b & above != 0
    }
}

fn better(a: Candidate, b: Candidate) -> bool {
    a.ratio < b.ratio || (a.ratio == b.ratio && lex_less(a.mask, b.mask))
}

fn merge(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(y, x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `beta = min vol(dA) / vol(A)` over non-empty proper subsets with
/// `vol(A) <= vol(V) / 2`, by exhaustive enumeration.
///
/// Vertex 0 is fixed on one side, so `2^{n-1}` bipartitions are walked in
/// Gray-code order with an O(n) cut update per step; both sides of each
/// bipartition are considered. Ties go to the lexicographically smallest set.
pub fn isoperimetric_constant(g: &GraphSpace) -> Result<Isoperimetric> {
    let n = g.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge { n, max: MAX_EXHAUSTIVE_N });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "isoperimetric constant needs at least two vertices".into(),
        ));
    }
    let total = g.total_volume();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let free_bits = n - 1;
    let count: u64 = 1 << free_bits;
    let chunks = rayon::current_num_threads().max(1) as u64 * 4;
    let chunk_len = count.div_ceil(chunks);

    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk_len;
            let end = (start + chunk_len).min(count);
            if start >= end {
                return None;
            }
            // Set S = {0} + bits(gray(k) << 1) for k in [start, end).
            let gray = |k: u64| ((k ^ (k >> 1)) as u32) << 1 | 1;
            let mut mask = gray(start);
            let mut inside: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            let mut vol: f64 = (0..n).filter(|&i| inside[i]).map(|i| g.measure()[i]).sum();
            let mut cut = 0.0;
            for i in (0..n).filter(|&i| inside[i]) {
                for j in (0..n).filter(|&j| !inside[j]) {
                    cut += g.weight(i, j);
                }
            }
            let mut best: Option<Candidate> = None;
            let mut k = start;
            loop {
                if mask != full {
                    let comp = full & !mask;
                    if vol <= total / 2.0 {
                        best = merge(best, Some(Candidate { ratio: cut / vol, mask }));
                    }
                    let cvol = total - vol;
                    if cvol <= total / 2.0 {
                        best = merge(best, Some(Candidate { ratio: cut / cvol, mask: comp }));
                    }
                }
                k += 1;
                if k >= end {
                    break;
                }
                // Gray code flips bit trailing_zeros(k) of the free bits.
                let v = k.trailing_zeros() as usize + 1;
                let was_inside = inside[v];
                let mut delta = 0.0;
                for u in (0..n).filter(|&u| u != v) {
                    let w = g.weight(v, u);
                    if inside[u] == was_inside {
                        delta += w;
                    } else {
                        delta -= w;
                    }
                }
                cut += delta;
                inside[v] = !was_inside;
                if was_inside {
                    vol -= g.measure()[v];
                } else {
                    vol += g.measure()[v];
                }
                mask ^= 1 << v;
            }
            best
        })
        .reduce(|| None, merge)
        .expect("n >= 2 admits a proper subset");

    // Recompute on the winner to drop accumulated update error.
    let witness: Vec<usize> = (0..n).filter(|&i| best.mask & (1 << i) != 0).collect();
    let beta = boundary_volume(g, &witness)? / g.volume(&witness)?;
    Ok(Isoperimetric { beta, witness })
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; the bound holds when this is at least `-BOUND_TOL`.
    pub slack: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            pass: slack >= -BOUND_TOL,
        }
    }
}

/// The spectral quantities and the three bounds for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub rho2: f64,
    pub rho_n: f64,
    pub beta: f64,
    pub beta_witness: Vec<usize>,
    pub delta: f64,
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates `rho_n <= 2 delta`, `rho_2 <= 2 beta` and `beta^2 / (2 delta) <= rho_2`.
pub fn verify_bounds(g: &GraphSpace) -> Result<BoundsReport> {
    g.require_connected()?;
    let iso = isoperimetric_constant(g)?;
    let spec = eigendecompose(g)?;
    let rho2 = spec.eigenvalue(1);
    let rho_n = spec.max_eigenvalue();
    let delta = g.delta();
    let checks = vec![
        BoundCheck::new("rho_n <= 2 delta", rho_n, 2.0 * delta),
        BoundCheck::new("rho_2 <= 2 beta", rho2, 2.0 * iso.beta),
        BoundCheck::new("beta^2 / (2 delta) <= rho_2", iso.beta * iso.beta / (2.0 * delta), rho2),
    ];
    Ok(BoundsReport {
        rho2,
        rho_n,
        beta: iso.beta,
        beta_witness: iso.witness,
        delta,
        checks,
    })
}
