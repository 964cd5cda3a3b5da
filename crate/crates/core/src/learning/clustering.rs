//! Measure-weighted k-means and spectral clustering.
//!
//! The distortion is `sum_i mu_i |phi(i) - c_{label(i)}|^2` with
//! `mu`-weighted centroids, which is the quantity the graph-cut loss reduces
//! to in the kernel feature space.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calculus::Partition;
use crate::error::{check_len, Error, Result};
use crate::spectral::Spectrum;

use super::kernel_kmeans_features;

pub const DEFAULT_RESTARTS: usize = 100;
const MAX_LLOYD_ITERATIONS: usize = 300;

/// Feature space used by [`spectral_clustering`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterMode {
    /// Eigenmap coordinates `(v_2, ..., v_k)` (at least one column).
    Eigenmaps,
    /// Kernel k-means features `sqrt(lambda_i) v_i` with `lambda_i = 1 - rho_i / c`.
    /// A non-positive `c` selects `2 rho_n`.
    Kernel { c: f64 },
}

/// One k-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRun {
    pub labels: Vec<usize>,
    pub objective: f64,
    /// Distortion after seeding and after every assignment/update step.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub partition: Partition,
    pub objective: f64,
    pub seed: u64,
    /// Distortion trace of the winning restart.
    pub history: Vec<f64>,
}

fn sq_dist(features: &DMatrix<f64>, i: usize, center: &DVector<f64>) -> f64 {
    features
        .row(i)
        .iter()
        .zip(center.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

fn centroids(features: &DMatrix<f64>, weights: &DVector<f64>, labels: &[usize], k: usize) -> Vec<DVector<f64>> {
    let d = features.ncols();
    let mut sums = vec![DVector::zeros(d); k];
    let mut mass = vec![0.0; k];
    for (i, &l) in labels.iter().enumerate() {
        sums[l] += features.row(i).transpose() * weights[i];
        mass[l] += weights[i];
    }
    sums.into_iter()
        .zip(mass)
        .map(|(s, m)| if m > 0.0 { s / m } else { s })
        .collect()
}

fn distortion(features: &DMatrix<f64>, weights: &DVector<f64>, labels: &[usize], centers: &[DVector<f64>]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| weights[i] * sq_dist(features, i, &centers[l]))
        .sum()
}

fn sample_weighted<R: Rng + ?Sized>(rng: &mut R, scores: &[f64]) -> Option<usize> {
    let total: f64 = scores.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &s) in scores.iter().enumerate() {
        acc += s;
        if u < acc && s > 0.0 {
            return Some(i);
        }
    }
    scores.iter().rposition(|&s| s > 0.0)
}

/// Lloyd's algorithm with `mu`-weighted k-means++ seeding.
pub fn weighted_kmeans<R: Rng + ?Sized>(
    features: &DMatrix<f64>,
    weights: &DVector<f64>,
    k: usize,
    rng: &mut R,
) -> Result<KMeansRun> {
    let n = features.nrows();
    check_len(n, weights.len())?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside [1, {n}]")));
    }

    // Seeding.
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let first = sample_weighted(rng, weights.as_slice()).unwrap_or(0);
    chosen.push(first);
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist(features, i, &features.row(first).transpose()))
        .collect();
    while chosen.len() < k {
        let scores: Vec<f64> = (0..n)
            .map(|i| if chosen.contains(&i) { 0.0 } else { weights[i] * nearest[i] })
            .collect();
        let next = sample_weighted(rng, &scores)
            .unwrap_or_else(|| (0..n).find(|i| !chosen.contains(i)).expect("k <= n"));
        chosen.push(next);
        let c = features.row(next).transpose();
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(features, i, &c));
        }
    }
    let mut centers: Vec<DVector<f64>> = chosen.iter().map(|&i| features.row(i).transpose()).collect();
    // Seed points own their clusters so that no block starts empty.
    let mut labels = vec![usize::MAX; n];
    for (l, &i) in chosen.iter().enumerate() {
        labels[i] = l;
    }
    for i in 0..n {
        if labels[i] == usize::MAX {
            labels[i] = nearest_center(features, i, &centers);
        }
    }
    let mut history = vec![distortion(features, weights, &labels, &centers)];

    for _ in 0..MAX_LLOYD_ITERATIONS {
        // Update.
        centers = centroids(features, weights, &labels, k);
        history.push(distortion(features, weights, &labels, &centers));
        // Assignment; a point keeps its label unless another centre is strictly closer.
        let mut changed = false;
        for i in 0..n {
            let best = nearest_center(features, i, &centers);
            if best != labels[i] && sq_dist(features, i, &centers[best]) < sq_dist(features, i, &centers[labels[i]]) {
                labels[i] = best;
                changed = true;
            }
        }
        refill_empty(features, weights, &mut labels, &centers, k);
        history.push(distortion(features, weights, &labels, &centers));
        if !changed {
            break;
        }
    }
    let centers = centroids(features, weights, &labels, k);
    let objective = distortion(features, weights, &labels, &centers);
    history.push(objective);
    Ok(KMeansRun {
        labels,
        objective,
        history,
    })
}

fn nearest_center(features: &DMatrix<f64>, i: usize, centers: &[DVector<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (l, c) in centers.iter().enumerate() {
        let d = sq_dist(features, i, c);
        if d < best_d {
            best = l;
            best_d = d;
        }
    }
    best
}

// Moves the costliest point of a multi-point block into each empty block.
fn refill_empty(
    features: &DMatrix<f64>,
    weights: &DVector<f64>,
    labels: &mut [usize],
    centers: &[DVector<f64>],
    k: usize,
) {
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..labels.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| {
                let ca = weights[a] * sq_dist(features, a, &centers[labels[a]]);
                let cb = weights[b] * sq_dist(features, b, &centers[labels[b]]);
                ca.total_cmp(&cb).then(b.cmp(&a))
            })
            .expect("k <= n leaves a block with two points");
        labels[donor] = empty;
    }
}

fn relabel_by_first_appearance(labels: &[usize], k: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect()
}

/// k-means on spectral features of a connected graph, best of `restarts`
/// runs. Restart `r` draws from ChaCha8 stream `r` of `seed`.
pub fn spectral_clustering(
    spec: &Spectrum,
    k: usize,
    mode: ClusterMode,
    seed: u64,
    restarts: usize,
) -> Result<ClusterResult> {
    let g = spec.graph();
    g.require_connected()?;
    let n = spec.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside [1, {n}]")));
    }
    let features = match mode {
        ClusterMode::Eigenmaps => {
            let dims = (k.saturating_sub(1)).max(1).min(n - 1);
            spec.eigenfunctions().columns(1, dims).into_owned()
        }
        ClusterMode::Kernel { c } => {
            let c = if c > 0.0 { c } else { 2.0 * spec.max_eigenvalue() };
            kernel_kmeans_features(spec, c)?
        }
    };
    let weights = g.measure();
    let restarts = restarts.max(1);
    let best = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            weighted_kmeans(&features, weights, k, &mut rng).map(|run| (r, run))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|(ra, a), (rb, b)| a.objective.total_cmp(&b.objective).then(ra.cmp(rb)))
        .map(|(_, run)| run)
        .expect("at least one restart");
    let labels = relabel_by_first_appearance(&best.labels, k);
    Ok(ClusterResult {
        partition: Partition::new(labels, k)?,
        objective: best.objective,
        seed,
        history: best.history,
    })
}
