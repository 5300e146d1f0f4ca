//! Gaussian path synthesis by Cholesky factorization of the covariance matrix.
//!
//! Each path draws its normals from a ChaCha stream keyed by `(seed, path index)`,
//! so an ensemble is bit-identical whatever the thread count or schedule.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::moments::{covariance_with_tol, incremental_variance, variance_with_tol, IncrementQuery};
use crate::numerics::DEFAULT_TOL;
use crate::processes::ProcessSpec;

/// Relative spacing below which grid points are rejected.
pub const MIN_RELATIVE_SPACING: f64 = 1e-10;

const JITTER_START: f64 = 1e-12;
const JITTER_MAX: f64 = 1e-6;
const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Strictly increasing positive time points; `U(0) = 0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("time grid needs at least one point".into()));
        }
        if points.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::Validation("time grid points must be finite and > 0".into()));
        }
        let span = *points.last().unwrap();
        let mut prev = 0.0;
        for &t in &points {
            if t <= prev {
                return Err(Error::Validation("time grid must be strictly increasing".into()));
            }
            if t - prev < MIN_RELATIVE_SPACING * span {
                return Err(Error::Validation(format!(
                    "grid spacing {:e} below {MIN_RELATIVE_SPACING:e} of the span",
                    t - prev
                )));
            }
            prev = t;
        }
        Ok(TimeGrid { points })
    }

    /// `n` equally spaced points `t_max/n, ..., t_max`.
    pub fn uniform(t_max: f64, n: usize) -> Result<Self> {
        Self::new((1..=n).map(|k| t_max * k as f64 / n as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Covariance matrix `R(t_i, t_j)` on the grid.
pub fn build_covariance_matrix(spec: &ProcessSpec, grid: &TimeGrid, tol: f64) -> Result<DMatrix<f64>> {
    let pts = grid.points();
    let n = pts.len();
    let variances: Vec<f64> = pts
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            variance_with_tol(spec, t, tol).map_err(|e| Error::MatrixEntry { i, j: i, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let off: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let q = IncrementQuery::new(*spec, pts[i], pts[j])?;
            let inc = incremental_variance(&q, tol)?.total;
            Ok(0.5 * (variances[i] + variances[j] - inc))
        })
        .zip(pairs.par_iter())
        .map(|(r, &(i, j))| r.map_err(|e: Error| Error::MatrixEntry { i, j, source: Box::new(e) }))
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(n, n);
    for (i, v) in variances.iter().enumerate() {
        m[(i, i)] = *v;
    }
    for (&(i, j), v) in pairs.iter().zip(off) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(m)
}

/// Covariance entry by direct polarization, for spot checks.
pub fn covariance_entry(spec: &ProcessSpec, s: f64, t: f64) -> Result<f64> {
    covariance_with_tol(spec, s, t, DEFAULT_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    pub lower: DMatrix<f64>,
    /// Diagonal perturbation added before the factorization succeeded.
    pub jitter: f64,
}

fn relative_reconstruction_error(lower: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
    let diff = lower * lower.transpose() - target;
    let norm = target.norm();
    if norm == 0.0 {
        diff.norm()
    } else {
        diff.norm() / norm
    }
}

/// Lower-triangular `L` with `L Lᵀ = matrix + jitter·I`, escalating the jitter
/// from `1e-12` to `1e-6` times the largest diagonal entry when needed.
pub fn cholesky_factor(matrix: &DMatrix<f64>) -> Result<CholeskyFactor> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::Validation("cholesky_factor needs a non-empty square matrix".into()));
    }
    let scale = matrix.amax();
    if (matrix - matrix.transpose()).amax() > 1e-12 * scale {
        return Err(Error::Validation("matrix is not symmetric".into()));
    }
    let max_diag = matrix.diagonal().amax();
    let mut jitter = 0.0;
    loop {
        let perturbed = matrix + DMatrix::identity(n, n) * jitter;
        if let Some(ch) = perturbed.clone().cholesky() {
            let lower = ch.l();
            if relative_reconstruction_error(&lower, &perturbed) <= RECONSTRUCTION_TOL {
                return Ok(CholeskyFactor { lower, jitter });
            }
        }
        jitter = if jitter == 0.0 { JITTER_START * max_diag } else { jitter * 10.0 };
        if jitter > JITTER_MAX * max_diag * (1.0 + 1e-9) || jitter == 0.0 {
            let min_eigenvalue = matrix.clone().symmetric_eigenvalues().min();
            return Err(Error::Conditioning {
                jitter: JITTER_MAX * max_diag,
                min_eigenvalue,
            });
        }
    }
}

/// Simulated paths on a grid, stored row-major (one row per path).
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    grid: TimeGrid,
    n_paths: usize,
    seed: u64,
    values: Vec<f64>,
    factor_checksum: String,
    jitter: f64,
}

impl PathEnsemble {
    /// Wraps externally produced values (`n_paths × grid.len()`, row-major).
    pub fn from_values(grid: TimeGrid, n_paths: usize, values: Vec<f64>) -> Result<Self> {
        if n_paths == 0 || values.len() != n_paths * grid.len() {
            return Err(Error::Validation("ensemble values do not match n_paths × grid length".into()));
        }
        Ok(PathEnsemble {
            grid,
            n_paths,
            seed: 0,
            values,
            factor_checksum: String::new(),
            jitter: 0.0,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    /// SHA-256 of the Cholesky factor entries (little-endian, column-major), hex encoded.
    pub fn factor_checksum(&self) -> &str {
        &self.factor_checksum
    }
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[p * n..(p + 1) * n]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.grid.len())
    }
}

fn factor_checksum(lower: &DMatrix<f64>) -> String {
    let mut hasher = Sha256::new();
    for v in lower.iter() {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

/// `n_paths` independent realizations of `spec` on `grid`.
pub fn sample_paths(spec: &ProcessSpec, grid: &TimeGrid, n_paths: usize, seed: u64) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return Err(Error::Validation("n_paths must be at least 1".into()));
    }
    let cov = build_covariance_matrix(spec, grid, DEFAULT_TOL)?;
    let factor = cholesky_factor(&cov)?;
    let n = grid.len();
    let lower = &factor.lower;
    let mut values = vec![0.0; n_paths * n];
    values.par_chunks_mut(n).enumerate().for_each(|(p, row)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p as u64);
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for (i, out) in row.iter_mut().enumerate() {
            *out = (0..=i).map(|k| lower[(i, k)] * z[k]).sum();
        }
    });
    Ok(PathEnsemble {
        grid: grid.clone(),
        n_paths,
        seed,
        values,
        factor_checksum: factor_checksum(lower),
        jitter: factor.jitter,
    })
}

fn mean_and_std_error(samples: impl Iterator<Item = f64>) -> (f64, f64) {
    // Welford
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for x in samples {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    if n < 2 {
        return (mean, 0.0);
    }
    let sd = (m2 / (n - 1) as f64).sqrt();
    (mean, sd / (n as f64).sqrt())
}

/// Mean of `(U(t_j) - U(t_i))^2` over paths, with its standard error.
pub fn empirical_incremental_variance(ensemble: &PathEnsemble, i: usize, j: usize) -> Result<(f64, f64)> {
    let n = ensemble.grid.len();
    if !(i < j && j < n) {
        return Err(Error::Validation(format!("indices must satisfy i < j < {n}, got ({i}, {j})")));
    }
    Ok(mean_and_std_error(ensemble.paths().map(|p| (p[j] - p[i]).powi(2))))
}

/// Mean of `U(t_j)^2` over paths (the increment from the implicit origin), with its standard error.
pub fn empirical_variance(ensemble: &PathEnsemble, j: usize) -> Result<(f64, f64)> {
    if j >= ensemble.grid.len() {
        return Err(Error::Validation(format!("index {j} out of range")));
    }
    Ok(mean_and_std_error(ensemble.paths().map(|p| p[j].powi(2))))
}
