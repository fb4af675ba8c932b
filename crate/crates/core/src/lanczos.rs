//! Lanczos iteration for the low end of a symmetric spectrum.
//!
//! The operator is only touched through [`LinearOperator::apply`]. Each
//! eigenpair is found by an explicitly restarted Lanczos run with full
//! reorthogonalization, then locked; later runs stay orthogonal to every
//! locked vector, so repeated eigenvalues are found once per multiplicity.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..self.ncols()).map(|j| self[(i, j)] * x[j]).sum();
        }
    }
}

#[derive(Clone, Debug)]
pub struct LanczosConfig {
    /// Largest Krylov basis built before a restart.
    pub max_krylov: usize,
    /// Restarts allowed per eigenpair before giving up.
    pub max_restarts: usize,
    /// Residual tolerance, relative to the largest Ritz value seen (or 1).
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            max_krylov: 120,
            max_restarts: 200,
            tolerance: 1e-10,
            seed: 0x5eed_1a7c,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    orthogonalize_all(v, &[against]);
}

/// Two passes of classical Gram-Schmidt against every listed set; each pass
/// covers all sets so later subtractions cannot reintroduce earlier ones.
fn orthogonalize_all(v: &mut [f64], sets: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for q in sets.iter().flat_map(|s| s.iter()) {
            let c = dot(v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// The `count` smallest eigenvalues of a symmetric operator, ascending.
pub fn lowest_eigenvalues(op: &dyn LinearOperator, count: usize, config: &LanczosConfig) -> Result<Vec<f64>> {
    let n = op.dim();
    let count = count.min(n);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut values: Vec<f64> = Vec::with_capacity(count);
    let mut scale: f64 = 1.0;
    let mut total_iterations = 0;

    while locked.len() < count {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(locked.len() as u64));
        let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        orthogonalize(&mut start, &locked);
        let mut converged = None;
        let mut last_residual = f64::INFINITY;
        for _ in 0..=config.max_restarts {
            let mut run = krylov_run(op, &start, &locked, config.max_krylov.min(n - locked.len()));
            total_iterations += run.steps;
            let (_, mut y) = run.lowest_ritz();
            scale = scale.max(run.largest_ritz.abs());
            orthogonalize(&mut y, &locked);
            let ny = norm(&y);
            if ny == 0.0 {
                break;
            }
            y.iter_mut().for_each(|x| *x /= ny);
            // explicit residual of the deflated operator
            let mut ay = vec![0.0; n];
            op.apply(&y, &mut ay);
            total_iterations += 1;
            orthogonalize(&mut ay, &locked);
            let theta = dot(&y, &ay);
            let residual = ay.iter().zip(&y).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt();
            last_residual = residual;
            if residual <= config.tolerance * scale {
                converged = Some((theta, y));
                break;
            }
            start = y;
        }
        let Some((theta, y)) = converged else {
            return Err(Error::Convergence {
                iterations: total_iterations,
                residual: last_residual,
            });
        };
        locked.push(y);
        values.push(theta);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

struct KrylovRun {
    basis: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    steps: usize,
    largest_ritz: f64,
}

/// Orthonormal Lanczos basis from `start`, kept orthogonal to `locked`.
/// The operator images are stored so the projection can be formed exactly
/// even after a near-breakdown spoils the tridiagonal recurrence.
fn krylov_run(op: &dyn LinearOperator, start: &[f64], locked: &[Vec<f64>], max_steps: usize) -> KrylovRun {
    let n = op.dim();
    let mut q = start.to_vec();
    let nq = norm(&q);
    let mut run = KrylovRun {
        basis: Vec::new(),
        images: Vec::new(),
        steps: 0,
        largest_ritz: 0.0,
    };
    if nq == 0.0 || max_steps == 0 {
        return run;
    }
    q.iter_mut().for_each(|x| *x /= nq);
    let mut scale: f64 = 1.0;
    for _ in 0..max_steps {
        let mut w = vec![0.0; n];
        op.apply(&q, &mut w);
        run.steps += 1;
        scale = scale.max(dot(&w, &q).abs());
        run.basis.push(q);
        run.images.push(w.clone());
        orthogonalize_all(&mut w, &[locked, &run.basis]);
        let b = norm(&w);
        if b <= 1e-10 * scale {
            break;
        }
        q = w.into_iter().map(|x| x / b).collect();
    }
    run
}

impl KrylovRun {
    /// Lowest Ritz value and its Ritz vector.
    fn lowest_ritz(&mut self) -> (f64, Vec<f64>) {
        let m = self.basis.len();
        if m == 0 {
            return (0.0, Vec::new());
        }
        let mut h = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = 0.5 * (dot(&self.basis[i], &self.images[j]) + dot(&self.basis[j], &self.images[i]));
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(h);
        let (imin, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        self.largest_ritz = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let s = eig.eigenvectors.column(imin);
        let n = self.basis[0].len();
        let mut y = vec![0.0; n];
        for (coef, v) in s.iter().zip(&self.basis) {
            for (yi, vi) in y.iter_mut().zip(v) {
                *yi += coef * vi;
            }
        }
        (theta, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_lowest(m: &DMatrix<f64>, count: usize) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v.truncate(count);
        v
    }

    #[test]
    fn diagonal_with_repeats() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 0.0, 1.0, 0.0, 5.0, 1.0]));
        let got = lowest_eigenvalues(&m, 4, &LanczosConfig::default()).unwrap();
        for (a, b) in got.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-9, "{got:?}");
        }
    }

    #[test]
    fn path_laplacian_restarts() {
        // path graph Laplacian, forced through many restarts with a tiny Krylov space
        let n = 60;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i)] += 1.0;
            m[(i + 1, i + 1)] += 1.0;
            m[(i, i + 1)] = -1.0;
            m[(i + 1, i)] = -1.0;
        }
        let cfg = LanczosConfig {
            max_krylov: 25,
            max_restarts: 2000,
            ..Default::default()
        };
        let got = lowest_eigenvalues(&m, 3, &cfg).unwrap();
        let want = dense_lowest(&m, 3);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn reports_non_convergence() {
        let n = 80;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = (i as f64 + 1.0).sqrt();
        }
        let cfg = LanczosConfig {
            max_krylov: 3,
            max_restarts: 1,
            ..Default::default()
        };
        assert!(matches!(
            lowest_eigenvalues(&m, 1, &cfg),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn count_capped_at_dimension() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0]));
        let got = lowest_eigenvalues(&m, 5, &LanczosConfig::default()).unwrap();
        assert_eq!(got.len(), 2);
    }
}
