//! Ridge-regularised positive-definite solves shared by the probes.
//!
//! Both entry points reduce to a Cholesky factorisation of a symmetric matrix shifted
//! by `ridge · I`; a failed factorisation surfaces as an error instead of a panic so
//! probes can report degenerate systems.

use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("matrix is {rows}x{cols} but right-hand side has length {rhs}")]
    ShapeMismatch { rows: usize, cols: usize, rhs: usize },
    #[error("system is singular even after ridge shift {ridge:e}")]
    SingularSystem { ridge: f64 },
}

pub type Result<T> = std::result::Result<T, SolveError>;

/// Solve (A + ridge·I) c = y for symmetric positive semidefinite `A` (row-major).
///
/// This is the kernel-interpolation solve: `A` a Gram matrix, `y` target values at the
/// same points. The ridge shift keeps the factorisation positive definite when `A` is
/// rank-deficient.
pub fn shifted_solve(a: &[Vec<f64>], y: &[f64], ridge: f64) -> Result<Vec<f64>> {
    let n = a.len();
    if y.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(SolveError::ShapeMismatch {
            rows: n,
            cols: a.first().map_or(0, |r| r.len()),
            rhs: y.len(),
        });
    }
    let mut m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    for i in 0..n {
        m[(i, i)] += ridge;
    }
    let chol = Cholesky::new(m).ok_or(SolveError::SingularSystem { ridge })?;
    let c = chol.solve(&DVector::from_column_slice(y));
    Ok(c.iter().copied().collect())
}

/// Solve the ridge least-squares problem min ‖B c − y‖² + ridge‖c‖² through its normal
/// equations (BᵀB + ridge·I) c = Bᵀy. `B` is row-major with one row per sample.
pub fn ridge_least_squares(b: &[Vec<f64>], y: &[f64], ridge: f64) -> Result<Vec<f64>> {
    let rows = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    if y.len() != rows || b.iter().any(|row| row.len() != cols) {
        return Err(SolveError::ShapeMismatch {
            rows,
            cols,
            rhs: y.len(),
        });
    }
    let bm = DMatrix::from_fn(rows, cols, |i, j| b[i][j]);
    let mut normal = bm.transpose() * &bm;
    for i in 0..cols {
        normal[(i, i)] += ridge;
    }
    let rhs = bm.transpose() * DVector::from_column_slice(y);
    let chol = Cholesky::new(normal).ok_or(SolveError::SingularSystem { ridge })?;
    Ok(chol.solve(&rhs).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn shifted_solve_recovers_identity_solution() {
        let a = vec![vec![2.0, 0.0], vec![0.0, 4.0]];
        let c = shifted_solve(&a, &[2.0, 8.0], 0.0).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn ridge_shift_rescues_rank_deficient_gram() {
        // Rank-1 matrix: plain Cholesky fails, a tiny shift succeeds.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(
            shifted_solve(&a, &[1.0, 1.0], 0.0).unwrap_err(),
            SolveError::SingularSystem { ridge: 0.0 }
        );
        let c = shifted_solve(&a, &[1.0, 1.0], 1e-10).unwrap();
        assert_abs_diff_eq!(c[0] + c[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn least_squares_matches_hand_solution() {
        // Fit y = 2x + 1 exactly with basis {1, x}: residual zero, coefficients exact.
        let b: Vec<Vec<f64>> = [-1.0f64, 0.0, 1.0, 2.0]
            .iter()
            .map(|&x| vec![1.0, x])
            .collect();
        let y: Vec<f64> = [-1.0f64, 0.0, 1.0, 2.0].iter().map(|&x| 2.0 * x + 1.0).collect();
        let c = ridge_least_squares(&b, &y, 0.0).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            shifted_solve(&a, &[1.0], 0.0),
            Err(SolveError::ShapeMismatch { .. })
        ));
    }
}
