//! Thin wrappers over nalgebra's dense solvers and the assignment solver
//! used for spectrum matching.

use faer::linalg::solvers::Eigen;
use faer::Mat;
use nalgebra::{ComplexField, DMatrix, Dim, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// All eigenvalues of a real square matrix together with the relative
/// eigenpair residual `|M U - U L|_F / |M|_F`.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Result<(Vec<Complex64>, f64)> {
    let n = m.nrows();
    let norm = m.norm().max(f64::MIN_POSITIVE);
    let a = Mat::<f64>::from_fn(n, m.ncols(), |i, j| m[(i, j)]);
    let eig = Eigen::new_from_real(a.as_ref())
        .map_err(|_| Error::Numerical(format!("eigenvalue iteration did not converge for a {n}x{n} matrix")))?;
    let u = eig.U();
    let values: Vec<Complex64> = (0..n).map(|j| eig.S()[j]).collect();
    let lifted = Mat::<Complex64>::from_fn(n, n, |i, j| Complex64::new(a[(i, j)], 0.0));
    let product = &lifted * u;
    let mut residual = 0.0;
    for j in 0..n {
        for i in 0..n {
            residual += (product[(i, j)] - values[j] * u[(i, j)]).norm_sqr();
        }
    }
    Ok((values, residual.sqrt() / norm))
}

/// Eigenvalues of a real symmetric matrix with `|M V - V L|_F / |M|_F`.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> (Vec<f64>, f64) {
    let norm = m.norm().max(f64::MIN_POSITIVE);
    let eig = SymmetricEigen::new(m.clone());
    let v = &eig.eigenvectors;
    let lv = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * eig.eigenvalues[j]);
    let backward = (m * v - lv).norm() / norm;
    (eig.eigenvalues.iter().copied().collect(), backward)
}

/// Eigenvalues of a complex 4x4 matrix.
pub fn complex_eigenvalues4(m: &Matrix4<Complex64>) -> Result<[Complex64; 4]> {
    let a = Mat::<Complex64>::from_fn(4, 4, |i, j| m[(i, j)]);
    let values = a
        .eigenvalues()
        .map_err(|_| Error::Numerical("eigenvalue iteration did not converge for a 4x4 matrix".into()))?;
    Ok([values[0], values[1], values[2], values[3]])
}

/// Frobenius norm of any real or complex matrix.
pub fn frobenius<T, R, C, S>(m: &nalgebra::Matrix<T, R, C, S>) -> f64
where
    T: ComplexField<RealField = f64>,
    R: Dim,
    C: Dim,
    S: nalgebra::RawStorage<T, R, C>,
{
    m.iter().map(|z| z.clone().modulus_squared()).sum::<f64>().sqrt()
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// potentials form). Returns `assignment[row] = column`.
pub fn min_cost_assignment(cost: &DMatrix<f64>) -> Vec<usize> {
    let n = cost.nrows();
    assert_eq!(n, cost.ncols(), "assignment needs a square cost matrix");
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays with a virtual column 0
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let cur = cost[(r0 - 1, col - 1)] - u[r0] - v[col];
                if cur < minv[col] {
                    minv[col] = cur;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for col in 1..=n {
        assignment[owner[col] - 1] = col - 1;
    }
    assignment
}
