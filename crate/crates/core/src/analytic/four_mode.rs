use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use super::FermionDispersion;
use crate::gate::haar_reference;
use crate::linalg::{complex_eigenvalues4, min_cost_assignment};
use crate::{Error, Result};

/// Four-mode transfer check at one momentum: the product of the two layer
/// exponentials is diagonalised numerically and compared with its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct FourModeCheck {
    pub k: f64,
    pub d: usize,
    pub normalized_e: f64,
    pub x: Complex64,
    pub y: Complex64,
    pub q: Complex64,
    #[serde(skip)]
    pub s1: Matrix4<Complex64>,
    #[serde(skip)]
    pub s2: Matrix4<Complex64>,
    pub numeric: [Complex64; 4],
    /// `e^{+-y} (q +- sqrt(q^2 + 1))^2`.
    pub predicted: [Complex64; 4],
    /// Largest distance after optimal pairing of `numeric` and `predicted`.
    pub eigen_mismatch: f64,
    /// `|e^y (q + sqrt(q^2 + 1))^2 - mode_eigenvalue|`.
    pub mode_mismatch: f64,
    /// `|lambda'_k lambda'_{-k} - 1|`.
    pub reciprocal_mismatch: f64,
}

impl FourModeCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.eigen_mismatch < tol && self.mode_mismatch < tol && self.reciprocal_mismatch < tol
    }
}

fn generator(k: f64, x: Complex64, y: Complex64) -> Matrix4<Complex64> {
    let (s, c) = k.sin_cos();
    let i = Complex64::i();
    let (p, m) = (x * 2.0 + y, x * 2.0 - y);
    Matrix4::new(
        x * 2.0 + y * c,
        -i * p * s,
        -i * y * s,
        p * c,
        -i * m * s,
        -x * 2.0 - y * c,
        m * c,
        i * y * s,
        i * y * s,
        -p * c,
        x * 2.0 - y * c,
        i * p * s,
        -m * c,
        -i * y * s,
        i * m * s,
        -x * 2.0 + y * c,
    ) * Complex64::new(0.5, 0.0)
}

pub fn four_mode_check(k: f64, d: usize, e_u: f64) -> Result<FourModeCheck> {
    if !(k > 0.0 && k < PI / 2.0) {
        return Err(Error::InvalidInput(format!("momentum must lie in (0, pi/2), got {k}")));
    }
    let haar = haar_reference(d)?;
    let normalized_e = e_u / haar.e_haar;
    if e_u == 0.0 || (normalized_e - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidInput("the four-mode check is singular at e = 0 and e = e_H".into()));
    }
    let df = d as f64;
    // principal branch: log of a negative real is log|z| + i pi
    let y = Complex64::new(1.0 - normalized_e, 0.0).ln();
    let x = y * (-df / (df * df + 1.0));
    let q = x * 2.0 * (y / 2.0).sinh() * k.cos() / y;

    let s1 = generator(k, x, y);
    let parity = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0).map(|v| Complex64::new(v, 0.0)));
    let s2 = parity * s1 * parity;
    let transfer = s2.exp() * s1.exp();
    let numeric = complex_eigenvalues4(&transfer)?;

    let root = (q * q + 1.0).sqrt();
    let (up, down) = (y.exp(), (-y).exp());
    let predicted =
        [up * (q + root).powi(2), up * (q - root).powi(2), down * (q + root).powi(2), down * (q - root).powi(2)];

    let cost = DMatrix::from_fn(4, 4, |i, j| (numeric[i] - predicted[j]).norm());
    let assignment = min_cost_assignment(&cost);
    let eigen_mismatch = assignment.iter().enumerate().map(|(i, &j)| cost[(i, j)]).fold(0.0, f64::max);

    let lambda = FermionDispersion::from_e_tilde(d, normalized_e).mode_eigenvalue(k);
    let mode_mismatch = (predicted[0] - lambda).norm();
    let reciprocal_mismatch = (predicted[0] * predicted[3] - 1.0).norm();

    Ok(FourModeCheck {
        k,
        d,
        normalized_e,
        x,
        y,
        q,
        s1,
        s2,
        numeric,
        predicted,
        eigen_mismatch,
        mode_mismatch,
        reciprocal_mismatch,
    })
}
