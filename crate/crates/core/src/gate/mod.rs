//! Two-qudit gates and the quantities of the gate that enter the second moment.

mod entanglement;
mod io;
mod weingarten;

pub use entanglement::{
    entanglement_profile, haar_reference, operator_entanglement, qubit_profile_closed_form, qubit_solvable_residual,
    solvable_residual, EntanglementProfile, Feasibility, HaarReference, SolvableResidual,
};
pub use io::{parse_gate_json, GateFile};
pub use weingarten::{weingarten_block, weingarten_element, weingarten_matrix_from_profile, PauliSectorBasis, Perm};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Default unitarity tolerance, max-norm of `U^dagger U - I`.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A unitary on `C^d (x) C^d`, basis index `i * d + j` for the pair `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQuditGate {
    d: usize,
    matrix: DMatrix<Complex64>,
}

impl TwoQuditGate {
    pub fn new(d: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(d, matrix, UNITARITY_TOL)
    }

    pub fn with_tolerance(d: usize, matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("local dimension d = {d} must be >= 2")));
        }
        let dim = d * d;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "gate for d = {d} must be {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation.is_nan() || deviation > tol {
            return Err(Error::NotUnitary { deviation, tolerance: tol });
        }
        Ok(Self { d, matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { d, matrix: DMatrix::identity(d * d, d * d) }
    }

    pub fn swap(d: usize) -> Self {
        let dim = d * d;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..d {
            for j in 0..d {
                m[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
            }
        }
        Self { d, matrix: m }
    }

    pub fn cnot() -> Self {
        let mut m = DMatrix::zeros(4, 4);
        let one = Complex64::new(1.0, 0.0);
        m[(0, 0)] = one;
        m[(1, 1)] = one;
        m[(2, 3)] = one;
        m[(3, 2)] = one;
        Self { d: 2, matrix: m }
    }

    pub fn iswap() -> Self {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 2)] = Complex64::new(0.0, 1.0);
        m[(2, 1)] = Complex64::new(0.0, 1.0);
        m[(3, 3)] = Complex64::new(1.0, 0.0);
        Self { d: 2, matrix: m }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { d: self.d, matrix: self.matrix.adjoint() }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::InvalidInput("cannot compose gates of different d".into()));
        }
        Ok(Self { d: self.d, matrix: &self.matrix * &other.matrix })
    }

    /// `u * SWAP`.
    pub fn times_swap(&self) -> Self {
        let d = self.d;
        let mut m = DMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m.set_column(j * d + i, &self.matrix.column(i * d + j));
            }
        }
        Self { d, matrix: m }
    }

    /// Dresses the gate with single-qudit unitaries, `(a (x) b) u (c (x) e)`.
    pub fn dressed(
        &self,
        a: &DMatrix<Complex64>,
        b: &DMatrix<Complex64>,
        c: &DMatrix<Complex64>,
        e: &DMatrix<Complex64>,
    ) -> Self {
        let left = a.kronecker(b);
        let right = c.kronecker(e);
        Self { d: self.d, matrix: left * &self.matrix * right }
    }
}

/// Max-norm of `U^dagger U - I`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Canonical (Cartan) coordinates of a two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CanonicalParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CanonicalParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// `exp(-i (alpha XX + beta YY + gamma ZZ))` as a product of three commuting factors.
pub fn gate_from_canonical(params: CanonicalParams) -> TwoQuditGate {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let xx = DMatrix::from_row_slice(
        4,
        4,
        &[
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
        ],
    );
    let yy = DMatrix::from_row_slice(
        4,
        4,
        &[
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(-1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(-1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
        ],
    );
    let zz = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(-1., 0.), c(-1., 0.), c(1., 0.)]));
    let id = DMatrix::<Complex64>::identity(4, 4);
    let factor = |theta: f64, p: &DMatrix<Complex64>| {
        &id * Complex64::new(theta.cos(), 0.0) - p * Complex64::new(0.0, theta.sin())
    };
    let m = factor(params.alpha, &xx) * factor(params.beta, &yy) * factor(params.gamma, &zz);
    TwoQuditGate { d: 2, matrix: m }
}

/// Haar-random unitary of size `dim` from the QR decomposition of a complex
/// Ginibre matrix, with the phases of `R`'s diagonal absorbed into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random two-qudit gate.
pub fn sample_haar_gate<R: Rng + ?Sized>(d: usize, rng: &mut R) -> TwoQuditGate {
    TwoQuditGate { d, matrix: sample_haar_unitary(d * d, rng) }
}
