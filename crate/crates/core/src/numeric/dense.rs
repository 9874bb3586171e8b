use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{general_eigenvalues, symmetric_eigenvalues};
use crate::moment::{to_orthonormal_basis, Architecture, MomentMatrix};
use crate::{Error, Result};

/// Largest matrix dimension handed to the dense solvers.
pub const DENSE_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumericSpectrum {
    pub eigenvalues: Vec<Complex64>,
    pub symmetric_input: bool,
    /// `|M U - U L|_F / |M|_F`; large when the matrix is defective even if
    /// the eigenvalues themselves are accurate.
    pub eigenpair_residual: f64,
}

impl NumericSpectrum {
    /// Moduli in descending order.
    pub fn sorted_moduli(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.eigenvalues.iter().map(|z| z.norm()).collect();
        m.sort_by(|a, b| b.total_cmp(a));
        m
    }
}

pub fn dense_eigenvalues(matrix: &DMatrix<f64>, symmetric: bool) -> Result<NumericSpectrum> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.nrows() > DENSE_DIM_CAP {
        return Err(Error::Unsupported(format!("dimension {} exceeds the dense cap {DENSE_DIM_CAP}", matrix.nrows())));
    }
    if symmetric {
        let (values, backward) = symmetric_eigenvalues(matrix);
        Ok(NumericSpectrum {
            eigenvalues: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            symmetric_input: true,
            eigenpair_residual: backward,
        })
    } else {
        let (values, backward) = general_eigenvalues(matrix)?;
        Ok(NumericSpectrum { eigenvalues: values, symmetric_input: false, eigenpair_residual: backward })
    }
}

/// Spectrum of a moment matrix, using the symmetric solver on the orthonormal
/// form of a local operator and the Schur solver otherwise.
pub fn moment_spectrum(moment: &MomentMatrix) -> Result<NumericSpectrum> {
    match moment.spec.architecture {
        Architecture::Local => dense_eigenvalues(&to_orthonormal_basis(moment)?.entries, true),
        Architecture::BrickWall => dense_eigenvalues(&moment.entries, false),
    }
}

/// Third-largest modulus without any check on the top two.
pub fn third_modulus(spectrum: &NumericSpectrum) -> Result<f64> {
    spectrum
        .sorted_moduli()
        .get(2)
        .copied()
        .ok_or_else(|| Error::InvalidInput("spectrum has fewer than three eigenvalues".into()))
}

/// `|lambda_3|`, after asserting that exactly two moduli equal one.
pub fn subleading_modulus(spectrum: &NumericSpectrum) -> Result<f64> {
    let moduli = spectrum.sorted_moduli();
    if moduli.len() < 3 {
        return Err(Error::InvalidInput("spectrum has fewer than three eigenvalues".into()));
    }
    let unit = moduli.iter().filter(|&&m| m > 1.0 - 1e-8).count();
    if unit != 2 || (moduli[0] - 1.0).abs() > 1e-8 || (moduli[1] - 1.0).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "expected exactly two unit-modulus eigenvalues, found {unit} (top moduli {:.12}, {:.12})",
            moduli[0], moduli[1]
        )));
    }
    Ok(moduli[2])
}
