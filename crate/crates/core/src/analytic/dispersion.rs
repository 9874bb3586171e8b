use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gate::haar_reference;
use crate::Result;

/// Single-mode quantities on the solvable line for a given `e / e_H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermionDispersion {
    pub d: usize,
    pub normalized_e: f64,
    /// Multiplier on the hopping coefficient `a_k`; 1 for the physical model.
    pub coupling: f64,
}

impl FermionDispersion {
    pub fn new(d: usize, e_u: f64) -> Result<Self> {
        let haar = haar_reference(d)?;
        Ok(Self { d, normalized_e: e_u / haar.e_haar, coupling: 1.0 })
    }

    pub fn from_e_tilde(d: usize, normalized_e: f64) -> Self {
        Self { d, normalized_e, coupling: 1.0 }
    }

    pub fn with_coupling(self, coupling: f64) -> Self {
        Self { coupling, ..self }
    }

    pub fn a_k(&self, k: f64) -> f64 {
        let df = self.d as f64;
        self.coupling * df * k.cos() / (df * df + 1.0)
    }

    /// Local-circuit single-particle energy.
    pub fn eps_k(&self, k: f64) -> f64 {
        self.normalized_e * (1.0 - 2.0 * self.a_k(k))
    }

    /// `a_k^2 e~^2 + 1 - e~`.
    pub fn discriminant(&self, k: f64) -> f64 {
        let a = self.a_k(k);
        a * a * self.normalized_e * self.normalized_e + 1.0 - self.normalized_e
    }

    /// Brick-wall single-mode eigenvalue, principal square root.
    pub fn mode_eigenvalue(&self, k: f64) -> Complex64 {
        let root = Complex64::new(self.discriminant(k), 0.0).sqrt();
        let base = root + self.a_k(k) * self.normalized_e;
        base * base
    }

    /// `((d+1)/(d-1))^2`.
    pub fn z(&self) -> f64 {
        let df = self.d as f64;
        ((df + 1.0) / (df - 1.0)).powi(2)
    }

    /// `r_{i,k}`, `i` in `{1, 2}`.
    pub fn r(&self, i: u8, k: f64) -> Complex64 {
        let a = self.a_k(k);
        let et = self.normalized_e;
        let root = Complex64::new(self.discriminant(k), 0.0).sqrt();
        let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        (Complex64::new(et - 2.0, 0.0) - root * (2.0 * sign)) / (et * (1.0 + 2.0 * a))
    }
}

pub fn brickwall_mode(k: f64, d: usize, e_u: f64) -> Result<Complex64> {
    Ok(FermionDispersion::new(d, e_u)?.mode_eigenvalue(k))
}
