use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::gate::haar_reference;
use crate::Result;

/// Entries of the two-site transfer block in the `{I, S}` representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateWeights {
    pub d: usize,
    pub e: f64,
    pub g: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GateWeights {
    pub fn from_profile(e: f64, g: f64, d: usize) -> Result<Self> {
        let haar = haar_reference(d)?;
        let normalized_e = e / haar.e_haar;
        let df = d as f64;
        Ok(Self {
            d,
            e,
            g,
            a: df * normalized_e / (df * df + 1.0),
            b: -normalized_e / 2.0 - g,
            c: -normalized_e / 2.0 + g,
        })
    }

    /// Point on the free-fermion line `g = e / (2 e_H)`.
    pub fn solvable(e: f64, d: usize) -> Result<Self> {
        let haar = haar_reference(d)?;
        Self::from_profile(e, e / (2.0 * haar.e_haar), d)
    }

    pub fn haar(d: usize) -> Result<Self> {
        let haar = haar_reference(d)?;
        Self::from_profile(haar.e_haar, haar.g_haar, d)
    }

    /// `IS -> IS` transfer entry.
    pub fn wall_stay_weight(&self) -> f64 {
        1.0 + self.b
    }

    /// `e / e_H`.
    pub fn normalized_e(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        self.e * (d2 + 1.0) / (d2 - 1.0)
    }

    pub fn is_solvable(&self, tol: f64) -> bool {
        self.c.abs() <= tol
    }

    /// Rows/columns ordered `II, IS, SI, SS`; rows are outputs.
    pub fn block(&self) -> Matrix4<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        Matrix4::new(1.0, 0.0, 0.0, 0.0, a, 1.0 + b, c, a, a, c, 1.0 + b, a, 0.0, 0.0, 0.0, 1.0)
    }

    /// Generator `A` with `block = I - A`.
    pub fn generator(&self) -> Matrix4<f64> {
        Matrix4::identity() - self.block()
    }
}
