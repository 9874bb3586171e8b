use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use super::{gate_from_canonical, CanonicalParams, TwoQuditGate};
use crate::{Error, Result};

/// On-disk gate description: either an explicit matrix or canonical qubit parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GateFile {
    Matrix { d: usize, entries: Vec<[f64; 2]> },
    Canonical { canonical: [f64; 3] },
}

impl GateFile {
    pub fn into_gate(self) -> Result<TwoQuditGate> {
        self.into_gate_with_tolerance(super::UNITARITY_TOL)
    }

    /// As [`GateFile::into_gate`] with a custom unitarity tolerance for explicit matrices.
    pub fn into_gate_with_tolerance(self, tol: f64) -> Result<TwoQuditGate> {
        match self {
            GateFile::Canonical { canonical } => {
                Ok(gate_from_canonical(CanonicalParams::new(canonical[0], canonical[1], canonical[2])))
            }
            GateFile::Matrix { d, entries } => {
                let dim = d * d;
                if entries.len() != dim * dim {
                    return Err(Error::Parse(format!(
                        "gate with d = {d} needs {} entries, got {}",
                        dim * dim,
                        entries.len()
                    )));
                }
                let m = DMatrix::from_row_iterator(dim, dim, entries.iter().map(|[re, im]| Complex64::new(*re, *im)));
                TwoQuditGate::with_tolerance(d, m, tol)
            }
        }
    }
}

/// Parses `{"d": .., "entries": [[re, im], ...]}` (row-major) or `{"canonical": [a, b, c]}`.
pub fn parse_gate_json(text: &str) -> Result<TwoQuditGate> {
    let file: GateFile = serde_json::from_str(text)?;
    file.into_gate()
}
