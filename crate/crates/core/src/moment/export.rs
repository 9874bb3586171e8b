use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Architecture, Basis, CircuitSpec, GateWeights, MomentMatrix};
use crate::{Error, Result};

/// JSON metadata written next to a raw matrix dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSidecar {
    pub n: usize,
    pub d: usize,
    pub architecture: Architecture,
    pub basis: Basis,
    pub e_u: f64,
    pub g_u: f64,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes little-endian f64 entries in row-major order to `path` and the
/// metadata to `path.json`.
pub fn write_moment_binary(moment: &MomentMatrix, path: &Path) -> Result<()> {
    let m = &moment.entries;
    let mut bytes = Vec::with_capacity(m.len() * 8);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            bytes.extend_from_slice(&m[(i, j)].to_le_bytes());
        }
    }
    fs::write(path, bytes)?;
    let sidecar = MomentSidecar {
        n: moment.spec.n,
        d: moment.spec.d,
        architecture: moment.spec.architecture,
        basis: moment.basis,
        e_u: moment.weights.e,
        g_u: moment.weights.g,
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

pub fn read_moment_binary(path: &Path) -> Result<MomentMatrix> {
    let sidecar: MomentSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    let spec = CircuitSpec::new(sidecar.n, sidecar.d, sidecar.architecture)?;
    let bytes = fs::read(path)?;
    let dim = spec.dim();
    if bytes.len() != dim * dim * 8 {
        return Err(Error::Parse(format!(
            "expected {} bytes for a {dim}x{dim} matrix, found {}",
            dim * dim * 8,
            bytes.len()
        )));
    }
    let entries = DMatrix::from_fn(dim, dim, |i, j| {
        let at = (i * dim + j) * 8;
        f64::from_le_bytes(bytes[at..at + 8].try_into().expect("slice of length 8"))
    });
    let weights = GateWeights::from_profile(sidecar.e_u, sidecar.g_u, sidecar.d)?;
    Ok(MomentMatrix { spec, basis: sidecar.basis, weights, entries })
}
