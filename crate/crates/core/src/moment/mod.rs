//! Second-moment operators on the `{I, S}^n` sector.
//!
//! Site `s` of an `n`-site configuration is bit `n - 1 - s` of the basis
//! index (site 0 is the most significant bit), with `I = 0` and `S = 1`.

mod basis;
mod builder;
mod export;
mod positivity;
mod weights;

pub use basis::{
    entangling_generator, local_generator_plus_minus, to_orthonormal_basis, typicality_generator, BasisChange,
};
pub use builder::{apply_pair_block_left, build_brickwall_moment, build_local_moment, build_moment, layer_pairs};
pub use export::{read_moment_binary, write_moment_binary, MomentSidecar};
pub use positivity::{positivity_gap, V1Subspace};
pub use weights::GateWeights;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default upper limit on `n` for dense `2^n x 2^n` matrices.
pub const DEFAULT_SITE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    Local,
    #[serde(alias = "brick-wall", alias = "brick_wall")]
    BrickWall,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::Local => "local",
            Architecture::BrickWall => "brickwall",
        }
    }
}

impl std::str::FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(Architecture::Local),
            "brickwall" | "brick-wall" | "brick_wall" => Ok(Architecture::BrickWall),
            other => Err(Error::Parse(format!("unknown architecture '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Computational,
    Orthonormal,
}

/// Ring of `n` qudits of dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n: usize,
    pub d: usize,
    pub architecture: Architecture,
}

impl CircuitSpec {
    pub fn new(n: usize, d: usize, architecture: Architecture) -> Result<Self> {
        Self::with_boundary(n, d, architecture, Boundary::Periodic)
    }

    pub fn with_boundary(n: usize, d: usize, architecture: Architecture, boundary: Boundary) -> Result<Self> {
        if boundary == Boundary::Open {
            return Err(Error::Unsupported("only periodic boundary conditions are implemented".into()));
        }
        if d < 2 {
            return Err(Error::InvalidInput(format!("local dimension d = {d} must be >= 2")));
        }
        match architecture {
            Architecture::Local if n < 3 => {
                return Err(Error::Unsupported(format!("local circuits need n >= 3, got {n}")))
            }
            Architecture::BrickWall if n < 4 || n % 2 == 1 => {
                return Err(Error::Unsupported(format!("brick-wall circuits need even n >= 4, got {n}")))
            }
            _ => {}
        }
        if n > 30 {
            return Err(Error::Unsupported(format!("n = {n} exceeds the bit-index range")));
        }
        Ok(Self { n, d, architecture })
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Fails if a dense matrix for this spec would exceed `cap` sites.
    pub fn require_dense(&self, cap: usize) -> Result<()> {
        if self.n > cap {
            return Err(Error::Unsupported(format!("n = {} exceeds the dense-matrix cap of {cap}", self.n)));
        }
        Ok(())
    }

    /// Bit position of site `s` inside a basis index.
    pub fn bit(&self, site: usize) -> usize {
        self.n - 1 - site
    }
}

/// Dense moment matrix with its provenance.
#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub spec: CircuitSpec,
    pub basis: Basis,
    pub weights: GateWeights,
    pub entries: DMatrix<f64>,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Max-norm asymmetry `|M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }
}
