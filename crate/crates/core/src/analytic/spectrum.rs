use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{momentum_grid, FermionDispersion, MomentumGrid, OccupationPattern};
use crate::format::ComplexPair;
use crate::gate::haar_reference;
use crate::moment::{Architecture, CircuitSpec};
use crate::{Error, Result};

/// Largest spectrum the enumerators will produce.
pub const MAX_ENUMERATION: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticEigenvalue {
    pub value: Complex64,
    pub sector: u8,
    pub pattern: OccupationPattern,
}

#[derive(Debug, Clone)]
pub struct AnalyticSpectrum {
    pub spec: CircuitSpec,
    pub e_u: f64,
    pub entries: Vec<AnalyticEigenvalue>,
}

#[derive(Serialize, Deserialize)]
struct EigenvalueRecord {
    re: f64,
    im: f64,
    sector: u8,
    occupation: String,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRecord {
    n: usize,
    d: usize,
    architecture: Architecture,
    e_u: f64,
    eigenvalues: Vec<EigenvalueRecord>,
}

impl AnalyticSpectrum {
    pub fn values(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn unit_count(&self, tol: f64) -> usize {
        self.entries.iter().filter(|e| (e.value - 1.0).norm() < tol).count()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let record = SpectrumRecord {
            n: self.spec.n,
            d: self.spec.d,
            architecture: self.spec.architecture,
            e_u: self.e_u,
            eigenvalues: self
                .entries
                .iter()
                .map(|e| {
                    let z = ComplexPair::from(e.value);
                    EigenvalueRecord { re: z.re, im: z.im, sector: e.sector, occupation: e.pattern.bitstring() }
                })
                .collect(),
        };
        serde_json::to_value(record).expect("spectrum record serializes")
    }
}

fn check_pattern(pattern: &OccupationPattern, grid: &MomentumGrid) -> Result<()> {
    if !pattern.is_even() {
        return Err(Error::InvalidInput(format!("pattern {} has odd parity", pattern.bitstring())));
    }
    if pattern.n != grid.n || pattern.p != grid.p {
        return Err(Error::InvalidInput("pattern and grid disagree on n or sector".into()));
    }
    Ok(())
}

/// `1 - (1/n) sum_k eps_k i_k`.
pub fn local_eigenvalue(pattern: &OccupationPattern, dispersion: &FermionDispersion) -> Result<f64> {
    let grid = momentum_grid(pattern.n, pattern.p)?;
    check_pattern(pattern, &grid)?;
    let energy: f64 = pattern.occupied_indices().map(|j| dispersion.eps_k(grid.values[j])).sum();
    Ok(1.0 - energy / pattern.n as f64)
}

/// `prod_k mode_eigenvalue^{i_k}`.
pub fn brickwall_eigenvalue(pattern: &OccupationPattern, dispersion: &FermionDispersion) -> Result<Complex64> {
    let grid = momentum_grid(pattern.n, pattern.p)?;
    check_pattern(pattern, &grid)?;
    Ok(pattern.occupied_indices().map(|j| dispersion.mode_eigenvalue(grid.values[j])).product())
}

fn check_size(n: usize) -> Result<()> {
    if n >= 63 || (1usize << n) > MAX_ENUMERATION {
        return Err(Error::Unsupported(format!("full enumeration for n = {n} exceeds {MAX_ENUMERATION} entries")));
    }
    Ok(())
}

pub fn enumerate_local_spectrum(spec: &CircuitSpec, e_u: f64) -> Result<AnalyticSpectrum> {
    enumerate_local_with(spec, e_u, &FermionDispersion::new(spec.d, e_u)?)
}

/// Local enumeration with an explicit dispersion.
pub fn enumerate_local_with(spec: &CircuitSpec, e_u: f64, disp: &FermionDispersion) -> Result<AnalyticSpectrum> {
    check_size(spec.n)?;
    let mut entries = Vec::with_capacity(1 << spec.n);
    for p in [0u8, 1] {
        let grid = momentum_grid(spec.n, p)?;
        let eps: Vec<f64> = grid.values.iter().map(|&k| disp.eps_k(k)).collect();
        for pattern in grid.even_patterns() {
            let energy: f64 = pattern.occupied_indices().map(|j| eps[j]).sum();
            entries.push(AnalyticEigenvalue {
                value: Complex64::new(1.0 - energy / spec.n as f64, 0.0),
                sector: p,
                pattern,
            });
        }
    }
    Ok(AnalyticSpectrum { spec: *spec, e_u, entries })
}

pub fn enumerate_brickwall_spectrum(spec: &CircuitSpec, e_u: f64) -> Result<AnalyticSpectrum> {
    enumerate_brickwall_with(spec, e_u, &FermionDispersion::new(spec.d, e_u)?)
}

/// Brick-wall enumeration with an explicit dispersion.
pub fn enumerate_brickwall_with(spec: &CircuitSpec, e_u: f64, disp: &FermionDispersion) -> Result<AnalyticSpectrum> {
    if spec.n % 2 == 1 {
        return Err(Error::Unsupported(format!("brick-wall spectra need even n, got {}", spec.n)));
    }
    check_size(spec.n)?;
    let mut entries = Vec::with_capacity(1 << spec.n);
    for p in [0u8, 1] {
        let grid = momentum_grid(spec.n, p)?;
        let lam: Vec<Complex64> = grid.values.iter().map(|&k| disp.mode_eigenvalue(k)).collect();
        // conj(mode_eigenvalue) = lambda_{pi - k} for non-real modes; real modes map to themselves
        let mirror: Vec<usize> = grid
            .values
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if disp.discriminant(k) < 0.0 {
                    grid.index_of(PI - k).expect("grid closed under k -> pi - k for even n")
                } else {
                    j
                }
            })
            .collect();
        let start = entries.len();
        for pattern in grid.even_patterns() {
            let value: Complex64 = pattern.occupied_indices().map(|j| lam[j]).product();
            entries.push(AnalyticEigenvalue { value, sector: p, pattern });
        }
        for entry in &entries[start..] {
            let mask = entry.pattern.occupied_indices().fold(0u64, |m, j| m | (1 << mirror[j]));
            let partner: Complex64 = (0..spec.n).filter(|j| (mask >> j) & 1 == 1).map(|j| lam[j]).product();
            if (partner - entry.value.conj()).norm() > 1e-12 * entry.value.norm().max(1.0) {
                return Err(Error::Numerical(format!(
                    "pattern {} has no conjugate partner",
                    entry.pattern.bitstring()
                )));
            }
        }
    }
    Ok(AnalyticSpectrum { spec: *spec, e_u, entries })
}

pub fn enumerate_spectrum(spec: &CircuitSpec, e_u: f64) -> Result<AnalyticSpectrum> {
    match spec.architecture {
        Architecture::Local => enumerate_local_spectrum(spec, e_u),
        Architecture::BrickWall => enumerate_brickwall_spectrum(spec, e_u),
    }
}

/// `(2 e / (n e_H)) (1 - (2d/(d^2+1)) cos(pi/n))`.
pub fn local_gap(n: usize, d: usize, e_u: f64) -> Result<f64> {
    let haar = haar_reference(d)?;
    let df = d as f64;
    let nf = n as f64;
    Ok(2.0 * e_u / (nf * haar.e_haar) * (1.0 - 2.0 * df / (df * df + 1.0) * (PI / nf).cos()))
}

/// `1 - max(|lambda_{pi/n}|^2, |lambda_0| |lambda_{2 pi/n}|)`.
pub fn brickwall_gap(n: usize, d: usize, e_u: f64) -> Result<f64> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Unsupported(format!("brick-wall gap needs even n >= 4, got {n}")));
    }
    let disp = FermionDispersion::new(d, e_u)?;
    let nf = n as f64;
    let pair = disp.mode_eigenvalue(PI / nf).norm_sqr();
    let mixed = disp.mode_eigenvalue(0.0).norm() * disp.mode_eigenvalue(2.0 * PI / nf).norm();
    Ok(1.0 - pair.max(mixed))
}
