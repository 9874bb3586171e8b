use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{moment_spectrum, third_modulus};
use crate::analytic::{brickwall_gap, local_gap};
use crate::format::sci12;
use crate::gate::{haar_reference, Feasibility};
use crate::moment::{build_moment, Architecture, CircuitSpec, GateWeights};
use crate::{Error, Result};

pub const MAX_SCAN_RESOLUTION: usize = 512;
pub const MAX_SCAN_SITES: usize = 10;

/// Closed interval sampled at `resolution` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub min: f64,
    pub max: f64,
}

impl ScanRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::InvalidInput(format!("invalid scan range [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn points(&self, resolution: usize) -> Vec<f64> {
        match resolution {
            0 => Vec::new(),
            1 => vec![self.min],
            r => (0..r).map(|i| self.min + (self.max - self.min) * i as f64 / (r - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScanRecord {
    pub e_u: f64,
    pub g_u: f64,
    pub n: usize,
    pub d: usize,
    pub architecture: Architecture,
    pub lambda3_abs: Option<f64>,
    pub gap: Option<f64>,
    pub feasible: Feasibility,
}

/// `(|lambda_3|, 1 - |lambda_3|)` of the moment operator built from `(e, g)`.
pub fn gap_at(spec: &CircuitSpec, e: f64, g: f64) -> Result<(f64, f64)> {
    let weights = GateWeights::from_profile(e, g, spec.d)?;
    let spectrum = moment_spectrum(&build_moment(spec, &weights)?)?;
    let l3 = third_modulus(&spectrum)?;
    Ok((l3, 1.0 - l3))
}

/// Evaluates every grid point, `e` major and `g` minor. Infeasible points are
/// emitted without spectral data.
pub fn scan_grid(
    e_range: ScanRange,
    g_range: ScanRange,
    resolution: usize,
    spec: &CircuitSpec,
) -> Result<Vec<GapScanRecord>> {
    if resolution == 0 || resolution > MAX_SCAN_RESOLUTION {
        return Err(Error::Unsupported(format!(
            "scan resolution must be in 1..={MAX_SCAN_RESOLUTION}, got {resolution}"
        )));
    }
    if spec.n > MAX_SCAN_SITES {
        return Err(Error::Unsupported(format!("scans are limited to n <= {MAX_SCAN_SITES}")));
    }
    let es = e_range.points(resolution);
    let gs = g_range.points(resolution);
    let points: Vec<(f64, f64)> = es.iter().flat_map(|&e| gs.iter().map(move |&g| (e, g))).collect();
    points
        .par_iter()
        .map(|&(e, g)| {
            let feasible = Feasibility::classify(spec.d, e, g, 1e-10);
            let (lambda3_abs, gap) = if feasible.is_admissible() {
                let (l3, gap) = gap_at(spec, e, g)?;
                (Some(l3), Some(gap))
            } else {
                (None, None)
            };
            Ok(GapScanRecord {
                e_u: e,
                g_u: g,
                n: spec.n,
                d: spec.d,
                architecture: spec.architecture,
                lambda3_abs,
                gap,
                feasible,
            })
        })
        .collect()
}

fn feasible_label(f: Feasibility) -> &'static str {
    match f {
        Feasibility::Feasible => "true",
        Feasibility::Infeasible => "false",
        Feasibility::Unverified => "unverified",
    }
}

pub fn scan_records_to_csv(records: &[GapScanRecord]) -> String {
    let mut out = String::from("e_u,g_u,n,d,architecture,lambda3_abs,gap,feasible\n");
    for r in records {
        let opt = |x: Option<f64>| x.map(sci12).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sci12(r.e_u),
            sci12(r.g_u),
            r.n,
            r.d,
            r.architecture.name(),
            opt(r.lambda3_abs),
            opt(r.gap),
            feasible_label(r.feasible)
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvableLinePoint {
    pub e_u: f64,
    pub g_u: f64,
    pub gap_analytic: f64,
    pub gap_numeric: f64,
}

/// Closed-form and dense gaps along `g = e / (2 e_H)`.
pub fn solvable_line_scan(spec: &CircuitSpec, e_values: &[f64]) -> Result<Vec<SolvableLinePoint>> {
    let haar = haar_reference(spec.d)?;
    e_values
        .par_iter()
        .map(|&e| {
            let g = e / (2.0 * haar.e_haar);
            let (_, gap_numeric) = gap_at(spec, e, g)?;
            let gap_analytic = match spec.architecture {
                Architecture::Local => local_gap(spec.n, spec.d, e)?,
                Architecture::BrickWall => brickwall_gap(spec.n, spec.d, e)?,
            };
            Ok(SolvableLinePoint { e_u: e, g_u: g, gap_analytic, gap_numeric })
        })
        .collect()
}

pub fn solvable_line_to_csv(spec: &CircuitSpec, points: &[SolvableLinePoint]) -> String {
    let mut out = String::from("e_u,g_u,n,d,architecture,gap_analytic,gap_numeric\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            sci12(p.e_u),
            sci12(p.g_u),
            spec.n,
            spec.d,
            spec.architecture.name(),
            sci12(p.gap_analytic),
            sci12(p.gap_numeric)
        ));
    }
    out
}

/// Indices `i` where the finite-difference slope of `ys` over `xs` changes
/// sign between `[i-1, i]` and `[i, i+1]`.
pub fn slope_sign_changes(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let slopes: Vec<f64> = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();
    slopes.windows(2).enumerate().filter(|(_, s)| s[0] * s[1] < 0.0).map(|(i, _)| i + 1).collect()
}
