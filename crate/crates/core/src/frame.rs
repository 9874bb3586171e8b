//! Frame potentials from moment-operator powers, and the single-domain-wall
//! sector of the open-boundary layered model.
//!
//! The domain-wall model alternates 2-design layers with structured layers
//! on an open chain and is a different architecture from the periodic
//! brick-wall operator of [`crate::moment`]; its gaps are never compared.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::format::{round_sig, sci12};
use crate::moment::{Architecture, Basis, GateWeights, MomentMatrix};
use crate::{Error, Result};

pub const FRAME_SITE_CAP: usize = 10;
pub const FRAME_T_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePoint {
    pub t: usize,
    #[serde(rename = "F")]
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramePotentialCurve {
    pub architecture: Architecture,
    pub n: usize,
    pub d: usize,
    pub e_u: f64,
    pub g_u: f64,
    pub curve: Vec<FramePoint>,
}

impl FramePotentialCurve {
    pub fn values(&self) -> Vec<f64> {
        self.curve.iter().map(|p| p.f).collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "d": self.d,
            "architecture": self.architecture,
            "e_u": round_sig(self.e_u),
            "g_u": round_sig(self.g_u),
            "curve": self.curve.iter().map(|p| serde_json::json!({"t": p.t, "F": round_sig(p.f)})).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,F\n");
        for p in &self.curve {
            out.push_str(&format!("{},{}\n", p.t, sci12(p.f)));
        }
        out
    }
}

/// `F(t) = tr(M^t (M^T)^t) = |M^t|_F^2` for `t = 0..=t_max`.
pub fn frame_potential_via_moment(moment: &MomentMatrix, t_max: usize) -> Result<FramePotentialCurve> {
    if moment.basis != Basis::Orthonormal {
        return Err(Error::InvalidInput(
            "frame potentials need the orthonormal basis; the trace is not invariant under the label basis".into(),
        ));
    }
    if moment.spec.n > FRAME_SITE_CAP || t_max > FRAME_T_CAP {
        return Err(Error::Unsupported(format!(
            "frame potentials are limited to n <= {FRAME_SITE_CAP} and t <= {FRAME_T_CAP}"
        )));
    }
    let m = &moment.entries;
    let mut power = DMatrix::identity(m.nrows(), m.ncols());
    let mut curve = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            power = &power * m;
        }
        curve.push(FramePoint { t, f: power.norm_squared() });
    }
    Ok(FramePotentialCurve {
        architecture: moment.spec.architecture,
        n: moment.spec.n,
        d: moment.spec.d,
        e_u: moment.weights.e,
        g_u: moment.weights.g,
        curve,
    })
}

/// `sum_i lambda_i^{2t}`, valid for symmetric moment matrices.
pub fn frame_potential_via_spectrum(eigenvalues: &[f64], t_max: usize) -> Vec<f64> {
    (0..=t_max).map(|t| eigenvalues.iter().map(|l| l.powi(2 * t as i32)).sum()).collect()
}

/// Tight-binding chain of single domain-wall positions `1..n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainWallModel {
    pub n: usize,
    pub d: usize,
    pub weights: GateWeights,
    /// Weight of a domain-wall move through a 2-design layer, `d/(d^2+1)`.
    pub a_haar: f64,
    pub diag: f64,
    pub off: f64,
}

impl DomainWallModel {
    pub fn is_solvable(&self) -> bool {
        self.weights.is_solvable(1e-12)
    }

    pub fn size(&self) -> usize {
        self.n - 1
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let m = self.size();
        DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                self.diag
            } else if i.abs_diff(j) == 1 {
                self.off
            } else {
                0.0
            }
        })
    }
}

/// Entries on the solvable line written directly in `e`:
/// `diag = 1 - (d^4+1) e/(d^4-1)`, `off = d^2 e/(d^4-1)`.
pub fn solvable_domain_wall_entries(d: usize, e_u: f64) -> (f64, f64) {
    let d2 = (d * d) as f64;
    let d4 = d2 * d2;
    (1.0 - (d4 + 1.0) * e_u / (d4 - 1.0), d2 * e_u / (d4 - 1.0))
}

pub fn domain_wall_model(n: usize, d: usize, weights: &GateWeights) -> Result<DomainWallModel> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("domain-wall chains need n >= 2, got {n}")));
    }
    if weights.d != d {
        return Err(Error::InvalidInput("weights were computed for another d".into()));
    }
    let df = d as f64;
    let a_haar = df / (df * df + 1.0);
    let diag = weights.wall_stay_weight() + 2.0 * a_haar * weights.a + a_haar * a_haar * weights.c;
    let off = a_haar * weights.a + a_haar * a_haar * weights.c;
    let model = DomainWallModel { n, d, weights: *weights, a_haar, diag, off };
    if model.is_solvable() {
        let (sd, so) = solvable_domain_wall_entries(d, weights.e);
        if (sd - diag).abs() > 1e-12 || (so - off).abs() > 1e-12 {
            return Err(Error::Numerical(format!(
                "domain-wall entries ({diag}, {off}) disagree with the solvable reduction ({sd}, {so})"
            )));
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainWallSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors over positions `1..n-1`, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `false` when the numeric tridiagonal solver was used instead of the closed form.
    pub closed_form: bool,
    /// Largest `|T v - lambda v| / |v|`.
    pub max_residual: f64,
}

/// `mode_eigenvalue = diag + 2 off cos(k pi / n)` with eigenvectors `sin(k i pi / n)`.
pub fn domain_wall_spectrum(model: &DomainWallModel) -> Result<DomainWallSpectrum> {
    let t = model.matrix();
    let size = model.size();
    let (eigenvalues, eigenvectors, closed_form) = if model.is_solvable() {
        let nf = model.n as f64;
        let mut values = Vec::with_capacity(size);
        let mut vectors = Vec::with_capacity(size);
        for k in 1..model.n {
            let theta = k as f64 * std::f64::consts::PI / nf;
            values.push(model.diag + 2.0 * model.off * theta.cos());
            vectors.push((1..model.n).map(|i| (i as f64 * theta).sin()).collect::<Vec<f64>>());
        }
        (values, vectors, true)
    } else {
        let eig = SymmetricEigen::new(t.clone());
        let vectors = (0..size).map(|j| eig.eigenvectors.column(j).iter().copied().collect()).collect();
        (eig.eigenvalues.iter().copied().collect(), vectors, false)
    };
    let mut max_residual = 0.0f64;
    for (lambda, v) in eigenvalues.iter().zip(&eigenvectors) {
        let v = nalgebra::DVector::from_column_slice(v);
        let r = (&t * &v - &v * *lambda).norm() / v.norm();
        max_residual = max_residual.max(r);
    }
    if closed_form && max_residual > 1e-10 {
        return Err(Error::Numerical(format!("closed-form domain-wall eigenpairs have residual {max_residual:.3e}")));
    }
    Ok(DomainWallSpectrum { eigenvalues, eigenvectors, closed_form, max_residual })
}

/// `f_1(t) = sum_k mode_eigenvalue^{2t}` on the solvable line.
pub fn f1(model: &DomainWallModel, t: usize) -> Result<f64> {
    if !model.is_solvable() {
        return Err(Error::InvalidInput("f1 is defined for solvable domain-wall models".into()));
    }
    let spectrum = domain_wall_spectrum(model)?;
    Ok(spectrum.eigenvalues.iter().map(|l| l.powi(2 * t as i32)).sum())
}

/// `tr(T^power)` by repeated multiplication.
pub fn tridiagonal_trace_power(model: &DomainWallModel, power: usize) -> f64 {
    let t = model.matrix();
    let mut acc = DMatrix::identity(t.nrows(), t.ncols());
    for _ in 0..power {
        acc = &acc * &t;
    }
    acc.trace()
}
