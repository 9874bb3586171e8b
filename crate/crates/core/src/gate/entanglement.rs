use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CanonicalParams, TwoQuditGate};
use crate::{Error, Result};

/// Entangling power and gate typicality of a two-qudit gate, together with the
/// operator entanglement of `u` and of `u * SWAP` they were computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementProfile {
    pub e: f64,
    pub g: f64,
    pub e_op: f64,
    pub e_op_swap: f64,
    pub d: usize,
}

impl EntanglementProfile {
    /// Builds a profile from `(e, g)` alone (operator entanglements recomputed).
    pub fn from_eg(e: f64, g: f64, d: usize) -> Self {
        let es = swap_entanglement(d);
        // e = (E + E' - Es)/Es, g = (E - E' + Es)/(2 Es)
        let sum = es * (e + 1.0);
        let diff = es * (2.0 * g - 1.0);
        Self { e, g, e_op: 0.5 * (sum + diff), e_op_swap: 0.5 * (sum - diff), d }
    }

    pub fn feasibility(&self) -> Feasibility {
        Feasibility::classify(self.d, self.e, self.g, 1e-10)
    }
}

/// Haar averages of the entangling power and typicality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaarReference {
    pub d: usize,
    pub e_haar: f64,
    pub g_haar: f64,
}

/// `g - e / (2 e_H)`, zero exactly on the free-fermion line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvableResidual {
    pub value: f64,
    /// Set for `e = g = 0` (products of single-qudit gates), where the residual vanishes trivially.
    pub degenerate: bool,
}

/// Whether an `(e, g)` pair lies in the region reachable by two-qudit unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    /// `d >= 3`: only `e <= 1` is checked.
    Unverified,
}

impl Feasibility {
    pub fn classify(d: usize, e: f64, g: f64, tol: f64) -> Self {
        if d == 2 {
            let ok = 2.0 * g * (1.0 - g) <= e + tol
                && e <= 2.0 * g + tol
                && e <= 2.0 - 2.0 * g + tol
                && e <= 2.0 / 3.0 + tol
                && e >= -tol;
            if ok {
                Feasibility::Feasible
            } else {
                Feasibility::Infeasible
            }
        } else if e <= 1.0 + tol && e >= -tol {
            Feasibility::Unverified
        } else {
            Feasibility::Infeasible
        }
    }

    pub fn is_admissible(self) -> bool {
        self != Feasibility::Infeasible
    }
}

/// Operator entanglement of SWAP, `(d^2 - 1)/d^2`.
pub fn swap_entanglement(d: usize) -> f64 {
    let d2 = (d * d) as f64;
    (d2 - 1.0) / d2
}

/// Realigned matrix `<i j| r |k l> = <i k| u |j l>`.
fn realign(u: &DMatrix<Complex64>, d: usize) -> DMatrix<Complex64> {
    let mut r = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    r[(i * d + j, k * d + l)] = u[(i * d + k, j * d + l)];
                }
            }
        }
    }
    r
}

/// `E(u) = 1 - tr[(r r^dagger)^2] / d^4` with `r` the realigned gate.
pub fn operator_entanglement(u: &TwoQuditGate) -> f64 {
    let d = u.d();
    let r = realign(u.matrix(), d);
    let rr = &r * r.adjoint();
    let purity = (&rr * &rr).trace().re / (d as f64).powi(4);
    1.0 - purity
}

pub fn entanglement_profile(u: &TwoQuditGate) -> EntanglementProfile {
    let d = u.d();
    let e_op = operator_entanglement(u);
    let e_op_swap = operator_entanglement(&u.times_swap());
    profile_from_operator_entanglements(e_op, e_op_swap, d)
}

fn profile_from_operator_entanglements(e_op: f64, e_op_swap: f64, d: usize) -> EntanglementProfile {
    let es = swap_entanglement(d);
    EntanglementProfile { e: (e_op + e_op_swap - es) / es, g: (e_op - e_op_swap + es) / (2.0 * es), e_op, e_op_swap, d }
}

/// Closed-form qubit profile in terms of the canonical parameters.
pub fn qubit_profile_closed_form(params: CanonicalParams) -> EntanglementProfile {
    let angles = [params.alpha, params.beta, params.gamma];
    let cos2 = angles.map(|t| (2.0 * t).cos().powi(2));
    let sin2 = angles.map(|t| (2.0 * t).sin().powi(2));
    let pair_sum = |v: [f64; 3]| v[0] * v[1] + v[1] * v[2] + v[2] * v[0];
    let overlap_direct = 4.0 * (1.0 + pair_sum(cos2));
    let overlap_swapped = 4.0 * (1.0 + pair_sum(sin2));
    profile_from_operator_entanglements(1.0 - overlap_direct / 16.0, 1.0 - overlap_swapped / 16.0, 2)
}

pub fn haar_reference(d: usize) -> Result<HaarReference> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension d = {d} must be >= 2")));
    }
    let d2 = (d * d) as f64;
    Ok(HaarReference { d, e_haar: (d2 - 1.0) / (d2 + 1.0), g_haar: 0.5 })
}

pub fn solvable_residual(profile: &EntanglementProfile) -> Result<SolvableResidual> {
    let haar = haar_reference(profile.d)?;
    let degenerate = profile.e.abs() < 1e-12 && profile.g.abs() < 1e-12;
    Ok(SolvableResidual { value: profile.g - profile.e / (2.0 * haar.e_haar), degenerate })
}

/// Qubit solvability condition as a sum over cyclic pairs of canonical angles,
/// `sum f(x1, x2)` with `f(x1, x2) = sin^2(2 x1) (cos^2(2 x2) - 3/5)`.
pub fn qubit_solvable_residual(params: CanonicalParams) -> f64 {
    let f = |x1: f64, x2: f64| (2.0 * x1).sin().powi(2) * ((2.0 * x2).cos().powi(2) - 0.6);
    let (a, b, c) = (params.alpha, params.beta, params.gamma);
    f(a, b) + f(b, c) + f(c, a)
}
