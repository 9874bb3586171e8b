use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use super::{build_local_moment, to_orthonormal_basis, Architecture, BasisChange, CircuitSpec, GateWeights};
use crate::{Error, Result};

/// The eigenvalue-one subspace spanned by `|I>^n` and `|S>^n`, in the `{+,-}` basis.
#[derive(Debug, Clone)]
pub struct V1Subspace {
    pub raw: [DVector<f64>; 2],
    /// Gram matrix of the raw vectors: `d^{2n}` on the diagonal, `d^n` off it.
    pub gram: Matrix2<f64>,
    /// Orthonormal basis obtained by Gram-Schmidt.
    pub orthonormal: [DVector<f64>; 2],
}

impl V1Subspace {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let change = BasisChange::new(d)?;
        let dim = 1usize << n;
        let product =
            |amp: [f64; 2]| DVector::from_fn(dim, |x, _| (0..n).map(|bit| amp[(x >> bit) & 1]).product::<f64>());
        let raw = [product(site_amplitudes(&change, 0)), product(site_amplitudes(&change, 1))];
        let gram = Matrix2::new(raw[0].dot(&raw[0]), raw[0].dot(&raw[1]), raw[1].dot(&raw[0]), raw[1].dot(&raw[1]));
        let u0 = raw[0].normalize();
        let w = &raw[1] - &u0 * u0.dot(&raw[1]);
        let u1 = w.normalize();
        Ok(Self { raw, gram, orthonormal: [u0, u1] })
    }

    /// `P_perp = I - u0 u0^T - u1 u1^T`.
    pub fn complement_projector(&self) -> DMatrix<f64> {
        let dim = self.raw[0].len();
        let [u0, u1] = &self.orthonormal;
        DMatrix::identity(dim, dim) - u0 * u0.transpose() - u1 * u1.transpose()
    }

    /// `Q^T A Q` with `Q` orthogonal, its first two columns spanning `V1`;
    /// returns the trailing `(dim-2) x (dim-2)` block.
    pub fn restrict(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let dim = a.nrows();
        let mut m = a.clone();
        let mut e0 = DVector::zeros(dim);
        e0[0] = 1.0;
        let mut e1 = DVector::zeros(dim);
        e1[1] = 1.0;
        let h1 = householder_to(&e0, &self.orthonormal[0]);
        let second = match &h1 {
            Some(w) => reflect_vector(w, &self.orthonormal[1]),
            None => self.orthonormal[1].clone(),
        };
        let h2 = householder_to(&e1, &second);
        for w in [&h1, &h2].into_iter().flatten() {
            reflect_both_sides(&mut m, w);
        }
        m.view((2, 2), (dim - 2, dim - 2)).into_owned()
    }
}

/// One-site amplitudes of `<I|` (`label = 0`) or `<S|` (`label = 1`) in the `{+,-}` basis.
fn site_amplitudes(change: &BasisChange, label: usize) -> [f64; 2] {
    [change.inverse[(label, 0)], change.inverse[(label, 1)]]
}

/// Unit vector `w` with `(I - 2 w w^T) e = target`, or `None` if `e == target`.
fn householder_to(e: &DVector<f64>, target: &DVector<f64>) -> Option<DVector<f64>> {
    let diff = e - target;
    let norm = diff.norm();
    if norm < 1e-14 {
        None
    } else {
        Some(diff / norm)
    }
}

fn reflect_vector(w: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    v - w * (2.0 * w.dot(v))
}

/// `m <- H m H` with `H = I - 2 w w^T`.
fn reflect_both_sides(m: &mut DMatrix<f64>, w: &DVector<f64>) {
    let mw = &*m * w;
    let wm = w.transpose() * &*m;
    let wmw = w.dot(&mw);
    *m -= &mw * w.transpose() * 2.0;
    *m -= w * &wm * 2.0;
    *m += w * w.transpose() * (4.0 * wmw);
}

/// Smallest eigenvalue of `M_H - M_u` restricted to the complement of `V1`,
/// for the local architecture in the `{+,-}` basis.
pub fn positivity_gap(spec: &CircuitSpec, weights: &GateWeights) -> Result<f64> {
    if spec.architecture != Architecture::Local {
        return Err(Error::Unsupported("the positivity comparison is defined for local circuits".into()));
    }
    let haar = GateWeights::haar(spec.d)?;
    let m_haar = to_orthonormal_basis(&build_local_moment(spec, &haar)?)?;
    let m_gate = to_orthonormal_basis(&build_local_moment(spec, weights)?)?;
    let diff = &m_haar.entries - &m_gate.entries;
    let v1 = V1Subspace::new(spec.n, spec.d)?;
    let restricted = v1.restrict(&diff);
    let sym = (&restricted + restricted.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}
