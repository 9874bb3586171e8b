use nalgebra::{DMatrix, Matrix2, Matrix4};

use super::{Architecture, Basis, CircuitSpec, MomentMatrix};
use crate::{Error, Result};

/// Per-site change from the `{I, S}` label representation to the orthonormal
/// pair `|+> ~ |I> + |S>`, `|-> ~ |I> - |S>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisChange {
    pub d: usize,
    /// Rows `+, -`; columns `I, S`.
    pub forward: Matrix2<f64>,
    pub inverse: Matrix2<f64>,
}

impl BasisChange {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("local dimension d = {d} must be >= 2")));
        }
        let df = d as f64;
        let plus = 1.0 / (2.0 * df * (df + 1.0)).sqrt();
        let minus = 1.0 / (2.0 * df * (df - 1.0)).sqrt();
        let forward = Matrix2::new(plus, plus, minus, -minus);
        // overlaps <sigma|m>, the exact inverse
        let sp = (df * (df + 1.0) / 2.0).sqrt();
        let sm = (df * (df - 1.0) / 2.0).sqrt();
        let inverse = Matrix2::new(sp, sm, sp, -sm);
        Ok(Self { d, forward, inverse })
    }
}

fn apply_site_left(m: &mut DMatrix<f64>, bit: usize, a: &Matrix2<f64>) {
    let mask = 1usize << bit;
    for col in 0..m.ncols() {
        let mut column = m.column_mut(col);
        for r0 in 0..column.len() {
            if r0 & mask != 0 {
                continue;
            }
            let r1 = r0 | mask;
            let (x0, x1) = (column[r0], column[r1]);
            column[r0] = a[(0, 0)] * x0 + a[(0, 1)] * x1;
            column[r1] = a[(1, 0)] * x0 + a[(1, 1)] * x1;
        }
    }
}

fn apply_site_right(m: &mut DMatrix<f64>, bit: usize, a: &Matrix2<f64>) {
    let mask = 1usize << bit;
    let ncols = m.ncols();
    for c0 in 0..ncols {
        if c0 & mask != 0 {
            continue;
        }
        let c1 = c0 | mask;
        for r in 0..m.nrows() {
            let (x0, x1) = (m[(r, c0)], m[(r, c1)]);
            m[(r, c0)] = x0 * a[(0, 0)] + x1 * a[(1, 0)];
            m[(r, c1)] = x0 * a[(0, 1)] + x1 * a[(1, 1)];
        }
    }
}

/// `W^{(x)n} M (W^{-1})^{(x)n}`.
pub fn to_orthonormal_basis(moment: &MomentMatrix) -> Result<MomentMatrix> {
    if moment.basis == Basis::Orthonormal {
        return Ok(moment.clone());
    }
    let change = BasisChange::new(moment.spec.d)?;
    let mut m = moment.entries.clone();
    for bit in 0..moment.spec.n {
        apply_site_left(&mut m, bit, &change.forward);
        apply_site_right(&mut m, bit, &change.inverse);
    }
    if moment.spec.architecture == Architecture::Local {
        // symmetric up to rounding; remove the rounding asymmetry
        let asym = MomentMatrix { entries: m.clone(), ..moment.clone() }.asymmetry();
        if asym > 1e-10 {
            return Err(Error::Numerical(format!(
                "orthonormal local moment matrix is not symmetric (asymmetry {asym:.3e})"
            )));
        }
        m = (&m + m.transpose()) * 0.5;
    }
    Ok(MomentMatrix { spec: moment.spec, basis: Basis::Orthonormal, weights: moment.weights, entries: m })
}

/// Entanglement-power piece of the two-site local Hamiltonian in the `{+,-}` basis.
pub fn entangling_generator(d: usize) -> Matrix4<f64> {
    let df = d as f64;
    Matrix4::new(
        (df - 1.0) / (2.0 * (df + 1.0)),
        0.0,
        0.0,
        -0.5,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -0.5,
        0.0,
        0.0,
        (df + 1.0) / (2.0 * (df - 1.0)),
    )
}

/// Typicality piece of the two-site local Hamiltonian in the `{+,-}` basis.
pub fn typicality_generator() -> Matrix4<f64> {
    Matrix4::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
}

/// `H = sum_i (e entangling_generator + g typicality_generator)_{i,i+1}`, so that `M = I - H / n` in the `{+,-}` basis.
pub fn local_generator_plus_minus(spec: &CircuitSpec, e: f64, g: f64) -> Result<DMatrix<f64>> {
    if spec.architecture != Architecture::Local {
        return Err(Error::InvalidInput("the local Hamiltonian needs a local circuit spec".into()));
    }
    spec.require_dense(super::DEFAULT_SITE_CAP)?;
    let block = entangling_generator(spec.d) * e + typicality_generator() * g;
    let n = spec.n;
    let dim = spec.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for site in 0..n {
        let (bi, bj) = (spec.bit(site), spec.bit((site + 1) % n));
        let mask = !((1usize << bi) | (1usize << bj));
        for x in 0..dim {
            let col = (((x >> bi) & 1) << 1) | ((x >> bj) & 1);
            let base = x & mask;
            for row in 0..4 {
                let w = block[(row, col)];
                if w != 0.0 {
                    let y = base | ((row >> 1) << bi) | ((row & 1) << bj);
                    h[(y, x)] += w;
                }
            }
        }
    }
    Ok(h)
}
