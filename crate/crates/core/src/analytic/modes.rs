use nalgebra::DMatrix;
use num_complex::Complex64;

use super::momentum_grid;
use crate::{Error, Result};

/// Largest `n` for which mode operators are materialised as dense matrices.
pub const DENSE_MODE_CAP: usize = 8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Linear combination `sum_s (creation[s] c_s^dag + annihilation[s] c_s)` of
/// Jordan-Wigner fermions on the label space, with
/// `c_s^dag = X^{(x)s} (x) (1/2)[[1, 1], [-1, -1]] (x) I` and site 0 the
/// most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub creation: Vec<Complex64>,
    pub annihilation: Vec<Complex64>,
}

impl ModeOperator {
    pub fn zero(n: usize) -> Self {
        Self { creation: vec![ZERO; n], annihilation: vec![ZERO; n] }
    }

    pub fn n(&self) -> usize {
        self.creation.len()
    }

    pub fn c_dag(s: usize, n: usize) -> Self {
        let mut op = Self::zero(n);
        op.creation[s] = Complex64::new(1.0, 0.0);
        op
    }

    pub fn c(s: usize, n: usize) -> Self {
        Self::c_dag(s, n).adjoint()
    }

    /// `n^{-1/2} sum_s e^{-iks} c_s^dag`.
    pub fn fourier_dag(k: f64, n: usize) -> Self {
        let norm = 1.0 / (n as f64).sqrt();
        Self {
            creation: (0..n).map(|s| Complex64::from_polar(norm, -k * s as f64)).collect(),
            annihilation: vec![ZERO; n],
        }
    }

    pub fn fourier(k: f64, n: usize) -> Self {
        Self::fourier_dag(k, n).adjoint()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            creation: self.annihilation.iter().map(|z| z.conj()).collect(),
            annihilation: self.creation.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scaled(&self, w: Complex64) -> Self {
        Self {
            creation: self.creation.iter().map(|z| z * w).collect(),
            annihilation: self.annihilation.iter().map(|z| z * w).collect(),
        }
    }

    /// `sum_i w_i op_i`.
    pub fn combination(terms: &[(Complex64, &ModeOperator)]) -> Self {
        let n = terms.first().map_or(0, |(_, op)| op.n());
        let mut out = Self::zero(n);
        for (w, op) in terms {
            for s in 0..n {
                out.creation[s] += w * op.creation[s];
                out.annihilation[s] += w * op.annihilation[s];
            }
        }
        out
    }

    /// Scalar `{self, other}` from the canonical relations of the `c_s`.
    pub fn anticommutator(&self, other: &Self) -> Complex64 {
        (0..self.n()).map(|s| self.creation[s] * other.annihilation[s] + self.annihilation[s] * other.creation[s]).sum()
    }

    /// Row vector times operator, `row * self`, in `O(n 2^n)`.
    pub fn apply_left(&self, row: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        let dim = 1usize << n;
        assert_eq!(row.len(), dim, "row length must be 2^n");
        let full = dim - 1;
        let mut out = vec![ZERO; dim];
        for s in 0..n {
            let (cre, ann) = (self.creation[s], self.annihilation[s]);
            if cre == ZERO && ann == ZERO {
                continue;
            }
            let bit = n - 1 - s;
            let string = full ^ ((1usize << (bit + 1)) - 1);
            let here = 1usize << bit;
            for (y, slot) in out.iter_mut().enumerate() {
                let x = y ^ string;
                let (r0, r1) = (row[x & !here], row[x | here]);
                let sign = if y & here == 0 { 0.5 } else { -0.5 };
                *slot += cre * (r0 - r1) * 0.5 + ann * (r0 + r1) * sign;
            }
        }
        out
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let n = self.n();
        if n > DENSE_MODE_CAP {
            return Err(Error::Unsupported(format!(
                "dense mode matrices are limited to n <= {DENSE_MODE_CAP}, got {n}"
            )));
        }
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        let mut basis = vec![ZERO; dim];
        for x in 0..dim {
            basis[x] = Complex64::new(1.0, 0.0);
            for (y, v) in self.apply_left(&basis).into_iter().enumerate() {
                m[(x, y)] = v;
            }
            basis[x] = ZERO;
        }
        Ok(m)
    }
}

/// Dense Jordan-Wigner and Fourier modes for one chain length.
#[derive(Debug, Clone)]
pub struct EigenmodeSet {
    pub n: usize,
    /// `c_s^dag`, `s = 0..n`.
    pub creation: Vec<DMatrix<Complex64>>,
    /// `(p, k, eta_k^dag)` over both sectors in grid order.
    pub fourier: Vec<(u8, f64, DMatrix<Complex64>)>,
}

pub fn fermion_modes(n: usize) -> Result<EigenmodeSet> {
    if n == 0 || n > DENSE_MODE_CAP {
        return Err(Error::Unsupported(format!(
            "dense mode matrices are limited to 1 <= n <= {DENSE_MODE_CAP}, got {n}"
        )));
    }
    let creation = (0..n).map(|s| ModeOperator::c_dag(s, n).to_dense()).collect::<Result<Vec<_>>>()?;
    let mut fourier = Vec::new();
    if n >= 2 {
        for p in [0u8, 1] {
            for &k in &momentum_grid(n, p)?.values {
                fourier.push((p, k, ModeOperator::fourier_dag(k, n).to_dense()?));
            }
        }
    }
    Ok(EigenmodeSet { n, creation, fourier })
}

fn anti(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let fa = faer::Mat::<Complex64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let fb = faer::Mat::<Complex64>::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)]);
    let sum = &fa * &fb + &fb * &fa;
    DMatrix::from_fn(sum.nrows(), sum.ncols(), |i, j| sum[(i, j)])
}

/// Max-norm distance of `m` from `target * I`.
fn deviation_from_scalar(m: &DMatrix<Complex64>, target: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let expected = if i == j { target } else { 0.0 };
            worst = worst.max((m[(i, j)] - expected).norm());
        }
    }
    worst
}

impl EigenmodeSet {
    /// Largest violation of `{c_i, c_j^dag} = delta_ij`, `{c_i, c_j} = 0`.
    pub fn jordan_wigner_deviation(&self) -> f64 {
        let ann: Vec<DMatrix<Complex64>> = self.creation.iter().map(|m| m.adjoint()).collect();
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(deviation_from_scalar(&anti(&ann[i], &self.creation[j]), delta));
                worst = worst.max(deviation_from_scalar(&anti(&ann[i], &ann[j]), 0.0));
            }
        }
        worst
    }

    /// Largest violation of `{eta_k, eta_l^dag} = delta_kl`, `{eta_k, eta_l} = 0`
    /// within each sector.
    pub fn fourier_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (pa, ka, a) in &self.fourier {
            let a_ann = a.adjoint();
            for (pb, kb, b) in &self.fourier {
                if pa != pb {
                    continue;
                }
                let delta = if (ka - kb).abs() < 1e-12 { 1.0 } else { 0.0 };
                worst = worst.max(deviation_from_scalar(&anti(&a_ann, b), delta));
                worst = worst.max(deviation_from_scalar(&anti(&a_ann, &b.adjoint()), 0.0));
            }
        }
        worst
    }

    /// Largest violation of `{dual_k, left_l} = delta_kl` and `{left_k, left_l} = 0`
    /// for dense realisations of the given mode pairs.
    pub fn pair_deviation(&self, pairs: &[super::ModePair]) -> Result<f64> {
        let left = pairs.iter().map(|p| p.left.to_dense()).collect::<Result<Vec<_>>>()?;
        let dual = pairs.iter().map(|p| p.dual.to_dense()).collect::<Result<Vec<_>>>()?;
        let mut worst = 0.0f64;
        for i in 0..pairs.len() {
            for j in 0..pairs.len() {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(deviation_from_scalar(&anti(&dual[i], &left[j]), delta));
                worst = worst.max(deviation_from_scalar(&anti(&left[i], &left[j]), 0.0));
            }
        }
        Ok(worst)
    }
}
