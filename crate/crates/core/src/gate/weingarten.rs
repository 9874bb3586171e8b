use nalgebra::{DVector, Matrix4};
use num_complex::Complex64;

use super::{EntanglementProfile, TwoQuditGate};
use crate::moment::GateWeights;
use crate::{Error, Result};

/// Permutation label of one qudit's two replicas: identity `I` or swap `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perm {
    I,
    S,
}

impl Perm {
    pub const ALL: [Perm; 2] = [Perm::I, Perm::S];

    pub fn bit(self) -> usize {
        match self {
            Perm::I => 0,
            Perm::S => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Perm::I
        } else {
            Perm::S
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Perm::I => Perm::S,
            Perm::S => Perm::I,
        }
    }
}

/// The pair `|I>, |S>` on four replicas of one qudit and its dual pair.
#[derive(Debug, Clone, Copy)]
pub struct PauliSectorBasis {
    pub d: usize,
}

impl PauliSectorBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("local dimension d = {d} must be >= 2")));
        }
        Ok(Self { d })
    }

    /// Vectorised permutation on replicas `(1, 2, 1bar, 2bar)`, length `d^4`.
    /// `|I> = sum |i j i j>`, `|S> = sum |j i i j>`.
    pub fn vector(&self, sigma: Perm) -> DVector<f64> {
        let d = self.d;
        let mut v = DVector::zeros(d.pow(4));
        for i in 0..d {
            for j in 0..d {
                let (a, b) = match sigma {
                    Perm::I => (i, j),
                    Perm::S => (j, i),
                };
                v[((a * d + b) * d + i) * d + j] += 1.0;
            }
        }
        v
    }

    /// Closed-form Gram entry: `d^2` on the diagonal, `d` off it.
    pub fn overlap(&self, a: Perm, b: Perm) -> f64 {
        let d = self.d as f64;
        if a == b {
            d * d
        } else {
            d
        }
    }

    /// Coefficient of `|tau>` in the dual vector `|sigma~>`.
    pub fn dual_coefficient(&self, sigma: Perm, tau: Perm) -> f64 {
        let d = self.d as f64;
        let norm = d * d - 1.0;
        if sigma == tau {
            1.0 / norm
        } else {
            -1.0 / (d * norm)
        }
    }

    pub fn dual_vector(&self, sigma: Perm) -> DVector<f64> {
        Perm::ALL
            .iter()
            .fold(DVector::zeros(self.d.pow(4)), |acc, &tau| acc + self.vector(tau) * self.dual_coefficient(sigma, tau))
    }
}

/// Image of the two-copy index `((a1, b1), (a2, b2))` under independent
/// replica permutations on the first and second qudit.
fn permute_index(d: usize, x1: usize, x2: usize, on_first: Perm, on_second: Perm) -> (usize, usize) {
    let (a1, b1) = (x1 / d, x1 % d);
    let (a2, b2) = (x2 / d, x2 % d);
    let (a1, a2) = match on_first {
        Perm::I => (a1, a2),
        Perm::S => (a2, a1),
    };
    let (b1, b2) = match on_second {
        Perm::I => (b1, b2),
        Perm::S => (b2, b1),
    };
    (a1 * d + b1, a2 * d + b2)
}

/// `<sigma3 sigma4| u^{(x)2,2} |tau1 tau2>`, written as
/// `tr[(sigma3 (x) sigma4) (u (x) u) (tau1 (x) tau2) (u (x) u)^dagger]`
/// on two copies of the two-qudit space.
pub fn two_copy_overlap(u: &TwoQuditGate, out: (Perm, Perm), inp: (Perm, Perm)) -> Complex64 {
    let d = u.d();
    let m = u.matrix();
    let dim = d * d;
    let mut acc = Complex64::new(0.0, 0.0);
    for x1 in 0..dim {
        for x2 in 0..dim {
            let (p1, p2) = permute_index(d, x1, x2, out.0, out.1);
            for y1 in 0..dim {
                let left1 = m[(p1, y1)];
                if left1 == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for y2 in 0..dim {
                    let (q1, q2) = permute_index(d, y1, y2, inp.0, inp.1);
                    acc += left1 * m[(p2, y2)] * (m[(x1, q1)] * m[(x2, q2)]).conj();
                }
            }
        }
    }
    acc
}

/// Weingarten element `W(s1 s2 s3 s4) = <s3 s4| u^{(x)2,2} |s1~ s2~>`.
pub fn weingarten_element(u: &TwoQuditGate, s1: Perm, s2: Perm, s3: Perm, s4: Perm) -> Result<f64> {
    let basis = PauliSectorBasis::new(u.d())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for &t1 in &Perm::ALL {
        for &t2 in &Perm::ALL {
            let coeff = basis.dual_coefficient(s1, t1) * basis.dual_coefficient(s2, t2);
            acc += two_copy_overlap(u, (s3, s4), (t1, t2)) * coeff;
        }
    }
    if acc.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!("Weingarten element has imaginary part {:.3e}", acc.im)));
    }
    Ok(acc.re)
}

/// Transfer block with rows indexed by the output pair `(s3, s4)` and columns
/// by the input pair `(s1, s2)`, each encoded as `2 * bit(first) + bit(second)`.
pub fn weingarten_block(u: &TwoQuditGate) -> Result<Matrix4<f64>> {
    let mut block = Matrix4::zeros();
    for row in 0..4 {
        for col in 0..4 {
            let (s3, s4) = (Perm::from_bit(row >> 1), Perm::from_bit(row));
            let (s1, s2) = (Perm::from_bit(col >> 1), Perm::from_bit(col));
            block[(row, col)] = weingarten_element(u, s1, s2, s3, s4)?;
        }
    }
    Ok(block)
}

/// The same block from `(e, g)` alone.
pub fn weingarten_matrix_from_profile(profile: &EntanglementProfile) -> Result<Matrix4<f64>> {
    Ok(GateWeights::from_profile(profile.e, profile.g, profile.d)?.block())
}
