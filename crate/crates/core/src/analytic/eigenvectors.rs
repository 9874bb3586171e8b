use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{momentum_grid, FermionDispersion, ModeOperator, OccupationPattern};
use crate::moment::{Architecture, CircuitSpec};
use crate::{Error, Result};

pub const LOCAL_EIGENVECTOR_CAP: usize = 10;
pub const BRICKWALL_EIGENVECTOR_CAP: usize = 8;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A mode operator applied to the vacuum row (`left`) and its dual partner
/// with `{dual, left} = 1`.
#[derive(Debug, Clone)]
pub struct ModePair {
    pub k: f64,
    pub left: ModeOperator,
    pub dual: ModeOperator,
}

/// Which printed form of the four-mode Bogoliubov matrix is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingSign {
    /// Second row `+iz tan(k/2)`, `r_1` leading in the first column.
    Plus,
    /// Second row `-iz tan(k/2)`, `r_2` leading in the first column.
    Minus,
}

fn same_angle(a: f64, b: f64) -> bool {
    let diff = (a - b).rem_euclid(2.0 * PI);
    diff < 1e-9 || 2.0 * PI - diff < 1e-9
}

/// `<0^n| + <1^n|` for `p = 1` and `<0^n| - <1^n|` for `p = 0`.
pub fn vacuum_row(n: usize, p: u8) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut row = vec![re(0.0); dim];
    row[0] = re(1.0);
    row[dim - 1] = if p == 1 { re(1.0) } else { re(-1.0) };
    row
}

/// `|v M - lambda v| / |v|` for a row vector and a real matrix.
pub fn left_residual(row: &[Complex64], m: &DMatrix<f64>, lambda: Complex64) -> f64 {
    let dim = row.len();
    let mut worst = 0.0;
    for j in 0..dim {
        let mut acc = -lambda * row[j];
        for (i, r) in row.iter().enumerate() {
            let w = m[(i, j)];
            if w != 0.0 {
                acc += r * w;
            }
        }
        worst += acc.norm_sqr();
    }
    let norm: f64 = row.iter().map(|z| z.norm_sqr()).sum();
    (worst / norm.max(f64::MIN_POSITIVE)).sqrt()
}

fn local_bogoliubov(k: f64, z: f64) -> Matrix2<Complex64> {
    let (s, c) = k.sin_cos();
    Matrix2::new(re(-z * (1.0 - c)), re(1.0 + c), I * (z * s), I * (z * s))
}

fn inverse2(m: &Matrix2<Complex64>) -> Result<Matrix2<Complex64>> {
    m.try_inverse().ok_or_else(|| Error::Numerical("singular 2x2 mode transformation".into()))
}

/// Mode pairs of the local operator for sector `p`, in grid order.
pub fn local_mode_operators(n: usize, d: usize, p: u8) -> Result<Vec<ModePair>> {
    let grid = momentum_grid(n, p)?;
    let z = FermionDispersion::from_e_tilde(d, 1.0).z();
    let mut pairs = Vec::with_capacity(n);
    for &k in &grid.values {
        let pair = if same_angle(k, 0.0) {
            ModePair { k, left: ModeOperator::fourier_dag(0.0, n), dual: ModeOperator::fourier(0.0, n) }
        } else if same_angle(k, PI) {
            ModePair { k, left: ModeOperator::fourier(PI, n), dual: ModeOperator::fourier_dag(PI, n) }
        } else {
            let q = k.abs();
            let pm = local_bogoliubov(q, z);
            let pi = inverse2(&pm)?;
            let (fourier_q, fourier_q_dag) = (ModeOperator::fourier(q, n), ModeOperator::fourier_dag(q, n));
            let (fourier_m, fourier_m_dag) = (ModeOperator::fourier(-q, n), ModeOperator::fourier_dag(-q, n));
            if k > 0.0 {
                ModePair {
                    k,
                    left: ModeOperator::combination(&[(pi[(0, 0)], &fourier_q), (pi[(0, 1)], &fourier_m_dag)]),
                    dual: ModeOperator::combination(&[(pm[(0, 0)], &fourier_q_dag), (pm[(1, 0)], &fourier_m)]),
                }
            } else {
                ModePair {
                    k,
                    left: ModeOperator::combination(&[(pm[(0, 1)], &fourier_q_dag), (pm[(1, 1)], &fourier_m)]),
                    dual: ModeOperator::combination(&[(pi[(1, 0)], &fourier_q), (pi[(1, 1)], &fourier_m_dag)]),
                }
            }
        };
        pairs.push(pair);
    }
    Ok(pairs)
}

fn assemble(n: usize, pattern: &OccupationPattern, pairs: &[ModePair]) -> Result<Vec<Complex64>> {
    let mut row = vacuum_row(n, pattern.p);
    for j in pattern.occupied_indices() {
        row = pairs[j].left.apply_left(&row);
    }
    let norm: f64 = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::Numerical(format!(
            "pattern {} (sector {}) produced a vanishing vector",
            pattern.bitstring(),
            pattern.p
        )));
    }
    Ok(row)
}

/// Unnormalised left eigenvector `<vac| prod_k xi_{L,k}^{i_k}` in the
/// computational label representation.
pub fn local_left_eigenvector(spec: &CircuitSpec, pattern: &OccupationPattern) -> Result<Vec<Complex64>> {
    if spec.architecture != Architecture::Local {
        return Err(Error::InvalidInput("local eigenvectors need a local spec".into()));
    }
    if spec.n > LOCAL_EIGENVECTOR_CAP {
        return Err(Error::Unsupported(format!("local eigenvectors are limited to n <= {LOCAL_EIGENVECTOR_CAP}")));
    }
    if pattern.n != spec.n || !pattern.is_even() {
        return Err(Error::InvalidInput("pattern must be even and match n".into()));
    }
    let pairs = local_mode_operators(spec.n, spec.d, pattern.p)?;
    assemble(spec.n, pattern, &pairs)
}

fn quartet_matrix(disp: &FermionDispersion, k: f64, sign: PairingSign) -> Matrix4<Complex64> {
    let z = disp.z();
    let t = (k / 2.0).tan();
    let ct = 1.0 / t;
    let (r1, r2) = (disp.r(1, k), disp.r(2, k));
    match sign {
        PairingSign::Plus => Matrix4::new(
            re(1.0),
            re(1.0),
            re(1.0),
            re(1.0),
            I * (z * t),
            I * (z * t),
            -I * ct,
            -I * ct,
            -I * r1 * t,
            -I * r2 * t,
            -I * r2 * ct,
            -I * r1 * ct,
            -r1 * z,
            -r2 * z,
            r2,
            r1,
        ),
        PairingSign::Minus => Matrix4::new(
            re(1.0),
            re(1.0),
            re(1.0),
            re(1.0),
            -I * (z * t),
            -I * (z * t),
            -I * ct,
            -I * ct,
            -I * r2 * t,
            -I * r1 * t,
            -I * r1 * ct,
            -I * r2 * ct,
            r2 * z,
            r1 * z,
            r1,
            r2,
        ),
    }
}

fn column_combo(w: &[Complex64], ops: &[&ModeOperator]) -> ModeOperator {
    let terms: Vec<(Complex64, &ModeOperator)> = w.iter().copied().zip(ops.iter().copied()).collect();
    ModeOperator::combination(&terms)
}

/// Mode pairs of the brick-wall operator for sector `p`, in grid order.
pub fn brickwall_mode_operators(n: usize, disp: &FermionDispersion, p: u8, sign: PairingSign) -> Result<Vec<ModePair>> {
    let grid = momentum_grid(n, p)?;
    let z = disp.z();
    let fourier = |k: f64| ModeOperator::fourier(k, n);
    let fourier_dag = |k: f64| ModeOperator::fourier_dag(k, n);
    let mut pairs: Vec<Option<ModePair>> = vec![None; n];
    let mut put = |k: f64, pair: ModePair| -> Result<()> {
        let j = grid.index_of(k).ok_or_else(|| Error::Numerical(format!("momentum {k} missing from sector {p}")))?;
        pairs[j] = Some(pair);
        Ok(())
    };

    for &k in &grid.values {
        if same_angle(k, 0.0) {
            let w = Matrix2::new(-disp.r(2, 0.0), -disp.r(1, 0.0), re(1.0), re(1.0));
            let wi = inverse2(&w)?;
            let ev = [fourier_dag(0.0), fourier(PI)];
            let evd = [fourier(0.0), fourier_dag(PI)];
            let refs = [&ev[0], &ev[1]];
            let drefs = [&evd[0], &evd[1]];
            put(
                0.0,
                ModePair {
                    k: 0.0,
                    left: column_combo(&[w[(0, 0)], w[(1, 0)]], &refs),
                    dual: column_combo(&[wi[(0, 0)], wi[(0, 1)]], &drefs),
                },
            )?;
            put(
                PI,
                ModePair {
                    k: PI,
                    left: column_combo(&[w[(0, 1)], w[(1, 1)]], &refs),
                    dual: column_combo(&[wi[(1, 0)], wi[(1, 1)]], &drefs),
                },
            )?;
        } else if same_angle(k, PI / 2.0) {
            let w = Matrix2::new(-I / z, I, re(1.0), re(1.0));
            let wi = inverse2(&w)?;
            let ev = [fourier_dag(PI / 2.0), fourier(-PI / 2.0)];
            let evd = [fourier(PI / 2.0), fourier_dag(-PI / 2.0)];
            let refs = [&ev[0], &ev[1]];
            let drefs = [&evd[0], &evd[1]];
            put(
                PI / 2.0,
                ModePair {
                    k: PI / 2.0,
                    left: column_combo(&[w[(0, 0)], w[(1, 0)]], &refs),
                    dual: column_combo(&[wi[(0, 0)], wi[(0, 1)]], &drefs),
                },
            )?;
            put(
                -PI / 2.0,
                ModePair {
                    k: -PI / 2.0,
                    left: column_combo(&[wi[(1, 0)], wi[(1, 1)]], &drefs),
                    dual: column_combo(&[w[(0, 1)], w[(1, 1)]], &refs),
                },
            )?;
        } else if k > 0.0 && k < PI / 2.0 {
            let w = quartet_matrix(disp, k, sign);
            let wi =
                w.try_inverse().ok_or_else(|| Error::Numerical(format!("singular four-mode matrix at k = {k}")))?;
            let ev = [fourier_dag(k), fourier(-k), fourier_dag(k - PI), fourier(PI - k)];
            let evd = [fourier(k), fourier_dag(-k), fourier(k - PI), fourier_dag(PI - k)];
            let refs: Vec<&ModeOperator> = ev.iter().collect();
            let drefs: Vec<&ModeOperator> = evd.iter().collect();
            let col = |j: usize| column_combo(&[w[(0, j)], w[(1, j)], w[(2, j)], w[(3, j)]], &refs);
            let row = |j: usize| column_combo(&[wi[(j, 0)], wi[(j, 1)], wi[(j, 2)], wi[(j, 3)]], &drefs);
            put(k, ModePair { k, left: col(0), dual: row(0) })?;
            put(PI - k, ModePair { k: PI - k, left: col(1), dual: row(1) })?;
            put(k - PI, ModePair { k: k - PI, left: row(2), dual: col(2) })?;
            put(-k, ModePair { k: -k, left: row(3), dual: col(3) })?;
        }
    }
    pairs
        .into_iter()
        .enumerate()
        .map(|(j, p)| p.ok_or_else(|| Error::Numerical(format!("no mode assigned to grid index {j}"))))
        .collect()
}

/// Eigenvector together with the form of the four-mode matrix that produced it.
#[derive(Debug, Clone)]
pub struct BrickwallEigenvector {
    pub row: Vec<Complex64>,
    pub sign: PairingSign,
    pub residual: f64,
}

fn check_brickwall(spec: &CircuitSpec, pattern: &OccupationPattern) -> Result<()> {
    if spec.architecture != Architecture::BrickWall {
        return Err(Error::InvalidInput("brick-wall eigenvectors need a brick-wall spec".into()));
    }
    if spec.n > BRICKWALL_EIGENVECTOR_CAP {
        return Err(Error::Unsupported(format!(
            "brick-wall eigenvectors are limited to n <= {BRICKWALL_EIGENVECTOR_CAP}"
        )));
    }
    if pattern.n != spec.n || !pattern.is_even() {
        return Err(Error::InvalidInput("pattern must be even and match n".into()));
    }
    Ok(())
}

/// Builds the eigenvector with a fixed form of the four-mode matrix.
pub fn brickwall_left_eigenvector_with(
    spec: &CircuitSpec,
    e_u: f64,
    pattern: &OccupationPattern,
    sign: PairingSign,
) -> Result<Vec<Complex64>> {
    check_brickwall(spec, pattern)?;
    let disp = FermionDispersion::new(spec.d, e_u)?;
    let pairs = brickwall_mode_operators(spec.n, &disp, pattern.p, sign)?;
    assemble(spec.n, pattern, &pairs)
}

/// Tries both forms of the four-mode matrix against `moment` (computational
/// basis) and returns the first whose residual is within `tol`.
pub fn brickwall_left_eigenvector(
    spec: &CircuitSpec,
    e_u: f64,
    pattern: &OccupationPattern,
    moment: &DMatrix<f64>,
    tol: f64,
) -> Result<BrickwallEigenvector> {
    let disp = FermionDispersion::new(spec.d, e_u)?;
    let lambda = super::brickwall_eigenvalue(pattern, &disp)?;
    let mut diagnostics = Vec::new();
    for sign in [PairingSign::Plus, PairingSign::Minus] {
        match brickwall_left_eigenvector_with(spec, e_u, pattern, sign) {
            Ok(row) => {
                let residual = left_residual(&row, moment, lambda);
                if residual <= tol {
                    return Ok(BrickwallEigenvector { row, sign, residual });
                }
                diagnostics.push(format!("{sign:?}: residual {residual:.3e}"));
            }
            Err(e) => diagnostics.push(format!("{sign:?}: {e}")),
        }
    }
    Err(Error::Numerical(format!(
        "no sign convention gives a left eigenvector for pattern {} (sector {}): {}",
        pattern.bitstring(),
        pattern.p,
        diagnostics.join("; ")
    )))
}
