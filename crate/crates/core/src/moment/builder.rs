use nalgebra::{DMatrix, Matrix4};

use super::{Architecture, Basis, CircuitSpec, GateWeights, MomentMatrix, DEFAULT_SITE_CAP};
use crate::{Error, Result};

fn check_dims(spec: &CircuitSpec, weights: &GateWeights) -> Result<()> {
    if spec.d != weights.d {
        return Err(Error::InvalidInput(format!(
            "weights were computed for d = {} but the circuit has d = {}",
            weights.d, spec.d
        )));
    }
    spec.require_dense(DEFAULT_SITE_CAP)
}

/// `M = (1/n) sum_i B_{i,i+1}`, assembled entry by entry.
pub fn build_local_moment(spec: &CircuitSpec, weights: &GateWeights) -> Result<MomentMatrix> {
    if spec.architecture != Architecture::Local {
        return Err(Error::InvalidInput("build_local_moment needs a local circuit spec".into()));
    }
    check_dims(spec, weights)?;
    let n = spec.n;
    let dim = spec.dim();
    let block = weights.block();
    let scale = 1.0 / n as f64;
    let mut m = DMatrix::zeros(dim, dim);
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
                    m[(y, x)] += w * scale;
                }
            }
        }
    }
    Ok(MomentMatrix { spec: *spec, basis: Basis::Computational, weights: *weights, entries: m })
}

/// Left-multiplies `m` in place by the block acting on sites `(i, j)`.
pub fn apply_pair_block_left(m: &mut DMatrix<f64>, n: usize, i: usize, j: usize, block: &Matrix4<f64>) {
    let dim = m.nrows();
    let (bi, bj) = (n - 1 - i, n - 1 - j);
    let (hi, lo) = (1usize << bi, 1usize << bj);
    let mut old = [0.0f64; 4];
    for col in 0..m.ncols() {
        let mut column = m.column_mut(col);
        for base in 0..dim {
            if base & (hi | lo) != 0 {
                continue;
            }
            let rows = [base, base | lo, base | hi, base | hi | lo];
            for q in 0..4 {
                old[q] = column[rows[q]];
            }
            for q in 0..4 {
                let mut acc = 0.0;
                for p in 0..4 {
                    acc += block[(q, p)] * old[p];
                }
                column[rows[q]] = acc;
            }
        }
    }
}

/// Site pairs of the first (`layer = 0`) and second (`layer = 1`) brick-wall layer.
pub fn layer_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
    (0..n / 2).map(|p| (2 * p + layer, (2 * p + layer + 1) % n)).collect()
}

/// `M = T2 T1`, `T1` on pairs `(0,1), (2,3), ...`, `T2` on `(1,2), ..., (n-1,0)`.
pub fn build_brickwall_moment(spec: &CircuitSpec, weights: &GateWeights) -> Result<MomentMatrix> {
    if spec.architecture != Architecture::BrickWall {
        return Err(Error::InvalidInput("build_brickwall_moment needs a brick-wall spec".into()));
    }
    check_dims(spec, weights)?;
    let n = spec.n;
    let block = weights.block();
    let mut m = DMatrix::identity(spec.dim(), spec.dim());
    for layer in 0..2 {
        for (i, j) in layer_pairs(n, layer) {
            apply_pair_block_left(&mut m, n, i, j, &block);
        }
    }
    Ok(MomentMatrix { spec: *spec, basis: Basis::Computational, weights: *weights, entries: m })
}

pub fn build_moment(spec: &CircuitSpec, weights: &GateWeights) -> Result<MomentMatrix> {
    match spec.architecture {
        Architecture::Local => build_local_moment(spec, weights),
        Architecture::BrickWall => build_brickwall_moment(spec, weights),
    }
}
