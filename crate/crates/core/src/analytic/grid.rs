use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Momenta of one parity sector, normalised to `(-pi, pi]` and sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub n: usize,
    pub p: u8,
    pub values: Vec<f64>,
}

pub fn momentum_grid(n: usize, p: u8) -> Result<MomentumGrid> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("momentum grids need n >= 2, got {n}")));
    }
    if p > 1 {
        return Err(Error::InvalidInput(format!("sector label must be 0 or 1, got {p}")));
    }
    let ni = n as i64;
    let ms: Vec<i64> =
        if n.is_multiple_of(2) { (-ni / 2 + 1..=ni / 2).collect() } else { (-(ni - 1) / 2..=(ni - 1) / 2).collect() };
    let mut values: Vec<f64> = ms
        .into_iter()
        .map(|m| {
            let num = 2 * m - p as i64;
            // (-pi, pi]: the only value outside is -pi itself
            let num = if num <= -ni { num + 2 * ni } else { num };
            num as f64 * PI / n as f64
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(MomentumGrid { n, p, values })
}

impl MomentumGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the grid momentum equal to `k` modulo `2 pi`.
    pub fn index_of(&self, k: f64) -> Option<usize> {
        self.values.iter().position(|&q| {
            let diff = (q - k).rem_euclid(2.0 * PI);
            diff < 1e-9 || 2.0 * PI - diff < 1e-9
        })
    }

    /// All `2^{n-1}` even-parity patterns, in increasing mask order.
    pub fn even_patterns(&self) -> impl Iterator<Item = OccupationPattern> + '_ {
        (0u64..(1u64 << self.n)).filter(|m| m.count_ones() % 2 == 0).map(move |mask| OccupationPattern {
            n: self.n,
            p: self.p,
            mask,
        })
    }
}

/// Occupations over a sector's sorted momenta; bit `j` of `mask` is the
/// occupation of `values[j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OccupationPattern {
    pub n: usize,
    pub p: u8,
    pub mask: u64,
}

impl OccupationPattern {
    pub fn new(n: usize, p: u8, mask: u64) -> Result<Self> {
        if n >= 64 || mask >> n != 0 {
            return Err(Error::InvalidInput(format!("mask {mask:#b} does not fit {n} modes")));
        }
        if p > 1 {
            return Err(Error::InvalidInput(format!("sector label must be 0 or 1, got {p}")));
        }
        let pattern = Self { n, p, mask };
        if !pattern.is_even() {
            return Err(Error::InvalidInput(format!("pattern {} has odd parity", pattern.bitstring())));
        }
        Ok(pattern)
    }

    pub fn from_occupied(grid: &MomentumGrid, momenta: &[f64]) -> Result<Self> {
        let mut mask = 0u64;
        for &k in momenta {
            let idx = grid
                .index_of(k)
                .ok_or_else(|| Error::InvalidInput(format!("momentum {k} is not in sector {}", grid.p)))?;
            mask |= 1 << idx;
        }
        Self::new(grid.n, grid.p, mask)
    }

    pub fn vacuum(n: usize, p: u8) -> Self {
        Self { n, p, mask: 0 }
    }

    pub fn is_even(&self) -> bool {
        self.mask.count_ones().is_multiple_of(2)
    }

    pub fn occupied(&self, j: usize) -> bool {
        (self.mask >> j) & 1 == 1
    }

    pub fn occupied_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&j| self.occupied(j))
    }

    /// `'1'`/`'0'` per momentum, in sorted-momentum order.
    pub fn bitstring(&self) -> String {
        (0..self.n).map(|j| if self.occupied(j) { '1' } else { '0' }).collect()
    }
}
