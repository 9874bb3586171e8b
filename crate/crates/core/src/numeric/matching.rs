use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::min_cost_assignment;
use crate::{Error, Result};

/// Clusters larger than this are paired in sorted order instead of by assignment.
const ASSIGNMENT_CLUSTER_CAP: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub analytic: Complex64,
    pub numeric: Complex64,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchReport {
    pub count: usize,
    pub max_distance: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    /// Up to five pairs with the largest distance, worst first.
    pub worst_pairs: Vec<MatchedPair>,
}

#[derive(Clone, Copy)]
struct Tagged {
    z: Complex64,
    modulus: f64,
    from_analytic: bool,
}

fn phase_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.arg().total_cmp(&b.arg())
}

/// Optimal pairing of two multisets of complex numbers.
///
/// Values are merged by modulus and cut into clusters at gaps wider than the
/// clustering width where both sides contribute equally; each cluster is
/// solved exactly by the assignment method.
pub fn match_spectra(analytic: &[Complex64], numeric: &[Complex64], tol: f64) -> Result<MatchReport> {
    if analytic.len() != numeric.len() {
        return Err(Error::CardinalityMismatch { left: analytic.len(), right: numeric.len() });
    }
    let width = (10.0 * tol).max(1e-6);
    let mut merged: Vec<Tagged> = analytic
        .iter()
        .map(|&z| Tagged { z, modulus: z.norm(), from_analytic: true })
        .chain(numeric.iter().map(|&z| Tagged { z, modulus: z.norm(), from_analytic: false }))
        .collect();
    merged.sort_by(|a, b| a.modulus.total_cmp(&b.modulus));

    let mut pairs = Vec::with_capacity(analytic.len());
    let mut start = 0;
    let mut balance: i64 = 0;
    for idx in 0..merged.len() {
        balance += if merged[idx].from_analytic { 1 } else { -1 };
        let last = idx + 1 == merged.len();
        let cut = last || (balance == 0 && merged[idx + 1].modulus - merged[idx].modulus > width);
        if cut {
            pair_cluster(&merged[start..=idx], &mut pairs);
            start = idx + 1;
        }
    }

    pairs.sort_by(|a: &MatchedPair, b| b.distance.total_cmp(&a.distance));
    let max_distance = pairs.first().map_or(0.0, |p| p.distance);
    Ok(MatchReport {
        count: pairs.len(),
        max_distance,
        tolerance: tol,
        within_tolerance: max_distance < tol,
        worst_pairs: pairs.iter().take(5).copied().collect(),
    })
}

fn pair_cluster(cluster: &[Tagged], out: &mut Vec<MatchedPair>) {
    let mut left: Vec<Complex64> = cluster.iter().filter(|t| t.from_analytic).map(|t| t.z).collect();
    let mut right: Vec<Complex64> = cluster.iter().filter(|t| !t.from_analytic).map(|t| t.z).collect();
    let m = left.len();
    if m == 1 {
        out.push(MatchedPair { analytic: left[0], numeric: right[0], distance: (left[0] - right[0]).norm() });
        return;
    }
    if m > ASSIGNMENT_CLUSTER_CAP {
        left.sort_by(phase_order);
        right.sort_by(phase_order);
        out.extend(left.iter().zip(&right).map(|(&a, &b)| MatchedPair {
            analytic: a,
            numeric: b,
            distance: (a - b).norm(),
        }));
        return;
    }
    let cost = DMatrix::from_fn(m, m, |i, j| (left[i] - right[j]).norm());
    let assignment = min_cost_assignment(&cost);
    out.extend(assignment.iter().enumerate().map(|(i, &j)| MatchedPair {
        analytic: left[i],
        numeric: right[j],
        distance: cost[(i, j)],
    }));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_lists_have_zero_distance() {
        let a = vec![c(1.0, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(-0.3, 0.0)];
        let mut b = a.clone();
        b.reverse();
        let r = match_spectra(&a, &b, 1e-12).unwrap();
        assert_eq!(r.max_distance, 0.0);
        assert!(r.within_tolerance);
    }

    #[test]
    fn perturbation_is_reported() {
        let a = vec![c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)];
        let b = vec![c(1.0, 0.0), c(0.5 + 3e-7, 0.0), c(0.25, 0.0)];
        let r = match_spectra(&a, &b, 1e-8).unwrap();
        assert!((r.max_distance - 3e-7).abs() < 1e-15);
        assert!(!r.within_tolerance);
    }

    #[test]
    fn equal_moduli_are_resolved_by_assignment() {
        let a = vec![c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0), c(-0.5, 0.0)];
        let b = vec![c(-0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0), c(0.0, 0.5)];
        assert_eq!(match_spectra(&a, &b, 1e-12).unwrap().max_distance, 0.0);
    }

    #[test]
    fn cardinality_mismatch_is_an_error() {
        assert!(matches!(
            match_spectra(&[c(1.0, 0.0)], &[], 1e-8),
            Err(Error::CardinalityMismatch { left: 1, right: 0 })
        ));
    }
}
