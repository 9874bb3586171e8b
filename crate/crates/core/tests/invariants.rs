use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rqc_moments::gate::{
    entanglement_profile, gate_from_canonical, haar_reference, parse_gate_json, qubit_profile_closed_form,
    qubit_solvable_residual, sample_haar_gate, sample_haar_unitary, solvable_residual, weingarten_block,
    CanonicalParams, Feasibility, TwoQuditGate,
};
use rqc_moments::moment::{
    build_moment, read_moment_binary, to_orthonormal_basis, write_moment_binary, Architecture, CircuitSpec, GateWeights,
};
use rqc_moments::{Complex64, Error};

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn flip(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |i, j| if i == (dim - 1) ^ j { 1.0 } else { 0.0 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_profile_matches_closed_form(a in 0.0..1.6f64, b in 0.0..1.6f64, c in 0.0..1.6f64) {
        let params = CanonicalParams::new(a, b, c);
        let numeric = entanglement_profile(&gate_from_canonical(params));
        let closed = qubit_profile_closed_form(params);
        prop_assert!((numeric.e - closed.e).abs() < 1e-12);
        prop_assert!((numeric.g - closed.g).abs() < 1e-12);
        prop_assert_eq!(numeric.feasibility(), Feasibility::Feasible);
    }

    #[test]
    fn qubit_residuals_are_proportional(a in 0.05..0.75f64, b in 0.05..0.75f64, c in 0.05..0.75f64) {
        let params = CanonicalParams::new(a, b, c);
        let general = solvable_residual(&entanglement_profile(&gate_from_canonical(params))).unwrap().value;
        let canonical = qubit_solvable_residual(params);
        prop_assume!(general.abs() > 1e-6);
        prop_assert!((canonical / general + 1.8).abs() < 1e-8, "ratio {}", canonical / general);
    }

    #[test]
    fn profile_is_invariant_under_local_dressing(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample_haar_gate(d, &mut rng);
        let locals: Vec<_> = (0..4).map(|_| sample_haar_unitary(d, &mut rng)).collect();
        let dressed = u.dressed(&locals[0], &locals[1], &locals[2], &locals[3]);
        let (p, q) = (entanglement_profile(&u), entanglement_profile(&dressed));
        prop_assert!((p.e - q.e).abs() < 1e-10 && (p.g - q.g).abs() < 1e-10);
        let adj = entanglement_profile(&u.adjoint());
        prop_assert!((p.e - adj.e).abs() < 1e-10 && (p.g - adj.g).abs() < 1e-10);
    }

    #[test]
    fn swap_exchanges_operator_entanglements(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample_haar_gate(d, &mut rng);
        let p = entanglement_profile(&u);
        let q = entanglement_profile(&u.times_swap());
        prop_assert!((p.e - q.e).abs() < 1e-10);
        prop_assert!((p.g + q.g - 1.0).abs() < 1e-10);
        prop_assert!(p.e >= -1e-12 && p.e <= 1.0 + 1e-12);
        prop_assert!(p.feasibility().is_admissible());
    }

    #[test]
    fn weingarten_block_has_fixed_corners(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = weingarten_block(&sample_haar_gate(d, &mut rng)).unwrap();
        for j in 0..4 {
            let (top, bottom) = (if j == 0 { 1.0 } else { 0.0 }, if j == 3 { 1.0 } else { 0.0 });
            prop_assert!((w[(0, j)] - top).abs() < 1e-10 && (w[(3, j)] - bottom).abs() < 1e-10);
        }
        prop_assert!((w[(1, 1)] - w[(2, 2)]).abs() < 1e-10 && (w[(1, 2)] - w[(2, 1)]).abs() < 1e-10);
    }

    #[test]
    fn moment_keeps_uniform_rows_and_flip_symmetry(
        e in 0.0..0.66f64,
        g in 0.0..1.0f64,
        n in 3usize..=7,
        brickwall in any::<bool>(),
    ) {
        let arch = if brickwall { Architecture::BrickWall } else { Architecture::Local };
        let n = if brickwall { n + n % 2 } else { n };
        let spec = CircuitSpec::new(n, 2, arch).unwrap();
        let m = build_moment(&spec, &GateWeights::from_profile(e, g, 2).unwrap()).unwrap().entries;
        let dim = spec.dim();
        for j in 0..dim {
            let (first, last) = (if j == 0 { 1.0 } else { 0.0 }, if j == dim - 1 { 1.0 } else { 0.0 });
            prop_assert!((m[(0, j)] - first).abs() < 1e-12);
            prop_assert!((m[(dim - 1, j)] - last).abs() < 1e-12);
        }
        let x = flip(n);
        prop_assert!(max_abs(&(&x * &m - &m * &x)) < 1e-12);
    }

    #[test]
    fn local_orthonormal_form_is_symmetric_with_same_trace(e in 0.0..0.66f64, g in 0.0..1.0f64, n in 3usize..=6) {
        let spec = CircuitSpec::new(n, 2, Architecture::Local).unwrap();
        let m = build_moment(&spec, &GateWeights::from_profile(e, g, 2).unwrap()).unwrap();
        let o = to_orthonormal_basis(&m).unwrap();
        prop_assert!(o.asymmetry() < 1e-12);
        prop_assert!((o.entries.trace() - m.entries.trace()).abs() < 1e-10);
        let sq = |a: &DMatrix<f64>| (a * a).trace();
        prop_assert!((sq(&o.entries) - sq(&m.entries)).abs() < 1e-10);
    }
}

#[test]
fn haar_point_is_the_average_gate() {
    let h = haar_reference(2).unwrap();
    assert_eq!((h.e_haar, h.g_haar), (0.6, 0.5));
    let w = GateWeights::haar(2).unwrap();
    assert!((w.a - 0.4).abs() < 1e-15);
    assert!((w.c).abs() < 1e-15);
    assert!(w.is_solvable(1e-12));
    assert!(matches!(haar_reference(1), Err(Error::InvalidInput(_))));
}

#[test]
fn gate_json_round_trip_and_errors() {
    let cnot = TwoQuditGate::cnot();
    let entries: Vec<[f64; 2]> = cnot.matrix().transpose().iter().map(|z| [z.re, z.im]).collect();
    let text = serde_json::json!({ "d": 2, "entries": entries }).to_string();
    let parsed = parse_gate_json(&text).unwrap();
    assert_eq!(parsed.matrix(), cnot.matrix());
    let canonical = parse_gate_json(r#"{"canonical": [0.7853981633974483, 0, 0]}"#).unwrap();
    assert!((entanglement_profile(&canonical).e - 2.0 / 3.0).abs() < 1e-12);
    let bad = serde_json::json!({ "d": 2, "entries": vec![[1.0, 0.0]; 16] }).to_string();
    assert!(matches!(parse_gate_json(&bad), Err(Error::NotUnitary { .. })));
    assert!(matches!(parse_gate_json(r#"{"d": 2, "entries": [[1, 0]]}"#), Err(Error::Parse(_))));
    assert!(parse_gate_json("not json").is_err());
    let m = DMatrix::from_element(4, 4, Complex64::new(0.5, 0.0));
    assert!(TwoQuditGate::new(2, m).is_err());
}

#[test]
fn moment_binary_round_trip() {
    let dir = std::env::temp_dir().join(format!("rqcm-invariants-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moment.bin");
    let spec = CircuitSpec::new(6, 3, Architecture::BrickWall).unwrap();
    let m = build_moment(&spec, &GateWeights::solvable(0.5, 3).unwrap()).unwrap();
    write_moment_binary(&m, &path).unwrap();
    let back = read_moment_binary(&path).unwrap();
    assert_eq!(back.entries, m.entries);
    assert_eq!(back.spec, m.spec);
    std::fs::write(&path, [0u8; 10]).unwrap();
    assert!(matches!(read_moment_binary(&path), Err(Error::Parse(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn circuit_specs_reject_bad_shapes() {
    assert!(CircuitSpec::new(5, 2, Architecture::BrickWall).is_err());
    assert!(CircuitSpec::new(4, 1, Architecture::Local).is_err());
    assert!(CircuitSpec::new(2, 2, Architecture::Local).is_err());
}
