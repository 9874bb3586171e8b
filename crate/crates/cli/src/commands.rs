use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rqc_moments::analytic::{brickwall_gap, enumerate_spectrum, local_gap};
use rqc_moments::format::{round_sig, sci12, ComplexPair};
use rqc_moments::frame::{
    domain_wall_model, domain_wall_spectrum, f1, frame_potential_via_moment, frame_potential_via_spectrum,
    tridiagonal_trace_power, FRAME_T_CAP,
};
use rqc_moments::gate::{
    entanglement_profile, gate_from_canonical, haar_reference, qubit_solvable_residual, sample_haar_gate,
    solvable_residual, weingarten_block, weingarten_matrix_from_profile, CanonicalParams, Feasibility, GateFile,
    TwoQuditGate, UNITARITY_TOL,
};
use rqc_moments::moment::{build_moment, to_orthonormal_basis, Architecture, CircuitSpec, GateWeights};
use rqc_moments::numeric::{
    match_spectra, moment_spectrum, scan_grid, scan_records_to_csv, solvable_line_scan, solvable_line_to_csv,
    third_modulus, ScanRange,
};
use rqc_moments::validation::{run_validation, Fault, Level, ValidationConfig, DEFAULT_SEED};
use rqc_moments::{Error, Result};

use crate::args::{ArchArg, Command, Format, GlobalArgs, LevelArg};
use crate::config::{parse_range, FileConfig, Problems};

pub const DEFAULT_MATCH_TOL: f64 = 1e-6;
const SOLVABLE_LINE_TOL: f64 = 1e-9;

/// Text to emit plus the process exit code.
pub struct Outcome {
    pub outputs: Vec<(Option<PathBuf>, String)>,
    pub exit_code: i32,
}

impl Outcome {
    fn single(out: Option<PathBuf>, body: String) -> Self {
        Self { outputs: vec![(out, body)], exit_code: 0 }
    }
}

/// Global settings after merging the config file under the command line.
pub struct Settings {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

pub fn resolve_globals(global: &GlobalArgs, file: &FileConfig) -> Settings {
    Settings {
        out: global.out.clone().or_else(|| file.out.clone()),
        format: global.format.or(file.format),
        tol: global.tol.or(file.tol),
        seed: global.seed.or(file.seed),
    }
}

pub fn run(command: &Command, settings: &Settings, file: &FileConfig) -> Result<Outcome> {
    match command {
        Command::Gate(args) => {
            let canonical = args.canonical.clone().or_else(|| file.canonical.map(|c| c.to_vec()));
            let path = args.file.clone().or_else(|| file.file.clone());
            let random = args.random.or(file.random);
            cmd_gate(canonical, path, random, settings)
        }
        Command::Spectrum(args) => {
            let mut p = Problems::default();
            let n = p.require(args.circuit.n.or(file.n), "sites");
            let d = args.circuit.d.or(file.d).unwrap_or(2);
            let arch = args.circuit.arch.or(file.arch).unwrap_or(ArchArg::Local);
            let e = p.require(args.e.or(file.e), "e");
            let g = args.g.or(file.g);
            let numeric = args.numeric || file.numeric.unwrap_or(false);
            p.check_point(d, e, g);
            p.finish()?;
            cmd_spectrum(n.unwrap_or_default(), d, arch, e.unwrap_or_default(), g, numeric, settings)
        }
        Command::Scan(args) => {
            let n = args.circuit.n.or(file.n).unwrap_or(8);
            let d = args.circuit.d.or(file.d).unwrap_or(2);
            let arch = args.circuit.arch.or(file.arch).unwrap_or(ArchArg::Local);
            let e_range = args.e_range.clone().or_else(|| file.e_range.clone());
            let g_range = args.g_range.clone().or_else(|| file.g_range.clone());
            let resolution = args.resolution.or(file.resolution).unwrap_or(21);
            let solvable = args.solvable_line || file.solvable_line.unwrap_or(false);
            let mut p = Problems::default();
            p.check_point(d, None, None);
            if resolution < 2 {
                p.push(format!("--resolution must be at least 2, got {resolution}"));
            }
            let mut axis = |text: Option<String>, name: &str, default: (f64, f64)| match text.map(|t| parse_range(&t)) {
                None => default,
                Some(Ok((lo, hi))) if (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi => (lo, hi),
                Some(Ok((lo, hi))) => {
                    p.push(format!("--{name} {lo}:{hi} must satisfy 0 <= min <= max <= 1"));
                    default
                }
                Some(Err(err)) => {
                    p.push(format!("--{name}: {err}"));
                    default
                }
            };
            let e_range = axis(e_range, "e-range", (0.0, default_e_max(d)));
            let g_range = axis(g_range, "g-range", (0.0, 1.0));
            p.finish()?;
            cmd_scan(n, d, arch, e_range, g_range, resolution, solvable, settings)
        }
        Command::FramePotential(args) => {
            let mut p = Problems::default();
            let n = args.circuit.n.or(file.n).unwrap_or(6);
            let d = args.circuit.d.or(file.d).unwrap_or(2);
            let arch = args.circuit.arch.or(file.arch).unwrap_or(ArchArg::Local);
            let e = p.require(args.e.or(file.e), "e");
            let g = args.g.or(file.g);
            let t_max = args.t_max.or(file.t_max).unwrap_or(20);
            if t_max > FRAME_T_CAP {
                p.push(format!("--t-max must be at most {FRAME_T_CAP}"));
            }
            p.check_point(d, e, g);
            p.finish()?;
            cmd_frame(n, d, arch, e.unwrap_or_default(), g, t_max, settings)
        }
        Command::Validate(args) => {
            let level = match args.level.or(file.level).unwrap_or(LevelArg::Quick) {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let tamper = args.tamper_dispersion.or(file.tamper_dispersion);
            cmd_validate(level, tamper, settings)
        }
    }
}

fn architecture(arch: ArchArg) -> Result<Architecture> {
    match arch {
        ArchArg::Local => Ok(Architecture::Local),
        ArchArg::Brickwall => Ok(Architecture::BrickWall),
        ArchArg::DomainWall => {
            Err(Error::Unsupported("the domain-wall chain is only available through frame-potential".into()))
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn matrix_rows(entry: impl Fn(usize, usize) -> f64) -> Value {
    json!((0..4).map(|i| (0..4).map(|j| round_sig(entry(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn feasibility_name(f: Feasibility) -> &'static str {
    match f {
        Feasibility::Feasible => "feasible",
        Feasibility::Infeasible => "infeasible",
        Feasibility::Unverified => "unverified",
    }
}

fn cmd_gate(
    canonical: Option<Vec<f64>>,
    path: Option<PathBuf>,
    random: Option<usize>,
    settings: &Settings,
) -> Result<Outcome> {
    let sources = [canonical.is_some(), path.is_some(), random.is_some()].iter().filter(|&&b| b).count();
    if sources != 1 {
        return Err(Error::InvalidInput("give exactly one of --canonical, --file, --random".into()));
    }
    let tol = settings.tol.unwrap_or(UNITARITY_TOL);
    let mut params = None;
    let gate: TwoQuditGate = if let Some(c) = canonical {
        if c.len() != 3 {
            return Err(Error::Parse(format!("--canonical takes three comma-separated angles, got {}", c.len())));
        }
        let p = CanonicalParams::new(c[0], c[1], c[2]);
        params = Some(p);
        gate_from_canonical(p)
    } else if let Some(path) = path {
        let text = fs::read_to_string(&path)?;
        let parsed: GateFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("gate file {}: {e}", path.display())))?;
        if let GateFile::Canonical { canonical } = &parsed {
            params = Some(CanonicalParams::new(canonical[0], canonical[1], canonical[2]));
        }
        parsed.into_gate_with_tolerance(tol)?
    } else {
        let d = random.unwrap_or(2);
        haar_reference(d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.unwrap_or(DEFAULT_SEED));
        sample_haar_gate(d, &mut rng)
    };
    let profile = entanglement_profile(&gate);
    let residual = solvable_residual(&profile)?;
    let haar = haar_reference(gate.d())?;
    let contracted = weingarten_block(&gate)?;
    let parametrized = weingarten_matrix_from_profile(&profile)?;
    let block_deviation = (contracted - parametrized).abs().max();
    let canonical_residual = params.map(qubit_solvable_residual);

    let body = match settings.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "d": gate.d(),
            "e_u": round_sig(profile.e),
            "g_u": round_sig(profile.g),
            "operator_entanglement": round_sig(profile.e_op),
            "operator_entanglement_swapped": round_sig(profile.e_op_swap),
            "feasibility": feasibility_name(profile.feasibility()),
            "e_haar": round_sig(haar.e_haar),
            "solvable_residual": round_sig(residual.value),
            "degenerate": residual.degenerate,
            "canonical_residual": canonical_residual.map(round_sig),
            "block": matrix_rows(|i, j| contracted[(i, j)]),
            "block_from_profile": matrix_rows(|i, j| parametrized[(i, j)]),
            "block_deviation": round_sig(block_deviation),
        })),
        Format::Csv => {
            let mut rows = vec![
                ("d", gate.d().to_string()),
                ("e_u", sci12(profile.e)),
                ("g_u", sci12(profile.g)),
                ("feasibility", feasibility_name(profile.feasibility()).to_string()),
                ("solvable_residual", sci12(residual.value)),
                ("degenerate", residual.degenerate.to_string()),
                ("block_deviation", sci12(block_deviation)),
            ];
            if let Some(r) = canonical_residual {
                rows.push(("canonical_residual", sci12(r)));
            }
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{v}\n"));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "d = {}\ne_u = {:.12}\ng_u = {:.12}\nfeasibility: {}\nsolvable residual g - e/(2 e_H) = {:.12}{}\n",
                gate.d(),
                profile.e,
                profile.g,
                feasibility_name(profile.feasibility()),
                residual.value,
                if residual.degenerate { " (degenerate: product gate)" } else { "" }
            );
            if let Some(r) = canonical_residual {
                out.push_str(&format!("canonical residual = {r:.12}\n"));
            }
            out.push_str("moment block (II, IS, SI, SS):\n");
            for i in 0..4 {
                let row: Vec<String> = (0..4).map(|j| format!("{:>15.12}", contracted[(i, j)])).collect();
                out.push_str(&format!("  {}\n", row.join(" ")));
            }
            out.push_str(&format!("deviation from the (e, g) form: {block_deviation:.3e}\n"));
            out
        }
    };
    Ok(Outcome::single(settings.out.clone(), body))
}

fn complex_json(values: &[Complex64]) -> Value {
    json!(values.iter().map(|&z| ComplexPair::from(z)).collect::<Vec<_>>())
}

fn cmd_spectrum(
    n: usize,
    d: usize,
    arch: ArchArg,
    e: f64,
    g: Option<f64>,
    numeric: bool,
    settings: &Settings,
) -> Result<Outcome> {
    let architecture = architecture(arch)?;
    let spec = CircuitSpec::new(n, d, architecture)?;
    let haar = haar_reference(d)?;
    let line_g = e / (2.0 * haar.e_haar);
    let g = g.unwrap_or(line_g);
    let on_line = (g - line_g).abs() <= SOLVABLE_LINE_TOL;
    if !on_line && !numeric {
        return Err(Error::Unsupported(format!(
            "(e, g) = ({e}, {g}) is off the solvable line g = e/(2 e_H) = {line_g}; \
             no closed form exists there, rerun with --numeric for the dense spectrum"
        )));
    }
    let tol = settings.tol.unwrap_or(DEFAULT_MATCH_TOL);
    let feasibility = Feasibility::classify(d, e, g, 1e-10);

    let analytic = if on_line { Some(enumerate_spectrum(&spec, e)?) } else { None };
    let dense = if numeric {
        Some(moment_spectrum(&build_moment(&spec, &GateWeights::from_profile(e, g, d)?)?)?)
    } else {
        None
    };
    let report = match (&analytic, &dense) {
        (Some(a), Some(dn)) => Some(match_spectra(&a.values(), &dn.eigenvalues, tol)?),
        _ => None,
    };
    let gap_analytic = if on_line {
        Some(match architecture {
            Architecture::Local => local_gap(n, d, e)?,
            Architecture::BrickWall => brickwall_gap(n, d, e)?,
        })
    } else {
        None
    };
    let gap_numeric = match &dense {
        Some(s) => Some(1.0 - third_modulus(s)?),
        None => None,
    };

    let body = match settings.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut out = String::from("source,re,im,sector,occupation\n");
            if let Some(a) = &analytic {
                for entry in &a.entries {
                    out.push_str(&format!(
                        "analytic,{},{},{},{}\n",
                        sci12(entry.value.re),
                        sci12(entry.value.im),
                        entry.sector,
                        entry.pattern.bitstring()
                    ));
                }
            }
            if let Some(s) = &dense {
                for z in &s.eigenvalues {
                    out.push_str(&format!("numeric,{},{},,\n", sci12(z.re), sci12(z.im)));
                }
            }
            out
        }
        _ => {
            let mut value = match &analytic {
                Some(a) => a.to_json_value(),
                None => json!({ "n": n, "d": d, "architecture": architecture, "e_u": e }),
            };
            let obj = value.as_object_mut().expect("spectrum json is an object");
            obj.insert("e_u".into(), json!(round_sig(e)));
            obj.insert("g_u".into(), json!(round_sig(g)));
            obj.insert("solvable".into(), json!(on_line));
            obj.insert("feasibility".into(), json!(feasibility_name(feasibility)));
            obj.insert(
                "gap".into(),
                json!({ "analytic": gap_analytic.map(round_sig), "numeric": gap_numeric.map(round_sig) }),
            );
            if let Some(s) = &dense {
                obj.insert(
                    "numeric".into(),
                    json!({ "eigenvalues": complex_json(&s.eigenvalues), "eigenpair_residual": round_sig(s.eigenpair_residual) }),
                );
            }
            if let Some(r) = &report {
                obj.insert(
                    "match".into(),
                    json!({
                        "count": r.count,
                        "max_distance": round_sig(r.max_distance),
                        "tolerance": r.tolerance,
                        "within_tolerance": r.within_tolerance,
                    }),
                );
            }
            pretty(&value)
        }
    };
    let mut outcome = Outcome::single(settings.out.clone(), body);
    if report.is_some_and(|r| !r.within_tolerance) {
        outcome.exit_code = 1;
    }
    Ok(outcome)
}

fn default_e_max(d: usize) -> f64 {
    if d == 2 {
        2.0 / 3.0
    } else {
        1.0
    }
}

/// `stem_solvable.ext` next to `path`.
fn companion_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_solvable.{}", ext.to_string_lossy()),
        None => format!("{stem}_solvable"),
    };
    path.with_file_name(name)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    n: usize,
    d: usize,
    arch: ArchArg,
    (e_lo, e_hi): (f64, f64),
    (g_lo, g_hi): (f64, f64),
    resolution: usize,
    solvable: bool,
    settings: &Settings,
) -> Result<Outcome> {
    let spec = CircuitSpec::new(n, d, architecture(arch)?)?;
    let e_axis = ScanRange::new(e_lo, e_hi)?;
    let g_axis = ScanRange::new(g_lo, g_hi)?;
    let records = scan_grid(e_axis, g_axis, resolution, &spec)?;
    let line = if solvable { Some(solvable_line_scan(&spec, &e_axis.points(resolution))?) } else { None };

    let format = settings.format.unwrap_or(Format::Csv);
    if format == Format::Json {
        let grid: Vec<Value> = records
            .iter()
            .map(|r| {
                json!({
                    "e_u": round_sig(r.e_u),
                    "g_u": round_sig(r.g_u),
                    "lambda3_abs": r.lambda3_abs.map(round_sig),
                    "gap": r.gap.map(round_sig),
                    "feasible": feasibility_name(r.feasible),
                })
            })
            .collect();
        let mut value = json!({ "n": n, "d": d, "architecture": spec.architecture, "grid": grid });
        if let Some(points) = &line {
            value["solvable_line"] = json!(points
                .iter()
                .map(|p| json!({
                    "e_u": round_sig(p.e_u),
                    "g_u": round_sig(p.g_u),
                    "gap_analytic": round_sig(p.gap_analytic),
                    "gap_numeric": round_sig(p.gap_numeric),
                }))
                .collect::<Vec<_>>());
        }
        return Ok(Outcome::single(settings.out.clone(), pretty(&value)));
    }
    let grid_csv = scan_records_to_csv(&records);
    let mut outputs = Vec::new();
    match (&settings.out, &line) {
        (Some(path), Some(points)) => {
            outputs.push((Some(path.clone()), grid_csv));
            outputs.push((Some(companion_path(path)), solvable_line_to_csv(&spec, points)));
        }
        (out, Some(points)) => {
            outputs.push((out.clone(), format!("{grid_csv}\n{}", solvable_line_to_csv(&spec, points))));
        }
        (out, None) => outputs.push((out.clone(), grid_csv)),
    }
    Ok(Outcome { outputs, exit_code: 0 })
}

fn cmd_frame(
    n: usize,
    d: usize,
    arch: ArchArg,
    e: f64,
    g: Option<f64>,
    t_max: usize,
    settings: &Settings,
) -> Result<Outcome> {
    let haar = haar_reference(d)?;
    let g = g.unwrap_or(e / (2.0 * haar.e_haar));
    let weights = GateWeights::from_profile(e, g, d)?;
    let format = settings.format.unwrap_or(Format::Csv);

    let (curve, mut value) = if arch == ArchArg::DomainWall {
        let model = domain_wall_model(n, d, &weights)?;
        let spectrum = domain_wall_spectrum(&model)?;
        let mut curve = Vec::with_capacity(t_max + 1);
        let mut trace_deviation = 0.0f64;
        for t in 0..=t_max {
            let trace = tridiagonal_trace_power(&model, 2 * t);
            let value = if spectrum.closed_form {
                let sum = f1(&model, t)?;
                trace_deviation = trace_deviation.max((sum - trace).abs() / trace.abs().max(f64::MIN_POSITIVE));
                sum
            } else {
                trace
            };
            curve.push((t, value));
        }
        let value = json!({
            "n": n,
            "d": d,
            "architecture": "domain-wall",
            "e_u": round_sig(e),
            "g_u": round_sig(g),
            "diag": round_sig(model.diag),
            "off": round_sig(model.off),
            "closed_form": spectrum.closed_form,
            "eigenvalues": spectrum.eigenvalues.iter().map(|&x| round_sig(x)).collect::<Vec<_>>(),
            "trace_deviation": round_sig(trace_deviation),
        });
        (curve, value)
    } else {
        let spec = CircuitSpec::new(n, d, architecture(arch)?)?;
        let moment = to_orthonormal_basis(&build_moment(&spec, &weights)?)?;
        let result = frame_potential_via_moment(&moment, t_max)?;
        let mut value = result.to_json_value();
        if spec.architecture == Architecture::Local {
            let eig = moment_spectrum(&moment)?;
            let real: Vec<f64> = eig.eigenvalues.iter().map(|z| z.re).collect();
            let spectral = frame_potential_via_spectrum(&real, t_max);
            let deviation =
                result.values().iter().zip(&spectral).map(|(a, b)| (a - b).abs() / b.abs()).fold(0.0, f64::max);
            value["spectral_deviation"] = json!(round_sig(deviation));
        }
        (result.curve.iter().map(|p| (p.t, p.f)).collect(), value)
    };

    let body = match format {
        Format::Json => {
            value["curve"] =
                json!(curve.iter().map(|&(t, f)| json!({ "t": t, "F": round_sig(f) })).collect::<Vec<_>>());
            pretty(&value)
        }
        _ => {
            let mut out = String::from("t,F\n");
            for (t, f) in &curve {
                out.push_str(&format!("{t},{}\n", sci12(*f)));
            }
            out
        }
    };
    Ok(Outcome::single(settings.out.clone(), body))
}

fn cmd_validate(level: Level, tamper: Option<f64>, settings: &Settings) -> Result<Outcome> {
    let config = ValidationConfig {
        level,
        seed: settings.seed.unwrap_or(DEFAULT_SEED),
        fault: tamper.map(Fault::DispersionCoupling),
    };
    let report = run_validation(&config);
    let body = match settings.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&serde_json::to_value(&report)?),
        Format::Csv => {
            let mut out = String::from("id,name,passed,measured,tolerance\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.id,
                    c.name,
                    c.passed,
                    sci12(c.measured),
                    sci12(c.tolerance)
                ));
            }
            out
        }
        Format::Text => report.to_text(),
    };
    let mut outcome = Outcome::single(settings.out.clone(), body);
    if !report.passed() {
        outcome.exit_code = 1;
    }
    Ok(outcome)
}
