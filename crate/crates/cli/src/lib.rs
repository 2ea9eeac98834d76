//! Command-line front end: scene parsing, command dispatch and JSON reports.

pub mod expr;
pub mod scene;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use polar_core::arith::{rat_to_decimal, Rat, Scalar, ScalarSum};
use polar_core::complex::{
    boundary1, hp0_stabilized, hp1_punctured, hp_projective, is_admissible, mv_check, Chain1, PuncturedCurve,
};
use polar_core::curves::{divisor_of, holomorphic_basis, orbit_set, short_label};
use polar_core::link::{
    polar_intersection, polar_linking, polar_linking_sum, scale_chain, scale_cycle, verify_bounding, Pairing,
};
use polar_core::reproduce::{random_gamma, reproduce, seeded_rng};
use polar_core::stokes::{
    packaged_cases, stokes_check, stokes_check_signed, PolyTerm, QuadratureConfig, SmoothTestForm,
};
use polar_core::surface::{boundary2, d2_check};
use polar_core::PolarError;

use scene::{parse_scene, LoadError, SceneFile, SchemaError};

/// Version of the JSON report schema.
pub const REPORT_VERSION: &str = "1";

/// Environment variable overriding the seed of randomized suites.
pub const SEED_ENV: &str = "POLAR_SEED";

const DEFAULT_SEED: u64 = 20240501;

#[derive(Parser, Debug)]
#[command(name = "polar", version, about = "Exact polar chains, residues and linking numbers")]
pub struct Cli {
    /// Add decimal approximations with this many digits.
    #[arg(long, global = true)]
    pub decimal: Option<usize>,
    /// Seed for randomized suites (overrides the scene seed).
    #[arg(long, global = true, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Genus, holomorphic differentials and canonical forms of the scene points.
    CurveInfo { scene: String },
    /// Boundary of the scene's 1-chain, as a 0-chain of residues.
    Boundary { scene: String },
    /// Polar homology dimensions.
    Homology {
        #[arg(value_enum)]
        kind: HomologyKind,
        scene: String,
        /// JSON array of puncture points (defaults to the scene's punctures).
        #[arg(long)]
        punctures: Option<String>,
    },
    /// Mayer–Vietoris exactness for the scene's puncture sets `mv.s1`, `mv.s2`.
    MvCheck { scene: String },
    /// Checks that the boundary of the boundary of a plane 2-form vanishes.
    D2Check { scene: String },
    /// Polar intersection number of two planar cycles.
    Intersect { scene: String },
    /// Polar linking number of a cycle with the boundary of 2-chains.
    Link {
        scene: String,
        /// Also check invariance under scaling and under adding boundaries.
        #[arg(long)]
        invariance_check: bool,
    },
    /// Quadrature check of the Cauchy–Stokes formula on the projective line.
    StokesCheck {
        /// Rational function r(z) of the form r(z) dz.
        #[arg(long, required_unless_present = "packaged")]
        omega: Option<String>,
        /// `re,im,radius` of the bump.
        #[arg(long, required_unless_present = "packaged")]
        bump: Option<String>,
        /// Polynomial term `i,j,re,im` meaning `(re + i·im) z^i conj(z)^j`; repeatable.
        #[arg(long)]
        poly: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0.02)]
        cell: f64,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Run the packaged configurations and the sign-flipped control.
        #[arg(long)]
        packaged: bool,
    },
    /// Regenerates the reference tables.
    ReproducePaper {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HomologyKind {
    Projective,
    Punctured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Schema(SchemaError),
    Math(PolarError),
}

impl From<PolarError> for Failure {
    fn from(e: PolarError) -> Self {
        Failure::Math(e)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Schema(s) => Failure::Schema(s),
            LoadError::Math(m) => Failure::Math(m),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// A finished command: its report and whether its check passed.
struct Done {
    report: Value,
    pass: bool,
    text: Option<String>,
}

fn ok(report: Value) -> Run<Done> {
    Ok(Done { report, pass: true, text: None })
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(done) => {
            let stdout = match done.text {
                Some(t) => t,
                None => format!("{}\n", serde_json::to_string_pretty(&done.report).expect("serializable")),
            };
            Outcome { code: if done.pass { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Schema(s)) => Outcome { code: 2, stdout: String::new(), stderr: format!("scene error at {s}\n") },
        Err(Failure::Math(e)) => {
            let code = if e.is_internal() { 4 } else { 3 };
            let kind = if code == 4 { "internal error" } else { "error" };
            Outcome { code, stdout: String::new(), stderr: format!("{kind}: {e}\n") }
        }
    }
}

fn load(path: &str) -> Run<SceneFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    parse_scene(&text).map_err(Failure::Schema)
}

fn seed_of(cli: &Cli, scene: Option<&SceneFile>) -> u64 {
    cli.seed.or(scene.and_then(|s| s.seed)).unwrap_or(DEFAULT_SEED)
}

fn header(command: &str) -> Value {
    json!({ "report_version": REPORT_VERSION, "command": command })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(m), Value::Object(o)) = (a.as_object_mut(), b) {
        m.extend(o);
    }
    a
}

fn scalar(s: &Scalar, digits: Option<usize>) -> Value {
    s.to_json_decimal(digits)
}

fn scalar_sum(s: &ScalarSum, digits: Option<usize>) -> Value {
    let mut v = s.to_json();
    if let Some(d) = digits {
        let approx: Vec<Value> = s
            .parts()
            .filter_map(|(k, a)| {
                a.as_rat().map(|r| json!({ "tau_power": k, "approx": format!("{} (approx)", rat_to_decimal(&r, d)) }))
            })
            .collect();
        v = json!({ "exact": v, "approx": approx });
    }
    v
}

fn dispatch(cli: &Cli) -> Run<Done> {
    let digits = cli.decimal;
    match &cli.command {
        Command::CurveInfo { scene } => {
            let s = load(scene)?;
            let curve = s.curve()?;
            let points = s.points_at(&curve, &s.points, "/points")?;
            let pts = orbit_set(&curve, &points)?;
            ok(merge(
                header("curve-info"),
                json!({
                    "curve": curve.to_json(),
                    "genus": curve.genus(),
                    "holomorphic_basis": holomorphic_basis(&curve).iter().map(|w| w.pretty()).collect::<Vec<_>>(),
                    "points": pts.iter().map(|p| json!({
                        "label": short_label(p),
                        "orbit_size": p.orbit_size(),
                        "weierstrass": p.is_weierstrass(&curve),
                        "point": p.to_json(&curve),
                    })).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Boundary { scene } => {
            let s = load(scene)?;
            let curve = s.curve()?;
            let mut chain = Chain1::new(curve.clone());
            let mut divisors = Vec::new();
            for (w, k) in s.chain(&curve)? {
                if w.is_rational() {
                    divisors.push(divisor_of(&curve, &w)?.to_json(&curve));
                }
                chain.push(w, Scalar::rational(k))?;
            }
            let b = boundary1(&chain)?;
            let punctures = s.points_at(&curve, &s.punctures, "/punctures")?;
            let x = PuncturedCurve::new(curve.clone(), &punctures)?;
            ok(merge(
                header("boundary"),
                json!({
                    "boundary": b.to_json(&curve),
                    "total": scalar(&b.total()?, digits),
                    "admissible": is_admissible(&chain, &x),
                    "divisors": divisors,
                }),
            ))
        }
        Command::Homology { kind, scene, punctures } => {
            let s = load(scene)?;
            let curve = s.curve()?;
            let seed = seed_of(cli, Some(&s));
            match kind {
                HomologyKind::Projective => {
                    let gens = hp_projective(&curve)?;
                    let st = hp0_stabilized(&PuncturedCurve::projective(curve.clone()), seed)?;
                    if (gens.hp0, gens.hp1) != (st.hp0, st.hp1) {
                        return Err(Failure::Math(PolarError::Invariant(format!(
                            "generator count ({}, {}) disagrees with finite support ({}, {})",
                            gens.hp0, gens.hp1, st.hp0, st.hp1
                        ))));
                    }
                    ok(merge(
                        header("homology projective"),
                        json!({
                            "hp0": st.hp0,
                            "hp1": st.hp1,
                            "support_sizes": st.support_sizes,
                            "matrices_rank": st.residue_ranks,
                            "hp0_values": st.hp0_values,
                            "generators": gens,
                            "seed": seed,
                        }),
                    ))
                }
                HomologyKind::Punctured => {
                    let pts = match punctures {
                        Some(path) => {
                            let text = std::fs::read_to_string(path)
                                .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
                            let specs: Vec<scene::PointSpec> = serde_json::from_str(&text).map_err(|e| {
                                Failure::Schema(SchemaError {
                                    pointer: String::new(),
                                    message: format!("punctures file: {e}"),
                                })
                            })?;
                            s.points_at(&curve, &specs, "")?
                        }
                        None => s.points_at(&curve, &s.punctures, "/punctures")?,
                    };
                    let x = PuncturedCurve::new(curve.clone(), &pts)?;
                    let st = hp0_stabilized(&x, seed)?;
                    let hp1 = hp1_punctured(&x)?;
                    if hp1 != st.hp1 {
                        return Err(Failure::Math(PolarError::Invariant("hp1 computations disagree".into())));
                    }
                    ok(merge(
                        header("homology punctured"),
                        json!({
                            "hp0": st.hp0,
                            "hp1": st.hp1,
                            "punctures": x.punctures.iter().map(short_label).collect::<Vec<_>>(),
                            "support_sizes": st.support_sizes,
                            "matrices_rank": st.residue_ranks,
                            "hp0_values": st.hp0_values,
                            "seed": seed,
                        }),
                    ))
                }
            }
        }
        Command::MvCheck { scene } => {
            let s = load(scene)?;
            let curve = s.curve()?;
            let mv = s
                .mv
                .as_ref()
                .ok_or_else(|| Failure::Schema(SchemaError { pointer: "/mv".into(), message: "missing mv".into() }))?;
            let s1 = s.points_at(&curve, &mv.s1, "/mv/s1")?;
            let s2 = s.points_at(&curve, &mv.s2, "/mv/s2")?;
            let seed = seed_of(cli, Some(&s));
            let r = mv_check(&curve, &s1, &s2, seed)?;
            let pass = r.pass;
            Ok(Done { report: merge(header("mv-check"), json!({ "seed": seed, "report": r })), pass, text: None })
        }
        Command::D2Check { scene } => {
            let s = load(scene)?;
            let beta = s.arrangement()?;
            let chain = boundary2(&beta)?;
            let r = d2_check(&beta)?;
            let pass = r.pass;
            Ok(Done {
                report: merge(
                    header("d2-check"),
                    json!({ "form": beta.pretty(), "boundary": chain.to_json(), "report": r }),
                ),
                pass,
                text: None,
            })
        }
        Command::Intersect { scene } => {
            let s = load(scene)?;
            let amb = s.ambient()?;
            let cycles = s.cycles()?;
            if cycles.len() != 2 {
                return Err(Failure::Schema(SchemaError {
                    pointer: "/cycles".into(),
                    message: "expected exactly two cycles".into(),
                }));
            }
            let p = polar_intersection(&amb, &cycles[0], &cycles[1])?;
            ok(merge(header("intersect"), pairing_json(&p, digits)))
        }
        Command::Link { scene, invariance_check } => {
            let s = load(scene)?;
            let amb = s.ambient()?;
            let cycles = s.cycles()?;
            let chains = s.bounding()?;
            if cycles.len() != 1 {
                return Err(Failure::Schema(SchemaError {
                    pointer: "/cycles".into(),
                    message: "expected exactly one cycle".into(),
                }));
            }
            if chains.is_empty() {
                return Err(Failure::Schema(SchemaError {
                    pointer: "/bounding".into(),
                    message: "expected at least one 2-chain".into(),
                }));
            }
            let c1 = &cycles[0];
            let mut terms = Vec::new();
            for ch in &chains {
                terms.push(pairing_json(&polar_linking(&amb, c1, ch)?, digits));
            }
            let total = polar_linking_sum(&amb, c1, &chains)?;
            let mut report = merge(header("link"), json!({ "value": scalar_sum(&total, digits), "chains": terms }));
            let mut pass = true;
            if *invariance_check {
                let curves = s.boundaries()?;
                let (inv, p) = invariance(&amb, c1, &chains, &curves, &total, seed_of(cli, Some(&s)))?;
                report["invariance"] = inv;
                pass = p;
            }
            Ok(Done { report, pass, text: None })
        }
        Command::StokesCheck { omega, bump, poly, tol, cell, depth, packaged } => {
            let cfg = QuadratureConfig { base_cell: *cell, depth: *depth, tol: *tol, abs_floor: 1.0 };
            if *packaged {
                let mut rows = Vec::new();
                let mut pass = true;
                for case in packaged_cases() {
                    let r = stokes_check(&case.omega, &case.v, &cfg)?;
                    let flipped = stokes_check_signed(&case.omega, &case.v, &cfg, -1.0)?;
                    let p = r.passes(*tol) && !flipped.passes(*tol);
                    pass &= p;
                    rows.push(json!({
                        "case": case.name,
                        "report": r,
                        "flipped_rel_error": flipped.rel_error,
                        "pass": p,
                    }));
                }
                return Ok(Done {
                    report: merge(header("stokes-check"), json!({ "cases": rows, "pass": pass })),
                    pass,
                    text: None,
                });
            }
            let omega = omega.as_ref().expect("required by clap");
            let (n, d) = expr::parse_ratfunc(omega, "z").map_err(|m| Failure::Usage(format!("--omega: {m}")))?;
            let w = polar_core::curves::Differential1::line_rat(&n, &d);
            let v = parse_bump(bump.as_deref().expect("required by clap"), poly)?;
            let r = stokes_check(&w, &v, &cfg)?;
            let pass = r.passes(*tol);
            Ok(Done { report: merge(header("stokes-check"), json!({ "report": r, "pass": pass })), pass, text: None })
        }
        Command::ReproducePaper { format } => {
            let seed = seed_of(cli, None);
            let r = reproduce(seed);
            let text = match format {
                Format::Table => Some(r.table()),
                Format::Json => None,
            };
            let pass = r.pass;
            Ok(Done { report: merge(header("reproduce-paper"), json!({ "report": r })), pass, text })
        }
    }
}

fn pairing_json(p: &Pairing, digits: Option<usize>) -> Value {
    json!({ "value": scalar(&p.value, digits), "terms": p.terms })
}

fn invariance(
    amb: &polar_core::link::AmbientSpace,
    c1: &polar_core::link::EmbeddedCycle1,
    chains: &[polar_core::link::BoundingChain2],
    curves: &[Option<polar_core::arith::MPoly>],
    total: &ScalarSum,
    seed: u64,
) -> Run<(Value, bool)> {
    let lambda = [Rat::from_integer(2.into()), Rat::new(1.into(), 2.into()), Rat::from_integer(1.into())];
    let preserved = amb.preserved_by_scaling(&lambda);
    let c1s = scale_cycle(c1, &lambda)?;
    let chs: Vec<_> = chains.iter().map(|s| scale_chain(s, &lambda)).collect::<Result<_, _>>()?;
    let scaled = polar_linking_sum(amb, &c1s, &chs)?;
    let scaling_ok = !preserved || scaled == *total;
    let mut rng = seeded_rng(seed);
    let mut gammas = Vec::new();
    let mut all_ok = true;
    for _ in 0..10 {
        let (planes, num, d) = random_gamma(amb, c1, &mut rng)?;
        let alone = polar_linking_sum(amb, c1, &d)?;
        let mut with = chains.to_vec();
        with.extend(d);
        let shifted = polar_linking_sum(amb, c1, &with)?;
        let ok = alone.is_zero() && shifted == *total;
        all_ok &= ok;
        gammas.push(json!({
            "planes": planes.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "numerator": num.to_string(),
            "boundary_pairing_zero": alone.is_zero(),
            "unchanged": shifted == *total,
        }));
    }
    let mut bounding_ok = true;
    let bounding: Vec<Value> = chains
        .iter()
        .zip(curves)
        .map(|(s, f)| {
            let f = f.as_ref().unwrap_or(&s.den);
            let circle = polar_core::link::EmbeddedCycle1 {
                plane: Some(s.plane.clone()),
                form: polar_core::link::residue_2form_along_curve(&s.num, &s.den, f)
                    .unwrap_or_else(|_| polar_core::link::CurveForm::canonical(f)),
            };
            let check = verify_bounding(s, &circle);
            bounding_ok &= check.ok;
            serde_json::to_value(check).expect("serializable")
        })
        .collect();
    let pass = scaling_ok && all_ok && bounding_ok;
    Ok((
        json!({
            "scaling": { "lambda": ["2", "1/2", "1"], "preserves_volume_form": preserved, "unchanged": scaling_ok },
            "random_boundaries": gammas,
            "bounding_checks": bounding,
            "pass": pass,
        }),
        pass,
    ))
}

fn parse_bump(bump: &str, poly: &[String]) -> Run<SmoothTestForm> {
    let nums = |s: &str, n: usize, flag: &str| -> Run<Vec<f64>> {
        let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
        match v {
            Ok(v) if v.len() == n => Ok(v),
            _ => Err(Failure::Usage(format!("{flag} expects {n} comma-separated numbers, got {s:?}"))),
        }
    };
    let b = nums(bump, 3, "--bump")?;
    let mut terms = Vec::new();
    for p in poly {
        let t = nums(p, 4, "--poly")?;
        if t[0] < 0.0 || t[1] < 0.0 || t[0].fract() != 0.0 || t[1].fract() != 0.0 {
            return Err(Failure::Usage(format!("--poly exponents must be nonnegative integers: {p:?}")));
        }
        terms.push(PolyTerm { z: t[0] as u32, zbar: t[1] as u32, coeff: [t[2], t[3]] });
    }
    if terms.is_empty() {
        terms.push(PolyTerm { z: 0, zbar: 0, coeff: [1.0, 0.0] });
    }
    Ok(SmoothTestForm::new(Complex64::new(b[0], b[1]), b[2], terms)?)
}
