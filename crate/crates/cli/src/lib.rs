//! Command-line front end: argument grammar, report records and dispatch.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use humbert_core::arith::euler_phi;
use humbert_core::corank1::{corank1_limit, sl2_mod_m_orbit, track_limit_corank1, TorsionClass};
use humbert_core::corank2::{
    boundary_intersection_points, branch_multiplicity, distance3, peripheral_point,
    psi_limit_family, BranchMultiplicity,
};
use humbert_core::families::{
    closed_form_sublattice, exp_image_locus, expected_line, exponent_of_subtorus, line_distance,
    matching_vector, FamilyId,
};
use humbert_core::mumford::{
    degenerate_fiber, negative_control_generators, quotient_cycle_oracle, verify_group_law,
    verify_ideal_invariance, verify_ideal_invariance_with, DualGraph, StratumId,
};
use humbert_core::siegel::{
    enumerate_vectors, humbert_residual, in_siegel, sample_point, DiscriminantVector,
};
use humbert_core::verify::{expected_polygon, run_suite, SuiteConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "humbert",
    version,
    about = "Boundary computations for Humbert surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Ce,
    Inf,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e: Option<i64>,
}

impl FamilyArgs {
    fn family(&self) -> Result<FamilyId, Failure> {
        match self.family {
            FamilyKind::Inf => Ok(FamilyId::Infinity),
            FamilyKind::Ce => match (self.c, self.e) {
                (Some(c), Some(e)) => Ok(FamilyId::Finite { c, e }),
                _ => Err(Failure::Usage("--family ce requires --c and --e".into())),
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primitive discriminant vectors of exponent m in a coefficient box.
    EnumerateVectors {
        #[arg(long)]
        m: i64,
        /// Coefficient bound; defaults to m.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// A random point on the Humbert surface of a vector.
    HumbertSample {
        /// Vector as a,b,c,d,e.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Track e1 along Im tau11 -> infinity on the surface of (0,m,c,0,e).
    LimitCorank1 {
        #[arg(long)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
        /// tau22 as re,im.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        tau22: String,
    },
    /// Track psi along T_{z, hi} as h -> infinity.
    LimitCorank2 {
        #[arg(long)]
        m: i64,
        /// z as re,im.
        #[arg(long, default_value = "0.1,0.3", allow_hyphen_values = true)]
        z: String,
    },
    /// Points of the closure of C_m on the peripheral line.
    CountBoundaryPoints {
        #[arg(long)]
        m: i64,
    },
    /// Vanishing orders of the branch (a, b) at the peripheral line.
    BranchMultiplicity {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Orbit of an order-m torsion class under SL(2, Z/m).
    OrbitSl2 {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 0)]
        c: i64,
        #[arg(long, default_value_t = 1)]
        e: i64,
    },
    /// Homomorphism law of the period group action.
    VerifyYAction {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Invariance of the family ideal under the subgroup generator.
    VerifyIdealInvariance {
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Dual graph of the degenerate elliptic curve over a stratum.
    FiberDualgraph {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        stratum: StratumId,
    },
    /// Type of the degenerate surface and curve over a stratum.
    ClassifySurface {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        stratum: StratumId,
    },
    /// Exponent of the elliptic curve of a family, by the lattice oracle.
    ExponentCheck {
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Every batch check with m ranges capped at m-max.
    VerifyAll {
        #[arg(long, default_value_t = 12)]
        m_max: i64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::EnumerateVectors { .. } => "enumerate-vectors",
            Self::HumbertSample { .. } => "humbert-sample",
            Self::LimitCorank1 { .. } => "limit-corank1",
            Self::LimitCorank2 { .. } => "limit-corank2",
            Self::CountBoundaryPoints { .. } => "count-boundary-points",
            Self::BranchMultiplicity { .. } => "branch-multiplicity",
            Self::OrbitSl2 { .. } => "orbit-sl2",
            Self::VerifyYAction { .. } => "verify-y-action",
            Self::VerifyIdealInvariance { .. } => "verify-ideal-invariance",
            Self::FiberDualgraph { .. } => "fiber-dualgraph",
            Self::ClassifySurface { .. } => "classify-surface",
            Self::ExponentCheck { .. } => "exponent-check",
            Self::VerifyAll { .. } => "verify-all",
        }
    }

    fn m(&self) -> Option<i64> {
        match self {
            Self::EnumerateVectors { m, .. }
            | Self::LimitCorank1 { m, .. }
            | Self::LimitCorank2 { m, .. }
            | Self::CountBoundaryPoints { m }
            | Self::BranchMultiplicity { m, .. }
            | Self::OrbitSl2 { m, .. }
            | Self::VerifyIdealInvariance { m, .. }
            | Self::FiberDualgraph { m, .. }
            | Self::ClassifySurface { m, .. }
            | Self::ExponentCheck { m, .. }
            | Self::VerifyAll { m_max: m } => Some(*m),
            Self::HumbertSample { .. } | Self::VerifyYAction { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
}

/// Fixed-shape report shared by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
    pub duration_ms: u64,
}

/// What a subcommand produces before formatting.
struct Computed {
    inputs: Value,
    outputs: Value,
    assertions: Vec<Assertion>,
    dot: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
}

impl From<humbert_core::Error> for Failure {
    fn from(e: humbert_core::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Exit status and serialized report of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn assertion(name: &str, pass: bool) -> Assertion {
    Assertion {
        name: name.to_owned(),
        pass,
    }
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn parse_complex(s: &str, flag: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parsed: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match parsed.as_deref() {
        Some([re, im]) => Ok(Complex64::new(*re, *im)),
        Some([re]) => Ok(Complex64::new(*re, 0.0)),
        _ => Err(Failure::Usage(format!("--{flag} expects re,im, got {s:?}"))),
    }
}

fn parse_vector(s: &str) -> Result<[i64; 5], Failure> {
    let parsed: Option<Vec<i64>> = s.split(',').map(|p| p.trim().parse().ok()).collect();
    parsed
        .and_then(|v| <[i64; 5]>::try_from(v).ok())
        .ok_or_else(|| Failure::Usage(format!("--v expects a,b,c,d,e, got {s:?}")))
}

fn require_m(m: i64) -> Result<(), Failure> {
    if m < 2 {
        return Err(Failure::Usage(format!("--m must be at least 2, got {m}")));
    }
    Ok(())
}

fn graph_json(graph: &DualGraph, m: i64, stratum: StratumId) -> Value {
    json!({
        "m": m,
        "stratum": stratum.label(),
        "surface_type": graph.surface_type.map(|s| s.to_string()),
        "vertices": graph.vertices,
        "edges": graph
            .edges
            .iter()
            .map(|&(i, j)| json!([graph.vertices[i], graph.vertices[j]]))
            .collect::<Vec<_>>(),
    })
}

fn curve_description(length: usize) -> String {
    match length {
        1 => "nodal curve".to_owned(),
        n => format!("{n}-gon of P1's"),
    }
}

fn compute(command: &Command, seed: u64) -> Result<Computed, Failure> {
    if let Some(m) = command.m() {
        require_m(m)?;
    }
    let mut dot = None;
    let (inputs, outputs, assertions) = match command {
        Command::EnumerateVectors { m, bound } => {
            let bound = bound.unwrap_or(*m);
            let vectors = enumerate_vectors(*m, bound)?;
            let valid = vectors.iter().all(|v| {
                let [a, b, c, d, e] = v.coeffs();
                b * b - 4 * (a * c + d * e) == m * m
                    && humbert_core::arith::gcd_all(&v.coeffs()) == 1
            });
            let sorted = vectors.windows(2).all(|w| w[0].coeffs() < w[1].coeffs());
            (
                json!({"m": m, "bound": bound}),
                json!({
                    "count": vectors.len(),
                    "vectors": vectors.iter().map(|v| v.coeffs()).collect::<Vec<_>>(),
                }),
                vec![
                    assertion("discriminant and primitivity", valid),
                    assertion("sorted and deduplicated", sorted),
                ],
            )
        }
        Command::HumbertSample { v } => {
            let coeffs = parse_vector(v)?;
            let v = DiscriminantVector::from_coeffs(coeffs)?;
            let tau = sample_point(&v, seed)?;
            let residual = humbert_residual(&v, &tau).norm();
            (
                json!({"v": coeffs, "seed": seed}),
                json!({
                    "m": v.m,
                    "tau": tau.entries().map(|r| r.map(cjson)),
                    "residual": residual,
                }),
                vec![
                    assertion("residual below 1e-12", residual < 1e-12),
                    assertion(
                        "in Siegel space",
                        in_siegel(tau.tau11, tau.tau12, tau.tau22),
                    ),
                ],
            )
        }
        Command::LimitCorank1 { m, c, e, tau22 } => {
            let tau22 = parse_complex(tau22, "tau22")?;
            let v = DiscriminantVector::torsion_family(*m, *c, *e)?;
            let curve = corank1_limit(&v)
                .ok_or_else(|| Failure::Usage(format!("{v} has no corank-1 boundary limit")))?;
            let heights = humbert_core::verify::corank1_heights();
            let points = track_limit_corank1(&v, tau22, &heights)?;
            let target = curve.limit(tau22);
            let distances: Vec<f64> = points.iter().map(|p| p.distance(&target)).collect();
            let last = *distances.last().expect("nonempty heights");
            (
                json!({"m": m, "c": c, "e": e, "tau22": cjson(tau22)}),
                json!({
                    "limit": [cjson(target.q), cjson(target.z), cjson(target.tau)],
                    "branch": format!("{:?}", curve.attained),
                    "heights": heights,
                    "distances": distances,
                }),
                vec![
                    assertion("final distance below 1e-6", last < 1e-6),
                    assertion(
                        "distances decrease",
                        distances.windows(2).all(|w| w[1] <= w[0]),
                    ),
                ],
            )
        }
        Command::LimitCorank2 { m, z } => {
            let z = parse_complex(z, "z")?;
            let heights: Vec<f64> = (1..=6).map(|k| 10.0 * f64::from(k)).collect();
            let points = psi_limit_family(*m, z, &heights)?;
            let target = peripheral_point(z);
            let distances: Vec<f64> = points.iter().map(|p| distance3(p, &target)).collect();
            let last = *distances.last().expect("nonempty heights");
            (
                json!({"m": m, "z": cjson(z)}),
                json!({
                    "limit": target.map(cjson),
                    "heights": heights,
                    "distances": distances,
                }),
                vec![assertion("distance at h=60 below 1e-6", last < 1e-6)],
            )
        }
        Command::CountBoundaryPoints { m } => {
            let bi = boundary_intersection_points(*m)?;
            let phi_plus_one = euler_phi(*m as u64) + 1;
            (
                json!({"m": m}),
                json!({
                    "count": bi.points.len(),
                    "phi_plus_one": phi_plus_one,
                    "points": bi.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "charts_agree": bi.charts_agree,
                }),
                vec![
                    assertion(
                        "count equals phi(m)+1",
                        bi.points.len() as u64 == phi_plus_one,
                    ),
                    assertion("charts agree", bi.charts_agree),
                ],
            )
        }
        Command::BranchMultiplicity { m, a, b } => {
            let mult = branch_multiplicity(*a, *b, *m)?;
            let outputs = match mult {
                BranchMultiplicity::Orders {
                    first,
                    second,
                    smooth,
                } => {
                    json!({"cancelled": false, "first": first, "second": second, "smooth": smooth})
                }
                BranchMultiplicity::Cancelled => json!({"cancelled": true}),
            };
            (json!({"m": m, "a": a, "b": b}), outputs, Vec::new())
        }
        Command::OrbitSl2 { m, c, e } => {
            let start = TorsionClass::new(*c, *e, *m)?;
            let orbit = sl2_mod_m_orbit(*m, start)?;
            let all = TorsionClass::all(*m);
            let canonical: std::collections::BTreeSet<_> =
                orbit.iter().map(TorsionClass::canonical).collect();
            (
                json!({"m": m, "c": c, "e": e}),
                json!({
                    "orbit_size": orbit.len(),
                    "order_m_classes": all.len(),
                    "classes_mod_sign": canonical.len(),
                    "orbit": orbit.iter().map(|t| [t.c, t.e]).collect::<Vec<_>>(),
                }),
                vec![assertion("orbit is every order-m class", orbit == all)],
            )
        }
        Command::VerifyYAction { samples } => {
            let report = verify_group_law(*samples, seed);
            (
                json!({"samples": samples, "seed": seed}),
                json!({
                    "pairs_checked": report.pairs_checked,
                    "failures": report.failures,
                    "rst_product": report.rst_product.0.map(|mono| mono.to_string()),
                }),
                vec![
                    assertion("r*s*t is identity", report.rst_is_identity),
                    assertion("action is a homomorphism", report.failures == 0),
                ],
            )
        }
        Command::VerifyIdealInvariance { m, family } => {
            let family = family.family()?;
            let report = verify_ideal_invariance(*m, &family)?;
            let controls: Vec<_> = negative_control_generators(&family, *m)
                .into_iter()
                .map(|g| verify_ideal_invariance_with(*m, &family, g))
                .collect();
            (
                json!({"m": m, "family": family.to_string()}),
                json!({
                    "generator": report.generator.to_string(),
                    "coordinate": format!("{:?}", report.coordinate),
                    "multiplier": report.multiplier.to_string(),
                    "relation": report.relation.to_string(),
                    "reduces_to_one": report.reduces_to_one,
                    "negative_controls": controls
                        .iter()
                        .map(|r| json!({
                            "generator": r.generator.to_string(),
                            "multiplier": r.multiplier.to_string(),
                            "reduces_to_one": r.reduces_to_one,
                        }))
                        .collect::<Vec<_>>(),
                }),
                vec![
                    assertion("generator preserves the ideal", report.reduces_to_one),
                    assertion(
                        "negative controls fail",
                        controls.iter().all(|r| !r.reduces_to_one),
                    ),
                ],
            )
        }
        Command::FiberDualgraph { m, stratum } => {
            let graph = degenerate_fiber(*m, *stratum)?;
            let expected = expected_polygon(*m, *stratum);
            let oracle = quotient_cycle_oracle(3 * expected + 2, expected)?;
            dot = Some(graph.to_dot());
            (
                json!({"m": m, "stratum": stratum.label()}),
                graph_json(&graph, *m, *stratum),
                vec![
                    assertion(
                        "cycle length matches oracle",
                        graph.cycle_length() == oracle.cycle_length(),
                    ),
                    assertion("arithmetic genus 1", graph.arithmetic_genus() == 1),
                ],
            )
        }
        Command::ClassifySurface { m, stratum } => {
            let graph = degenerate_fiber(*m, *stratum)?;
            let length = graph.cycle_length();
            (
                json!({"m": m, "stratum": stratum.label()}),
                json!({
                    "surface_type": stratum.surface_type().to_string(),
                    "curve": length.map(curve_description),
                    "cycle_length": length,
                }),
                vec![assertion(
                    "curve is a cycle of the expected length",
                    length == Some(expected_polygon(*m, *stratum)),
                )],
            )
        }
        Command::ExponentCheck { m, family } => {
            let family = family.family()?;
            let v = matching_vector(&family, *m)?;
            let tau = sample_point(&v, seed)?;
            let report = exponent_of_subtorus(&v, &tau)?;
            let closed = closed_form_sublattice(&family, *m)?;
            let line_dist = line_distance(&report.line, &expected_line(&family));
            (
                json!({"m": m, "family": family.to_string(), "seed": seed}),
                json!({
                    "exponent": report.exponent,
                    "vector": v.coeffs(),
                    "line": report.line.map(cjson),
                    "line_distance": line_dist,
                    "sublattice": report.sublattice.basis,
                    "elementary_divisors": report.elementary_divisors,
                    "locus": exp_image_locus(&family).to_string(),
                }),
                vec![
                    assertion("image is the expected line", line_dist < 1e-8),
                    assertion("exponent equals m", report.exponent == *m),
                    assertion(
                        "sublattice matches closed form",
                        report.sublattice == closed,
                    ),
                ],
            )
        }
        Command::VerifyAll { m_max } => {
            let results = run_suite(&SuiteConfig {
                m_max: *m_max,
                seed,
            });
            let assertions = results
                .iter()
                .map(|r| assertion(&format!("{}. {}", r.id, r.name), r.pass))
                .collect();
            (
                json!({"m_max": m_max, "seed": seed}),
                json!({"checks": results}),
                assertions,
            )
        }
    };
    Ok(Computed {
        inputs,
        outputs,
        assertions,
        dot,
    })
}

fn render_text(report: &ReportRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    if let Value::Object(map) = &report.inputs {
        for (k, v) in map {
            let _ = writeln!(out, "input {k}: {v}");
        }
    }
    if let Value::Object(map) = &report.outputs {
        for (k, v) in map {
            let _ = writeln!(out, "{k}: {v}");
        }
    }
    for a in &report.assertions {
        let _ = writeln!(out, "[{}] {}", if a.pass { "PASS" } else { "FAIL" }, a.name);
    }
    let _ = writeln!(out, "result: {}", if report.pass { "PASS" } else { "FAIL" });
    out
}

/// Parses `argv` (program name first), runs the command and formats its report.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let rendered = err.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let usage = |msg: String| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    if cli.format == Format::Dot && !matches!(cli.command, Command::FiberDualgraph { .. }) {
        return usage(format!(
            "--format dot is only available for fiber-dualgraph, not {}",
            cli.command.name()
        ));
    }
    let start = Instant::now();
    let computed = match compute(&cli.command, cli.seed) {
        Ok(c) => c,
        Err(Failure::Usage(msg)) => return usage(msg),
    };
    let pass = status(&computed.assertions) == 0;
    let report = ReportRecord {
        schema: SCHEMA_VERSION,
        command: cli.command.name().to_owned(),
        inputs: computed.inputs,
        outputs: computed.outputs,
        assertions: computed.assertions,
        pass,
        duration_ms: start.elapsed().as_millis() as u64,
    };
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Dot => computed.dot.expect("dot checked above"),
        Format::Text => render_text(&report),
    };
    let code = status(&report.assertions);
    match &cli.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

/// 0 when every assertion passes, 1 otherwise.
pub fn status(assertions: &[Assertion]) -> i32 {
    if assertions.iter().all(|a| a.pass) {
        0
    } else {
        1
    }
}

/// Drops the `duration_ms` field so two reports can be compared byte for byte.
pub fn strip_duration(report: &str) -> String {
    match serde_json::from_str::<Value>(report) {
        Ok(Value::Object(mut map)) => {
            map.remove("duration_ms");
            serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes")
        }
        _ => report.to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_assertion_maps_to_exit_1() {
        assert_eq!(status(&[]), 0);
        assert_eq!(status(&[assertion("a", true), assertion("b", false)]), 1);
    }

    #[test]
    fn complex_and_vector_parsing() {
        assert!(matches!(parse_complex("0.5,-2", "z"), Ok(z) if z == Complex64::new(0.5, -2.0)));
        assert!(parse_complex("a,b", "z").is_err());
        assert_eq!(parse_vector("0, 2, 1, 0, 1").ok(), Some([0, 2, 1, 0, 1]));
        assert!(parse_vector("0,2,1").is_err());
    }

    #[test]
    fn curve_names() {
        assert_eq!(curve_description(1), "nodal curve");
        assert_eq!(curve_description(5), "5-gon of P1's");
    }
}
