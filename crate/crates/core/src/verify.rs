//! Batch checks of the main identities, each summarized by a [`CheckResult`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::euler_phi;
use crate::corank1::{corank1_limit, sl2_mod_m_orbit, track_limit_corank1, Branch, TorsionClass};
use crate::corank2::{distance3, peripheral_point, psi_limit_family};
use crate::error::Result;
use crate::families::{
    closed_form_sublattice, expected_line, exponent_of_subtorus, family_period_matrix,
    line_distance, matching_vector, subvariety_image, FamilyId,
};
use crate::mumford::{
    degenerate_fiber, negative_control_generators, quotient_cycle_oracle, verify_group_law,
    verify_ideal_invariance, verify_ideal_invariance_with, StratumId,
};
use crate::siegel::{humbert_residual, sample_point, DiscriminantVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl CheckResult {
    fn new(id: u8, name: &str, cases: usize, failures: Vec<String>) -> Self {
        Self {
            id,
            name: name.to_owned(),
            cases,
            pass: failures.is_empty() && cases > 0,
            failures,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Largest `m` used by every check.
    pub m_max: i64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { m_max: 12, seed: 0 }
    }
}

/// `C_m ∩ ℙ¹_∞` has `φ(m) + 1` points.
pub fn check_boundary_count(ms: impl IntoIterator<Item = i64>) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for m in ms {
        cases += 1;
        match crate::corank2::boundary_intersection_points(m) {
            Ok(bi) => {
                let expected = euler_phi(m as u64) as usize + 1;
                if bi.points.len() != expected || !bi.charts_agree {
                    failures.push(format!(
                        "m={m}: {} points, expected {expected}, charts agree: {}",
                        bi.points.len(),
                        bi.charts_agree
                    ));
                }
            }
            Err(e) => failures.push(format!("m={m}: {e}")),
        }
    }
    CheckResult::new(1, "boundary point count", cases, failures)
}

/// `SL(2, ℤ/m)` is transitive on classes of order `m`.
pub fn check_transitivity(ms: impl IntoIterator<Item = i64>) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for m in ms {
        let all = TorsionClass::all(m);
        let starts = [all.first(), all.last()];
        for start in starts.into_iter().flatten() {
            cases += 1;
            match sl2_mod_m_orbit(m, *start) {
                Ok(orbit) if orbit == all => {}
                Ok(orbit) => failures.push(format!(
                    "m={m}: orbit of ({}, {}) has {} of {} classes",
                    start.c,
                    start.e,
                    orbit.len(),
                    all.len()
                )),
                Err(e) => failures.push(format!("m={m}: {e}")),
            }
        }
    }
    CheckResult::new(2, "SL(2, Z/m) transitivity", cases, failures)
}

/// Heights `5, 6, …, 40` used by the corank-1 check.
pub fn corank1_heights() -> Vec<f64> {
    (5..=40).map(f64::from).collect()
}

/// Corank-1 limits of `(0, m, c, 0, e)` along `Im τ₁₁ → ∞`.
pub fn check_corank1_limits(samples: usize, m_max: i64, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights = corank1_heights();
    let mut failures = Vec::new();
    for _ in 0..samples {
        let m = rng.gen_range(2..=m_max);
        let (c, e) = loop {
            let (c, e) = (rng.gen_range(0..=m), rng.gen_range(0..=m));
            if (FamilyId::Finite { c, e }).validate(m).is_ok() {
                break (c, e);
            }
        };
        let tau22 = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.5));
        let label = format!("m={m} c={c} e={e} tau22={tau22}");
        let Ok(v) = DiscriminantVector::torsion_family(m, c, e) else {
            failures.push(format!("{label}: not a discriminant vector"));
            continue;
        };
        let Some(curve) = corank1_limit(&v) else {
            failures.push(format!("{label}: no corank-1 limit"));
            continue;
        };
        if curve.attained != Branch::Minus {
            failures.push(format!("{label}: wrong branch"));
        }
        let target = curve.limit(tau22);
        match track_limit_corank1(&v, tau22, &heights) {
            Ok(points) => {
                let d: Vec<f64> = points.iter().map(|p| p.distance(&target)).collect();
                let last = *d.last().expect("nonempty heights");
                if last >= 1e-6 {
                    failures.push(format!("{label}: distance {last:e} at top height"));
                }
                if d.windows(2).any(|w| w[1] > w[0]) {
                    failures.push(format!("{label}: distances not monotone"));
                }
            }
            Err(err) => failures.push(format!("{label}: {err}")),
        }
    }
    CheckResult::new(3, "corank-1 limit law", samples, failures)
}

/// `ψ(T_{z, h·i}) → (0, e^{2πiz}, 0)`.
pub fn check_corank2_limits(samples: usize, m_max: i64, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut cases = 0;
    while cases < samples {
        let m = rng.gen_range(2..=m_max);
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.05..1.0));
        // T_{z, hi} must stay in H₂ along the whole path; skip draws that leave it
        let Ok(points) = psi_limit_family(m, z, &[10.0, 60.0]) else {
            continue;
        };
        cases += 1;
        let d = distance3(&points[1], &peripheral_point(z));
        if d >= 1e-6 {
            failures.push(format!("m={m} z={z}: distance {d:e} at h=60"));
        }
    }
    CheckResult::new(4, "corank-2 limit law", cases, failures)
}

/// `r·s·t = (1, 1, 1)` and the action is a homomorphism.
pub fn check_y_algebra(samples: usize, seed: u64) -> CheckResult {
    let report = verify_group_law(samples, seed);
    let mut failures = Vec::new();
    if !report.rst_is_identity {
        failures.push(format!("r*s*t = {:?}", report.rst_product));
    }
    if report.failures > 0 {
        failures.push(format!(
            "{} pairs violate the homomorphism law",
            report.failures
        ));
    }
    CheckResult::new(5, "Y action algebra", report.pairs_checked, failures)
}

/// The family generators preserve the ideals on the loci; negative controls do not.
pub fn check_ideal_invariance(ms: impl IntoIterator<Item = i64>) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for m in ms {
        let mut families: Vec<FamilyId> = (0..=m)
            .filter_map(|c| {
                (0..=m)
                    .map(|e| FamilyId::Finite { c, e })
                    .find(|f| f.validate(m).is_ok())
            })
            .collect();
        families.push(FamilyId::Infinity);
        for family in families {
            cases += 1;
            match verify_ideal_invariance(m, &family) {
                Ok(r) if r.reduces_to_one => {}
                Ok(r) => failures.push(format!(
                    "m={m} family={family}: {} does not reduce on {}",
                    r.multiplier, r.relation
                )),
                Err(e) => failures.push(format!("m={m} family={family}: {e}")),
            }
            for g in negative_control_generators(&family, m) {
                cases += 1;
                if verify_ideal_invariance_with(m, &family, g).reduces_to_one {
                    failures.push(format!("m={m} family={family}: control {g} passed"));
                }
            }
        }
    }
    CheckResult::new(6, "ideal invariance", cases, failures)
}

/// Expected cycle length of the fiber over each stratum.
pub fn expected_polygon(m: i64, stratum: StratumId) -> usize {
    let n = match stratum {
        StratumId::StratumI => m,
        StratumId::StratumII => m - 1,
        StratumId::StratumIII => 2 * m - 1,
    };
    n as usize
}

/// Fiber dual graphs are `(m, m−1, 2m−1)`-gons and match the quotient oracle.
pub fn check_fiber_polygons(ms: impl IntoIterator<Item = i64>) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for m in ms {
        for stratum in StratumId::ALL {
            cases += 1;
            let label = format!("m={m} stratum={}", stratum.label());
            let graph = match degenerate_fiber(m, stratum) {
                Ok(g) => g,
                Err(e) => {
                    failures.push(format!("{label}: {e}"));
                    continue;
                }
            };
            let expected = expected_polygon(m, stratum);
            if graph.cycle_length() != Some(expected) {
                failures.push(format!("{label}: cycle length {:?}", graph.cycle_length()));
            }
            if graph.vertices.len() != graph.edges.len() || graph.arithmetic_genus() != 1 {
                failures.push(format!(
                    "{label}: arithmetic genus {}",
                    graph.arithmetic_genus()
                ));
            }
            if graph.surface_type != Some(stratum.surface_type()) {
                failures.push(format!("{label}: surface type {:?}", graph.surface_type));
            }
            match quotient_cycle_oracle(3 * expected + 2, expected) {
                Ok(oracle) => {
                    if oracle.cycle_length() != graph.cycle_length() || oracle.edges != graph.edges
                    {
                        failures.push(format!("{label}: oracle disagrees"));
                    }
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    CheckResult::new(7, "fiber polygons", cases, failures)
}

/// The image of `m·id − J·M_v` is `W`, and the polarization restricts with Pfaffian `m`.
pub fn check_exponents(ms: impl IntoIterator<Item = i64>, seed: u64) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for m in ms {
        for family in FamilyId::all(m) {
            cases += 1;
            let label = format!("m={m} family={family}");
            let outcome = (|| -> Result<Option<String>> {
                let v = matching_vector(&family, m)?;
                let tau = sample_point(&v, seed.wrapping_add(m as u64))?;
                let line = subvariety_image(&v, &tau)?;
                let dist = line_distance(&line, &expected_line(&family));
                if dist >= 1e-8 {
                    return Ok(Some(format!("line off by {dist:e}")));
                }
                let report = exponent_of_subtorus(&v, &tau)?;
                if report.exponent != m {
                    return Ok(Some(format!("exponent {}", report.exponent)));
                }
                if report.sublattice != closed_form_sublattice(&family, m)? {
                    return Ok(Some("sublattice differs from closed form".into()));
                }
                Ok(None)
            })();
            match outcome {
                Ok(None) => {}
                Ok(Some(msg)) => failures.push(format!("{label}: {msg}")),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    CheckResult::new(8, "exponent criterion", cases, failures)
}

/// Family period matrices lie on the Humbert surface of their matching vector.
pub fn check_humbert_identities(samples: usize, m_max: i64, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut attempts = 0;
    while cases < samples && attempts < 100 * samples {
        attempts += 1;
        let m = rng.gen_range(2..=m_max);
        let families = FamilyId::all(m);
        let family = families[rng.gen_range(0..families.len())];
        let p1 = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.5));
        let p2 = match family {
            FamilyId::Finite { .. } => {
                Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.5))
            }
            FamilyId::Infinity => Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.0..0.5)),
        };
        let Ok(tau) = family_period_matrix(&family, m, p1, p2) else {
            continue;
        };
        cases += 1;
        match matching_vector(&family, m) {
            Ok(v) => {
                let r = humbert_residual(&v, &tau).norm();
                if r >= 1e-12 {
                    failures.push(format!("m={m} family={family}: residual {r:e}"));
                }
            }
            Err(e) => failures.push(format!("m={m} family={family}: {e}")),
        }
    }
    if cases < samples {
        failures.push(format!("only {cases} of {samples} draws landed in H2"));
    }
    CheckResult::new(9, "Humbert identities", cases, failures)
}

/// Every check with all `m` ranges capped at `m_max`.
pub fn run_suite(config: &SuiteConfig) -> Vec<CheckResult> {
    let ms = || 2..=config.m_max.max(2);
    let seed = config.seed;
    vec![
        check_boundary_count(ms()),
        check_transitivity(ms()),
        check_corank1_limits(200, config.m_max.clamp(2, 10), seed),
        check_corank2_limits(100, config.m_max.max(2), seed),
        check_y_algebra(1000, seed),
        check_ideal_invariance(ms()),
        check_fiber_polygons(ms()),
        check_exponents(2..=config.m_max.clamp(2, 10), seed),
        check_humbert_identities(1000, config.m_max.max(2), seed),
    ]
}
