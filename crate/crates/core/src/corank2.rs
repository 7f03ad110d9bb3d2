//! The corank-2 boundary: the partial quotient `e₂`, the toric charts `ι_n`,
//! limits to the peripheral line, and the exact intersection of `C_m` with it.
//!
//! Branch limits are computed symbolically. A branch of `C_m` near the corank-2
//! cusp is a curve `t ↦ (t^b ρ^a, t^m)` with `ρ = e^{2πi/m}`; in each chart its
//! coordinates are monomials `t^k ρ^j`, and the limit `t → 0` only depends on
//! the signs of the exponents of `t` and on exact arithmetic in `ℤ[ρ]`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::siegel::{exp_2pi_i, PeriodMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub t1: Complex64,
    pub t2: Complex64,
    pub t3: Complex64,
}

impl TorusPoint {
    pub fn new(t1: Complex64, t2: Complex64, t3: Complex64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        if t1 == zero || t2 == zero || t3 == zero {
            return Err(Error::InvalidParameter(
                "torus coordinates must be nonzero".into(),
            ));
        }
        Ok(Self { t1, t2, t3 })
    }
}

/// A point of the chart `T_n ≅ ℂ³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub n: i64,
    pub x: [Complex64; 3],
}

/// `τ ↦ (e^{2πiτ₁₁}, e^{2πiτ₁₂}, e^{2πiτ₂₂})`.
pub fn e2_map(tau: &PeriodMatrix) -> TorusPoint {
    TorusPoint {
        t1: exp_2pi_i(tau.tau11),
        t2: exp_2pi_i(tau.tau12),
        t3: exp_2pi_i(tau.tau22),
    }
}

fn pow(z: Complex64, k: i64) -> Complex64 {
    z.powi(i32::try_from(k).expect("exponent fits in i32"))
}

/// `ι_n(t) = (t₁t₂^{−(2n+1)}t₃^{n(n+1)}, t₂t₃^{−n}, t₂^{−1}t₃^{n+1})`.
pub fn iota_n(p: &TorusPoint, n: i64) -> ChartPoint {
    ChartPoint {
        n,
        x: [
            p.t1 * pow(p.t2, -(2 * n + 1)) * pow(p.t3, n * (n + 1)),
            p.t2 * pow(p.t3, -n),
            pow(p.t2, -1) * pow(p.t3, n + 1),
        ],
    }
}

/// `ι(t) = (t₁t₂^{−1}, t₂, t₃t₂^{−1})`, the embedding used for the peripheral limit.
pub fn iota_sec3(p: &TorusPoint) -> [Complex64; 3] {
    [p.t1 / p.t2, p.t2, p.t3 / p.t2]
}

/// `j(t) = (t₁t₂, t₂t₃, t₂^{−1})`, the base coordinates of Mumford's construction.
pub fn j_map(p: &TorusPoint) -> [Complex64; 3] {
    [p.t1 * p.t2, p.t2 * p.t3, p.t2.inv()]
}

/// `ψ = ι ∘ e₂`.
pub fn psi(tau: &PeriodMatrix) -> [Complex64; 3] {
    iota_sec3(&e2_map(tau))
}

/// `Ψ = j ∘ e₂`.
pub fn psi_mumford(tau: &PeriodMatrix) -> [Complex64; 3] {
    j_map(&e2_map(tau))
}

/// `T_{z,τ} = [[τ, z], [z, (τ − (m−2)z)/(m−1)]]`, a point of
/// `H₂(1, −(m−2), −(m−1), 0, 0)`.
pub fn t_matrix(m: i64, z: Complex64, tau: Complex64) -> Result<PeriodMatrix> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    PeriodMatrix::new(tau, z, (tau - z * (m - 2) as f64) / (m - 1) as f64)
}

/// The point `(0, e^{2πiz}, 0)` of the peripheral axis.
pub fn peripheral_point(z: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    [zero, exp_2pi_i(z), zero]
}

pub fn distance3(p: &[Complex64; 3], q: &[Complex64; 3]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `ψ(T_{z, h·i})` for each height `h`.
pub fn psi_limit_family(m: i64, z: Complex64, heights: &[f64]) -> Result<Vec<[Complex64; 3]>> {
    heights
        .iter()
        .map(|&h| Ok(psi(&t_matrix(m, z, Complex64::new(0.0, h))?)))
        .collect()
}

/// Charts `n` in which the branch with exponent `b` has a boundary point:
/// `−1 + b/m ≤ n ≤ b/m`.
pub fn chart_boundary_range(b: i64, m: i64) -> Result<Vec<i64>> {
    if m < 1 || !(0..m).contains(&b) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= b < m, got b = {b}, m = {m}"
        )));
    }
    // m(n + 1) ≥ b and mn ≤ b
    let lo = (b - m).div_euclid(m) + i64::from((b - m).rem_euclid(m) != 0);
    let hi = b.div_euclid(m);
    Ok((lo..=hi).collect())
}

/// Laurent polynomial in `t` with coefficients in `ℤ[ρ]`.
#[derive(Debug, Clone)]
pub struct TSeries {
    m: u64,
    terms: BTreeMap<i64, Cyclotomic>,
}

impl TSeries {
    /// `t^k ρ^j`.
    pub fn monomial(m: u64, k: i64, j: i64) -> Self {
        Self {
            m,
            terms: BTreeMap::from([(k, Cyclotomic::root_power(m, j))]),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(|| Cyclotomic::zero(self.m));
            *entry = &*entry + c;
        }
        Self { m: self.m, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            m: self.m,
            terms: BTreeMap::new(),
        };
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let entry = out
                    .terms
                    .entry(k1 + k2)
                    .or_insert_with(|| Cyclotomic::zero(self.m));
                *entry = &*entry + &(c1 * c2);
            }
        }
        out
    }

    /// Lowest exponent with nonzero coefficient; `None` for the zero series.
    pub fn order(&self) -> Option<i64> {
        self.terms
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(k, _)| *k)
    }

    /// Value at `t → 0`, or `None` if the series has a pole there.
    pub fn limit_at_zero(&self) -> Option<Cyclotomic> {
        match self.order() {
            None => Some(Cyclotomic::zero(self.m)),
            Some(k) if k < 0 => None,
            Some(0) => Some(self.terms[&0].clone()),
            Some(_) => Some(Cyclotomic::zero(self.m)),
        }
    }
}

/// Limit of one branch `(a, b)` in chart `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPoint {
    pub a: i64,
    pub b: i64,
    pub n: i64,
    /// Limit in `ℂ²` before the swap quotient.
    pub limit_xy: [Cyclotomic; 2],
    /// Limit of `(x + y, xy)`.
    pub limit_sym: [Cyclotomic; 2],
}

/// The branch `(t^b ρ^a, t^m)` pushed through the chart
/// `(u, v) ↦ (u v^{−n}, u^{−1} v^{n+1})`, as a pair of `t`-monomials.
pub fn branch_in_chart(a: i64, b: i64, m: i64, n: i64) -> [TSeries; 2] {
    let mu = m as u64;
    // u^p v^q = t^{bp + mq} ρ^{ap}
    let monomial = |p: i64, q: i64| TSeries::monomial(mu, b * p + m * q, a * p);
    [monomial(1, -n), monomial(-1, n + 1)]
}

pub fn branch_limit(a: i64, b: i64, m: i64, n: i64) -> Option<BranchPoint> {
    let [x, y] = branch_in_chart(a, b, m, n);
    let limit_xy = [x.limit_at_zero()?, y.limit_at_zero()?];
    let limit_sym = [x.add(&y).limit_at_zero()?, x.mul(&y).limit_at_zero()?];
    Some(BranchPoint {
        a,
        b,
        n,
        limit_xy,
        limit_sym,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    /// The image of `(0, 0)`, reached by every branch with `b ≠ 0`.
    Origin,
    /// `(ρ^k, 0)`, reached smoothly by the branch `(k, 0)`.
    RootOfUnity { k: i64 },
}

/// A point of `C_m ∩ ℙ¹_∞` in the swap-quotient coordinates `(x + y, xy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub kind: PointKind,
    pub sym: [Cyclotomic; 2],
}

impl BoundaryPoint {
    pub fn to_complex(&self) -> [Complex64; 2] {
        [self.sym[0].to_complex(), self.sym[1].to_complex()]
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sym[0], self.sym[1])
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryIntersection {
    pub m: i64,
    /// Distinct points, origin first, then roots of unity by exponent.
    pub points: Vec<BoundaryPoint>,
    /// Every branch limit in every chart where it exists.
    pub branches: Vec<BranchPoint>,
    /// Chart `−1` reproduces the chart-0 limits of the `b = 0` branches.
    pub charts_agree: bool,
}

fn classify(sym: &[Cyclotomic; 2]) -> Option<PointKind> {
    if !sym[1].is_zero() {
        return None;
    }
    if sym[0].is_zero() {
        Some(PointKind::Origin)
    } else {
        sym[0]
            .as_root_of_unity()
            .map(|k| PointKind::RootOfUnity { k })
    }
}

fn dedup_points(branches: &[&BranchPoint]) -> Vec<BoundaryPoint> {
    let mut points: BTreeMap<[Vec<i64>; 2], BoundaryPoint> = BTreeMap::new();
    for br in branches {
        let key = [br.limit_sym[0].reduced(), br.limit_sym[1].reduced()];
        points.entry(key).or_insert_with(|| {
            let kind = classify(&br.limit_sym).expect("branch limits lie on the peripheral axis");
            BoundaryPoint {
                kind,
                sym: br.limit_sym.clone(),
            }
        });
    }
    let mut points: Vec<BoundaryPoint> = points.into_values().collect();
    points.sort_by_key(|p| p.kind);
    points
}

/// Exact computation of `C_m ∩ ℙ¹_∞` from all branches `(a, b)` with
/// `gcd(a, b, m) = 1`, `0 ≤ a, b < m`.
pub fn boundary_intersection_points(m: i64) -> Result<BoundaryIntersection> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    let mut branches = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if gcd_all(&[a, b, m]) != 1 {
                continue;
            }
            for n in chart_boundary_range(b, m)? {
                let br = branch_limit(a, b, m, n).expect("chart range guarantees a finite limit");
                branches.push(br);
            }
        }
    }
    let chart0: Vec<&BranchPoint> = branches.iter().filter(|b| b.n == 0).collect();
    let points = dedup_points(&chart0);

    let chart_minus1 = dedup_points(&branches.iter().filter(|b| b.n == -1).collect::<Vec<_>>());
    let chart0_b0 = dedup_points(
        &chart0
            .iter()
            .copied()
            .filter(|b| b.b == 0)
            .collect::<Vec<_>>(),
    );
    let charts_agree = chart_minus1 == chart0_b0 && chart_minus1.iter().all(|p| points.contains(p));

    Ok(BoundaryIntersection {
        m,
        points,
        branches,
        charts_agree,
    })
}

/// Vanishing orders of `(t^b ρ^a + t^{m−b} ρ^{−a}, t^m)` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchMultiplicity {
    Orders {
        first: i64,
        second: i64,
        smooth: bool,
    },
    /// `m = 2b` and `ρ^a + ρ^{−a} = 0`: the first coordinate vanishes identically.
    Cancelled,
}

pub fn branch_multiplicity(a: i64, b: i64, m: i64) -> Result<BranchMultiplicity> {
    if m < 2 || !(1..m).contains(&b) || gcd_all(&[a, b, m]) != 1 {
        return Err(Error::InvalidParameter(format!(
            "need gcd(a, b, m) = 1 and 0 < b < m, got a = {a}, b = {b}, m = {m}"
        )));
    }
    let mu = m as u64;
    let first = TSeries::monomial(mu, b, a).add(&TSeries::monomial(mu, m - b, -a));
    Ok(match first.order() {
        None => BranchMultiplicity::Cancelled,
        Some(k) => BranchMultiplicity::Orders {
            first: k,
            second: m,
            smooth: k.min(m) == 1,
        },
    })
}
