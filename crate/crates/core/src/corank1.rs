//! The corank-1 boundary: the partial quotient `e₁`, limits of `H₂(v)` at
//! `Im τ₁₁ → ∞`, and the torsion-class structure of `K⁰(1)[m]`.

use std::collections::{BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, modp};
use crate::error::{Error, Result};
use crate::siegel::{exp_2pi_i, DiscriminantVector, PeriodMatrix};

/// A point `(q, z, τ)` of `ℂ × ℂ × ℍ`; `q = 0` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corank1Point {
    pub q: Complex64,
    pub z: Complex64,
    pub tau: Complex64,
}

impl Corank1Point {
    pub fn distance(&self, other: &Self) -> f64 {
        ((self.q - other.q).norm_sqr()
            + (self.z - other.z).norm_sqr()
            + (self.tau - other.tau).norm_sqr())
        .sqrt()
    }

    pub fn is_boundary(&self) -> bool {
        self.q == Complex64::new(0.0, 0.0)
    }
}

/// `τ ↦ (e^{2πiτ₁₁}, τ₁₂, τ₂₂)`.
pub fn e1_map(tau: &PeriodMatrix) -> Corank1Point {
    Corank1Point {
        q: exp_2pi_i(tau.tau11),
        z: tau.tau12,
        tau: tau.tau22,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `z = −(cτ + e)/m`
    Minus,
    /// `z = +(cτ + e)/m`
    Plus,
}

/// The boundary curve `τ ↦ (0, ∓(cτ + e)/m, τ)` of `H₂(0, ±m, c, 0, e)`.
///
/// Both signed parametrizations are kept. [`Corank1Curve::attained`] is the
/// one that sequences in `H₂(v)` actually converge to: `z = −(cτ + e)/b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corank1Curve {
    pub m: i64,
    pub c: i64,
    pub e: i64,
    pub attained: Branch,
}

impl Corank1Curve {
    pub fn point(&self, tau: Complex64, branch: Branch) -> Corank1Point {
        let z = (tau * self.c as f64 + self.e as f64) / self.m as f64;
        let z = match branch {
            Branch::Minus => -z,
            Branch::Plus => z,
        };
        Corank1Point {
            q: Complex64::new(0.0, 0.0),
            z,
            tau,
        }
    }

    pub fn branches(&self, tau: Complex64) -> [Corank1Point; 2] {
        [
            self.point(tau, Branch::Minus),
            self.point(tau, Branch::Plus),
        ]
    }

    pub fn limit(&self, tau: Complex64) -> Corank1Point {
        self.point(tau, self.attained)
    }

    /// The torsion class `(c, e) mod m` this curve maps to in `K⁰(1)[m]`.
    pub fn torsion_class(&self) -> TorsionClass {
        TorsionClass::new(self.c, self.e, self.m).expect("primitive vector gives order m")
    }
}

/// The closure of `e₁(H₂(v))` meets the boundary exactly when `a = d = 0`.
pub fn corank1_limit(v: &DiscriminantVector) -> Option<Corank1Curve> {
    if v.a != 0 || v.d != 0 {
        return None;
    }
    Some(Corank1Curve {
        m: v.m,
        c: v.c,
        e: v.e,
        attained: if v.b > 0 { Branch::Minus } else { Branch::Plus },
    })
}

/// `e₁` of the points of `H₂(v)` with `τ₁₁ = h·i` and the given `τ₂₂`, one per
/// height.
pub fn track_limit_corank1(
    v: &DiscriminantVector,
    tau22: Complex64,
    heights: &[f64],
) -> Result<Vec<Corank1Point>> {
    if v.a != 0 || v.d != 0 {
        return Err(Error::InvalidVector(v.coeffs()));
    }
    if tau22.im <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Im(tau22) = {} must be positive",
            tau22.im
        )));
    }
    let tau12 = -(tau22 * v.c as f64 + v.e as f64) / v.b as f64;
    heights
        .iter()
        .map(|&h| {
            let tau = PeriodMatrix::new(Complex64::new(0.0, h), tau12, tau22)?;
            Ok(e1_map(&tau))
        })
        .collect()
}

/// A pair `(c, e)` of residues mod `m` generating a cyclic group of order `m`.
///
/// Stands for the `m`-torsion point `(cτ + e)/m` of `ℂ/⟨1, τ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionClass {
    pub c: i64,
    pub e: i64,
    pub m: i64,
}

impl TorsionClass {
    pub fn new(c: i64, e: i64, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus {m} must be positive"
            )));
        }
        if gcd_all(&[c, e, m]) != 1 {
            return Err(Error::NotOrderM { c, e, m });
        }
        Ok(Self {
            c: modp(c, m),
            e: modp(e, m),
            m,
        })
    }

    pub fn negated(&self) -> Self {
        Self {
            c: modp(-self.c, self.m),
            e: modp(-self.e, self.m),
            m: self.m,
        }
    }

    /// Lexicographically smallest of `±(c, e)`; the representative in `K⁰(1)[m]`.
    pub fn canonical(&self) -> Self {
        (*self).min(self.negated())
    }

    pub fn point(&self, tau: Complex64) -> Complex64 {
        (tau * self.c as f64 + self.e as f64) / self.m as f64
    }

    /// All classes of order exactly `m`.
    pub fn all(m: i64) -> BTreeSet<Self> {
        (0..m)
            .flat_map(|c| (0..m).map(move |e| (c, e)))
            .filter_map(|(c, e)| Self::new(c, e, m).ok())
            .collect()
    }
}

pub type Mat2 = [[i64; 2]; 2];

/// Every matrix of `SL(2, ℤ/m)`, entries reduced to `[0, m)`.
pub fn sl2_mod_m(m: i64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if modp(a * d - b * c, m) == modp(1, m) {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

/// Orbit of `start` under `SL(2, ℤ/m)` acting on the right of row vectors `(c, e)`.
pub fn sl2_mod_m_orbit(m: i64, start: TorsionClass) -> Result<BTreeSet<TorsionClass>> {
    if m < 2 || start.m != m {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2 matching the class modulus, got m = {m}, class modulus {}",
            start.m
        )));
    }
    Ok(sl2_mod_m(m)
        .into_iter()
        .map(|[[p, q], [r, s]]| TorsionClass {
            c: modp(start.c * p + start.e * r, m),
            e: modp(start.c * q + start.e * s, m),
            m,
        })
        .collect())
}

/// An element of the group acting on `ℂ × ℍ` whose quotient is `K⁰(1)`:
/// `(z, τ) ↦ ((εz + Mτ + N)/(cτ + d), (aτ + b)/(cτ + d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryGroupElement {
    pub epsilon: i64,
    pub mm: i64,
    pub nn: i64,
    pub sl2: Mat2,
}

impl BoundaryGroupElement {
    pub fn new(epsilon: i64, mm: i64, nn: i64, sl2: Mat2) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} is not ±1"
            )));
        }
        let [[a, b], [c, d]] = sl2;
        if a * d - b * c != 1 {
            return Err(Error::InvalidParameter(format!(
                "{sl2:?} has determinant != 1"
            )));
        }
        Ok(Self {
            epsilon,
            mm,
            nn,
            sl2,
        })
    }

    pub fn identity() -> Self {
        Self {
            epsilon: 1,
            mm: 0,
            nn: 0,
            sl2: [[1, 0], [0, 1]],
        }
    }

    pub fn apply(&self, z: Complex64, tau: Complex64) -> (Complex64, Complex64) {
        let [[a, b], [c, d]] = self.sl2.map(|row| row.map(|x| x as f64));
        let j = tau * c + d;
        (
            (z * self.epsilon as f64 + tau * self.mm as f64 + self.nn as f64) / j,
            (tau * a + b) / j,
        )
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Self) -> Self {
        let [[a1, b1], [c1, d1]] = first.sl2;
        let [[a2, b2], [c2, d2]] = self.sl2;
        Self {
            epsilon: self.epsilon * first.epsilon,
            mm: self.epsilon * first.mm + a1 * self.mm + c1 * self.nn,
            nn: self.epsilon * first.nn + b1 * self.mm + d1 * self.nn,
            sl2: [
                [a2 * a1 + b2 * c1, a2 * b1 + b2 * d1],
                [c2 * a1 + d2 * c1, c2 * b1 + d2 * d1],
            ],
        }
    }

    /// Induced map on `m`-torsion points `(x + yτ)/m ↦ (x' + y'τ')/m`, where
    /// `(x', y')ᵀ = ε·(a, −b; −c, d)·(x, y)ᵀ mod m`. The translation part only
    /// moves points by lattice vectors.
    pub fn act_on_torsion(&self, class: &TorsionClass) -> TorsionClass {
        let [[a, b], [c, d]] = self.sl2;
        let (x, y) = (class.e, class.c);
        let x2 = self.epsilon * (a * x - b * y);
        let y2 = self.epsilon * (-c * x + d * y);
        TorsionClass {
            c: modp(y2, class.m),
            e: modp(x2, class.m),
            m: class.m,
        }
    }
}

/// Coordinates `(α, β)` with `w = α + βτ`.
pub fn lattice_coordinates(w: Complex64, tau: Complex64) -> (f64, f64) {
    let beta = w.im / tau.im;
    (w.re - beta * tau.re, beta)
}

/// Orbit of a class under the group generated by `S`, `T` and `ε = −1`,
/// acting through [`BoundaryGroupElement::act_on_torsion`].
pub fn boundary_group_orbit(start: TorsionClass) -> BTreeSet<TorsionClass> {
    let generators = [
        BoundaryGroupElement::new(1, 0, 0, [[0, -1], [1, 0]]).unwrap(),
        BoundaryGroupElement::new(1, 0, 0, [[1, 1], [0, 1]]).unwrap(),
        BoundaryGroupElement::new(-1, 0, 0, [[1, 0], [0, 1]]).unwrap(),
    ];
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(class) = queue.pop_front() {
        for g in &generators {
            let next = g.act_on_torsion(&class);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
        let mut g = [[1i64, 0], [0, 1]];
        for _ in 0..rng.gen_range(1..6) {
            let k = rng.gen_range(-3..=3);
            let step = if rng.gen_bool(0.5) {
                [[1, k], [0, 1]]
            } else {
                [[1, 0], [k, 1]]
            };
            g = [
                [
                    g[0][0] * step[0][0] + g[0][1] * step[1][0],
                    g[0][0] * step[0][1] + g[0][1] * step[1][1],
                ],
                [
                    g[1][0] * step[0][0] + g[1][1] * step[1][0],
                    g[1][0] * step[0][1] + g[1][1] * step[1][1],
                ],
            ];
        }
        g
    }

    fn random_element(rng: &mut ChaCha8Rng) -> BoundaryGroupElement {
        BoundaryGroupElement::new(
            if rng.gen_bool(0.5) { 1 } else { -1 },
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
            random_sl2(rng),
        )
        .unwrap()
    }

    #[test]
    fn e1_examples() {
        let p = e1_map(&PeriodMatrix::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 1.0)).unwrap());
        assert!((p.q.re - 0.001_867_442_731_707_988_8).abs() < 1e-15);
        assert!(p.q.im.abs() < 1e-18);
        assert_eq!(p.z, c(0.0, 0.0));
        assert_eq!(p.tau, c(0.0, 1.0));
        let p = e1_map(&PeriodMatrix::new(c(0.0, 40.0), c(0.0, 0.0), c(0.0, 1.0)).unwrap());
        assert!(p.q.norm() < 1e-100);
    }

    #[test]
    fn limit_exists_only_for_a_d_zero() {
        let v = DiscriminantVector::new(0, 2, 1, 0, 1).unwrap();
        let curve = corank1_limit(&v).unwrap();
        let [minus, plus] = curve.branches(c(0.0, 1.0));
        assert!((minus.z - c(-0.5, -0.5)).norm() < 1e-15);
        assert!((plus.z - c(0.5, 0.5)).norm() < 1e-15);
        assert_eq!(curve.attained, Branch::Minus);

        let v = DiscriminantVector::new(0, 3, 0, 0, 1).unwrap();
        let curve = corank1_limit(&v).unwrap();
        assert!((curve.limit(c(0.2, 1.0)).z - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);

        let v = DiscriminantVector::new(1, -1, -2, 0, 0).unwrap();
        assert!(corank1_limit(&v).is_none());
    }

    #[test]
    fn negative_b_attains_the_plus_branch() {
        let v = DiscriminantVector::new(0, -2, 1, 0, 1).unwrap();
        let curve = corank1_limit(&v).unwrap();
        assert_eq!(curve.attained, Branch::Plus);
        let pts = track_limit_corank1(&v, c(0.1, 1.0), &[40.0]).unwrap();
        assert!(pts[0].distance(&curve.point(c(0.1, 1.0), Branch::Plus)) < 1e-6);
    }

    #[test]
    fn tracking_converges_monotonically() {
        let v = DiscriminantVector::new(0, 2, 1, 0, 1).unwrap();
        let heights: Vec<f64> = (5..=40).map(f64::from).collect();
        let pts = track_limit_corank1(&v, c(0.0, 1.0), &heights).unwrap();
        let target = Corank1Point {
            q: c(0.0, 0.0),
            z: c(-0.5, -0.5),
            tau: c(0.0, 1.0),
        };
        let dists: Vec<f64> = pts.iter().map(|p| p.distance(&target)).collect();
        assert!(dists.windows(2).all(|w| w[1] < w[0]));
        assert!(*dists.last().unwrap() < 1e-6);
    }

    #[test]
    fn tracking_rejects_vectors_without_limit() {
        let v = DiscriminantVector::new(1, 0, -1, 0, 0).unwrap();
        assert_eq!(v.m, 2);
        assert_eq!(
            track_limit_corank1(&v, c(0.0, 1.0), &[10.0]),
            Err(Error::InvalidVector([1, 0, -1, 0, 0]))
        );
    }

    /// Brute force orbit: apply every matrix with entries in [0, m) and det ≡ 1.
    fn brute_orbit(m: i64, start: (i64, i64)) -> BTreeSet<(i64, i64)> {
        let mut out = BTreeSet::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        if (a * d - b * c).rem_euclid(m) == 1 % m {
                            out.insert((
                                (start.0 * a + start.1 * c).rem_euclid(m),
                                (start.0 * b + start.1 * d).rem_euclid(m),
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn group_orders() {
        assert_eq!(sl2_mod_m(2).len(), 6);
        assert_eq!(sl2_mod_m(3).len(), 24);
        assert_eq!(sl2_mod_m(4).len(), 48);
    }

    #[test]
    fn orbit_examples() {
        let orbit = sl2_mod_m_orbit(2, TorsionClass::new(0, 1, 2).unwrap()).unwrap();
        let pairs: Vec<_> = orbit.iter().map(|t| (t.c, t.e)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(
            orbit,
            sl2_mod_m_orbit(2, TorsionClass::new(1, 1, 2).unwrap()).unwrap()
        );

        let orbit = sl2_mod_m_orbit(3, TorsionClass::new(1, 0, 3).unwrap()).unwrap();
        assert_eq!(orbit.len(), 8);
        let brute: BTreeSet<_> = brute_orbit(3, (1, 0));
        assert_eq!(
            orbit.iter().map(|t| (t.c, t.e)).collect::<BTreeSet<_>>(),
            brute
        );
    }

    #[test]
    fn torsion_class_canonical_form() {
        assert!(TorsionClass::new(2, 4, 6).is_err());
        let t = TorsionClass::new(-1, 2, 5).unwrap();
        assert_eq!((t.c, t.e), (4, 2));
        assert_eq!(t.canonical(), TorsionClass::new(1, 3, 5).unwrap());
        assert_eq!(t.canonical(), t.negated().canonical());
    }

    #[test]
    fn group_action_basics() {
        let (z, tau) = (c(0.3, 0.2), c(0.1, 1.3));
        let (z1, t1) = BoundaryGroupElement::identity().apply(z, tau);
        assert_eq!((z1, t1), (z, tau));
        let kummer = BoundaryGroupElement::new(-1, 0, 0, [[1, 0], [0, 1]]).unwrap();
        assert_eq!(kummer.apply(z, tau), (-z, tau));
        assert!(BoundaryGroupElement::new(1, 0, 0, [[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn composition_is_a_group_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g1 = random_element(&mut rng);
            let g2 = random_element(&mut rng);
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
            let (za, ta) = g1.apply(z, tau);
            let (za, ta) = g2.apply(za, ta);
            let (zb, tb) = g2.compose(&g1).apply(z, tau);
            assert!((za - zb).norm() < 1e-10 * (1.0 + za.norm()));
            assert!((ta - tb).norm() < 1e-10 * (1.0 + ta.norm()));
        }
    }

    #[test]
    fn torsion_action_matches_numeric_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let m = rng.gen_range(2..10);
            let class = loop {
                if let Ok(t) = TorsionClass::new(rng.gen_range(0..m), rng.gen_range(0..m), m) {
                    break t;
                }
            };
            let g = random_element(&mut rng);
            let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..2.0));
            let (z2, tau2) = g.apply(class.point(tau), tau);
            let predicted = g.act_on_torsion(&class);
            let (alpha, beta) = lattice_coordinates(z2 - predicted.point(tau2), tau2);
            assert!((alpha - alpha.round()).abs() < 1e-8, "alpha = {alpha}");
            assert!((beta - beta.round()).abs() < 1e-8, "beta = {beta}");
        }
    }

    #[test]
    fn boundary_orbits_are_everything() {
        for m in 2..12 {
            let all = TorsionClass::all(m);
            for start in &all {
                assert_eq!(boundary_group_orbit(*start), all);
            }
        }
    }
}
