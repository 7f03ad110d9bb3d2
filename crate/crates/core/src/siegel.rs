//! Period matrices, discriminant vectors and Humbert-surface membership.
//!
//! A primitive vector `v = (a, b, c, d, e)` with `b² − 4(ac + de) = m²`
//! cuts out the surface `H₂(v)` of period matrices `τ` with
//!
//! ```text
//! a·τ₁₁ + b·τ₁₂ + c·τ₂₂ + d·(τ₁₁τ₂₂ − τ₁₂²) + e = 0.
//! ```
//!
//! Every such `τ` is the period matrix of a principally polarized abelian
//! surface containing an elliptic curve of degree `m`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::error::{Error, Result};

/// Bounds on the imaginary parts of sampled entries.
pub const SAMPLE_IM_RANGE: (f64, f64) = (0.5, 2.5);
/// Bounds on the real parts of sampled entries.
pub const SAMPLE_RE_RANGE: (f64, f64) = (-0.5, 0.5);
pub const SAMPLE_MAX_ATTEMPTS: usize = 100;

/// `e^{2πi z}`.
pub fn exp_2pi_i(z: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * z).exp()
}

/// A primitive integer vector satisfying `b² − 4(ac + de) = m²`, `m > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiscriminantVector {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub m: i64,
}

/// `b² − 4(ac + de)` in 128-bit arithmetic.
pub fn discriminant(coeffs: [i64; 5]) -> i128 {
    let [a, b, c, d, e] = coeffs.map(i128::from);
    b * b - 4 * (a * c + d * e)
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

impl DiscriminantVector {
    /// Checks both the discriminant equation and primitivity; `m` is read off
    /// as the positive square root of the discriminant.
    pub fn new(a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<Self> {
        let coeffs = [a, b, c, d, e];
        let m = exact_sqrt(discriminant(coeffs))
            .filter(|&m| m > 0)
            .ok_or(Error::NotDiscriminant(coeffs))?;
        if gcd_all(&coeffs) != 1 {
            return Err(Error::NotPrimitive(coeffs));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            e,
            m: m as i64,
        })
    }

    pub fn from_coeffs(coeffs: [i64; 5]) -> Result<Self> {
        let [a, b, c, d, e] = coeffs;
        Self::new(a, b, c, d, e)
    }

    /// As [`DiscriminantVector::new`], additionally requiring the exponent to be `m`.
    pub fn with_exponent(coeffs: [i64; 5], m: i64) -> Result<Self> {
        let v = Self::from_coeffs(coeffs)?;
        if v.m != m {
            return Err(Error::NotDiscriminant(coeffs));
        }
        Ok(v)
    }

    pub fn coeffs(&self) -> [i64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    /// `v` and `−v` define the same surface; pick the one whose first nonzero
    /// coordinate is positive.
    pub fn normalized(&self) -> Self {
        let first = self.coeffs().into_iter().find(|&x| x != 0).unwrap_or(0);
        if first < 0 {
            Self {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
                e: -self.e,
                m: self.m,
            }
        } else {
            *self
        }
    }

    /// The vector `(0, m, c, 0, e)` attached to the torsion family `(c, e)`.
    pub fn torsion_family(m: i64, c: i64, e: i64) -> Result<Self> {
        Self::with_exponent([0, m, c, 0, e], m)
    }

    /// The vector `(1, −(m−2), −(m−1), 0, 0)` of the family at infinity.
    pub fn infinity_family(m: i64) -> Result<Self> {
        Self::with_exponent([1, -(m - 2), -(m - 1), 0, 0], m)
    }
}

impl fmt::Display for DiscriminantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.a, self.b, self.c, self.d, self.e
        )
    }
}

/// A symmetric 2×2 complex matrix with positive definite imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrix {
    pub tau11: Complex64,
    pub tau12: Complex64,
    pub tau22: Complex64,
}

/// Positive definiteness of the imaginary part of `[[t11, t12], [t12, t22]]`.
pub fn in_siegel(tau11: Complex64, tau12: Complex64, tau22: Complex64) -> bool {
    let (y11, y12, y22) = (tau11.im, tau12.im, tau22.im);
    y11 > 0.0 && y22 > 0.0 && y11 * y22 - y12 * y12 > 0.0
}

impl PeriodMatrix {
    pub fn new(tau11: Complex64, tau12: Complex64, tau22: Complex64) -> Result<Self> {
        if !(tau11.is_finite() && tau12.is_finite() && tau22.is_finite()) {
            return Err(Error::NotInSiegel("non-finite entry".into()));
        }
        if !in_siegel(tau11, tau12, tau22) {
            return Err(Error::NotInSiegel(format!(
                "Im part [[{}, {}], [{}, {}]] is not positive definite",
                tau11.im, tau12.im, tau12.im, tau22.im
            )));
        }
        Ok(Self {
            tau11,
            tau12,
            tau22,
        })
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [[self.tau11, self.tau12], [self.tau12, self.tau22]]
    }

    /// Determinant of the imaginary part.
    pub fn im_det(&self) -> f64 {
        self.tau11.im * self.tau22.im - self.tau12.im * self.tau12.im
    }
}

/// Left side of the Humbert equation for arbitrary integer coefficients.
///
/// Linear in the coefficient vector; [`humbert_residual`] is the restriction
/// to discriminant vectors.
pub fn humbert_form(coeffs: [i64; 5], tau: &PeriodMatrix) -> Complex64 {
    let [a, b, c, d, e] = coeffs.map(|x| x as f64);
    let PeriodMatrix {
        tau11,
        tau12,
        tau22,
    } = *tau;
    tau11 * a + tau12 * b + tau22 * c + (tau11 * tau22 - tau12 * tau12) * d + e
}

pub fn humbert_residual(v: &DiscriminantVector, tau: &PeriodMatrix) -> Complex64 {
    humbert_form(v.coeffs(), tau)
}

/// All primitive discriminant vectors of exponent `m` in the box
/// `|a|, …, |e| ≤ bound`, normalized up to sign and sorted.
pub fn enumerate_vectors(m: i64, bound: i64) -> Result<Vec<DiscriminantVector>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    if bound < m {
        return Err(Error::InvalidParameter(format!(
            "coefficient bound {bound} must be at least m = {m}"
        )));
    }
    let mut out = Vec::new();
    // ac + de = (b² − m²)/4, so b ≡ m (mod 2) and b² ≤ m² + 8·bound².
    let b_limit = i128::from(m) * i128::from(m) + 8 * i128::from(bound) * i128::from(bound);
    for b in -bound..=bound {
        let b2 = i128::from(b) * i128::from(b);
        if b2 > b_limit || (b - m).rem_euclid(2) != 0 {
            continue;
        }
        let k = (b2 - i128::from(m) * i128::from(m)) / 4;
        for a in -bound..=bound {
            for c in -bound..=bound {
                let rest = k - i128::from(a) * i128::from(c);
                for d in -bound..=bound {
                    if d == 0 {
                        if rest != 0 {
                            continue;
                        }
                        for e in -bound..=bound {
                            push_primitive(&mut out, [a, b, c, d, e], m);
                        }
                    } else if rest % i128::from(d) == 0 {
                        let e = rest / i128::from(d);
                        if e.abs() <= i128::from(bound) {
                            push_primitive(&mut out, [a, b, c, d, e as i64], m);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn push_primitive(out: &mut Vec<DiscriminantVector>, coeffs: [i64; 5], m: i64) {
    if gcd_all(&coeffs) == 1 {
        let [a, b, c, d, e] = coeffs;
        out.push(DiscriminantVector { a, b, c, d, e, m }.normalized());
    }
}

#[derive(Debug, Clone, Copy)]
enum Solve {
    Tau11,
    Tau22,
    Tau12,
}

/// Draws a point of `H₂(v)` deterministically from `seed`.
///
/// Two entries are drawn with real parts in [`SAMPLE_RE_RANGE`] and imaginary
/// parts in [`SAMPLE_IM_RANGE`], and the Humbert equation is solved for the
/// third. When `a = d = 0` the equation is linear in `τ₁₂` alone and that is
/// the only entry solved for; otherwise attempts rotate between solving for
/// `τ₁₁`, `τ₂₂` and `τ₁₂`.
pub fn sample_point(v: &DiscriminantVector, seed: u64) -> Result<PeriodMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let DiscriminantVector { a, b, c, d, e, .. } = *v;
    let (a, b, c, d, e) = (a as f64, b as f64, c as f64, d as f64, e as f64);
    let strategies: &[Solve] = if v.a == 0 && v.d == 0 {
        &[Solve::Tau12]
    } else {
        &[Solve::Tau11, Solve::Tau22, Solve::Tau12]
    };

    for attempt in 0..SAMPLE_MAX_ATTEMPTS {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let candidates: Vec<(Complex64, Complex64, Complex64)> =
            match strategies[attempt % strategies.len()] {
                Solve::Tau11 => {
                    // τ₁₁ (a + dτ₂₂) = −(bτ₁₂ + cτ₂₂ − dτ₁₂² + e)
                    let (t12, t22) = (x, y);
                    let lead = t22 * d + a;
                    if lead.norm() < 1e-9 {
                        continue;
                    }
                    let t11 = -(t12 * b + t22 * c - t12 * t12 * d + e) / lead;
                    vec![(t11, t12, t22)]
                }
                Solve::Tau22 => {
                    let (t11, t12) = (x, y);
                    let lead = t11 * d + c;
                    if lead.norm() < 1e-9 {
                        continue;
                    }
                    let t22 = -(t11 * a + t12 * b - t12 * t12 * d + e) / lead;
                    vec![(t11, t12, t22)]
                }
                Solve::Tau12 => {
                    let (t11, t22) = (x, y);
                    // −d τ₁₂² + b τ₁₂ + (aτ₁₁ + cτ₂₂ + dτ₁₁τ₂₂ + e) = 0
                    let k = t11 * a + t22 * c + t11 * t22 * d + e;
                    if d == 0.0 {
                        if b == 0.0 {
                            continue;
                        }
                        vec![(t11, -k / b, t22)]
                    } else {
                        let disc = (Complex64::from(b * b) + k * (4.0 * d)).sqrt();
                        [(b + disc) / (2.0 * d), (b - disc) / (2.0 * d)]
                            .into_iter()
                            .map(|t12| (t11, t12, t22))
                            .collect()
                    }
                }
            };
        for (t11, t12, t22) in candidates {
            if let Ok(tau) = PeriodMatrix::new(t11, t12, t22) {
                if humbert_residual(v, &tau).norm() < 1e-12 {
                    return Ok(tau);
                }
            }
        }
    }
    Err(Error::SamplingFailed {
        attempts: SAMPLE_MAX_ATTEMPTS,
    })
}

fn draw(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(
        rng.gen_range(SAMPLE_RE_RANGE.0..=SAMPLE_RE_RANGE.1),
        rng.gen_range(SAMPLE_IM_RANGE.0..=SAMPLE_IM_RANGE.1),
    )
}
