//! Explicit families of non-simple principally polarized abelian surfaces
//! and the elliptic curves of exponent `m` they contain.
//!
//! For `τ ∈ H₂(v)` the real-linear map `ℝ⁴ → ℂ²` with matrix `m·id − J·M_v`
//! (domain: the standard basis, target: the columns of `(id τ)`) has image a
//! complex line `W`, and `W / (W ∩ Λ_τ)` is an elliptic curve on which the
//! principal polarization restricts with degree `m`. This module computes `W`
//! numerically and recovers the degree independently from the integer
//! sublattice `W ∩ Λ_τ`.

use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, rank, saturate, smith_diagonal};
use crate::siegel::{exp_2pi_i, humbert_residual, DiscriminantVector, PeriodMatrix};

pub type Rational = Ratio<i64>;

/// Index of a family: a torsion pair `(c, e)` or the family at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    Finite { c: i64, e: i64 },
    Infinity,
}

impl FamilyId {
    /// `gcd(m, c, e) = 1` and `0 ≤ c, e ≤ m` for finite families.
    pub fn validate(&self, m: i64) -> Result<()> {
        if let Self::Finite { c, e } = *self {
            if !(0..=m).contains(&c) || !(0..=m).contains(&e) {
                return Err(Error::InvalidParameter(format!(
                    "family ({c}, {e}) needs 0 <= c, e <= m = {m}"
                )));
            }
            if gcd_all(&[m, c, e]) != 1 {
                return Err(Error::NotOrderM { c, e, m });
            }
        }
        Ok(())
    }

    /// All admissible families for a given `m`, finite ones first.
    pub fn all(m: i64) -> Vec<Self> {
        let mut out: Vec<Self> = (0..=m)
            .flat_map(|c| (0..=m).map(move |e| Self::Finite { c, e }))
            .filter(|f| f.validate(m).is_ok())
            .collect();
        out.push(Self::Infinity);
        out
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite { c, e } => write!(f, "({c},{e})"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

/// `(0, m, c, 0, e)` for finite families, `(1, −(m−2), −(m−1), 0, 0)` at infinity.
pub fn matching_vector(family: &FamilyId, m: i64) -> Result<DiscriminantVector> {
    family.validate(m)?;
    match family {
        FamilyId::Finite { c, e } => DiscriminantVector::torsion_family(m, *c, *e),
        FamilyId::Infinity => DiscriminantVector::infinity_family(m),
    }
}

/// The period matrix of the family with parameters `(μ, τ)` for `(c, e)` and
/// `(τ, z)` for `∞`:
///
/// ```text
/// (c, e):  [[μ, −(cτ+e)/m], [−(cτ+e)/m, τ]]
/// ∞:       [[τ, z], [z, (τ − (m−2)z)/(m−1)]]
/// ```
pub fn family_period_matrix(
    family: &FamilyId,
    m: i64,
    p1: Complex64,
    p2: Complex64,
) -> Result<PeriodMatrix> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    family.validate(m)?;
    let mf = m as f64;
    match *family {
        FamilyId::Finite { c, e } => {
            let (mu, tau) = (p1, p2);
            let z = -(tau * c as f64 + e as f64) / mf;
            PeriodMatrix::new(mu, z, tau)
        }
        FamilyId::Infinity => {
            let (tau, z) = (p1, p2);
            PeriodMatrix::new(tau, z, (tau - z * (mf - 2.0)) / (mf - 1.0))
        }
    }
}

pub type Mat4<T> = [[T; 4]; 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubvarietyMatrixData {
    pub mv: Mat4<Rational>,
    pub j: Mat4<i64>,
}

/// `J = (0, −id; id, 0)`.
pub const J: Mat4<i64> = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]];

pub fn build_mv(v: &DiscriminantVector) -> SubvarietyMatrixData {
    let r = |x: i64| Rational::from_integer(x);
    let DiscriminantVector { a, b, c, d, e, m } = *v;
    let bm = Rational::new(b - m, 2);
    let bp = Rational::new(b + m, 2);
    let mv = [
        [r(0), r(d), -bm, r(a)],
        [r(-d), r(0), r(-c), bp],
        [bm, r(c), r(0), r(-e)],
        [r(-a), -bp, r(e), r(0)],
    ];
    SubvarietyMatrixData { mv, j: J }
}

impl SubvarietyMatrixData {
    /// `m·id − J·M_v`, exactly.
    pub fn criterion_matrix(&self, m: i64) -> Mat4<Rational> {
        std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let jm: Rational = (0..4).map(|l| self.mv[l][k] * self.j[i][l]).sum();
                let diag = if i == k {
                    Rational::from_integer(m)
                } else {
                    Rational::zero()
                };
                diag - jm
            })
        })
    }
}

/// Image of a real coordinate vector in the basis given by the columns of `(id τ)`.
pub fn embed(lambda: [f64; 4], tau: &PeriodMatrix) -> [Complex64; 2] {
    let [l1, l2, l3, l4] = lambda;
    [
        tau.tau11 * l3 + tau.tau12 * l4 + l1,
        tau.tau12 * l3 + tau.tau22 * l4 + l2,
    ]
}

fn basis_images(tau: &PeriodMatrix) -> [[Complex64; 2]; 4] {
    std::array::from_fn(|k| {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        embed(e, tau)
    })
}

fn norm2(w: &[Complex64; 2]) -> f64 {
    (w[0].norm_sqr() + w[1].norm_sqr()).sqrt()
}

/// `|u₁w₂ − u₂w₁| / (|u|·|w|)`: zero exactly when `u` and `w` span the same complex line.
pub fn line_distance(u: &[Complex64; 2], w: &[Complex64; 2]) -> f64 {
    (u[0] * w[1] - u[1] * w[0]).norm() / (norm2(u) * norm2(w))
}

/// Real rank of a set of vectors in `ℂ² ≅ ℝ⁴`, by Gaussian elimination with
/// tolerance relative to the largest entry.
fn real_rank(vectors: &[[Complex64; 2]]) -> usize {
    let mut rows: Vec<[f64; 4]> = vectors
        .iter()
        .map(|w| [w[0].re, w[0].im, w[1].re, w[1].im])
        .collect();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-9 * scale;
    let mut rank = 0;
    for col in 0..4 {
        let Some(p) =
            (rank..rows.len()).max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs()))
        else {
            break;
        };
        if rows[p][col].abs() <= tol {
            continue;
        }
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank {
                let f = rows[i][col] / rows[rank][col];
                for k in 0..4 {
                    rows[i][k] -= f * rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn check_on_surface(v: &DiscriminantVector, tau: &PeriodMatrix) -> Result<()> {
    let r = humbert_residual(v, tau).norm();
    if r >= 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "period matrix is not on H2({v}): residual {r:e}"
        )));
    }
    Ok(())
}

/// A unit vector spanning the image of `m·id − J·M_v`, scaled so its largest
/// coordinate is real and positive.
pub fn subvariety_image(v: &DiscriminantVector, tau: &PeriodMatrix) -> Result<[Complex64; 2]> {
    check_on_surface(v, tau)?;
    let n = build_mv(v).criterion_matrix(v.m);
    let basis = basis_images(tau);
    let columns: Vec<[Complex64; 2]> = (0..4)
        .map(|col| {
            let mut w = [Complex64::zero(); 2];
            for (k, image) in basis.iter().enumerate() {
                let coef = n[k][col].to_f64().expect("finite rational");
                w[0] += image[0] * coef;
                w[1] += image[1] * coef;
            }
            w
        })
        .collect();
    let rank = real_rank(&columns);
    if rank != 2 {
        return Err(Error::DegenerateImage { rank });
    }
    let span = *columns
        .iter()
        .max_by(|a, b| norm2(a).total_cmp(&norm2(b)))
        .expect("four columns");
    if columns
        .iter()
        .any(|w| norm2(w) > 1e-12 * norm2(&span) && line_distance(w, &span) > 1e-8)
    {
        return Err(Error::DegenerateImage { rank });
    }
    let pivot = if span[0].norm() >= span[1].norm() {
        span[0]
    } else {
        span[1]
    };
    let phase = pivot / pivot.norm();
    let len = norm2(&span);
    Ok([span[0] / phase / len, span[1] / phase / len])
}

/// `W_{(c,e)} = ⟨(1, 0)⟩` and `W_∞ = ⟨(−1, 1)⟩`.
pub fn expected_line(family: &FamilyId) -> [Complex64; 2] {
    match family {
        FamilyId::Finite { .. } => [Complex64::new(1.0, 0.0), Complex64::zero()],
        FamilyId::Infinity => [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
    }
}

/// The standard symplectic form `E((x₁, y₁), (x₂, y₂)) = x₁·y₂ − x₂·y₁` on
/// `ℤ² ⊕ ℤ²`, coordinates ordered `(x, y)` against the columns of `(id τ)`.
pub fn symplectic_form(u: &[i64], w: &[i64]) -> i64 {
    u[0] * w[2] + u[1] * w[3] - w[0] * u[2] - w[1] * u[3]
}

/// A rank-2 sublattice of `ℤ⁴` with the restriction of [`symplectic_form`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeWithForm {
    /// Hermite normal form basis.
    pub basis: [[i64; 4]; 2],
    pub form: [[i64; 2]; 2],
}

impl SublatticeWithForm {
    pub fn from_basis(basis: &[Vec<i64>]) -> Result<Self> {
        let hnf = hermite_normal_form(basis);
        if hnf.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "expected a rank-2 lattice, got rank {}",
                hnf.len()
            )));
        }
        let basis: [[i64; 4]; 2] = std::array::from_fn(|i| std::array::from_fn(|k| hnf[i][k]));
        let e = symplectic_form(&basis[0], &basis[1]);
        Ok(Self {
            basis,
            form: [[0, e], [-e, 0]],
        })
    }

    pub fn pfaffian(&self) -> i64 {
        self.form[0][1]
    }

    pub fn elementary_divisors(&self) -> Vec<i64> {
        smith_diagonal(self.form.map(|r| r.to_vec()).as_ref())
    }
}

/// `W ∩ Λ_τ` in closed form for the two family shapes:
/// `⟨(1,0,0,0), (0,e,m,c)⟩` for `(c, e)` and `⟨(1,−1,0,0), (0,0,1,−(m−1))⟩` for `∞`.
pub fn closed_form_sublattice(family: &FamilyId, m: i64) -> Result<SublatticeWithForm> {
    family.validate(m)?;
    let basis = match *family {
        FamilyId::Finite { c, e } => vec![vec![1, 0, 0, 0], vec![0, e, m, c]],
        FamilyId::Infinity => vec![vec![1, -1, 0, 0], vec![0, 0, 1, -(m - 1)]],
    };
    SublatticeWithForm::from_basis(&basis)
}

/// Integer vectors `λ` with `|λᵢ| ≤ bound` whose image lies on the line `w`.
pub fn sublattice_search(
    w: &[Complex64; 2],
    tau: &PeriodMatrix,
    bound: i64,
) -> Result<SublatticeWithForm> {
    // λ ↦ det(w, embed(λ)) is real-linear with complex coefficients coef[k]
    let coef: Vec<Complex64> = basis_images(tau)
        .iter()
        .map(|b| w[0] * b[1] - w[1] * b[0])
        .collect();
    let pivot = (0..4)
        .max_by(|&i, &j| coef[i].norm().total_cmp(&coef[j].norm()))
        .expect("four coefficients");
    let others: Vec<usize> = (0..4).filter(|&k| k != pivot).collect();
    let scale: f64 = coef.iter().map(|c| c.norm()).sum();

    let mut found: Vec<Vec<i64>> = Vec::new();
    let range = -bound..=bound;
    for x in range.clone() {
        for y in range.clone() {
            for z in range.clone() {
                let free = [x, y, z];
                let partial: Complex64 = others
                    .iter()
                    .zip(free)
                    .map(|(&k, l)| coef[k] * l as f64)
                    .sum();
                let solved = (-partial / coef[pivot]).re.round();
                if solved.abs() > bound as f64 {
                    continue;
                }
                let residual = (partial + coef[pivot] * solved).norm();
                if residual > 1e-8 * scale * (1.0 + bound as f64) {
                    continue;
                }
                let mut lambda = vec![0i64; 4];
                for (&k, l) in others.iter().zip(free) {
                    lambda[k] = l;
                }
                lambda[pivot] = solved as i64;
                if lambda.iter().any(|&l| l != 0) {
                    found.push(lambda);
                }
            }
        }
    }
    if rank(&found) != 2 {
        return Err(Error::LatticeNotFound { bound });
    }
    SublatticeWithForm::from_basis(&saturate(&found, 4))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub exponent: i64,
    pub line: [Complex64; 2],
    pub sublattice: SublatticeWithForm,
    pub elementary_divisors: Vec<i64>,
}

/// Degree of the principal polarization restricted to the elliptic curve
/// cut out by `v`, via the sublattice search.
pub fn exponent_of_subtorus(v: &DiscriminantVector, tau: &PeriodMatrix) -> Result<ExponentReport> {
    let bound = v
        .coeffs()
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or(0)
        .max(v.m);
    exponent_of_subtorus_with_bound(v, tau, bound)
}

pub fn exponent_of_subtorus_with_bound(
    v: &DiscriminantVector,
    tau: &PeriodMatrix,
    bound: i64,
) -> Result<ExponentReport> {
    let line = subvariety_image(v, tau)?;
    let sublattice = sublattice_search(&line, tau, bound)?;
    Ok(ExponentReport {
        exponent: sublattice.pfaffian().abs(),
        elementary_divisors: sublattice.elementary_divisors(),
        line,
        sublattice,
    })
}

/// Locus in `(ℂ^×)²` with coordinates `(V, U) = (e^{2πi w₁}, e^{2πi w₂})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusLocus {
    /// `U = 1`
    UEqualsOne,
    /// `UV = 1`
    UVEqualsOne,
}

impl TorusLocus {
    pub fn contains(&self, v: Complex64, u: Complex64, tol: f64) -> bool {
        match self {
            Self::UEqualsOne => (u - 1.0).norm() < tol,
            Self::UVEqualsOne => (u * v - 1.0).norm() < tol,
        }
    }
}

impl fmt::Display for TorusLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UEqualsOne => f.write_str("U = 1"),
            Self::UVEqualsOne => f.write_str("UV = 1"),
        }
    }
}

/// Exponential image of the line `W` of the family.
pub fn exp_image_locus(family: &FamilyId) -> TorusLocus {
    match family {
        FamilyId::Finite { .. } => TorusLocus::UEqualsOne,
        FamilyId::Infinity => TorusLocus::UVEqualsOne,
    }
}

/// `(V, U)` for a point `w ∈ ℂ²`.
pub fn exp_point(w: [Complex64; 2]) -> (Complex64, Complex64) {
    (exp_2pi_i(w[0]), exp_2pi_i(w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::sample_point;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn family_matrix_examples() {
        let i = c(0.0, 1.0);
        let tau = family_period_matrix(&FamilyId::Finite { c: 1, e: 1 }, 2, i, i).unwrap();
        assert_eq!(tau.tau11, i);
        assert!((tau.tau12 + (i + 1.0) / 2.0).norm() < 1e-15);
        let tau = family_period_matrix(&FamilyId::Infinity, 2, i, c(0.0, 0.0)).unwrap();
        assert_eq!(tau.entries(), [[i, c(0.0, 0.0)], [c(0.0, 0.0), i]]);
        assert!(matches!(
            family_period_matrix(&FamilyId::Infinity, 3, i, c(0.0, 3.0)),
            Err(Error::NotInSiegel(_))
        ));
        assert!(family_period_matrix(&FamilyId::Finite { c: 2, e: 0 }, 2, i, i).is_err());
    }

    #[test]
    fn mv_examples() {
        let r = Rational::from_integer;
        let v = DiscriminantVector::torsion_family(5, 2, 3).unwrap();
        let mv = build_mv(&v).mv;
        assert_eq!(mv[0][2], r(0));
        assert_eq!(mv[1][2], r(-2));
        assert_eq!(mv[1][3], r(5));
        assert_eq!(mv[2][3], r(-3));

        let v = DiscriminantVector::infinity_family(3).unwrap();
        let mv = build_mv(&v).mv;
        assert_eq!(mv[0][3], r(1));
        assert_eq!(mv[1][2], r(2));
        assert_eq!(mv[0][2], r(2));
    }

    #[test]
    fn mv_half_integers_are_exact() {
        // b − m odd: b = 1, m = 2? 1 − 4(ac + de) = 4 is impossible, so build by hand.
        let v = DiscriminantVector {
            a: 1,
            b: 2,
            c: 0,
            d: 0,
            e: 0,
            m: 1,
        };
        let mv = build_mv(&v).mv;
        assert_eq!(mv[0][2], Rational::new(-1, 2));
        assert_eq!(mv[1][3], Rational::new(3, 2));
    }

    #[test]
    fn mv_is_antisymmetric_and_j_squares_to_minus_one() {
        for m in 2..6 {
            for v in crate::siegel::enumerate_vectors(m, m)
                .unwrap()
                .iter()
                .take(50)
            {
                let mv = build_mv(v).mv;
                for i in 0..4 {
                    for k in 0..4 {
                        assert_eq!(mv[i][k], -mv[k][i]);
                    }
                }
            }
        }
        for i in 0..4 {
            for k in 0..4 {
                let sq: i64 = (0..4).map(|l| J[i][l] * J[l][k]).sum();
                assert_eq!(sq, if i == k { -1 } else { 0 });
            }
        }
    }

    #[test]
    fn images_are_the_expected_lines() {
        for m in 2..=6 {
            for family in [FamilyId::Finite { c: 1, e: m - 1 }, FamilyId::Infinity] {
                let v = matching_vector(&family, m).unwrap();
                for seed in 0..10 {
                    let tau = sample_point(&v, seed).unwrap();
                    let line = subvariety_image(&v, &tau).unwrap();
                    assert!(line_distance(&line, &expected_line(&family)) < 1e-8);
                }
            }
        }
    }

    #[test]
    fn image_requires_point_on_surface() {
        let v = DiscriminantVector::torsion_family(2, 1, 1).unwrap();
        let tau = PeriodMatrix::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(subvariety_image(&v, &tau).is_err());
    }

    #[test]
    fn exponent_examples() {
        let v = DiscriminantVector::new(0, 2, 1, 0, 1).unwrap();
        let tau = sample_point(&v, 1).unwrap();
        assert_eq!(exponent_of_subtorus(&v, &tau).unwrap().exponent, 2);

        let v = DiscriminantVector::infinity_family(3).unwrap();
        let tau = sample_point(&v, 2).unwrap();
        let report = exponent_of_subtorus(&v, &tau).unwrap();
        assert_eq!(report.exponent, 3);
        assert_eq!(report.elementary_divisors, vec![3, 3]);

        for m in 2..=10 {
            let v = DiscriminantVector::new(0, m, 0, 0, 1).unwrap();
            let tau = sample_point(&v, m as u64).unwrap();
            assert_eq!(exponent_of_subtorus(&v, &tau).unwrap().exponent, m);
        }
    }

    #[test]
    fn search_matches_closed_form() {
        for m in 2..=7 {
            for family in FamilyId::all(m) {
                let v = matching_vector(&family, m).unwrap();
                let tau = sample_point(&v, 5).unwrap();
                let line = subvariety_image(&v, &tau).unwrap();
                let searched = sublattice_search(&line, &tau, m).unwrap();
                let closed = closed_form_sublattice(&family, m).unwrap();
                assert_eq!(searched, closed, "m={m} family={family}");
                assert_eq!(closed.pfaffian().abs(), m);
            }
        }
    }

    #[test]
    fn tiny_search_box_fails() {
        let v = DiscriminantVector::torsion_family(5, 2, 3).unwrap();
        let tau = sample_point(&v, 0).unwrap();
        let line = subvariety_image(&v, &tau).unwrap();
        assert_eq!(
            sublattice_search(&line, &tau, 1),
            Err(Error::LatticeNotFound { bound: 1 })
        );
    }

    #[test]
    fn exponential_loci() {
        assert_eq!(
            exp_image_locus(&FamilyId::Finite { c: 0, e: 1 }),
            TorusLocus::UEqualsOne
        );
        assert_eq!(
            exp_image_locus(&FamilyId::Infinity),
            TorusLocus::UVEqualsOne
        );
        for k in 0..20 {
            let t = c(0.37 * k as f64 - 2.0, 0.11 * k as f64 - 1.0);
            for family in [FamilyId::Finite { c: 1, e: 0 }, FamilyId::Infinity] {
                let w = expected_line(&family);
                let (vv, u) = exp_point([w[0] * t, w[1] * t]);
                assert!(exp_image_locus(&family).contains(vv, u, 1e-9));
            }
        }
    }
}
