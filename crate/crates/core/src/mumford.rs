//! Exact model of the period group `𝕐` of Mumford's construction and the
//! combinatorics of the degenerate fibers it produces.
//!
//! `𝕐 ≅ ℤ²` is generated by `r`, `s` (and `t = (rs)⁻¹`) and acts on the torus
//! coordinates `U, V, W` (with `UVW = 1`) by Laurent monomials in the base
//! coordinates `T₁, T₂, T₃`. The multipliers follow
//!
//! ```text
//! S_{αr+βs}(U) = T₂^{−α} T₃^{β−α} U
//! S_{αr+βs}(W) = T₂^{−α} T₁^{−β} W
//! ```
//!
//! and the `V` multiplier is whatever keeps `UVW` fixed. Note the `U` rule is
//! the inverse of the `U` entry of the generator triples, while the `W` rule
//! agrees with the `W` entry; the triples are only used for the relation
//! `r·s·t = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyId;

/// `T₁^{e₀} T₂^{e₁} T₃^{e₂}`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct Monomial(pub [i64; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn inverse(&self) -> Self {
        Monomial(self.0.map(|x| -x))
    }

    pub fn pow(&self, k: i64) -> Self {
        Monomial(self.0.map(|x| x * k))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| {
                if k == 1 {
                    format!("T{}", i + 1)
                } else {
                    format!("T{}^{}", i + 1, k)
                }
            })
            .collect();
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join(" "))
        }
    }
}

/// Three monomials multiplying `U`, `V`, `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTriple(pub [Monomial; 3]);

impl MonomialTriple {
    pub fn identity() -> Self {
        Self([Monomial::ONE; 3])
    }

    /// Componentwise product.
    pub fn componentwise(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] * other.0[i]))
    }

    pub fn pow(&self, k: i64) -> Self {
        Self(self.0.map(|x| x.pow(k)))
    }

    /// Product of the three entries; trivial for elements of `𝕐`.
    pub fn total(&self) -> Monomial {
        self.0[0] * self.0[1] * self.0[2]
    }
}

/// `r = (T₂T₃, T₃⁻¹, T₂⁻¹)`.
pub const GEN_R: MonomialTriple = MonomialTriple([
    Monomial([0, 1, 1]),
    Monomial([0, 0, -1]),
    Monomial([0, -1, 0]),
]);
/// `s = (T₃⁻¹, T₁T₃, T₁⁻¹)`.
pub const GEN_S: MonomialTriple = MonomialTriple([
    Monomial([0, 0, -1]),
    Monomial([1, 0, 1]),
    Monomial([-1, 0, 0]),
]);
/// `t = (T₂⁻¹, T₁⁻¹, T₁T₂)`.
pub const GEN_T: MonomialTriple = MonomialTriple([
    Monomial([0, -1, 0]),
    Monomial([-1, 0, 0]),
    Monomial([1, 1, 0]),
]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coord {
    U,
    V,
    W,
}

/// `α·r + β·s` in additive notation for `𝕐 ≅ ℤ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct YElement {
    pub alpha: i64,
    pub beta: i64,
}

impl YElement {
    pub const fn new(alpha: i64, beta: i64) -> Self {
        Self { alpha, beta }
    }

    pub const R: YElement = YElement::new(1, 0);
    pub const S: YElement = YElement::new(0, 1);
    /// `t = −r − s`, from `rst = 1`.
    pub const T: YElement = YElement::new(-1, -1);

    /// Generator `r^c s^m` of `𝕐_c`.
    pub fn finite_generator(c: i64, m: i64) -> Self {
        Self::new(c, m)
    }

    /// Generator `r^{−(m−1)} s` of `𝕐_∞`.
    pub fn infinity_generator(m: i64) -> Self {
        Self::new(-(m - 1), 1)
    }

    /// Monomial multiplying the given coordinate.
    pub fn multiplier(&self, coord: Coord) -> Monomial {
        let Self { alpha, beta } = *self;
        match coord {
            Coord::U => Monomial([0, -alpha, beta - alpha]),
            Coord::W => Monomial([-beta, -alpha, 0]),
            Coord::V => (self.multiplier(Coord::U) * self.multiplier(Coord::W)).inverse(),
        }
    }

    pub fn action(&self) -> MonomialTriple {
        MonomialTriple([Coord::U, Coord::V, Coord::W].map(|c| self.multiplier(c)))
    }

    /// `r^α s^β` as a componentwise product of the generator triples.
    pub fn generator_triple(&self) -> MonomialTriple {
        GEN_R.pow(self.alpha).componentwise(&GEN_S.pow(self.beta))
    }
}

impl Add for YElement {
    type Output = YElement;
    fn add(self, rhs: YElement) -> YElement {
        YElement::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Neg for YElement {
    type Output = YElement;
    fn neg(self) -> YElement {
        YElement::new(-self.alpha, -self.beta)
    }
}

impl fmt::Display for YElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r^{} s^{}", self.alpha, self.beta)
    }
}

pub fn y_action_on_coordinate(y: YElement, coord: Coord) -> Monomial {
    y.multiplier(coord)
}

/// A relation `T^k = 1` cutting out a locus in the base torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusRelation {
    pub exponents: [i64; 3],
}

impl LocusRelation {
    pub fn new(exponents: [i64; 3]) -> Result<Self> {
        if exponents == [0, 0, 0] {
            return Err(Error::InvalidParameter(
                "locus relation must be nonzero".into(),
            ));
        }
        Ok(Self { exponents })
    }

    /// `T₂^c = T₃^{m−c}`, containing `Ψ(O_{(c,e)})`.
    pub fn finite_family(c: i64, m: i64) -> Self {
        Self {
            exponents: [0, c, -(m - c)],
        }
    }

    /// `T₁ = T₂^{m−1}`, containing `Ψ(O_∞)`.
    pub fn infinity_family(m: i64) -> Self {
        Self {
            exponents: [1, -(m - 1), 0],
        }
    }

    pub fn for_family(family: &FamilyId, m: i64) -> Self {
        match family {
            FamilyId::Finite { c, .. } => Self::finite_family(*c, m),
            FamilyId::Infinity => Self::infinity_family(m),
        }
    }

    /// Whether `mono` is a power of the relation monomial, i.e. equal to 1 on
    /// the locus by this relation alone.
    pub fn reduces_to_one(&self, mono: &Monomial) -> bool {
        let Some(pivot) = self.exponents.iter().position(|&x| x != 0) else {
            return mono.is_one();
        };
        let (num, den) = (mono.0[pivot], self.exponents[pivot]);
        if num % den != 0 {
            return false;
        }
        let k = num / den;
        (0..3).all(|i| mono.0[i] == k * self.exponents[i])
    }

    /// Numeric check that a base point lies on the locus.
    pub fn holds_at(&self, t: [num_complex::Complex64; 3], tol: f64) -> bool {
        let value: num_complex::Complex64 = (0..3)
            .map(|i| t[i].powi(self.exponents[i] as i32))
            .product();
        (value - 1.0).norm() < tol
    }
}

impl fmt::Display for LocusRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = Monomial(self.exponents.map(|x| x.max(0)));
        let rhs = Monomial(self.exponents.map(|x| (-x).max(0)));
        write!(f, "{lhs} = {rhs}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupLawReport {
    pub pairs_checked: usize,
    pub failures: usize,
    pub rst_product: MonomialTriple,
    pub rst_is_identity: bool,
    pub pass: bool,
}

/// Homomorphism check on random pairs with `|α|, |β| ≤ 50`, plus `r·s·t = 1`.
pub fn verify_group_law(samples: usize, seed: u64) -> GroupLawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || YElement::new(rng.gen_range(-50..=50), rng.gen_range(-50..=50));
    let mut failures = 0;
    let mut pairs = vec![(YElement::R, YElement::S)];
    pairs.extend((0..samples).map(|_| (draw(), draw())));
    for (y1, y2) in &pairs {
        let lhs = (*y1 + *y2).action();
        let rhs = y1.action().componentwise(&y2.action());
        let unit = lhs.total().is_one();
        if lhs != rhs || !unit {
            failures += 1;
        }
    }
    let rst_product = GEN_R.componentwise(&GEN_S).componentwise(&GEN_T);
    let rst_is_identity = rst_product == MonomialTriple::identity();
    GroupLawReport {
        pairs_checked: pairs.len(),
        failures,
        rst_product,
        rst_is_identity,
        pass: failures == 0 && rst_is_identity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealInvarianceReport {
    pub m: i64,
    pub family: FamilyId,
    pub generator: YElement,
    /// Coordinate `X` of the ideal `⟨UVW − 1, X − 1⟩`.
    pub coordinate: Coord,
    pub multiplier: Monomial,
    pub relation: LocusRelation,
    pub reduces_to_one: bool,
}

/// The generator of the family's subgroup, `r^c s^m` or `r^{−(m−1)} s`.
pub fn family_generator(family: &FamilyId, m: i64) -> YElement {
    match family {
        FamilyId::Finite { c, .. } => YElement::finite_generator(*c, m),
        FamilyId::Infinity => YElement::infinity_generator(m),
    }
}

/// Checks that `generator` maps `X − 1` into the ideal on the family's locus.
pub fn verify_ideal_invariance_with(
    m: i64,
    family: &FamilyId,
    generator: YElement,
) -> IdealInvarianceReport {
    let coordinate = match family {
        FamilyId::Finite { .. } => Coord::U,
        FamilyId::Infinity => Coord::W,
    };
    let multiplier = generator.multiplier(coordinate);
    let relation = LocusRelation::for_family(family, m);
    IdealInvarianceReport {
        m,
        family: *family,
        generator,
        coordinate,
        multiplier,
        relation,
        reduces_to_one: relation.reduces_to_one(&multiplier),
    }
}

pub fn verify_ideal_invariance(m: i64, family: &FamilyId) -> Result<IdealInvarianceReport> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    family.validate(m)?;
    Ok(verify_ideal_invariance_with(
        m,
        family,
        family_generator(family, m),
    ))
}

/// Generators that must fail the invariance check.
pub fn negative_control_generators(family: &FamilyId, m: i64) -> Vec<YElement> {
    match family {
        FamilyId::Finite { c, .. } => vec![YElement::new(*c, m - 1), YElement::new(*c + 1, m)],
        FamilyId::Infinity => vec![YElement::new(-m, 1), YElement::new(-(m - 1), 2)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StratumId {
    /// Corank-1 type boundary point of a finite family `(c, e)`.
    #[serde(rename = "I")]
    StratumI,
    /// `T = (0, 0, T₃)`, `T₃ ≠ 0`, family `∞`.
    #[serde(rename = "II")]
    StratumII,
    /// `T = 0`, family `∞`.
    #[serde(rename = "III")]
    StratumIII,
}

impl StratumId {
    pub const ALL: [StratumId; 3] = [Self::StratumI, Self::StratumII, Self::StratumIII];

    pub fn surface_type(&self) -> SurfaceType {
        match self {
            Self::StratumI => SurfaceType::P1BundleOverElliptic,
            Self::StratumII => SurfaceType::P1xP1,
            Self::StratumIII => SurfaceType::TwoP2PlusBlowup,
        }
    }

    /// Shift of the `ℤ`-chain of components induced by the acting generator.
    ///
    /// * I: `s` moves `Z_k` to `Z_{k+1}` and `r` preserves each `Z_k`, so
    ///   `r^c s^m` shifts by `m`.
    /// * II: `r^{−(m−1)} s` moves `Z_{k,0}` to `Z_{k−(m−1),1}`: shift `m − 1`.
    /// * III: the chain through the fundamental region (components A, B, C of
    ///   the `T = 0` fiber) closes up after `2m − 1` components.
    pub fn chain_shift(&self, m: i64) -> i64 {
        match self {
            Self::StratumI => YElement::finite_generator(0, m).beta,
            Self::StratumII => -YElement::infinity_generator(m).alpha,
            Self::StratumIII => 2 * m - 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::StratumI => "I",
            Self::StratumII => "II",
            Self::StratumIII => "III",
        }
    }
}

impl std::str::FromStr for StratumId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Self::StratumI),
            "II" | "2" => Ok(Self::StratumII),
            "III" | "3" => Ok(Self::StratumIII),
            _ => Err(Error::InvalidParameter(format!("unknown stratum {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceType {
    P1BundleOverElliptic,
    P1xP1,
    TwoP2PlusBlowup,
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::P1BundleOverElliptic => "P1BundleOverElliptic",
            Self::P1xP1 => "P1xP1",
            Self::TwoP2PlusBlowup => "TwoP2PlusBlowup",
        };
        f.write_str(s)
    }
}

/// Dual graph of a degenerate fiber: components and their intersection points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub vertices: Vec<String>,
    /// Index pairs `(i, j)` with `i ≤ j`; `i = j` is a self-intersection.
    pub edges: Vec<(usize, usize)>,
    pub surface_type: Option<SurfaceType>,
}

impl DualGraph {
    /// The `n`-gon `Z0 - Z1 - ... - Z(n-1) - Z0`.
    pub fn cycle(n: usize, surface_type: Option<SurfaceType>) -> Self {
        let vertices = (0..n).map(|k| format!("Z{k}")).collect();
        let mut edges: Vec<(usize, usize)> = (0..n)
            .map(|k| {
                let (i, j) = (k, (k + 1) % n);
                (i.min(j), i.max(j))
            })
            .collect();
        edges.sort_unstable();
        Self {
            vertices,
            edges,
            surface_type,
        }
    }

    /// Length of the cycle if the graph is a single cycle (a vertex with a
    /// self-loop counts as length 1).
    pub fn cycle_length(&self) -> Option<usize> {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() != n {
            return None;
        }
        let mut degree = vec![0usize; n];
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            degree[i] += 1;
            degree[j] += 1;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        if degree.iter().any(|&d| d != 2) {
            return None;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s).then_some(n)
    }

    /// `vertices − edges + 1`, the arithmetic genus of a nodal curve whose
    /// components are all rational.
    pub fn arithmetic_genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// DOT rendering with sorted vertex and edge lines.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph fiber {\n");
        if let Some(surface) = self.surface_type {
            out.push_str(&format!("  surface=\"{surface}\";\n"));
        }
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| natural_key(&self.vertices[a]).cmp(&natural_key(&self.vertices[b])));
        for &v in &order {
            out.push_str(&format!("  {};\n", self.vertices[v]));
        }
        let mut edges: Vec<(usize, usize)> = self.edges.clone();
        edges.sort_by_key(|&(i, j)| (i, j));
        for (i, j) in edges {
            out.push_str(&format!(
                "  {} -- {};\n",
                self.vertices[i], self.vertices[j]
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn natural_key(label: &str) -> (usize, String) {
    (label.len(), label.to_owned())
}

/// Dual graph of the degenerate elliptic curve over a boundary point of the
/// given stratum: the chain `... - Z_k - Z_{k+1} - ...` modulo the shift.
pub fn degenerate_fiber(m: i64, stratum: StratumId) -> Result<DualGraph> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} must be at least 2"
        )));
    }
    let shift = stratum.chain_shift(m) as usize;
    Ok(DualGraph::cycle(shift, Some(stratum.surface_type())))
}

/// Union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Quotient of the chain on `0..window` (edges `{k, k+1}`) by `k ↦ k + shift`,
/// computed by explicit orbit identification of vertices and edges.
pub fn quotient_cycle_oracle(window: usize, shift: usize) -> Result<DualGraph> {
    if shift == 0 || window < 3 * shift {
        return Err(Error::WindowTooSmall { window, shift });
    }
    let mut vertex_classes = UnionFind::new(window);
    for k in 0..window - shift {
        vertex_classes.union(k, k + shift);
    }
    // edge k joins k and k + 1
    let edge_count = window - 1;
    let mut edge_classes = UnionFind::new(edge_count);
    for k in 0..edge_count.saturating_sub(shift) {
        edge_classes.union(k, k + shift);
    }

    let mut vertex_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 0..window {
        let root = vertex_classes.find(k);
        let next = vertex_ids.len();
        vertex_ids.entry(root).or_insert(next);
    }
    let mut edge_reps: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for k in 0..edge_count {
        let root = edge_classes.find(k);
        let i = vertex_ids[&vertex_classes.find(k)];
        let j = vertex_ids[&vertex_classes.find(k + 1)];
        edge_reps.entry(root).or_insert((i.min(j), i.max(j)));
    }
    let mut edges: Vec<(usize, usize)> = edge_reps.into_values().collect();
    edges.sort_unstable();
    Ok(DualGraph {
        vertices: (0..vertex_ids.len()).map(|k| format!("Z{k}")).collect(),
        edges,
        surface_type: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multiplier_examples() {
        assert_eq!(YElement::R.multiplier(Coord::U), Monomial([0, -1, -1]));
        for coord in [Coord::U, Coord::V, Coord::W] {
            assert!(YElement::default().multiplier(coord).is_one());
        }
        let (c, m) = (2, 5);
        assert_eq!(
            YElement::finite_generator(c, m).multiplier(Coord::U),
            Monomial([0, -c, m - c])
        );
        assert_eq!(
            YElement::new(3, 7).multiplier(Coord::W),
            Monomial([-7, -3, 0])
        );
    }

    #[test]
    fn generator_triples_multiply_to_identity() {
        let rst = GEN_R.componentwise(&GEN_S).componentwise(&GEN_T);
        assert_eq!(rst, MonomialTriple::identity());
        for g in [GEN_R, GEN_S, GEN_T] {
            assert!(g.total().is_one());
        }
        assert_eq!(YElement::T.generator_triple(), GEN_T);
    }

    #[test]
    fn formula_versus_generator_triples() {
        // The U rule inverts the U entry of r and s; the W rule matches the W entry.
        assert_eq!(YElement::R.multiplier(Coord::U), GEN_R.0[0].inverse());
        assert_eq!(YElement::S.multiplier(Coord::U), GEN_S.0[0].inverse());
        assert_eq!(YElement::R.multiplier(Coord::W), GEN_R.0[2]);
        assert_eq!(YElement::S.multiplier(Coord::W), GEN_S.0[2]);
    }

    #[test]
    fn group_law_report() {
        let report = verify_group_law(100, 1);
        assert!(report.pass);
        assert_eq!(report.pairs_checked, 101);
    }

    #[test]
    fn ideal_invariance_examples() {
        let fam = FamilyId::Finite { c: 1, e: 1 };
        let report = verify_ideal_invariance(2, &fam).unwrap();
        assert_eq!(report.generator, YElement::new(1, 2));
        assert_eq!(report.multiplier, Monomial([0, -1, 1]));
        assert!(report.reduces_to_one);

        for m in 2..8 {
            let report = verify_ideal_invariance(m, &FamilyId::Infinity).unwrap();
            assert_eq!(report.multiplier, Monomial([-1, m - 1, 0]));
            assert!(report.reduces_to_one);
        }

        let wrong =
            verify_ideal_invariance_with(3, &FamilyId::Finite { c: 1, e: 1 }, YElement::new(1, 1));
        assert!(!wrong.reduces_to_one);
        assert!(verify_ideal_invariance(4, &FamilyId::Finite { c: 2, e: 2 }).is_err());
    }

    #[test]
    fn reduction_needs_an_integral_multiple() {
        let rel = LocusRelation::finite_family(2, 6); // T₂² = T₃⁴
        assert!(rel.reduces_to_one(&Monomial([0, -2, 4])));
        assert!(rel.reduces_to_one(&Monomial([0, 4, -8])));
        // T₂ T₃⁻² is only a square root of unity on the locus
        assert!(!rel.reduces_to_one(&Monomial([0, 1, -2])));
        assert!(rel.reduces_to_one(&Monomial::ONE));
        assert!(LocusRelation::new([0, 0, 0]).is_err());
        assert_eq!(rel.to_string(), "T2^2 = T3^4");
    }

    #[test]
    fn fiber_examples() {
        let g = degenerate_fiber(3, StratumId::StratumI).unwrap();
        assert_eq!(g.cycle_length(), Some(3));
        assert_eq!(g.surface_type, Some(SurfaceType::P1BundleOverElliptic));

        let g = degenerate_fiber(2, StratumId::StratumII).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edges, vec![(0, 0)]);
        assert_eq!(g.cycle_length(), Some(1));
        assert_eq!(g.surface_type, Some(SurfaceType::P1xP1));

        let g = degenerate_fiber(3, StratumId::StratumIII).unwrap();
        assert_eq!(g.cycle_length(), Some(5));
        assert_eq!(g.surface_type, Some(SurfaceType::TwoP2PlusBlowup));
    }

    #[test]
    fn two_gon_has_parallel_edges() {
        let g = DualGraph::cycle(2, None);
        assert_eq!(g.edges, vec![(0, 1), (0, 1)]);
        assert_eq!(g.cycle_length(), Some(2));
        assert_eq!(g.arithmetic_genus(), 1);
    }

    #[test]
    fn oracle_examples() {
        let g = quotient_cycle_oracle(3, 1).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edges, vec![(0, 0)]);
        let g = quotient_cycle_oracle(20, 4).unwrap();
        assert_eq!(g.cycle_length(), Some(4));
        assert_eq!(
            quotient_cycle_oracle(11, 4),
            Err(Error::WindowTooSmall {
                window: 11,
                shift: 4
            })
        );
    }

    #[test]
    fn fibers_match_oracle() {
        for m in 2..=12 {
            for stratum in StratumId::ALL {
                let g = degenerate_fiber(m, stratum).unwrap();
                let shift = stratum.chain_shift(m) as usize;
                let oracle = quotient_cycle_oracle(3 * shift + 2, shift).unwrap();
                assert_eq!(g.vertices, oracle.vertices);
                assert_eq!(g.edges, oracle.edges);
            }
        }
    }

    #[test]
    fn dot_output_is_canonical() {
        let dot = degenerate_fiber(3, StratumId::StratumI).unwrap().to_dot();
        assert_eq!(
            dot,
            "graph fiber {\n  surface=\"P1BundleOverElliptic\";\n  Z0;\n  Z1;\n  Z2;\n  Z0 -- Z1;\n  Z0 -- Z2;\n  Z1 -- Z2;\n}\n"
        );
        let dot = degenerate_fiber(6, StratumId::StratumIII).unwrap().to_dot();
        let vertex_lines: Vec<&str> = dot
            .lines()
            .filter(|l| l.ends_with(';') && !l.contains("--") && !l.contains('='))
            .collect();
        assert_eq!(vertex_lines.len(), 11);
        assert_eq!(vertex_lines[10].trim(), "Z10;");
    }

    proptest! {
        #[test]
        fn action_is_a_homomorphism(a1 in -50i64..=50, b1 in -50i64..=50, a2 in -50i64..=50, b2 in -50i64..=50) {
            let (y1, y2) = (YElement::new(a1, b1), YElement::new(a2, b2));
            prop_assert_eq!((y1 + y2).action(), y1.action().componentwise(&y2.action()));
            prop_assert!((y1 + y2).action().total().is_one());
            prop_assert!((-y1).action().componentwise(&y1.action()) == MonomialTriple::identity());
        }
    }
}
