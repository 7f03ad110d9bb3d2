//! Integer combinations of `m`-th roots of unity.
//!
//! Elements of `ℤ[ρ]`, `ρ = e^{2πi/m}`, are stored as coefficient vectors in
//! `ℤ[x]/(x^m − 1)`. That ring is not a domain, so equality and zero tests
//! reduce modulo the cyclotomic polynomial `Φ_m` first.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_complex::Complex64;

use crate::arith::divisors;

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    phi(n).to_vec()
}

fn phi(n: u64) -> Rc<Vec<i64>> {
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n − 1 = ∏_{d | n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        num = exact_div(&num, &phi(d));
    }
    let p = Rc::new(num);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, Rc::clone(&p)));
    p
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        for (j, &c) in den.iter().enumerate() {
            rem[i + j] -= q * c;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "division is not exact");
    quot
}

/// Remainder of an integer polynomial modulo a monic polynomial.
fn rem_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    for i in (dd..rem.len()).rev() {
        let q = rem[i];
        if q != 0 {
            for (j, &c) in den.iter().enumerate() {
                rem[i - dd + j] -= q * c;
            }
        }
    }
    rem.truncate(dd);
    rem
}

/// An element of `ℤ[x]/(x^m − 1)`, read as a value in `ℤ[ρ]`.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    m: u64,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(m: u64) -> Self {
        assert!(m >= 1, "order must be positive");
        Self {
            m,
            coeffs: vec![0; m as usize],
        }
    }

    pub fn one(m: u64) -> Self {
        Self::root_power(m, 0)
    }

    /// `ρ^k` for any integer `k`.
    pub fn root_power(m: u64, k: i64) -> Self {
        let mut out = Self::zero(m);
        out.coeffs[k.rem_euclid(m as i64) as usize] = 1;
        out
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coordinates in the power basis `1, ρ, …, ρ^{φ(m)−1}`; canonical.
    pub fn reduced(&self) -> Vec<i64> {
        rem_monic(&self.coeffs, &phi(self.m))
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&x| x == 0)
    }

    /// If this element equals a single root of unity `ρ^k`, returns `k mod m`.
    pub fn as_root_of_unity(&self) -> Option<i64> {
        let mut support = self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0);
        if let (Some((k, 1)), None) = (support.next().map(|(k, &c)| (k, c)), support.next()) {
            return Some(k as i64);
        }
        let target = self.reduced();
        (0..self.m as i64).find(|&k| Self::root_power(self.m, k).reduced() == target)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.m as f64) * c as f64
            })
            .sum()
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.m, other.m, "mixed orders of roots of unity");
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.reduced() == other.reduced()
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_order(rhs);
        Cyclotomic {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_order(rhs);
        let m = self.m as usize;
        let mut out = Cyclotomic::zero(self.m);
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                out.coeffs[(i + j) % m] += a * b;
            }
        }
        out
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => format!("{c}"),
                (k, 1) => format!("ρ^{k}"),
                (k, -1) => format!("-ρ^{k}"),
                (k, c) => format!("{c}ρ^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_are_distinct() {
        for m in 1..30u64 {
            let reduced: Vec<_> = (0..m as i64)
                .map(|k| Cyclotomic::root_power(m, k).reduced())
                .collect();
            for i in 0..reduced.len() {
                for j in 0..i {
                    assert_ne!(reduced[i], reduced[j], "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for m in 2..20u64 {
            let total = (0..m as i64).fold(Cyclotomic::zero(m), |acc, k| {
                &acc + &Cyclotomic::root_power(m, k)
            });
            assert!(total.is_zero());
        }
    }

    #[test]
    fn i_plus_its_inverse_is_zero() {
        let i = Cyclotomic::root_power(4, 1);
        let i_inv = Cyclotomic::root_power(4, -1);
        assert!((&i + &i_inv).is_zero());
        assert_eq!(&i * &i_inv, Cyclotomic::one(4));
        assert!((&i * &i).as_root_of_unity() == Some(2));
    }

    #[test]
    fn complex_embedding_agrees() {
        for m in 2..12u64 {
            let x = &Cyclotomic::root_power(m, 1) + &Cyclotomic::root_power(m, -3);
            let y = &x * &Cyclotomic::root_power(m, 2);
            let expected = x.to_complex() * Cyclotomic::root_power(m, 2).to_complex();
            assert!((y.to_complex() - expected).norm() < 1e-12);
            assert_eq!(y.is_zero(), y.to_complex().norm() < 1e-9);
        }
    }
}
