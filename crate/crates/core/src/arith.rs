//! Small integer helpers shared by the modules.

use num_integer::Integer;

pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Least nonnegative residue.
pub fn modp(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// Euler's totient via the prime factorization of `m`.
pub fn euler_phi(m: u64) -> u64 {
    prime_factors(m)
        .into_iter()
        .fold(m, |acc, p| acc / p * (p - 1))
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Number of pairs in `(Z/m)^2` of order exactly `m` (Jordan's totient J_2).
pub fn order_m_pair_count(m: u64) -> u64 {
    prime_factors(m)
        .into_iter()
        .fold(m * m, |acc, p| acc / (p * p) * (p * p - 1))
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}
