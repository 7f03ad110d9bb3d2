use humbert_core::siegel::{enumerate_vectors, DiscriminantVector};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Plain 5-fold loop over the box, normalized so the first nonzero entry is positive.
fn brute_force(m: i64, bound: i64) -> (usize, Vec<[i64; 5]>) {
    let r = -bound..=bound;
    let mut raw = 0;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    for e in r.clone() {
                        let v = [a, b, c, d, e];
                        if b * b - 4 * (a * c + d * e) != m * m
                            || v.iter().fold(0, |g, &x| gcd(g, x)) != 1
                        {
                            continue;
                        }
                        raw += 1;
                        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    (raw, out)
}

#[test]
fn matches_brute_force_and_frozen_counts() {
    // frozen from an independent exhaustive run: (m, bound, raw, normalized)
    for (m, bound, raw, normalized) in [(2, 2, 244, 122), (3, 3, 824, 412), (4, 4, 1624, 812)] {
        let (oracle_raw, oracle) = brute_force(m, bound);
        assert_eq!(oracle_raw, raw);
        assert_eq!(oracle.len(), normalized);
        let lib: Vec<[i64; 5]> = enumerate_vectors(m, bound)
            .unwrap()
            .iter()
            .map(DiscriminantVector::coeffs)
            .collect();
        assert_eq!(lib, oracle, "m={m} bound={bound}");
    }
}

#[test]
fn known_members() {
    let two = enumerate_vectors(2, 2).unwrap();
    assert!(two.iter().any(|v| v.coeffs() == [0, 2, 1, 0, 1]));
    let three = enumerate_vectors(3, 3).unwrap();
    assert!(three.iter().any(|v| v.coeffs() == [1, -1, -2, 0, 0]));
}

#[test]
fn bound_below_m_is_rejected() {
    assert!(enumerate_vectors(5, 4).is_err());
    assert!(enumerate_vectors(1, 4).is_err());
}
