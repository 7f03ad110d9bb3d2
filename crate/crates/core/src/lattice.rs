//! Exact integer lattice routines: integer kernels, saturation, Hermite and
//! Smith normal forms of small matrices.

use num_integer::Integer;

/// A `ℤ`-basis of `{x ∈ ℤⁿ : A x = 0}`, by unimodular column operations.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "row length mismatch");
            r.iter().map(|&x| i128::from(x)).collect()
        })
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();

    // columns are the second index of both `a` and `u`
    let col_sub = |m: &mut Vec<Vec<i128>>, target: usize, source: usize, q: i128| {
        for row in m.iter_mut() {
            row[target] -= q * row[source];
        }
    };
    let col_swap = |m: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot >= n {
            break;
        }
        for j in pivot + 1..n {
            while a[r][j] != 0 {
                let q = a[r][pivot] / a[r][j];
                col_sub(&mut a, pivot, j, q);
                col_sub(&mut u, pivot, j, q);
                col_swap(&mut a, pivot, j);
                col_swap(&mut u, pivot, j);
            }
        }
        if a[r][pivot] != 0 {
            pivot += 1;
        }
    }
    (pivot..n)
        .map(|j| {
            (0..n)
                .map(|i| i64::try_from(u[i][j]).expect("kernel entry fits in i64"))
                .collect()
        })
        .collect()
}

/// `ℤⁿ ∩ span_ℚ(vectors)`.
pub fn saturate(vectors: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let complement = integer_kernel(vectors, n);
    if complement.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    integer_kernel(&complement, n)
}

/// Row Hermite normal form (nonzero rows only); a canonical basis of the
/// lattice spanned by the rows.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut h: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut top = 0;
    for col in 0..n {
        if top >= h.len() {
            break;
        }
        for i in top + 1..h.len() {
            while h[i][col] != 0 {
                let q = h[top][col] / h[i][col];
                for k in 0..n {
                    h[top][k] -= q * h[i][k];
                }
                h.swap(top, i);
            }
        }
        if h[top][col] == 0 {
            continue;
        }
        if h[top][col] < 0 {
            h[top].iter_mut().for_each(|x| *x = -*x);
        }
        let p = h[top][col];
        for i in 0..top {
            let q = h[i][col].div_euclid(p);
            for k in 0..n {
                h[i][k] -= q * h[top][k];
            }
        }
        top += 1;
    }
    h.truncate(top);
    h.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Rank over `ℚ`.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hermite_normal_form(rows).len()
}

/// Diagonal of the Smith normal form of a square integer matrix.
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = matrix.to_vec();
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        // bring a nonzero entry of minimal absolute value to (t, t)
        loop {
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
            else {
                diag.extend(std::iter::repeat_n(0, n - t));
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t] / p;
                for k in t..n {
                    a[i][k] -= q * a[t][k];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j] / p;
                for row in a.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for k in t..n {
                        a[t][k] += a[i][k];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// `gcd` of all entries.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, x| g.gcd(x))
}
