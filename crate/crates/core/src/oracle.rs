//! Test-only oracles that share no code with the elimination engine.

use crate::matrix::ProductKind;
use crate::tensor::TensorSpace;

/// Rank of an integer matrix by fraction-free elimination over `i128`.
pub fn integer_rank(m: Vec<Vec<i64>>) -> usize {
    let mut m: Vec<Vec<i128>> = m
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `dim Ker mu` from the rank of all products `b_s * b_t` written in the
/// ambient `n^2` coordinates.
pub fn brute_kernel_dim(space: &TensorSpace, kind: ProductKind) -> usize {
    let n = space.n();
    let mut rows = Vec::new();
    for a in space.basis() {
        for b in space.basis() {
            let p = a.product(b, kind).unwrap();
            let mut row = vec![0i64; n * n];
            for (i, j, v) in p.entries() {
                row[(i - 1) * n + (j - 1)] = v.to_text().parse().unwrap();
            }
            rows.push(row);
        }
    }
    let d = space.d();
    d * d - integer_rank(rows)
}
