//! Small exact dense linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::vector::{Rat, RatVector};

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det_int(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    det_int(&big)
}

/// Determinant of a square rational matrix.
pub fn det_rat(rows: &[RatVector]) -> Rat {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

/// Row rank of a list of equal-length vectors.
pub fn rank(rows: &[RatVector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Affine dimension of a point set; -1 for the empty set.
pub fn affine_dim(points: &[RatVector]) -> i64 {
    match points.split_first() {
        None => -1,
        Some((p0, rest)) => {
            let diffs: Vec<RatVector> = rest.iter().map(|p| p.sub(p0)).collect();
            rank(&diffs) as i64
        }
    }
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn inverse(rows: &[RatVector]) -> Option<Vec<RatVector>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.entries().to_vec();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..2 * n {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    Some(
        m.into_iter()
            .map(|row| RatVector::new(row[n..].to_vec()))
            .collect(),
    )
}
