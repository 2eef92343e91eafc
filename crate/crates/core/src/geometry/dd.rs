//! Incremental double description for homogeneous cones `{ y : A y >= 0 }`.
//!
//! Rows are inserted one at a time in the order given. The current cone is held
//! as a lineality basis plus its extreme rays modulo that basis. A row that
//! cuts a line consumes it; otherwise rays are split by sign and new rays are
//! formed from adjacent positive/negative pairs using the combinatorial
//! adjacency test on zero sets. All arithmetic is on primitive integer vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::vector::make_primitive;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<BigInt>>,
    pub lines: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// `alpha * x - beta * y`, made primitive.
fn combine(alpha: &BigInt, x: &[BigInt], beta: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| alpha * a - beta * b).collect();
    make_primitive(&mut v);
    v
}

fn zero_set(ray: &[BigInt], processed: &[Vec<BigInt>]) -> Vec<bool> {
    processed.iter().map(|row| dot(row, ray).is_zero()).collect()
}

fn contains_all(sup: &[bool], sub: &[bool]) -> bool {
    sub.iter().zip(sup).all(|(s, t)| !*s || *t)
}

/// Generators of `{ y in R^dim : row . y >= 0 for every row }`.
pub fn cone_generators(dim: usize, rows: &[Vec<BigInt>]) -> ConeGenerators {
    let mut lines: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut processed: Vec<Vec<BigInt>> = Vec::new();

    for row in rows {
        assert_eq!(row.len(), dim, "constraint row has wrong length");
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(idx) = lines.iter().position(|l| !dot(row, l).is_zero()) {
            let mut pivot = lines.remove(idx);
            let mut s = dot(row, &pivot);
            if s.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -x.clone());
                s = -s;
            }
            for l in lines.iter_mut() {
                let t = dot(row, l);
                if !t.is_zero() {
                    *l = combine(&s, l, &t, &pivot);
                }
            }
            for r in rays.iter_mut() {
                let t = dot(row, r);
                if !t.is_zero() {
                    *r = combine(&s, r, &t, &pivot);
                }
            }
            rays.push(pivot);
            processed.push(row.clone());
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, r)).collect();
        let zsets: Vec<Vec<bool>> = rays.iter().map(|r| zero_set(r, &processed)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut next: Vec<Vec<BigInt>> = (0..rays.len())
            .filter(|&i| !values[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<bool> = zsets[p].iter().zip(&zsets[q]).map(|(a, b)| *a && *b).collect();
                let adjacent = (0..rays.len())
                    .filter(|&r| r != p && r != q)
                    .all(|r| !contains_all(&zsets[r], &common));
                if adjacent {
                    // values[p] > 0 > values[q]
                    let v = combine(&values[p], &rays[q], &values[q], &rays[p]);
                    if v.iter().any(|x| !x.is_zero()) {
                        next.push(v);
                    }
                }
            }
        }
        rays = next;
        processed.push(row.clone());
    }

    rays.sort();
    rays.dedup();
    ConeGenerators { rays, lines }
}
