use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the kernel.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Least common multiple of the denominators.
pub(crate) fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Divides an integer row by the gcd of its entries. Zero rows are left alone.
pub(crate) fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Fixed-length vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RatVector(vec![Rat::zero(); len])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(entries: &[BigInt]) -> Self {
        RatVector(entries.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.len(), other.len(), "dot product of unequal lengths");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len(), "sum of unequal lengths");
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len(), "difference of unequal lengths");
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Drops one coordinate.
    pub fn without(&self, coord: usize) -> RatVector {
        let mut v = self.0.clone();
        v.remove(coord);
        RatVector(v)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|r| r.is_integer())
    }

    /// Integer entries as `i64`, if every entry is an integer that fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|r| if r.is_integer() { r.numer().to_i64() } else { None })
            .collect()
    }

    /// Scales to a primitive integer vector with the same direction.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = denom_lcm(&self.0);
        let mut row: Vec<BigInt> = self
            .0
            .iter()
            .map(|r| (r * Rat::from_integer(l.clone())).to_integer())
            .collect();
        make_primitive(&mut row);
        row
    }

    pub fn abs_max(&self) -> Rat {
        self.0
            .iter()
            .map(|r| r.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(v: Vec<Rat>) -> Self {
        RatVector(v)
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(r))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_formatting_round_trips() {
        for (n, d) in [(1, 1), (-3, 4), (6, 3), (0, 5)] {
            let r = rat_frac(n, d);
            assert_eq!(parse_rat(&fmt_rat(&r)), Some(r));
        }
        assert_eq!(fmt_rat(&rat_frac(6, 3)), "2");
        assert_eq!(fmt_rat(&rat_frac(-3, 6)), "-1/2");
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let v = RatVector::new(vec![rat_frac(1, 2), rat_frac(-3, 4), rat(0)]);
        assert_eq!(
            v.primitive_integer(),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
    }

    #[test]
    #[should_panic]
    fn dot_rejects_unequal_lengths() {
        RatVector::zeros(2).dot(&RatVector::zeros(3));
    }
}
