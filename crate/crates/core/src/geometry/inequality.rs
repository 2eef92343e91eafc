use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::vector::{denom_lcm, fmt_rat, make_primitive, Rat, RatVector};

/// The constraint `normal . x + constant >= 0` (or `= 0` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearInequality {
    pub normal: RatVector,
    pub constant: Rat,
}

/// What a constraint with zero normal says about every point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    AlwaysTrue,
    AlwaysFalse,
}

impl LinearInequality {
    pub fn new(normal: RatVector, constant: Rat) -> Self {
        LinearInequality { normal, constant }
    }

    pub fn from_ints(normal: &[i64], constant: i64) -> Self {
        LinearInequality::new(RatVector::from_ints(normal), Rat::from_integer(constant.into()))
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &RatVector) -> Rat {
        self.normal.dot(x) + &self.constant
    }

    pub fn holds_at(&self, x: &RatVector) -> bool {
        !self.eval(x).is_negative()
    }

    /// `Some(..)` when the normal vanishes.
    pub fn triviality(&self) -> Option<Triviality> {
        if !self.normal.is_zero() {
            None
        } else if self.constant.is_negative() {
            Some(Triviality::AlwaysFalse)
        } else {
            Some(Triviality::AlwaysTrue)
        }
    }

    /// Integer coefficients `(normal..., constant)` with content one. Orientation is kept.
    pub fn integer_row(&self) -> Vec<BigInt> {
        let l = Rat::from_integer(denom_lcm(self.normal.iter().chain(std::iter::once(&self.constant))));
        let mut row: Vec<BigInt> = self
            .normal
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|r| (r * &l).to_integer())
            .collect();
        make_primitive(&mut row);
        row
    }

    pub fn from_integer_row(row: &[BigInt]) -> Self {
        let (c, n) = row.split_last().expect("row has a constant");
        LinearInequality::new(RatVector::from_bigints(n), Rat::from_integer(c.clone()))
    }

    pub fn canonical(&self) -> Self {
        LinearInequality::from_integer_row(&self.integer_row())
    }

    /// Canonical form of an equation: the sign is fixed so the first nonzero
    /// coefficient is positive, since `= 0` has no orientation.
    pub fn canonical_equation(&self) -> Self {
        let mut row = self.integer_row();
        if row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        LinearInequality::from_integer_row(&row)
    }

    pub fn negated(&self) -> Self {
        LinearInequality::new(self.normal.scale(&Rat::from_integer((-1).into())), -self.constant.clone())
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.normal.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let coef = if mag == Rat::from_integer(1.into()) { String::new() } else { fmt_rat(&mag) };
            if first {
                write!(f, "{sign}{coef}x{}", i + 1)?;
            } else {
                write!(f, " {sign} {coef}x{}", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", fmt_rat(&self.constant))?;
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", fmt_rat(&self.constant.abs()))?;
        }
        write!(f, " >= 0")
    }
}
