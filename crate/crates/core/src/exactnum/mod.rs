//! Exact scalars: rationals, the fixed radical field Q(sqrt2, 3^(1/4)), and a
//! quotient ring K[t, s]/(s^2 - r(t)) used to verify one-parameter families.
//!
//! Everything polynomial in this crate is generic over [`Scalar`]; `f64`
//! implements it as well so the same code paths can be evaluated numerically.

mod expr;
mod param;
mod radical;
mod rational;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

pub use expr::{parse_radical_expr, ExprError};
pub use param::{single_relation, ParamError, ParamRingElem, Relation};
pub use radical::{RadicalScalar, RADICAL_BASIS_LEN};
pub use rational::{ParseRationalError, Rational};

/// Sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// A commutative ring element that polynomials can carry as coefficients or be
/// evaluated into.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Canonical image of a rational number.
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                let b = base.clone();
                base *= &b;
            }
        }
        acc
    }
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait FieldScalar: Scalar {
    fn try_inv(&self) -> Option<Self>;

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        rhs.try_inv().map(|inv| {
            let mut out = self.clone();
            out *= &inv;
            out
        })
    }
}

/// A field with a decidable embedding into the reals.
pub trait OrderedScalar: FieldScalar {
    fn sign(&self) -> Sign;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
}

impl FieldScalar for f64 {
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl OrderedScalar for f64 {
    fn sign(&self) -> Sign {
        if *self > 0.0 {
            Sign::Positive
        } else if *self < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
