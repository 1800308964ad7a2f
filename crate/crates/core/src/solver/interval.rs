//! Closed intervals with rational endpoints, used to carry unrecognised
//! algebraic roots through back-substitution and residual checks.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::exactnum::{RadicalScalar, Rational, Scalar, Sign};

#[derive(Clone, PartialEq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn enclose(x: &RadicalScalar, bits: u32) -> Self {
        match x.as_rational() {
            Some(q) => Self::point(q.clone()),
            None => {
                let (lo, hi) = x.enclosure(bits);
                RatInterval { lo, hi }
            }
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() != Sign::Positive && self.hi.signum() != Sign::Negative
    }

    /// Sign when the interval excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.signum() == Sign::Positive {
            Some(Sign::Positive)
        } else if self.hi.signum() == Sign::Negative {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn magnitude(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(RatInterval {
            lo: self.hi.recip().unwrap(),
            hi: self.lo.recip().unwrap(),
        })
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from(2)).to_f64()
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for RatInterval {
    fn zero() -> Self {
        Self::point(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for RatInterval {
    fn one() -> Self {
        Self::point(Rational::one())
    }
}

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> Self {
        RatInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<'a> AddAssign<&'a RatInterval> for RatInterval {
    fn add_assign(&mut self, rhs: &'a RatInterval) {
        self.lo = &self.lo + &rhs.lo;
        self.hi = &self.hi + &rhs.hi;
    }
}

impl<'a> SubAssign<&'a RatInterval> for RatInterval {
    fn sub_assign(&mut self, rhs: &'a RatInterval) {
        self.lo = &self.lo - &rhs.hi;
        self.hi = &self.hi - &rhs.lo;
    }
}

impl<'a> MulAssign<&'a RatInterval> for RatInterval {
    fn mul_assign(&mut self, rhs: &'a RatInterval) {
        let p = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        self.lo = lo;
        self.hi = hi;
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for RatInterval {
    type Output = RatInterval;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for RatInterval {
    type Output = RatInterval;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl Scalar for RatInterval {
    fn from_rational(q: &Rational) -> Self {
        Self::point(q.clone())
    }
}

impl crate::poly::Embed<RatInterval> for RadicalScalar {
    fn embed(&self) -> RatInterval {
        RatInterval::enclose(self, 128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let a = RatInterval::new(Rational::from(-1), Rational::from(2));
        let b = RatInterval::new(Rational::from(3), Rational::from(4));
        let p = a.clone() * b.clone();
        assert_eq!(p, RatInterval::new(Rational::from(-4), Rational::from(8)));
        let d = a - b.clone();
        assert_eq!(d, RatInterval::new(Rational::from(-5), Rational::from(-1)));
        let r = b.recip().unwrap();
        assert_eq!(r, RatInterval::new(Rational::new(1, 4), Rational::new(1, 3)));
        let s = RatInterval::enclose(&RadicalScalar::sqrt2(), 40);
        assert!(s.lo.to_f64() < std::f64::consts::SQRT_2 && s.hi.to_f64() > std::f64::consts::SQRT_2);
    }
}
