use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use rug::Integer;
use thiserror::Error;

use super::{FieldScalar, OrderedScalar, Scalar, Sign};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(rug::Rational);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl Rational {
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Self {
        let den = den.into();
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num.into(), den)))
    }

    pub fn from_integer(n: Integer) -> Self {
        Rational(rug::Rational::from(n))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn inner(&self) -> &rug::Rational {
        &self.0
    }

    pub fn into_inner(self) -> rug::Rational {
        self.0
    }

    pub fn from_inner(q: rug::Rational) -> Self {
        Rational(q)
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.clone().abs())
    }

    pub fn recip(&self) -> Option<Rational> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.clone().recip()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Rational> {
        rug::Rational::from_f64(x).map(Rational)
    }

    pub fn signum(&self) -> Sign {
        match self.0.cmp0() {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn floor(&self) -> Integer {
        self.0.clone().floor().into_numer_denom().0
    }

    /// `2^-k`-rounded dyadic below the value.
    pub fn dyadic_floor(&self, bits: u32) -> Rational {
        let scaled = rug::Rational::from(&self.0 << bits);
        let (num, _) = scaled.floor().into_numer_denom();
        Rational(rug::Rational::from(num) >> bits)
    }

    pub fn powi(&self, e: i32) -> Rational {
        if e >= 0 {
            Scalar::pow(self, e as u32)
        } else {
            Scalar::pow(&self.recip().expect("negative power of zero"), (-e) as u32)
        }
    }

    /// Best rational approximation with denominator at most `max_den`
    /// (continued-fraction convergents).
    pub fn approximate(x: f64, max_den: u64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let target = rug::Rational::from_f64(x)?;
        let (mut p0, mut q0, mut p1, mut q1) = (Integer::from(0), Integer::from(1), Integer::from(1), Integer::from(0));
        let mut rest = target;
        loop {
            let a = rest.clone().floor().into_numer_denom().0;
            let p2 = Integer::from(&a * &p1) + &p0;
            let q2 = Integer::from(&a * &q1) + &q0;
            if q2 > max_den {
                break;
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let frac = rest - rug::Rational::from(a);
            if frac.is_zero() {
                break;
            }
            rest = frac.recip();
        }
        if q1 == 0 {
            return None;
        }
        Some(Rational::new(p1, q1))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseRationalError(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let ok = |x: &str| {
            let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !ok(num) || !ok(den) || den.starts_with(['-', '+']) {
            return Err(bad());
        }
        let n: Integer = num.trim_start_matches('+').parse().map_err(|_| bad())?;
        let d: Integer = den.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(rug::Rational::from(n))
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational(rug::Rational::from(n))
    }
}

impl From<Integer> for Rational {
    fn from(n: Integer) -> Self {
        Rational(rug::Rational::from(n))
    }
}

impl From<(i64, i64)> for Rational {
    fn from((n, d): (i64, i64)) -> Self {
        Rational::new(n, d)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(rug::Rational::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(rug::Rational::from(1))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(rug::Rational::from(-&self.0))
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(rug::Rational::from((&self.0).$m(&rhs.0)))
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, rhs: &'a Rational) {
                self.0.$am(&rhs.0);
            }
        }
    };
}

rat_binop!(Add, add, AddAssign, add_assign);
rat_binop!(Sub, sub, SubAssign, sub_assign);
rat_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl FieldScalar for Rational {
    fn try_inv(&self) -> Option<Self> {
        self.recip()
    }
}

impl OrderedScalar for Rational {
    fn sign(&self) -> Sign {
        self.signum()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let q = Rational::new(6, -4);
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(*q.denom(), 2);
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "-7", "3/4", "-12/5"] {
            assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn continued_fraction_approximation() {
        let q = Rational::approximate(0.4166666666666667, 1000).unwrap();
        assert_eq!(q, Rational::new(5, 12));
        let q = Rational::approximate(-2.5, 10).unwrap();
        assert_eq!(q, Rational::new(-5, 2));
    }

    #[test]
    fn dyadic_floor_is_below() {
        let q = Rational::new(1, 3);
        let d = q.dyadic_floor(10);
        assert!(d <= q);
        assert!(&q - &d < Rational::new(1, 1024));
    }
}
