use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use rug::Integer;

use super::{FieldScalar, OrderedScalar, ParseRationalError, Rational, Scalar, Sign};

/// Dimension of Q(sqrt2, 3^(1/4)) over Q.
pub const RADICAL_BASIS_LEN: usize = 8;

const SQRT2_F64: f64 = std::f64::consts::SQRT_2;

fn fourth_root3_f64() -> f64 {
    3f64.sqrt().sqrt()
}

#[inline]
fn slot(i: usize, j: usize) -> usize {
    i * 4 + j
}

/// Element of Q(sqrt2, 3^(1/4)), stored as rational coordinates in the basis
/// `2^(i/2) * 3^(j/4)`, `i in {0,1}`, `j in {0,1,2,3}`. Slot `i*4 + j`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalScalar {
    coeffs: [Rational; RADICAL_BASIS_LEN],
}

impl RadicalScalar {
    pub fn from_coeffs(coeffs: [Rational; RADICAL_BASIS_LEN]) -> Self {
        RadicalScalar { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational; RADICAL_BASIS_LEN] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rational {
        &self.coeffs[slot(i, j)]
    }

    /// `q * 2^(i/2) * 3^(j/4)` for arbitrary integer exponents.
    pub fn monomial(q: Rational, i: i32, j: i32) -> Self {
        let (i2, ri) = (i.div_euclid(2), i.rem_euclid(2) as usize);
        let (j4, rj) = (j.div_euclid(4), j.rem_euclid(4) as usize);
        let scale = Rational::from(2).powi(i2) * Rational::from(3).powi(j4);
        let mut out = RadicalScalar::zero();
        out.coeffs[slot(ri, rj)] = q * scale;
        out
    }

    pub fn rational(q: Rational) -> Self {
        Self::monomial(q, 0, 0)
    }

    pub fn sqrt2() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn sqrt3() -> Self {
        Self::monomial(Rational::one(), 0, 2)
    }

    pub fn fourth_root3() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `Some(q)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// `Some((q, i, j))` when exactly one basis coordinate is nonzero.
    pub fn as_monomial(&self) -> Option<(Rational, usize, usize)> {
        let mut found = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((c.clone(), k / 4, k % 4));
            }
        }
        found
    }

    pub fn to_f64(&self) -> f64 {
        let r3 = fourth_root3_f64();
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..4 {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    acc += c.to_f64() * SQRT2_F64.powi(i as i32) * r3.powi(j as i32);
                }
            }
        }
        acc
    }

    /// Sign of the real embedding (sqrt2 > 0, 3^(1/4) > 0), decided by
    /// evaluating on dyadic enclosures of the two generators and doubling the
    /// precision until the enclosure excludes zero. Terminates because a
    /// nonzero coordinate vector is a nonzero real number.
    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Some(q) = self.as_rational() {
            return q.signum();
        }
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.signum() == Sign::Positive {
                return Sign::Positive;
            }
            if hi.signum() == Sign::Negative {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }

    /// Rational interval containing the real value; width shrinks like `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let (l2, u2) = generator_enclosure(2, 2, bits);
        let (l3, u3) = generator_enclosure(3, 4, bits);
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for i in 0..2 {
            for j in 0..4 {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let blo = l2.powi(i as i32) * l3.powi(j as i32);
                let bhi = u2.powi(i as i32) * u3.powi(j as i32);
                if c.signum() == Sign::Positive {
                    lo += &(c * &blo);
                    hi += &(c * &bhi);
                } else {
                    lo += &(c * &bhi);
                    hi += &(c * &blo);
                }
            }
        }
        (lo, hi)
    }

    /// Field norm down to Q is not needed; inversion solves the 8x8 linear
    /// system `x * y = 1` by exact elimination.
    pub fn inverse(&self) -> Option<RadicalScalar> {
        if self.is_zero() {
            return None;
        }
        if let Some((q, i, j)) = self.as_monomial() {
            return Some(RadicalScalar::monomial(q.recip().unwrap(), -(i as i32), -(j as i32)));
        }
        // column k of m = self * basis_k
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); RADICAL_BASIS_LEN + 1]; 8];
        for k in 0..RADICAL_BASIS_LEN {
            let prod = self.clone() * RadicalScalar::monomial(Rational::one(), (k / 4) as i32, (k % 4) as i32);
            for (r, c) in prod.coeffs.iter().enumerate() {
                m[r][k] = c.clone();
            }
        }
        m[0][RADICAL_BASIS_LEN] = Rational::one();
        let n = RADICAL_BASIS_LEN;
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip().unwrap();
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                        *x -= &(&f * p);
                    }
                }
            }
        }
        let mut out = RadicalScalar::zero();
        for (k, row) in m.into_iter().enumerate() {
            out.coeffs[k] = row[n].clone();
        }
        Some(out)
    }

    /// Monic minimal polynomial over Q, coefficients from the constant term up.
    pub fn minimal_polynomial(&self) -> Vec<Rational> {
        // Find the first power x^n that is a Q-combination of 1, x, ..., x^(n-1).
        // Each reduced row keeps the combination of powers that produced it.
        let n_pow = RADICAL_BASIS_LEN + 1;
        let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
        let mut power = RadicalScalar::one();
        for n in 0..n_pow {
            let mut v: Vec<Rational> = power.coeffs.to_vec();
            let mut combo = vec![Rational::zero(); n_pow];
            combo[n] = Rational::one();
            for (piv, rv, rc) in &rows {
                if !v[*piv].is_zero() {
                    let f = v[*piv].clone();
                    for (x, y) in v.iter_mut().zip(rv.iter()) {
                        *x -= &(&f * y);
                    }
                    for (x, y) in combo.iter_mut().zip(rc.iter()) {
                        *x -= &(&f * y);
                    }
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => {
                    let lead = combo[n].clone();
                    return combo[..=n].iter().map(|c| c / &lead).collect();
                }
                Some(piv) => {
                    let inv = v[piv].recip().unwrap();
                    for x in v.iter_mut() {
                        *x *= &inv;
                    }
                    for x in combo.iter_mut() {
                        *x *= &inv;
                    }
                    for (_, rv, rc) in rows.iter_mut() {
                        if !rv[piv].is_zero() {
                            let f = rv[piv].clone();
                            for (x, y) in rv.iter_mut().zip(v.iter()) {
                                *x -= &(&f * y);
                            }
                            for (x, y) in rc.iter_mut().zip(combo.iter()) {
                                *x -= &(&f * y);
                            }
                        }
                    }
                    rows.push((piv, v, combo));
                }
            }
            power *= self;
        }
        unreachable!("degree of the field bounds the minimal polynomial")
    }

    /// Nonnegative square root when it lies in the field and is a single
    /// basis monomial times a rational (the only shape the tables produce).
    pub fn sqrt_monomial(&self) -> Option<RadicalScalar> {
        if self.is_zero() {
            return Some(RadicalScalar::zero());
        }
        let (q, i, j) = self.as_monomial()?;
        if q.signum() != Sign::Positive || i != 0 || j % 2 != 0 {
            return None;
        }
        // q = r^2 * 2^a * 3^b with a, b in {0,1}
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let part = &q / &(Rational::from(2).powi(a) * Rational::from(3).powi(b));
            if let Some(r) = rational_sqrt(&part) {
                return Some(RadicalScalar::monomial(r, a, 2 * b + j as i32 / 2));
            }
        }
        None
    }

    fn term_strings(&self) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for i in 0..2 {
            for j in 0..4 {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let neg = c.signum() == Sign::Negative;
                let mut s = c.abs().to_string();
                if i == 1 {
                    s.push_str("*r2");
                }
                match j {
                    0 => {}
                    1 => s.push_str("*r3q"),
                    _ => s.push_str(&format!("*r3q^{j}")),
                }
                out.push((neg, s));
            }
        }
        out
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.signum() == Sign::Negative {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    if n.is_perfect_square() && d.is_perfect_square() {
        Some(Rational::new(n.clone().sqrt(), d.clone().sqrt()))
    } else {
        None
    }
}

/// Dyadic enclosure `[floor(v*2^bits), floor(v*2^bits)+1] / 2^bits` of `base^(1/root)`.
fn generator_enclosure(base: u32, root: u32, bits: u32) -> (Rational, Rational) {
    let scaled = Integer::from(base) << (bits * root);
    let lo = scaled.root(root);
    let den = Integer::from(1) << bits;
    let hi = Integer::from(&lo + 1);
    (Rational::new(lo, den.clone()), Rational::new(hi, den))
}

impl fmt::Display for RadicalScalar {
    /// Terms `p/q*r2^i*r3q^j` joined by ` + ` / ` - `; exponent 1 and zero
    /// exponents omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.term_strings();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, s)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{s}")?,
                (0, false) => write!(f, "{s}")?,
                (_, true) => write!(f, " - {s}")?,
                (_, false) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for RadicalScalar {
    type Err = ParseRationalError;

    /// Parses the canonical serialization produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(bad());
        }
        let mut out = RadicalScalar::zero();
        // split into signed chunks on " + " / " - "
        let mut chunks: Vec<(bool, &str)> = Vec::new();
        let mut rest = text;
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r;
        }
        loop {
            let next_plus = rest.find(" + ");
            let next_minus = rest.find(" - ");
            let cut = match (next_plus, next_minus) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            match cut {
                Some(pos) => {
                    chunks.push((neg, &rest[..pos]));
                    neg = rest[pos..].starts_with(" - ");
                    rest = &rest[pos + 3..];
                }
                None => {
                    chunks.push((neg, rest));
                    break;
                }
            }
        }
        for (neg, chunk) in chunks {
            let mut parts = chunk.split('*');
            let mut q: Rational = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let (mut i, mut j) = (0i32, 0i32);
            for p in parts {
                let (name, exp) = match p.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| bad())?),
                    None => (p, 1),
                };
                match name {
                    "r2" => i += exp,
                    "r3q" => j += exp,
                    _ => return Err(bad()),
                }
            }
            if neg {
                q = -q;
            }
            out += &RadicalScalar::monomial(q, i, j);
        }
        Ok(out)
    }
}

impl From<Rational> for RadicalScalar {
    fn from(q: Rational) -> Self {
        RadicalScalar::rational(q)
    }
}

impl From<i64> for RadicalScalar {
    fn from(n: i64) -> Self {
        RadicalScalar::rational(Rational::from(n))
    }
}

impl Zero for RadicalScalar {
    fn zero() -> Self {
        RadicalScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for RadicalScalar {
    fn one() -> Self {
        RadicalScalar::rational(Rational::one())
    }
}

impl Neg for RadicalScalar {
    type Output = RadicalScalar;
    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> AddAssign<&'a RadicalScalar> for RadicalScalar {
    fn add_assign(&mut self, rhs: &'a RadicalScalar) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl<'a> SubAssign<&'a RadicalScalar> for RadicalScalar {
    fn sub_assign(&mut self, rhs: &'a RadicalScalar) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl<'a> MulAssign<&'a RadicalScalar> for RadicalScalar {
    fn mul_assign(&mut self, rhs: &'a RadicalScalar) {
        let mut out: [Rational; RADICAL_BASIS_LEN] = Default::default();
        for (ka, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (kb, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (mut i, mut j) = (ka / 4 + kb / 4, ka % 4 + kb % 4);
                let mut c = a * b;
                if i >= 2 {
                    i -= 2;
                    c *= &Rational::from(2);
                }
                if j >= 4 {
                    j -= 4;
                    c *= &Rational::from(3);
                }
                out[slot(i, j)] += &c;
            }
        }
        self.coeffs = out;
    }
}

impl Add for RadicalScalar {
    type Output = RadicalScalar;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for RadicalScalar {
    type Output = RadicalScalar;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for RadicalScalar {
    type Output = RadicalScalar;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl Scalar for RadicalScalar {
    fn from_rational(q: &Rational) -> Self {
        RadicalScalar::rational(q.clone())
    }
}

impl FieldScalar for RadicalScalar {
    fn try_inv(&self) -> Option<Self> {
        self.inverse()
    }
}

impl OrderedScalar for RadicalScalar {
    fn sign(&self) -> Sign {
        RadicalScalar::sign(self)
    }

    fn to_f64(&self) -> f64 {
        RadicalScalar::to_f64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn minimal_polynomials() {
        let mu = RadicalScalar::monomial(q(-5, 3), 0, -2);
        assert_eq!(mu.minimal_polynomial(), vec![q(-25, 27), q(0, 1), q(1, 1)]);
        assert_eq!(RadicalScalar::from(-1).minimal_polynomial(), vec![q(1, 1), q(1, 1)]);
        let r = RadicalScalar::fourth_root3() * RadicalScalar::sqrt2().inverse().unwrap();
        assert_eq!(
            r.minimal_polynomial(),
            vec![q(-3, 4), q(0, 1), q(0, 1), q(0, 1), q(1, 1)]
        );
        let mixed = RadicalScalar::sqrt2() + RadicalScalar::fourth_root3();
        assert_eq!(mixed.minimal_polynomial().len(), 9);
    }

    #[test]
    fn generator_relations() {
        let s2 = RadicalScalar::sqrt2();
        assert_eq!(s2.clone() * s2, RadicalScalar::from(2));
        let r = RadicalScalar::fourth_root3();
        assert_eq!(Scalar::pow(&r, 4), RadicalScalar::from(3));
        assert_eq!(r.clone() * r, RadicalScalar::sqrt3());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(RadicalScalar::zero().sign(), Sign::Zero);
        let x = RadicalScalar::sqrt2() - RadicalScalar::one();
        assert_eq!(x.sign(), Sign::Positive);
        // 5 * 3^(-3/2) - 1 = 5/sqrt27 - 1 < 0
        let y = RadicalScalar::monomial(q(5, 1), 0, -6) - RadicalScalar::one();
        assert_eq!(y.sign(), Sign::Negative);
    }

    #[test]
    fn sign_of_tiny_difference() {
        // 99/70 approximates sqrt2 from above to ~7e-5
        let x = RadicalScalar::sqrt2() - RadicalScalar::rational(q(99, 70));
        assert_eq!(x.sign(), Sign::Negative);
        let y = RadicalScalar::sqrt2() - RadicalScalar::rational(q(140, 99));
        assert_eq!(y.sign(), Sign::Positive);
    }

    #[test]
    fn inverse_of_sum() {
        let x = RadicalScalar::sqrt2() + RadicalScalar::fourth_root3() + RadicalScalar::from(1);
        let inv = x.inverse().unwrap();
        assert_eq!(x * inv, RadicalScalar::one());
    }

    #[test]
    fn monomial_normalizes_exponents() {
        // 2^(-1/2) = sqrt2 / 2
        let a = RadicalScalar::monomial(q(1, 1), -1, 0);
        assert_eq!(a, RadicalScalar::monomial(q(1, 2), 1, 0));
        let b = RadicalScalar::monomial(q(1, 1), 0, -1);
        assert_eq!(b * RadicalScalar::fourth_root3(), RadicalScalar::one());
    }

    #[test]
    fn monomial_sqrt() {
        let half = RadicalScalar::rational(q(1, 2));
        let r = half.sqrt_monomial().unwrap();
        assert_eq!(r.clone() * r.clone(), half);
        assert!((r.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        // sqrt(sqrt3 / 2) = 3^(1/4)/sqrt2
        let x = RadicalScalar::monomial(q(1, 2), 0, 2);
        let r = x.sqrt_monomial().unwrap();
        assert_eq!(r.clone() * r, x);
        assert!(RadicalScalar::from(5).sqrt_monomial().is_none());
        assert!(RadicalScalar::sqrt2().sqrt_monomial().is_none());
    }

    #[test]
    fn text_round_trip() {
        let x = RadicalScalar::monomial(q(-5, 9), 0, 2) + RadicalScalar::sqrt2() + RadicalScalar::from(3);
        let s = x.to_string();
        assert_eq!(s, "3 - 5/9*r3q^2 + 1*r2");
        let back: RadicalScalar = s.parse().unwrap();
        assert_eq!(back, x);
        assert_eq!(back.to_string(), s);
        assert_eq!("0".parse::<RadicalScalar>().unwrap(), RadicalScalar::zero());
    }
}
