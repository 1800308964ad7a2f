//! Dense univariate polynomials over an exact ordered field, with Sturm
//! sequences, square-free decomposition and real-root isolation.
//!
//! Isolation uses Sturm sequences over exact coefficients: Descartes' rule
//! would need a sign-exact Taylor shift over the radical field, while Sturm
//! only needs exact sign evaluation at rational points, which every
//! [`OrderedScalar`] here provides.

use std::fmt;

use num_traits::{One, Zero};

use crate::exactnum::{FieldScalar, OrderedScalar, RadicalScalar, Rational, Scalar, Sign};
use crate::poly::Poly;

/// Ordered fields whose elements admit a rational upper bound on `|x|`.
pub trait AbsBound: OrderedScalar {
    fn abs_upper(&self) -> Rational;
    fn from_q(q: &Rational) -> Self {
        Self::from_rational(q)
    }
}

impl AbsBound for Rational {
    fn abs_upper(&self) -> Rational {
        self.abs()
    }
}

impl AbsBound for RadicalScalar {
    fn abs_upper(&self) -> Rational {
        let (lo, hi) = self.enclosure(32);
        if lo.abs() > hi.abs() {
            lo.abs()
        } else {
            hi.abs()
        }
    }
}

/// Coefficients low to high; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, PartialEq)]
pub struct UPoly<T> {
    c: Vec<T>,
}

impl<T: FieldScalar> UPoly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(x: T) -> Self {
        Self::new(vec![x])
    }

    /// `x - r`
    pub fn linear_root(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    /// Univariate view of a multivariate polynomial in which only `var`
    /// occurs.
    pub fn from_poly<C>(p: &Poly<C>, var: usize) -> Option<Self>
    where
        C: Scalar + Into<T> + Clone,
    {
        let cs = p.univariate_coeffs(var)?;
        Some(Self::new(cs.into_iter().map(Into::into).collect()))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&T> {
        self.c.last()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.c.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let mut d = c.clone();
                d *= &T::from_int(k as i64);
                d
            })
            .collect();
        Self::new(c)
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(l) => {
                let inv = l.try_inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(
            self.c
                .iter()
                .map(|c| {
                    let mut d = c.clone();
                    d *= k;
                    d
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                let mut t = a.clone();
                t *= b;
                out[i + j] += &t;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut out = vec![T::zero(); n];
        for (k, a) in self.c.iter().enumerate() {
            out[k] += a;
        }
        for (k, b) in other.c.iter().enumerate() {
            out[k] -= b;
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lc().unwrap().try_inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let mut f = r[k].clone();
            if f.is_zero() {
                continue;
            }
            f *= &inv;
            for (j, dc) in d.c.iter().enumerate() {
                let mut t = dc.clone();
                t *= &f;
                r[k - dd + j] -= &t;
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `(a_i, i)` with `self = lc * prod a_i^i`,
    /// each `a_i` monic, square-free, nonconstant and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let c = df.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a).unwrap();
            let c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.monic().div_exact(&g).unwrap().monic()
    }
}

impl<T: OrderedScalar> UPoly<T> {
    pub fn sign_at(&self, x: &T) -> Sign {
        self.eval(x).sign()
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        if self.degree().unwrap_or(0) == 0 {
            return seq;
        }
        let mut prev = self.clone();
        let mut cur = self.derivative();
        while !cur.is_zero() {
            let r = prev.rem(&cur);
            seq.push(cur.clone());
            prev = cur;
            cur = r.scale(&-T::one());
        }
        seq
    }
}

/// Number of sign changes of a Sturm sequence at `x`, zeros skipped.
pub fn sign_changes<T: OrderedScalar>(seq: &[UPoly<T>], x: &T) -> usize {
    let mut last = Sign::Zero;
    let mut n = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Real roots of a square-free polynomial in `(lo, hi]`.
pub fn count_roots<T: OrderedScalar>(seq: &[UPoly<T>], lo: &T, hi: &T) -> usize {
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// Cauchy bound: every real root lies in `(-B, B)`; `B` is a power of two.
pub fn root_bound<T: AbsBound>(p: &UPoly<T>) -> Rational {
    let lc = p.lc().expect("nonzero polynomial");
    let inv = lc.try_inv().unwrap();
    let mut m = Rational::zero();
    for c in &p.c[..p.c.len() - 1] {
        let mut r = c.clone();
        r *= &inv;
        let b = r.abs_upper();
        if b > m {
            m = b;
        }
    }
    let bound = m + Rational::one();
    let mut b = Rational::one();
    while b <= bound {
        b = b * Rational::from(2);
    }
    b
}

impl<T: fmt::Debug> fmt::Debug for UPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.c).finish()
    }
}

impl<T: FieldScalar> fmt::Display for UPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> UPoly<Rational> {
        UPoly::new(c.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = q(&[2, -3, 1]);
        let b = q(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), q(&[-1, 1]));
        let (qq, r) = a.div_rem(&q(&[-1, 1]));
        assert_eq!(qq, q(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn yun() {
        // (x-1)^2 (x+1)
        let p = q(&[-1, 1]).mul(&q(&[-1, 1])).mul(&q(&[1, 1]));
        let d = p.squarefree_decomposition();
        assert_eq!(d, vec![(q(&[1, 1]), 1), (q(&[-1, 1]), 2)]);
        assert_eq!(p.squarefree_part(), q(&[-1, 0, 1]));
    }

    #[test]
    fn sturm_counts() {
        let p = q(&[-2, 0, 1]);
        let s = p.sturm_sequence();
        assert_eq!(count_roots(&s, &Rational::from(-2), &Rational::from(2)), 2);
        assert_eq!(count_roots(&s, &Rational::from(0), &Rational::from(2)), 1);
        assert_eq!(root_bound(&p), Rational::from(4));
    }
}
