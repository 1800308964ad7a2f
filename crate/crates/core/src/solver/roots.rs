//! Real-root isolation, refinement and exact recognition in Q(sqrt2, 3^(1/4)).

use num_traits::{One, Zero};

use super::upoly::{count_roots, root_bound, AbsBound, UPoly};
use super::SolverError;
use crate::exactnum::{FieldScalar, RadicalScalar, Rational, Sign};

/// A real root of `poly` isolated in the half-open interval `(lo, hi]`;
/// `lo == hi` means the root is the rational endpoint itself.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedRoot<T = Rational> {
    pub lo: Rational,
    pub hi: Rational,
    /// Square-free, monic polynomial with exactly one root in `(lo, hi]`.
    pub poly: UPoly<T>,
    pub multiplicity: u32,
}

impl<T: AbsBound> IsolatedRoot<T> {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from(2)).to_f64()
    }

    /// One bisection step; keeps the root inside.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let at_hi = self.poly.sign_at(&T::from_q(&self.hi));
        if at_hi == Sign::Zero {
            self.lo = self.hi.clone();
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from(2);
        let at_mid = self.poly.sign_at(&T::from_q(&mid));
        if at_mid == Sign::Zero {
            self.lo = mid.clone();
            self.hi = mid;
        } else if at_mid == at_hi {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Bisects until the width is at most `2^-bits`.
    pub fn refine_to(&mut self, bits: u32) {
        let target = Rational::new(1, rug::Integer::from(1) << bits);
        while !self.is_exact() && self.width() > target {
            self.bisect();
        }
    }

    /// `lo < x <= hi` (or `x == lo` for an exact root).
    pub fn contains(&self, x: &RadicalScalar) -> bool {
        if self.is_exact() {
            return (x.clone() - RadicalScalar::from(self.lo.clone())).is_zero();
        }
        let above = (x.clone() - RadicalScalar::from(self.lo.clone())).sign() == Sign::Positive;
        let below = (RadicalScalar::from(self.hi.clone()) - x.clone()).sign() != Sign::Negative;
        above && below
    }
}

/// Isolates every real root of `p` in pairwise-disjoint intervals, sorted
/// ascending. Isolation runs on the square-free part; multiplicities come
/// from the square-free decomposition.
pub fn isolate_real_roots<T: AbsBound>(p: &UPoly<T>) -> Result<Vec<IsolatedRoot<T>>, SolverError> {
    if p.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sqf = p.squarefree_part();
    let factors = p.squarefree_decomposition();
    let seq = sqf.sturm_sequence();
    let b = root_bound(&sqf);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &T::from_q(&lo), &T::from_q(&hi));
        match n {
            0 => {}
            1 => out.push(IsolatedRoot {
                lo,
                hi,
                poly: sqf.clone(),
                multiplicity: 1,
            }),
            _ => {
                let mid = (&lo + &hi) / Rational::from(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    for r in out.iter_mut() {
        if r.poly.sign_at(&T::from_q(&r.hi)) == Sign::Zero {
            r.lo = r.hi.clone();
        }
        for (f, m) in &factors {
            let hit = if r.is_exact() {
                f.sign_at(&T::from_q(&r.lo)) == Sign::Zero
            } else {
                count_roots(&f.sturm_sequence(), &T::from_q(&r.lo), &T::from_q(&r.hi)) == 1
            };
            if hit {
                r.multiplicity = *m;
                break;
            }
        }
    }
    Ok(out)
}

/// Largest denominator tried for the rational factor of a candidate.
const MAX_DENOMINATOR: u64 = 1000;

/// Exact value of an isolated root in Q(sqrt2, 3^(1/4)), if it has one of
/// the recognised shapes:
/// - roots of linear and quadratic defining polynomials (closed form, when
///   the discriminant's square root is a field monomial);
/// - `q * 2^(i/2) * 3^(j/4)` for small rationals `q`, `i in {-1,0,1}`,
///   `j in {-3..3}`.
///
/// A candidate is accepted only if the defining polynomial vanishes at it
/// exactly and it lies in the isolating interval.
pub fn recognize_radical<T>(root: &IsolatedRoot<T>) -> Option<RadicalScalar>
where
    T: AbsBound + Into<RadicalScalar>,
{
    let poly: UPoly<RadicalScalar> = UPoly::new(root.poly.coeffs().iter().cloned().map(Into::into).collect());
    let accept = |x: &RadicalScalar| poly.eval(x).is_zero() && root.contains(x);
    if root.is_exact() {
        return Some(RadicalScalar::from(root.lo.clone()));
    }
    for x in closed_form_roots(&poly) {
        if accept(&x) {
            return Some(x);
        }
    }
    let mut r = root.clone();
    r.refine_to(60);
    let v = r.midpoint_f64();
    if v == 0.0 || !v.is_finite() {
        return None;
    }
    for i in -1..=1 {
        for j in -3..=3 {
            let unit = RadicalScalar::monomial(Rational::one(), i, j).to_f64();
            let Some(qv) = Rational::approximate(v / unit, MAX_DENOMINATOR) else {
                continue;
            };
            if qv.is_zero() {
                continue;
            }
            let x = RadicalScalar::monomial(qv, i, j);
            if accept(&x) {
                return Some(x);
            }
        }
    }
    None
}

/// Roots of degree-1 and degree-2 polynomials whose discriminant has a
/// monomial square root.
pub(crate) fn closed_form_roots(p: &UPoly<RadicalScalar>) -> Vec<RadicalScalar> {
    let c = p.coeffs();
    match p.degree() {
        Some(1) => vec![(-c[0].clone()).div_exact(&c[1]).unwrap()],
        Some(2) => {
            let disc = c[1].clone() * c[1].clone() - RadicalScalar::from(4) * c[2].clone() * c[0].clone();
            let Some(r) = disc.sqrt_monomial() else {
                return Vec::new();
            };
            let two_a = RadicalScalar::from(2) * c[2].clone();
            let mut out = vec![
                (-c[1].clone() + r.clone()).div_exact(&two_a).unwrap(),
                (-c[1].clone() - r).div_exact(&two_a).unwrap(),
            ];
            out.dedup();
            out
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> UPoly<Rational> {
        UPoly::new(c.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn isolation_basics() {
        let r = isolate_real_roots(&q(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].midpoint_f64() + 1.414).abs() < 2.0);
        let r = isolate_real_roots(&q(&[1, -2, 1])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!(r[0].contains(&RadicalScalar::from(1)));
        assert_eq!(recognize_radical(&r[0]), Some(RadicalScalar::from(1)));
        assert!(isolate_real_roots(&q(&[1, 0, 1])).unwrap().is_empty());
        assert!(matches!(isolate_real_roots(&q(&[])), Err(SolverError::ZeroPolynomial)));
    }

    #[test]
    fn recognition() {
        let r = isolate_real_roots(&q(&[-1, 0, 2])).unwrap();
        let pos = recognize_radical(&r[1]).unwrap();
        assert_eq!(pos, RadicalScalar::monomial(Rational::one(), -1, 0));
        let r = isolate_real_roots(&q(&[-3, 0, 0, 0, 4])).unwrap();
        let pos = recognize_radical(&r[1]).unwrap();
        assert_eq!(pos, RadicalScalar::monomial(Rational::one(), -1, 1));
        let r = isolate_real_roots(&q(&[-5, 0, 1])).unwrap();
        assert!(recognize_radical(&r[1]).is_none());
    }
}
