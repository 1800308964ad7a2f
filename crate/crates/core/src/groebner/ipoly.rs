//! Primitive integer polynomials used inside the Buchberger loop.
//!
//! Reduction is fraction-free: a step `f <- a*f - b*m*g` multiplies by the
//! cofactors of the leading coefficients, and the content is divided out
//! every few steps.

use std::cmp::Ordering;
use std::time::Instant;

use rug::Integer;

use crate::exactnum::Rational;
use crate::poly::{Monomial, MonomialOrder, Poly};

pub(crate) type Term = (Monomial, Integer);

#[derive(Clone, Debug)]
pub(crate) struct IPoly {
    pub terms: Vec<Term>,
    pub sugar: u32,
}

/// Reducers are looked up by leading monomial; the mask prefilters
/// divisibility.
pub(crate) struct Reducer<'a> {
    pub lm: Monomial,
    pub mask: u32,
    pub poly: &'a IPoly,
}

const CONTENT_EVERY: usize = 4;

impl IPoly {
    pub fn from_rational(p: &Poly<Rational>, order: MonomialOrder) -> IPoly {
        let p = p.with_order(order);
        let mut den = Integer::from(1);
        for (_, c) in p.terms() {
            den.lcm_mut(c.denom());
        }
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| (*m, (c.numer() * Integer::from(&den / c.denom()))))
            .collect();
        let mut out = IPoly {
            terms,
            sugar: p.total_degree().unwrap_or(0),
        };
        out.make_primitive();
        out
    }

    pub fn to_rational(&self, like: &Poly<Rational>) -> Poly<Rational> {
        let lc = Rational::from_integer(self.terms[0].1.clone());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, &Rational::from_integer(c.clone()) / &lc))
            .collect();
        Poly::from_terms(like.vars(), like.order(), terms)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let g = content(&self.terms);
        let neg = self.terms[0].1 < 0;
        if g != 1 {
            for (_, c) in self.terms.iter_mut() {
                c.div_exact_mut(&g);
            }
        }
        if neg {
            for (_, c) in self.terms.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
    }

    pub fn coeff_bits(&self) -> u32 {
        self.terms.iter().map(|(_, c)| c.significant_bits()).max().unwrap_or(0)
    }
}

fn content(terms: &[Term]) -> Integer {
    let mut g = Integer::new();
    for (_, c) in terms {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    g
}

fn joint_content(a: &[Term], b: &[Term]) -> Integer {
    let mut g = content(a);
    if g == 1 {
        return g;
    }
    for (_, c) in b {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    g
}

/// `a*f - b*(m*g)` over the terms after the (cancelling) leading ones.
fn step(f: Vec<Term>, a: &Integer, b: &Integer, m: &Monomial, g: &[Term], order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let scale_f = *a != 1;
    let mut fi = f.into_iter().skip(1).peekable();
    let mut gi = g.iter().skip(1).map(|(gm, gc)| (gm.mul(m), gc)).peekable();
    loop {
        let ord = match (fi.peek(), gi.peek()) {
            (Some((fm, _)), Some((gm, _))) => order.cmp(fm, gm),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => break,
        };
        match ord {
            Ordering::Greater => {
                let (fm, mut fc) = fi.next().unwrap();
                if scale_f {
                    fc *= a;
                }
                out.push((fm, fc));
            }
            Ordering::Less => {
                let (gm, gc) = gi.next().unwrap();
                let mut c = Integer::from(b * gc);
                c = -c;
                out.push((gm, c));
            }
            Ordering::Equal => {
                let (fm, mut fc) = fi.next().unwrap();
                let (_, gc) = gi.next().unwrap();
                if scale_f {
                    fc *= a;
                }
                fc -= b * gc;
                if fc != 0 {
                    out.push((fm, fc));
                }
            }
        }
    }
    out
}

/// Cofactors `(a, b)` with `a*x = b*y = lcm(x, y)` up to sign handling:
/// returns `x/g`, `y/g` for `g = gcd(x, y)`.
fn cofactors(x: &Integer, y: &Integer) -> (Integer, Integer) {
    let g = Integer::from(x.gcd_ref(y));
    (Integer::from(x.div_exact_ref(&g)), Integer::from(y.div_exact_ref(&g)))
}

pub(crate) fn spoly(f: &IPoly, g: &IPoly, order: MonomialOrder) -> IPoly {
    let l = f.lm().lcm(g.lm());
    let uf = f.lm().quotient_of(&l).unwrap();
    let ug = g.lm().quotient_of(&l).unwrap();
    let (cf, cg) = cofactors(&f.terms[0].1, &g.terms[0].1);
    // cg * uf * f - cf * ug * g
    let fs: Vec<Term> = f.terms.iter().map(|(m, c)| (m.mul(&uf), c.clone())).collect();
    let terms = step(fs, &cg, &cf, &ug, &g.terms, order);
    let sugar = (f.sugar + uf.degree()).max(g.sugar + ug.degree());
    let mut out = IPoly { terms, sugar };
    out.make_primitive();
    out
}

fn find_reducer<'a>(m: &Monomial, reducers: &'a [Reducer<'a>]) -> Option<&'a Reducer<'a>> {
    let mask = m.support_mask();
    let mut best: Option<&Reducer> = None;
    for r in reducers {
        if r.mask & !mask == 0 && r.lm.divides(m) && best.is_none_or(|b| r.poly.len() < b.poly.len()) {
            best = Some(r);
        }
    }
    best
}

/// Reduces `f` modulo the reducers. With `full` the tail is reduced too;
/// otherwise reduction stops at the first irreducible leading term.
pub(crate) fn reduce(f: IPoly, reducers: &[Reducer], order: MonomialOrder, full: bool) -> IPoly {
    reduce_until(f, reducers, order, full, None).expect("no deadline")
}

/// [`reduce`] that gives up (returning `None`) once `deadline` has passed.
pub(crate) fn reduce_until(
    f: IPoly,
    reducers: &[Reducer],
    order: MonomialOrder,
    full: bool,
    deadline: Option<Instant>,
) -> Option<IPoly> {
    let mut sugar = f.sugar;
    let mut cur = f.terms;
    let mut done: Vec<Term> = Vec::new();
    let mut steps = 0usize;
    loop {
        let k = if full {
            cur.iter().position(|(m, _)| find_reducer(m, reducers).is_some())
        } else {
            cur.first().and_then(|(m, _)| find_reducer(m, reducers)).map(|_| 0)
        };
        let Some(k) = k else { break };
        done.extend(cur.drain(..k));
        let r = find_reducer(&cur[0].0, reducers).unwrap();
        let q = r.lm.quotient_of(&cur[0].0).unwrap();
        let (a, b) = cofactors(&r.poly.terms[0].1, &cur[0].1);
        sugar = sugar.max(q.degree() + r.poly.sugar);
        cur = step(cur, &a, &b, &q, &r.poly.terms, order);
        if a != 1 {
            for (_, c) in done.iter_mut() {
                *c *= &a;
            }
        }
        steps += 1;
        if steps.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        if steps.is_multiple_of(CONTENT_EVERY) {
            let g = joint_content(&cur, &done);
            if g != 1 && g != 0 {
                for (_, c) in cur.iter_mut().chain(done.iter_mut()) {
                    c.div_exact_mut(&g);
                }
            }
        }
    }
    done.append(&mut cur);
    let mut out = IPoly { terms: done, sugar };
    out.make_primitive();
    Some(out)
}
