//! Buchberger's algorithm over Q with fraction-free integer reduction.
//!
//! Pairs are selected by total degree of the lcm (normal strategy) or by
//! sugar, and filtered with the Gebauer-Moeller criteria. All S-polynomials
//! of one selection batch are reduced in parallel against the basis frozen at
//! the start of the batch; results are installed in the batch's fixed order,
//! so the output does not depend on the number of threads.

mod engine;
mod ipoly;

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::Rational;
use crate::poly::{MonomialOrder, Poly, PolySystem, VarTable};

use ipoly::IPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Normal,
    Sugar,
}

#[derive(Debug, Clone)]
pub struct GroebnerOptions {
    pub strategy: Strategy,
    pub max_pairs: u64,
    pub max_seconds: Option<f64>,
    /// Fully reduce every new basis element (otherwise only its leading term).
    pub tail_reduce: bool,
    pub parallel: bool,
    pub batch_size: usize,
    pub verbose: bool,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            strategy: Strategy::Normal,
            max_pairs: 1_000_000,
            max_seconds: None,
            tail_reduce: true,
            parallel: true,
            batch_size: 64,
            verbose: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GbStats {
    /// S-pairs reduced.
    pub pairs: u64,
    pub zero_reductions: u64,
    pub pairs_created: u64,
    /// Pairs discarded by the Gebauer-Moeller criteria.
    pub pairs_pruned: u64,
    pub max_basis: usize,
    pub max_queue: usize,
    pub seconds: f64,
}

impl GbStats {
    fn write(&self, s: &mut String, with_time: bool) {
        writeln!(s, "# pairs: {}", self.pairs).unwrap();
        writeln!(s, "# zero_reductions: {}", self.zero_reductions).unwrap();
        writeln!(s, "# pairs_pruned: {}", self.pairs_pruned).unwrap();
        if with_time {
            writeln!(s, "# seconds: {:.3}", self.seconds).unwrap();
        }
    }

    fn read(extra: &[(String, String)]) -> GbStats {
        let get = |k: &str| extra.iter().find(|(n, _)| n == k).map(|(_, v)| v.as_str());
        GbStats {
            pairs: get("pairs").and_then(|v| v.parse().ok()).unwrap_or(0),
            zero_reductions: get("zero_reductions").and_then(|v| v.parse().ok()).unwrap_or(0),
            pairs_pruned: get("pairs_pruned").and_then(|v| v.parse().ok()).unwrap_or(0),
            seconds: get("seconds").and_then(|v| v.parse().ok()).unwrap_or(0.0),
            ..GbStats::default()
        }
    }
}

/// Reduced Groebner basis with monic elements, sorted by descending leading
/// monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub vars: Arc<VarTable>,
    pub order: MonomialOrder,
    pub polys: Vec<Poly<Rational>>,
    pub stats: GbStats,
}

/// What was computed before a budget ran out.
#[derive(Debug, Clone)]
pub struct PartialBasis {
    pub vars: Arc<VarTable>,
    pub order: MonomialOrder,
    /// Current generators (a subset of the ideal, not a Groebner basis).
    pub polys: Vec<Poly<Rational>>,
    pub stats: GbStats,
    pub reason: String,
}

impl PartialBasis {
    pub fn report(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# status: budget exhausted").unwrap();
        writeln!(s, "# reason: {}", self.reason).unwrap();
        writeln!(s, "# generators: {}", self.polys.len()).unwrap();
        writeln!(s, "# max_basis: {}", self.stats.max_basis).unwrap();
        writeln!(s, "# max_queue: {}", self.stats.max_queue).unwrap();
        self.stats.write(&mut s, true);
        s
    }
}

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("empty system")]
    EmptySystem,
    #[error("{}", .0.reason)]
    BudgetExceeded(Box<PartialBasis>),
    #[error("elimination needs a lex basis, got {0}")]
    NotLex(MonomialOrder),
    #[error("cannot keep {keep} of {n} variables")]
    BadEliminationCount { keep: usize, n: usize },
}

/// Zero-dimensionality verdict by the finiteness theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionVerdict {
    pub zero_dimensional: bool,
    /// Variables with no pure power among the leading monomials.
    pub missing_vars: Vec<String>,
}

pub fn buchberger(system: &PolySystem, order: MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with(system, order, &GroebnerOptions::default())
}

pub fn buchberger_with(
    system: &PolySystem,
    order: MonomialOrder,
    opts: &GroebnerOptions,
) -> Result<GroebnerBasis, GroebnerError> {
    if system.polys.iter().all(|p| p.is_zero()) {
        return Err(GroebnerError::EmptySystem);
    }
    let vars = system.vars.clone();
    let like = Poly::zero(&vars, order);
    let inputs = system
        .polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| IPoly::from_rational(p, order))
        .collect();
    match engine::run(inputs, order, opts) {
        engine::Outcome::Done(basis, stats) => Ok(GroebnerBasis {
            vars,
            order,
            polys: basis.iter().map(|p| p.to_rational(&like)).collect(),
            stats,
        }),
        engine::Outcome::Exhausted(partial, stats, reason) => {
            Err(GroebnerError::BudgetExceeded(Box::new(PartialBasis {
                vars,
                order,
                polys: partial.iter().map(|p| p.to_rational(&like)).collect(),
                stats,
                reason,
            })))
        }
    }
}

/// Normal form of `p` modulo `basis` by multivariate division over Q.
/// Leading terms are cancelled in order; every remaining term is
/// irreducible.
pub fn reduce(p: &Poly<Rational>, basis: &[Poly<Rational>], order: MonomialOrder) -> Poly<Rational> {
    let basis: Vec<Poly<Rational>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order))
        .collect();
    let lead: Vec<_> = basis
        .iter()
        .map(|g| (g.leading_term().unwrap().0, g.leading_term().unwrap().1.clone()))
        .collect();
    let mut rest = p.with_order(order);
    let mut rem: Vec<(crate::poly::Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = rest.leading_term().cloned() {
        let hit = lead.iter().position(|(lm, _)| lm.divides(&m));
        match hit {
            Some(k) => {
                let q = lead[k].0.quotient_of(&m).unwrap();
                let f = &c / &lead[k].1;
                rest = &rest - &basis[k].mul_monomial(&q).scale(&f);
            }
            None => {
                rem.push((m, c.clone()));
                let neg = Poly::from_terms(p.vars(), order, vec![(m, c)]);
                rest = &rest - &neg;
            }
        }
    }
    Poly::from_terms(p.vars(), order, rem)
}

impl GroebnerBasis {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn reduce(&self, p: &Poly<Rational>) -> Poly<Rational> {
        reduce(p, &self.polys, self.order)
    }

    /// True when the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].terms().len() == 1 && self.polys[0].terms()[0].0.is_one()
    }

    pub fn to_system(&self) -> PolySystem {
        PolySystem::new(self.vars.clone(), self.order, self.polys.clone())
    }

    /// System file text with the statistics block. `with_time` adds the
    /// wall-clock line, which differs between runs.
    pub fn to_text(&self, with_time: bool) -> String {
        let mut s = String::new();
        writeln!(s, "vars: {}", self.vars.names().join(" ")).unwrap();
        writeln!(s, "order: {}", self.order).unwrap();
        writeln!(s, "# basis: {} polynomials", self.polys.len()).unwrap();
        self.stats.write(&mut s, with_time);
        for p in &self.polys {
            writeln!(s, "{p}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<GroebnerBasis, crate::poly::SyntaxError> {
        let sys = PolySystem::parse(text)?;
        Ok(GroebnerBasis {
            stats: GbStats::read(&sys.extra),
            vars: sys.vars,
            order: sys.order,
            polys: sys.polys,
        })
    }

    pub fn content_hash(&self) -> String {
        self.to_system().content_hash()
    }

    /// Checks that every listed polynomial has zero normal form.
    pub fn contains_all(&self, polys: &[Poly<Rational>]) -> bool {
        polys.iter().all(|p| self.reduce(p).is_zero())
    }

    /// Reduces `samples` randomly chosen S-polynomials (all of them when
    /// there are fewer pairs) with the rational division routine; returns
    /// the number that did not reduce to zero.
    pub fn spot_check_spolys(&self, samples: usize, seed: u64) -> usize {
        let n = self.polys.len();
        let mut all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        all.shuffle(&mut rng);
        all.truncate(samples);
        all.iter()
            .filter(|&&(i, j)| {
                !self
                    .reduce(&s_polynomial(&self.polys[i], &self.polys[j], self.order))
                    .is_zero()
            })
            .count()
    }

    /// Checks the reduced-basis shape: monic, no term divisible by another
    /// element's leading monomial.
    pub fn is_reduced(&self) -> bool {
        let lms: Vec<_> = self.polys.iter().map(|p| *p.leading_monomial().unwrap()).collect();
        self.polys.iter().enumerate().all(|(k, p)| {
            p.leading_coeff().unwrap().is_one()
                && p.terms()
                    .iter()
                    .all(|(m, _)| lms.iter().enumerate().all(|(j, l)| j == k || !l.divides(m)))
        })
    }
}

/// `lcm/lt(f) * f - lcm/lt(g) * g` over Q.
pub fn s_polynomial(f: &Poly<Rational>, g: &Poly<Rational>, order: MonomialOrder) -> Poly<Rational> {
    let f = f.with_order(order);
    let g = g.with_order(order);
    let (fm, fc) = f.leading_term().unwrap().clone();
    let (gm, gc) = g.leading_term().unwrap().clone();
    let l = fm.lcm(&gm);
    let a = f.mul_monomial(&fm.quotient_of(&l).unwrap()).scale(&fc.recip().unwrap());
    let b = g.mul_monomial(&gm.quotient_of(&l).unwrap()).scale(&gc.recip().unwrap());
    &a - &b
}

/// Elements of a lex basis involving only the last `keep_last_k` variables.
pub fn elimination_ideal(basis: &GroebnerBasis, keep_last_k: usize) -> Result<Vec<Poly<Rational>>, GroebnerError> {
    if basis.order != MonomialOrder::Lex {
        return Err(GroebnerError::NotLex(basis.order));
    }
    let n = basis.vars.len();
    if keep_last_k > n {
        return Err(GroebnerError::BadEliminationCount { keep: keep_last_k, n });
    }
    let first_kept = n - keep_last_k;
    Ok(basis
        .polys
        .iter()
        .filter(|p| p.support().iter().all(|&v| v >= first_kept))
        .cloned()
        .collect())
}

/// Finiteness theorem: the variety is finite iff every variable has a pure
/// power among the leading monomials.
pub fn finiteness_test(basis: &GroebnerBasis) -> DimensionVerdict {
    if basis.is_unit() {
        return DimensionVerdict {
            zero_dimensional: true,
            missing_vars: Vec::new(),
        };
    }
    let mut has = vec![false; basis.vars.len()];
    for p in &basis.polys {
        if let Some(v) = p.leading_monomial().and_then(|m| m.pure_power_var()) {
            has[v] = true;
        }
    }
    let missing_vars: Vec<String> = (0..has.len())
        .filter(|&k| !has[k])
        .map(|k| basis.vars.name(k).to_string())
        .collect();
    DimensionVerdict {
        zero_dimensional: missing_vars.is_empty(),
        missing_vars,
    }
}

/// Rational factor making `p` monic.
pub fn monic(p: &Poly<Rational>) -> Poly<Rational> {
    match p.leading_coeff() {
        Some(c) if !c.is_zero() => p.scale(&c.recip().unwrap()),
        _ => p.clone(),
    }
}
