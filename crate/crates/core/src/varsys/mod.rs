//! Scalar curvature, coordinate changes and the Lagrange systems for each
//! symmetry chart.
//!
//! Original coordinates: `a b c d e f x y z u v w alpha beta gamma` and the
//! multiplier `mu`. Transformed coordinates: `A B C D E F X Y Z U V W AA BB CC`
//! and `MU`, where `AA, BB, CC` stand for the calligraphic off-diagonals.
//! The transformed scalar curvature is polynomial; the original one is a
//! Laurent polynomial in the diagonal parameters.

mod laurent;
mod transform;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{parse_radical_expr, ExprError, RadicalScalar, Rational};
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, PolySystem, VarTable, MAX_VARS};

pub use laurent::{parse_laurent_expr, Exps, Laurent};
pub use transform::{
    forward_diagonal, forward_point, inverse_diagonal, inverse_point, inverse_point_f64, offdiag_scale_index,
};

/// Original parameter names, diagonal first, then off-diagonals.
pub const ORIGINAL_NAMES: [&str; 15] = [
    "a", "b", "c", "d", "e", "f", "x", "y", "z", "u", "v", "w", "alpha", "beta", "gamma",
];
/// Transformed names, position-matched with [`ORIGINAL_NAMES`] for the
/// off-diagonal part.
pub const TRANSFORMED_NAMES: [&str; 15] = [
    "A", "B", "C", "D", "E", "F", "X", "Y", "Z", "U", "V", "W", "AA", "BB", "CC",
];
pub const MU_ORIGINAL: &str = "mu";
pub const MU_TRANSFORMED: &str = "MU";

#[derive(Debug, Error)]
pub enum VarsysError {
    #[error("unknown case {0:?} (expected trace2, z2xz2, z2, general or z2-mu=<value>)")]
    UnknownCase(String),
    #[error("bad multiplier value: {0}")]
    BadMu(#[from] ExprError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartKind {
    General,
    Trace2,
    Z2xZ2,
    Z2,
    Z2MuFixed(RadicalScalar),
}

/// One of the symmetry cases: which off-diagonal parameters vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricChart {
    pub kind: ChartKind,
}

impl MetricChart {
    pub fn general() -> Self {
        MetricChart {
            kind: ChartKind::General,
        }
    }

    pub fn trace2() -> Self {
        MetricChart {
            kind: ChartKind::Trace2,
        }
    }

    pub fn z2xz2() -> Self {
        MetricChart { kind: ChartKind::Z2xZ2 }
    }

    pub fn z2() -> Self {
        MetricChart { kind: ChartKind::Z2 }
    }

    pub fn z2_mu_fixed(mu0: RadicalScalar) -> Self {
        MetricChart {
            kind: ChartKind::Z2MuFixed(mu0),
        }
    }

    /// `trace2`, `z2xz2`, `z2`, `general`, or `z2-mu=<radical expression>`.
    pub fn parse_case(s: &str) -> Result<Self, VarsysError> {
        match s.trim() {
            "general" => Ok(Self::general()),
            "trace2" => Ok(Self::trace2()),
            "z2xz2" => Ok(Self::z2xz2()),
            "z2" => Ok(Self::z2()),
            other => match other.strip_prefix("z2-mu=") {
                Some(v) => Ok(Self::z2_mu_fixed(parse_radical_expr(v)?)),
                None => Err(VarsysError::UnknownCase(other.to_string())),
            },
        }
    }

    pub fn case_name(&self) -> String {
        match &self.kind {
            ChartKind::General => "general".into(),
            ChartKind::Trace2 => "trace2".into(),
            ChartKind::Z2xZ2 => "z2xz2".into(),
            ChartKind::Z2 => "z2".into(),
            ChartKind::Z2MuFixed(m) => format!("z2-mu={m}"),
        }
    }

    pub fn fixed_mu(&self) -> Option<&RadicalScalar> {
        match &self.kind {
            ChartKind::Z2MuFixed(m) => Some(m),
            _ => None,
        }
    }

    /// Off-diagonal original parameters set to zero by the chart.
    pub fn zeroed_params(&self) -> &'static [&'static str] {
        match self.kind {
            ChartKind::General => &[],
            ChartKind::Trace2 => &["y", "z", "u", "v", "w", "gamma"],
            ChartKind::Z2xZ2 => &["u", "v", "w", "alpha", "beta", "gamma"],
            ChartKind::Z2 | ChartKind::Z2MuFixed(_) => &["u", "v", "alpha", "beta"],
        }
    }

    /// Off-diagonals that are zero in the variational system. For trace2 the
    /// remaining `x, alpha, beta` vanish at every critical point (their
    /// gradient component is the parameter times a positive factor), so the
    /// system is posed on the diagonal only.
    pub fn system_zeroed_params(&self) -> Vec<&'static str> {
        let mut z = self.zeroed_params().to_vec();
        if self.kind == ChartKind::Trace2 {
            z.extend(["x", "alpha", "beta"]);
        }
        z
    }

    fn surviving(zeroed: &[&str]) -> Vec<usize> {
        (6..15).filter(|&k| !zeroed.contains(&ORIGINAL_NAMES[k])).collect()
    }

    /// Indices (into [`ORIGINAL_NAMES`]) of the free off-diagonal parameters.
    pub fn free_offdiag(&self) -> Vec<usize> {
        Self::surviving(self.zeroed_params())
    }

    pub fn system_offdiag(&self) -> Vec<usize> {
        Self::surviving(&self.system_zeroed_params())
    }

    fn table(idx: &[usize], names: &[&str; 15], mu: &str) -> Arc<VarTable> {
        let mut v: Vec<&str> = (0..6).map(|k| names[k]).collect();
        v.extend(idx.iter().map(|&k| names[k]));
        v.push(mu);
        VarTable::new(&v).expect("chart variable names are distinct")
    }

    /// `A..F`, the surviving transformed off-diagonals, `MU`.
    pub fn chart_vars(&self) -> Arc<VarTable> {
        Self::table(&self.free_offdiag(), &TRANSFORMED_NAMES, MU_TRANSFORMED)
    }

    /// Variables of the variational system in transformed coordinates.
    pub fn system_vars(&self) -> Arc<VarTable> {
        Self::table(&self.system_offdiag(), &TRANSFORMED_NAMES, MU_TRANSFORMED)
    }

    /// Variables of the variational system in original coordinates.
    pub fn original_system_vars(&self) -> Arc<VarTable> {
        Self::table(&self.system_offdiag(), &ORIGINAL_NAMES, MU_ORIGINAL)
    }

    /// Variable order used for lex computations.
    pub fn lex_order(&self) -> Vec<String> {
        match self.kind {
            ChartKind::Z2 | ChartKind::Z2MuFixed(_) => ["MU", "F", "E", "D", "C", "B", "A", "Z", "W", "CC", "Y", "X"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            _ => self.system_vars().names().to_vec(),
        }
    }

    /// Variable order used for grevlex computations.
    pub fn grevlex_order(&self) -> Vec<String> {
        match self.kind {
            ChartKind::Z2 | ChartKind::Z2MuFixed(_) => ["MU", "D", "F", "E", "C", "B", "Z", "Y", "CC", "W", "A", "X"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            _ => self.system_vars().names().to_vec(),
        }
    }

    pub fn order_vars(&self, order: MonomialOrder) -> Vec<String> {
        match order {
            MonomialOrder::Lex => self.lex_order(),
            MonomialOrder::Grevlex => self.grevlex_order(),
        }
    }
}

impl fmt::Display for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.case_name())
    }
}

/// Variable table of all 15 original parameters plus `mu`.
pub fn original_vars() -> Arc<VarTable> {
    let mut v = ORIGINAL_NAMES.to_vec();
    v.push(MU_ORIGINAL);
    VarTable::new(&v).unwrap()
}

/// Variable table of all 15 transformed parameters plus `MU`.
pub fn transformed_vars() -> Arc<VarTable> {
    let mut v = TRANSFORMED_NAMES.to_vec();
    v.push(MU_TRANSFORMED);
    VarTable::new(&v).unwrap()
}

/// The scalar curvature as a Laurent polynomial in all 15 original
/// parameters (over [`original_vars`]).
pub fn scalar_curvature_original() -> Laurent {
    let vt = original_vars();
    let v = |k: usize| Laurent::var_pow(&vt, k, 1);
    let inv2 = |k: usize| Laurent::var_pow(&vt, k, -2);
    let q = |n: i64, d: i64| Laurent::constant(&vt, Rational::new(n, d));
    let sq = |l: &Laurent| l.mul(l);
    let sum = |xs: &[Laurent]| xs.iter().fold(Laurent::zero(&vt), |acc, t| acc.add(t));
    let (a, b, c, d, e, f) = (0, 1, 2, 3, 4, 5);
    let (x, y, z, u, vv, w, al, be, ga) = (v(6), v(7), v(8), v(9), v(10), v(11), v(12), v(13), v(14));
    let ratio2 = |p: usize, r: usize| v(p).mul(&v(p)).mul(&inv2(r)); // p^2 / r^2
    let quad = sum(&(0..15).map(|k| sq(&v(k))).collect::<Vec<_>>());
    let def = v(d).mul(&v(e)).mul(&Laurent::var_pow(&vt, f, -1));
    let dfe = v(d).mul(&v(f)).mul(&Laurent::var_pow(&vt, e, -1));
    let efd = v(e).mul(&v(f)).mul(&Laurent::var_pow(&vt, d, -1));
    let diag = sum(&[
        ratio2(a, c).mul(&sq(&v(b))),
        ratio2(b, a).mul(&sq(&v(c))),
        ratio2(c, b).mul(&sq(&v(a))),
        ratio2(d, f).mul(&sq(&v(e))),
        ratio2(e, d).mul(&sq(&v(f))),
        ratio2(f, e).mul(&sq(&v(d))),
    ]);
    let mixed = sum(&[
        ratio2(a, c).add(&ratio2(c, a)).mul(&sum(&[sq(&u), sq(&y), sq(&ga)])),
        ratio2(a, b).add(&ratio2(b, a)).mul(&sum(&[sq(&vv), sq(&w), sq(&z)])),
        ratio2(b, c).add(&ratio2(c, b)).mul(&sum(&[sq(&x), sq(&al), sq(&be)])),
    ]);
    let ga_terms = inv2(a).mul(&sum(&[
        sq(&u.mul(&w).sub(&vv.mul(&y)).sub(&def.mul(&be))),
        sq(&vv.mul(&ga).sub(&u.mul(&z)).sub(&dfe.mul(&al))),
        sq(&y.mul(&z).sub(&w.mul(&ga)).sub(&efd.mul(&x))),
    ]));
    let gb_terms = inv2(b).mul(&sum(&[
        sq(&vv.mul(&al).sub(&x.mul(&w)).sub(&def.mul(&ga))),
        sq(&x.mul(&z).sub(&vv.mul(&be)).sub(&dfe.mul(&y))),
        sq(&w.mul(&be).sub(&z.mul(&al)).sub(&efd.mul(&u))),
    ]));
    let gc_terms = inv2(c).mul(&sum(&[
        sq(&x.mul(&y).sub(&u.mul(&al)).sub(&def.mul(&z))),
        sq(&u.mul(&be).sub(&x.mul(&ga)).sub(&dfe.mul(&w))),
        sq(&al.mul(&ga).sub(&y.mul(&be)).sub(&efd.mul(&vv))),
    ]));
    let brace = sum(&[diag, mixed, ga_terms, gb_terms, gc_terms]);
    quad.sub(&brace.mul(&q(1, 2)))
}

/// Exponent images (doubled) of each original variable under the
/// square-root coordinate change, over [`transformed_vars`].
pub fn transform_images() -> Vec<Exps> {
    let mut img = vec![[0i32; MAX_VARS]; 16];
    // a = sqrt(BC), b = sqrt(AC), c = sqrt(AB), d = sqrt(EF), e = sqrt(DF), f = sqrt(DE)
    let pairs = [(1, 2), (0, 2), (0, 1), (4, 5), (3, 5), (3, 4)];
    for (k, &(p, q)) in pairs.iter().enumerate() {
        img[k][p] = 1;
        img[k][q] = 1;
    }
    for k in 6..15 {
        img[k] = img[offdiag_scale_index(k)];
        img[k][k] = 2;
    }
    img[15][15] = 2;
    img
}

fn restrict_poly(p: &Poly<Rational>, target: &Arc<VarTable>, order: MonomialOrder) -> Poly<Rational> {
    let values: Vec<Option<Rational>> = p
        .vars()
        .names()
        .iter()
        .map(|n| {
            if target.index(n).is_some() {
                None
            } else {
                Some(Rational::zero())
            }
        })
        .collect();
    p.specialize(&values)
        .and_then(|q| q.rename_into(target, order))
        .expect("restriction onto a sub-table")
}

/// Transformed scalar curvature over all 15 parameters, derived by
/// substituting the square-root coordinate change into the original
/// expression.
pub fn scalar_curvature_transformed_general() -> Poly<Rational> {
    scalar_curvature_original()
        .monomial_substitution(&transformed_vars(), &transform_images(), 2, MonomialOrder::Lex)
        .expect("the coordinate change makes S polynomial")
}

/// Scalar curvature of a chart in transformed coordinates, over
/// [`MetricChart::chart_vars`].
pub fn build_scalar_curvature(chart: &MetricChart) -> Poly<Rational> {
    restrict_poly(
        &scalar_curvature_transformed_general(),
        &chart.chart_vars(),
        MonomialOrder::Lex,
    )
}

/// Scalar curvature of a chart in original coordinates, with zeroed
/// parameters removed (still over [`original_vars`]).
pub fn build_scalar_curvature_original(chart: &MetricChart) -> Laurent {
    let vt = original_vars();
    let mut s = scalar_curvature_original();
    for name in chart.zeroed_params() {
        s = s.set_zero(vt.index(name).unwrap());
    }
    s
}

/// `ABCDEF`.
fn diagonal_product(vars: &Arc<VarTable>, order: MonomialOrder) -> Poly<Rational> {
    let mut e = [0u16; MAX_VARS];
    for slot in e.iter_mut().take(6) {
        *slot = 1;
    }
    Poly::from_terms(
        vars,
        order,
        vec![(Monomial::from_exps(&e[..vars.len()]), Rational::one())],
    )
}

/// The extra polynomial fixing the multiplier: `MU - mu0` for rational
/// values, otherwise the minimal polynomial of `mu0` over Q in `MU`.
pub fn mu_fixing_polynomial(
    vars: &Arc<VarTable>,
    mu_name: &str,
    mu0: &RadicalScalar,
) -> Result<Poly<Rational>, PolyError> {
    let idx = vars.require(mu_name)?;
    let coeffs = mu0.minimal_polynomial();
    let terms = coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| (Monomial::one().with_exp(idx, k as u16), c))
        .collect();
    Ok(Poly::from_terms(vars, MonomialOrder::Lex, terms))
}

/// Lagrange system in transformed coordinates: `ABCDEF - 1` followed by
/// `dS/dq + MU * d(ABCDEF)/dq` for every system variable `q` in table order.
/// At `ABCDEF = 1` this is `dS/dq - MU * dV/dq` with `V = (ABCDEF)^-1`.
pub fn build_variational_system(chart: &MetricChart) -> PolySystem {
    let vars = chart.system_vars();
    let order = MonomialOrder::Lex;
    let s = restrict_poly(&scalar_curvature_transformed_general(), &vars, order);
    let p = diagonal_product(&vars, order);
    let mu_idx = vars.require(MU_TRANSFORMED).unwrap();
    let mu = Poly::var(&vars, order, mu_idx);
    let mut polys = vec![&p - &Poly::constant(&vars, order, Rational::one())];
    for q in 0..vars.len() {
        if q == mu_idx {
            continue;
        }
        let eq = &s.diff(q).unwrap() + &(&mu * &p.diff(q).unwrap());
        polys.push(eq);
    }
    if let Some(mu0) = chart.fixed_mu() {
        polys.push(mu_fixing_polynomial(&vars, MU_TRANSFORMED, mu0).unwrap());
    }
    let note = if chart.fixed_mu().is_some_and(|m| m.as_rational().is_none()) {
        "multiplier fixed through its minimal polynomial over Q"
    } else {
        "transformed coordinates"
    };
    PolySystem::new(vars, order, polys).with_meta(&chart.case_name(), note)
}

/// Lagrange system in original coordinates: `abcdef - 1` followed by
/// `dS/dq - mu * dV/dq` for each system variable, each multiplied by the
/// smallest monomial that clears its denominators.
pub fn build_original_system(chart: &MetricChart) -> PolySystem {
    let full = original_vars();
    let order = MonomialOrder::Lex;
    let mut s = scalar_curvature_original();
    for name in chart.system_zeroed_params() {
        s = s.set_zero(full.index(name).unwrap());
    }
    let mut ve = [0; MAX_VARS];
    for slot in ve.iter_mut().take(6) {
        *slot = -1;
    }
    let vol = Laurent::monomial(&full, Rational::one(), ve);
    let mu = Laurent::var_pow(&full, full.index(MU_ORIGINAL).unwrap(), 1);
    let target = chart.original_system_vars();
    let mut polys = Vec::new();
    let one = Laurent::constant(&full, Rational::one());
    let (constraint, _) = vol.sub(&one).clear_denominators(order);
    polys.push(-&constraint);
    for name in target.names() {
        if name == MU_ORIGINAL {
            continue;
        }
        let q = full.index(name).unwrap();
        let g = s.diff(q).sub(&mu.mul(&vol.diff(q)));
        let (p, _) = g.clear_denominators(order);
        polys.push(p);
    }
    let polys = polys
        .into_iter()
        .map(|p| p.rename_into(&target, order).expect("support inside the system table"))
        .collect();
    if let Some(mu0) = chart.fixed_mu() {
        let mut ps: Vec<Poly<Rational>> = polys;
        ps.push(mu_fixing_polynomial(&target, MU_ORIGINAL, mu0).unwrap());
        return PolySystem::new(target, order, ps).with_meta(&chart.case_name(), "original coordinates");
    }
    PolySystem::new(target, order, polys).with_meta(&chart.case_name(), "original coordinates")
}

/// Pairing of generated and fixture polynomials up to nonzero rational
/// factors.
#[derive(Debug, Clone)]
pub struct MatchReport {
    /// `(generated index, fixture index, factor)` with generated = factor * fixture.
    pub matched: Vec<(usize, usize, Rational)>,
    pub unmatched_generated: Vec<usize>,
    pub unmatched_fixture: Vec<usize>,
    pub generated_text: Vec<String>,
    pub fixture_text: Vec<String>,
    pub error: Option<String>,
}

impl MatchReport {
    pub fn is_full_match(&self) -> bool {
        self.error.is_none() && self.unmatched_generated.is_empty() && self.unmatched_fixture.is_empty()
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.error {
            return writeln!(f, "no match: {e}");
        }
        if self.is_full_match() {
            return writeln!(f, "full match: {} polynomials", self.matched.len());
        }
        writeln!(f, "mismatch: {} matched", self.matched.len())?;
        for &i in &self.unmatched_generated {
            writeln!(f, "  generated #{} unmatched: {}", i + 1, self.generated_text[i])?;
        }
        for &j in &self.unmatched_fixture {
            writeln!(f, "  fixture #{} unmatched: {}", j + 1, self.fixture_text[j])?;
        }
        Ok(())
    }
}

/// `Some(c)` with `p = c * q`, `c != 0`.
pub fn proportionality_factor(p: &Poly<Rational>, q: &Poly<Rational>) -> Option<Rational> {
    if p.num_terms() != q.num_terms() || p.is_zero() {
        return None;
    }
    let mut factor: Option<Rational> = None;
    for ((mp, cp), (mq, cq)) in p.terms().iter().zip(q.terms()) {
        if mp != mq {
            return None;
        }
        let r = cp / cq;
        match &factor {
            None => factor = Some(r),
            Some(f) if *f == r => {}
            Some(_) => return None,
        }
    }
    factor
}

/// Finds a bijection between the two systems' polynomials where paired
/// polynomials differ by a nonzero rational factor. The fixture is read over
/// the generated system's variables (any variable order).
pub fn match_against_fixture(system: &PolySystem, fixture: &PolySystem) -> MatchReport {
    let generated_text: Vec<String> = system.polys.iter().map(|p| p.to_string()).collect();
    let fixture_text: Vec<String> = fixture.polys.iter().map(|p| p.to_string()).collect();
    let mut report = MatchReport {
        matched: Vec::new(),
        unmatched_generated: Vec::new(),
        unmatched_fixture: Vec::new(),
        generated_text,
        fixture_text,
        error: None,
    };
    let fix: Result<Vec<Poly<Rational>>, PolyError> = fixture
        .polys
        .iter()
        .map(|p| p.rename_into(&system.vars, system.order))
        .collect();
    let fix = match fix {
        Ok(f) => f,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let gen: Vec<Poly<Rational>> = system.polys.iter().map(|p| p.with_order(system.order)).collect();
    let mut used = vec![false; fix.len()];
    for (i, g) in gen.iter().enumerate() {
        let hit = (0..fix.len()).find_map(|j| {
            if used[j] {
                return None;
            }
            proportionality_factor(g, &fix[j]).map(|c| (j, c))
        });
        match hit {
            Some((j, c)) => {
                used[j] = true;
                report.matched.push((i, j, c));
            }
            None => report.unmatched_generated.push(i),
        }
    }
    report.unmatched_fixture = (0..fix.len()).filter(|&j| !used[j]).collect();
    report
}
