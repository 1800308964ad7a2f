//! Exact and floating-point machinery for finding invariant Einstein metrics
//! on the Lie group S3 x S3.

pub mod exactnum;
pub mod fixtures;
pub mod groebner;
pub mod liegeom;
pub mod pipeline;
pub mod poly;
pub mod solver;
pub mod varsys;
pub mod verify;

pub use exactnum::{ParamRingElem, RadicalScalar, Rational};
pub use poly::{Monomial, MonomialOrder, Poly, PolySystem, VarTable};

/// Polynomials with rational coefficients.
pub type QPoly = Poly<Rational>;
/// Polynomials with coefficients in Q(sqrt2, 3^(1/4)).
pub type RadPoly = Poly<RadicalScalar>;
/// Polynomials with coefficients in a parameter ring K[t, s]/(relation).
pub type ParamPoly = Poly<ParamRingElem>;
/// Floating-point polynomials.
pub type F64Poly = Poly<f64>;
