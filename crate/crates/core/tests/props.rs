use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use einstein_core::exactnum::{ParamRingElem, RadicalScalar, Rational, Relation, Sign};
use einstein_core::groebner::{buchberger, buchberger_with, reduce, s_polynomial, GroebnerOptions};
use einstein_core::poly::{parse_poly, Monomial, MonomialOrder, Poly, VarTable};
use einstein_core::solver::{isolate_real_roots, recognize_radical, UPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
}

fn radical() -> impl Strategy<Value = RadicalScalar> {
    proptest::collection::vec(prop_oneof![2 => Just(None), 1 => rational().prop_map(Some)], 8).prop_map(|slots| {
        let mut acc = RadicalScalar::zero();
        for (k, s) in slots.into_iter().enumerate() {
            if let Some(q) = s {
                acc = acc + RadicalScalar::monomial(q, (k / 4) as i32, (k % 4) as i32);
            }
        }
        acc
    })
}

fn vars3() -> Arc<VarTable> {
    VarTable::new(&["x", "y", "z"]).unwrap()
}

fn poly3(order: MonomialOrder, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly<Rational>> {
    proptest::collection::vec(
        ((0..=max_deg as u16, 0..=max_deg as u16, 0..=max_deg as u16), rational()),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let vars = vars3();
        let terms = terms
            .into_iter()
            .filter(|((a, b, c), _)| (a + b + c) as u32 <= max_deg)
            .map(|((a, b, c), q)| (Monomial::from_exps(&[a, b, c]), q))
            .collect();
        Poly::from_terms(&vars, order, terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radical_field_axioms(a in radical(), b in radical(), c in radical()) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() + b.clone()) - b.clone(), a.clone());
        if !a.is_zero() {
            prop_assert!((a.clone() * a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn radical_sign_and_text(a in radical()) {
        let f = a.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.sign(), if f > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        let (lo, hi) = a.enclosure(40);
        prop_assert!(lo.to_f64() <= f + 1e-12 && f - 1e-12 <= hi.to_f64());
        let back: RadicalScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn param_ring_is_a_quotient(p in proptest::collection::vec(rational(), 6), q in proptest::collection::vec(rational(), 6), t in -0.5f64..0.5) {
        let rel = Arc::new(Relation::circle(3));
        let build = |c: &[Rational]| {
            let keys = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
            let terms = keys.iter().zip(c).map(|(&k, c)| (k, RadicalScalar::from(c.clone())));
            ParamRingElem::from_terms(terms, Some(rel.clone()))
        };
        let (a, b) = (build(&p), build(&q));
        let s = (1.0 - 3.0 * t * t).sqrt();
        let lhs = (a.clone() * b.clone()).eval_f64(t, s);
        let rhs = a.eval_f64(t, s) * b.eval_f64(t, s);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        prop_assert!((a.clone() * b.clone()).degree_in_s() < 2);
    }

    #[test]
    fn poly_eval_is_a_ring_map(p in poly3(MonomialOrder::Grevlex, 3, 5), q in poly3(MonomialOrder::Grevlex, 3, 5), pt in proptest::collection::vec(rational(), 3)) {
        let ep = p.eval(&pt).unwrap();
        let eq = q.eval(&pt).unwrap();
        prop_assert_eq!((&p * &q).eval(&pt).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &ep + &eq);
        prop_assert_eq!(p.with_order(MonomialOrder::Lex).eval(&pt).unwrap(), ep);
    }

    #[test]
    fn poly_text_round_trip(p in poly3(MonomialOrder::Lex, 4, 6)) {
        let back = parse_poly(&p.to_string(), p.vars(), MonomialOrder::Lex).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn root_isolation_finds_rational_roots(roots in proptest::collection::btree_set(-30i64..30, 1..6), scale in 1i64..5) {
        let rs: Vec<Rational> = roots.iter().map(|&r| Rational::new(r, scale)).collect();
        let mut p = UPoly::constant(Rational::one());
        for r in &rs {
            p = p.mul(&UPoly::linear_root(r.clone()));
        }
        // a repeated root and an irreducible quadratic must not add roots
        p = p.mul(&UPoly::linear_root(rs[0].clone()));
        p = p.mul(&UPoly::new(vec![Rational::from(1), Rational::zero(), Rational::from(1)]));
        let iso = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(iso.len(), rs.len());
        for (root, r) in iso.iter().zip(&rs) {
            let x = RadicalScalar::from(r.clone());
            prop_assert!(root.contains(&x));
            prop_assert_eq!(recognize_radical(root), Some(x.clone()));
            let mut finer = root.clone();
            finer.refine_to(30);
            prop_assert!(finer.lo >= root.lo && finer.hi <= root.hi && finer.contains(&x));
        }
        let m: Vec<u32> = iso.iter().map(|r| r.multiplicity).collect();
        prop_assert_eq!(m[0], 2);
    }

    #[test]
    fn radical_roots_are_recognised(q in 1i64..20, d in 1i64..6, i in -1i32..=1, j in -3i32..=3) {
        let x = RadicalScalar::monomial(Rational::new(q, d), i, j);
        // minimal polynomial of a field monomial divides x^4 - x0^4
        let x4 = x.clone() * x.clone() * x.clone() * x.clone();
        let c = x4.as_rational().cloned().unwrap();
        let p = UPoly::new(vec![-c, Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()]);
        let iso = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(iso.len(), 2);
        let hit = iso.iter().filter_map(recognize_radical).any(|r| r == x);
        prop_assert!(hit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_bases_are_bases(ps in proptest::collection::vec(poly3(MonomialOrder::Grevlex, 2, 3), 2..4)) {
        let vars = vars3();
        let sys = einstein_core::poly::PolySystem::new(vars, MonomialOrder::Grevlex, ps.clone());
        let opts = GroebnerOptions { max_pairs: 400, ..Default::default() };
        let gb = buchberger_with(&sys, MonomialOrder::Grevlex, &opts);
        prop_assume!(gb.is_ok());
        let gb = gb.unwrap();
        prop_assert!(gb.is_reduced());
        for p in &ps {
            prop_assert!(gb.reduce(p).is_zero());
        }
        for i in 0..gb.polys.len() {
            for j in i + 1..gb.polys.len() {
                let s = s_polynomial(&gb.polys[i], &gb.polys[j], gb.order);
                prop_assert!(reduce(&s, &gb.polys, gb.order).is_zero());
            }
        }
        let again = buchberger(&sys, MonomialOrder::Grevlex).unwrap();
        prop_assert_eq!(again.to_text(false), gb.to_text(false));
    }
}
