use einstein_core::exactnum::RadicalScalar;
use einstein_core::groebner::buchberger;
use einstein_core::poly::{MonomialOrder, PolySystem};
use einstein_core::solver::{back_substitute, point_satisfies, verify_family, Coord, Solution, SolveOptions};

fn fixture(name: &str) -> PolySystem {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    PolySystem::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn sys(text: &str) -> PolySystem {
    PolySystem::parse(text).unwrap()
}

#[test]
fn trace2_single_positive_point() {
    let s = fixture("trace2.sys");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    let out = back_substitute(&gb, &SolveOptions::positive(&["a", "b", "c", "d", "e", "f"])).unwrap();
    assert!(out.zero_dimensional);
    let pts: Vec<_> = out.points().collect();
    assert_eq!(pts.len(), 1, "{:?}", out.solutions);
    assert_eq!(out.families().count(), 0);
    let p = pts[0];
    for v in ["a", "b", "c", "d", "e", "f"] {
        assert_eq!(p.value(v), Some(&Coord::Exact(RadicalScalar::from(1))));
    }
    assert_eq!(p.value("mu"), Some(&Coord::Exact(RadicalScalar::from(-1))));
    assert!(point_satisfies(&s, &p.named_exact().unwrap()).unwrap());
    assert!(out.discarded_positivity > 0);
}

#[test]
fn radical_points_are_recognised() {
    // y^2 = 2 x^2, 4 x^4 = 3
    let s = sys("vars: y x\norder: lex\ny^2 - 2*x^2\n4*x^4 - 3\n");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    let out = back_substitute(&gb, &SolveOptions::default()).unwrap();
    let pts: Vec<_> = out.points().collect();
    assert_eq!(pts.len(), 4);
    for p in &pts {
        assert!(p.is_exact());
        assert!(point_satisfies(&s, &p.named_exact().unwrap()).unwrap());
    }
    let pos = SolveOptions::positive(&["x", "y"]);
    let out = back_substitute(&gb, &pos).unwrap();
    let pts: Vec<_> = out.points().collect();
    assert_eq!(pts.len(), 1);
    let x: RadicalScalar = "1/2*r2*r3q".parse().unwrap();
    assert_eq!(pts[0].value("x"), Some(&Coord::Exact(x.clone())));
}

#[test]
fn unrecognised_roots_use_enclosures() {
    let s = sys("vars: y x\norder: lex\ny - x - 1\nx^2 - 5\n");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    let out = back_substitute(&gb, &SolveOptions::default()).unwrap();
    let pts: Vec<_> = out.points().collect();
    assert_eq!(pts.len(), 2);
    for p in pts {
        assert!(!p.is_exact());
        assert!(p.residual_bound.to_f64() < 1e-20);
        let (x, y) = (p.value("x").unwrap().to_f64(), p.value("y").unwrap().to_f64());
        assert!((x * x - 5.0).abs() < 1e-12 && (y - x - 1.0).abs() < 1e-12);
    }
}

#[test]
fn circle_family_is_promoted() {
    let s = sys("vars: w y x\norder: lex\nw^2 + x^2 - 1\ny - x\n");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    let out = back_substitute(&gb, &SolveOptions::default()).unwrap();
    assert!(!out.zero_dimensional);
    let fams: Vec<_> = out.families().collect();
    assert_eq!(fams.len(), 1, "{:?}", out.solutions);
    let f = fams[0];
    assert_eq!(f.parameter, "x");
    assert_eq!(f.relation.as_ref().unwrap().to_string(), "rel: s^2 + t^2 - 1");
    assert!(verify_family(f, &s).unwrap().is_ok());
    assert_eq!(f.value("y").unwrap().to_string(), "t");
}

#[test]
fn zero_dimensional_collapse_is_ambiguous() {
    // x free but the basis is handed over as if it were zero-dimensional is
    // impossible to construct; instead check a second free variable errors.
    let s = sys("vars: z y x\norder: lex\nz - x*y\n");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    assert!(back_substitute(&gb, &SolveOptions::default()).is_err());
}

#[test]
fn no_real_solutions() {
    let s = sys("vars: y x\norder: lex\ny - x\nx^2 + 1\n");
    let gb = buchberger(&s, MonomialOrder::Lex).unwrap();
    let out = back_substitute(&gb, &SolveOptions::default()).unwrap();
    assert!(out.solutions.is_empty());
    assert!(matches!(out.solutions.first(), None | Some(Solution::Point(_))));
}
