use einstein_core::liegeom::BasisChange;
use einstein_core::poly::PolySystem;
use einstein_core::solver::{parse_solutions, Coord, Solution, SolutionRecord};
use einstein_core::verify::{certify_einstein, certify_params, classify, exact_check, CertifyOptions, SampleCert};
use proptest::prelude::*;

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn z2xz2_rows() -> Vec<SolutionRecord> {
    parse_solutions(&read("z2xz2.sol")).unwrap().records
}

fn flip(rec: &SolutionRecord, names: [&str; 2]) -> Solution {
    let Solution::Point(p) = &rec.solution else {
        panic!("points only")
    };
    let mut q = p.clone();
    for (v, c) in q.vars.iter().zip(q.values.iter_mut()) {
        if names.contains(&v.as_str()) {
            if let Coord::Exact(x) = c {
                *c = Coord::Exact(-x.clone());
            }
        }
    }
    Solution::Point(q)
}

/// The same metric written with the two factors exchanged: per index `i`
/// the frame `a F_i, x F_i + d E_i` is rotated back to lower-triangular form.
fn swap_factors(p: &BasisChange<f64>) -> BasisChange<f64> {
    let mut q = *p;
    let diag = [(p.a, p.d, p.x), (p.b, p.e, p.y), (p.c, p.f, p.z)];
    let mut out = [(0.0, 0.0, 0.0); 3];
    for (k, &(a, d, x)) in diag.iter().enumerate() {
        let r = (a * a + x * x).sqrt();
        out[k] = (a * d / r, r, d * x / r);
    }
    (q.a, q.d, q.x) = out[0];
    (q.b, q.e, q.y) = out[1];
    (q.c, q.f, q.z) = out[2];
    q
}

fn cert(sol: &Solution) -> SampleCert {
    certify_einstein(sol, &CertifyOptions::default()).unwrap().remove(0)
}

#[test]
fn even_sign_flips_map_rows_to_solutions() {
    let sys = PolySystem::parse(&read("z2xz2.sys")).unwrap();
    for rec in z2xz2_rows() {
        let base = cert(&rec.solution);
        for pair in [["x", "y"], ["x", "z"], ["y", "z"]] {
            let s = flip(&rec, pair);
            exact_check(&s, &sys).unwrap_or_else(|e| panic!("row {} flip {pair:?}: {e}", rec.label));
            let c = cert(&s);
            assert_eq!(classify(&c), classify(&base));
            assert!((c.invariant_r2 - base.invariant_r2).abs() < 1e-9);
        }
    }
}

#[test]
fn odd_sign_flip_breaks_rows_with_offdiagonals() {
    let sys = PolySystem::parse(&read("z2xz2.sys")).unwrap();
    for rec in z2xz2_rows().into_iter().filter(|r| r.label != "1") {
        let Solution::Point(p) = &rec.solution else {
            unreachable!()
        };
        let mut q = p.clone();
        let k = q.vars.iter().position(|v| v == "z").unwrap();
        if let Coord::Exact(x) = &q.values[k] {
            q.values[k] = Coord::Exact(-x.clone());
        }
        assert!(exact_check(&Solution::Point(q), &sys).is_err(), "row {}", rec.label);
    }
}

#[test]
fn factor_swap_keeps_class() {
    let opts = CertifyOptions::default();
    for rec in z2xz2_rows() {
        let base = cert(&rec.solution);
        let swapped = certify_params(&swap_factors(&base.params), base.mu, &opts).unwrap();
        assert_eq!(classify(&swapped), classify(&base), "row {}", rec.label);
        assert!((swapped.scalar - base.scalar).abs() < 1e-9);
        assert!((swapped.invariant_r2 - base.invariant_r2).abs() < 1e-9);
    }
}

#[test]
fn lambda_mu_scalar_consistency() {
    for rec in z2xz2_rows() {
        let c = cert(&rec.solution);
        let mu = c.mu.unwrap();
        assert!((mu + 2.0 * c.scalar / 6.0).abs() < 1e-9);
        assert!((c.scalar - 6.0 * c.lambda).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn invariants_survive_swap_and_flips(d in proptest::collection::vec(0.4f64..2.5, 6), o in proptest::collection::vec(-1.5f64..1.5, 3)) {
        let mut p = BasisChange::from_array([0.0; 15]);
        (p.a, p.b, p.c, p.d, p.e, p.f) = (d[0], d[1], d[2], d[3], d[4], d[5]);
        (p.x, p.y, p.z) = (o[0], o[1], o[2]);
        let r = einstein_core::liegeom::curvature(&p).unwrap();
        let s = einstein_core::liegeom::curvature(&swap_factors(&p)).unwrap();
        prop_assert!((r.scalar - s.scalar).abs() < 1e-9 * (1.0 + r.scalar.abs()));
        prop_assert!((r.invariant_r2 - s.invariant_r2).abs() < 1e-9 * (1.0 + r.invariant_r2));
        let mut f = p;
        f.x = -f.x;
        f.y = -f.y;
        let g = einstein_core::liegeom::curvature(&f).unwrap();
        prop_assert!((r.scalar - g.scalar).abs() < 1e-9 * (1.0 + r.scalar.abs()));
        prop_assert!((r.invariant_r2 - g.invariant_r2).abs() < 1e-9 * (1.0 + r.invariant_r2));
    }
}
