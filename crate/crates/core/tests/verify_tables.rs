use einstein_core::exactnum::parse_radical_expr;
use einstein_core::poly::PolySystem;
use einstein_core::solver::{parse_solutions, Solution, SolutionFile};
use einstein_core::varsys::{build_variational_system, MetricChart};
use einstein_core::verify::{exact_check, verify_record, CertifyOptions, Label};

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn solutions(name: &str) -> SolutionFile {
    parse_solutions(&read(name)).unwrap()
}

fn z2_system(mu: &str) -> PolySystem {
    build_variational_system(&MetricChart::z2_mu_fixed(parse_radical_expr(mu).unwrap()))
}

#[test]
fn z2xz2_table_certifies() {
    let sys = PolySystem::parse(&read("z2xz2.sys")).unwrap();
    let file = solutions("z2xz2.sol");
    assert_eq!(file.records.len(), 13);
    let opts = CertifyOptions::default();
    for rec in &file.records {
        let rep = verify_record(rec, &sys, &opts);
        assert!(rep.is_ok(), "{rep}");
        let row: u32 = rec.label.trim_end_matches(['a', 'b']).parse().unwrap();
        let expect = match row {
            1 | 2 | 4 => Some(Label::Standard),
            6 | 7 => Some(Label::NearlyKahler),
            _ => None,
        };
        if let Some(l) = expect {
            assert_eq!(rep.class, l, "row {}", rec.label);
        }
    }
}

#[test]
fn z2_mu_minus_one_families_certify() {
    let sys = z2_system("-1");
    assert_eq!(sys.polys.len(), 13);
    let file = solutions("z2_mu_m1.sol");
    assert_eq!(file.records.len(), 5);
    for rec in &file.records {
        let rep = verify_record(rec, &sys, &CertifyOptions::default());
        assert!(rep.is_ok(), "{rep}");
        assert_eq!(rep.class, Label::Standard);
        assert!((rep.scalar().unwrap() - 3.0).abs() < 1e-9);
    }
}

#[test]
fn z2_nearly_kahler_families_certify() {
    let sys = z2_system("-5/(3*sqrt3)");
    let file = solutions("z2_mu_nk.sol");
    assert_eq!(file.records.len(), 2);
    for rec in &file.records {
        let rep = verify_record(rec, &sys, &CertifyOptions::default());
        assert!(rep.is_ok(), "{rep}");
        assert_eq!(rep.class, Label::NearlyKahler);
    }
}

#[test]
fn flipping_z_alone_breaks_a_family() {
    let sys = z2_system("-1");
    let text = read("z2_mu_m1.sol").replacen("  z = -t", "  z = t", 1);
    let file = parse_solutions(&text).unwrap();
    let rec = file.records.iter().find(|r| r.label == "2").unwrap();
    assert!(matches!(rec.solution, Solution::Family(_)));
    assert!(exact_check(&rec.solution, &sys).is_err());
}

#[test]
fn corrupted_scalar_curvature_fails() {
    let sys = PolySystem::parse(&read("z2xz2.sys")).unwrap();
    let text = read("z2xz2.sol").replacen("  S: 3", "  S: 7/2", 1);
    let file = parse_solutions(&text).unwrap();
    let bad = file
        .records
        .iter()
        .filter(|r| !verify_record(r, &sys, &CertifyOptions::default()).is_ok())
        .count();
    assert_eq!(bad, 1);
}

#[test]
fn scalar_claim_is_compared_exactly_for_points() {
    let sys = PolySystem::parse(&read("z2xz2.sys")).unwrap();
    // off by 1e-12: inside the numeric tolerance, caught only by S = -3 mu
    let text = read("z2xz2.sol").replacen("  S: 3", "  S: 3000000000001/1000000000000", 1);
    let file = parse_solutions(&text).unwrap();
    let rep = verify_record(&file.records[0], &sys, &CertifyOptions::default());
    assert!(rep.exact.is_ok() && rep.certs.is_ok());
    assert!(!rep.is_ok(), "{rep}");
}
