use einstein_core::poly::PolySystem;
use einstein_core::varsys::{build_original_system, build_variational_system, match_against_fixture, MetricChart};

fn fixture(name: &str) -> PolySystem {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    PolySystem::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn z2xz2_matches_fixture() {
    let sys = build_variational_system(&MetricChart::z2xz2());
    let rep = match_against_fixture(&sys, &fixture("z2xz2.sys"));
    assert!(rep.is_full_match(), "{rep}");
}

#[test]
fn z2_matches_fixture() {
    let sys = build_variational_system(&MetricChart::z2());
    let rep = match_against_fixture(&sys, &fixture("z2.sys"));
    assert!(rep.is_full_match(), "{rep}");
}

#[test]
fn trace2_matches_fixture() {
    let sys = build_original_system(&MetricChart::trace2());
    let rep = match_against_fixture(&sys, &fixture("trace2.sys"));
    assert!(rep.is_full_match(), "{rep}");
}
