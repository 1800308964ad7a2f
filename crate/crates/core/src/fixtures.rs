//! Transcribed systems and solution tables, embedded so that the library
//! and the command-line driver can compare against them without file paths.

pub const TRACE2_SYSTEM: &str = include_str!("../fixtures/trace2.sys");
pub const Z2XZ2_SYSTEM: &str = include_str!("../fixtures/z2xz2.sys");
pub const Z2_SYSTEM: &str = include_str!("../fixtures/z2.sys");

/// Seven rows (13 sign variants) in original coordinates.
pub const Z2XZ2_SOLUTIONS: &str = include_str!("../fixtures/z2xz2.sol");
/// One point and four families at `mu = -1`.
pub const Z2_MU_M1_SOLUTIONS: &str = include_str!("../fixtures/z2_mu_m1.sol");
/// Two families at `mu = -5/(3 sqrt3)`.
pub const Z2_MU_NK_SOLUTIONS: &str = include_str!("../fixtures/z2_mu_nk.sol");

/// Shipped system for a case name, if there is one.
pub fn system_for_case(case: &str) -> Option<&'static str> {
    match case {
        "trace2" => Some(TRACE2_SYSTEM),
        "z2xz2" => Some(Z2XZ2_SYSTEM),
        "z2" => Some(Z2_SYSTEM),
        _ => None,
    }
}
