use einstein_core::liegeom::{curvature, scalar_curvature_formula, BasisChange};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z2xz2_point(diag1: f64, diag2: f64, x: f64, y: f64, z: f64) -> BasisChange<f64> {
    let mut p = BasisChange::identity();
    p.a = diag1;
    p.b = diag1;
    p.c = diag1;
    p.d = diag2;
    p.e = diag2;
    p.f = diag2;
    p.x = x;
    p.y = y;
    p.z = z;
    p
}

fn random_point(rng: &mut ChaCha8Rng) -> BasisChange<f64> {
    let mut arr = [0.0; 15];
    for (k, v) in arr.iter_mut().enumerate() {
        *v = if k < 6 {
            rng.gen_range(0.3..3.0)
        } else {
            rng.gen_range(-2.0..2.0)
        };
    }
    BasisChange::from_array(arr)
}

#[test]
fn nearly_kahler_row() {
    let r2 = 2f64.sqrt();
    let q3 = 3f64.powf(0.25);
    let p = z2xz2_point(q3 / r2, r2 / q3, 1.0 / (r2 * q3), 1.0 / (r2 * q3), 1.0 / (r2 * q3));
    let rep = curvature(&p).unwrap();
    let lambda = 5.0 / (6.0 * 3f64.sqrt());
    assert!(rep.einstein_residual < 1e-10, "{}", rep.einstein_residual);
    assert!((rep.einstein_lambda.unwrap() - lambda).abs() < 1e-12);
    assert!((rep.scalar - 5.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!((scalar_curvature_formula(&p).unwrap() - 5.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!((rep.volume_factor - 1.0).abs() < 1e-12);
}

#[test]
fn product_rows_are_einstein() {
    let r2 = 2f64.sqrt();
    for p in [
        z2xz2_point(1.0, 1.0, 1.0, 1.0, 1.0),
        z2xz2_point(1.0, 1.0, -1.0, 1.0, -1.0),
        z2xz2_point(1.0 / r2, r2, 1.0 / r2, 1.0 / r2, 1.0 / r2),
    ] {
        let rep = curvature(&p).unwrap();
        assert!(rep.einstein_residual < 1e-10);
        assert!((rep.scalar - 3.0).abs() < 1e-12);
        assert!((scalar_curvature_formula(&p).unwrap() - 3.0).abs() < 1e-12);
    }
}

#[test]
fn formula_matches_koszul_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let p = random_point(&mut rng);
        let rep = curvature(&p).unwrap();
        let s = scalar_curvature_formula(&p).unwrap();
        assert!((s - rep.scalar).abs() / (1.0 + s.abs()) < 1e-9, "{s} vs {}", rep.scalar);
        assert!(rep.ricci_asymmetry < 1e-12 * (1.0 + s.abs()));
        let det: f64 = p.diagonal().iter().product();
        assert!((rep.volume_factor - 1.0 / det).abs() <= 1e-15 / det);
    }
}

#[test]
fn homothety_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let p = random_point(&mut rng);
        let c: f64 = rng.gen_range(0.5..2.0);
        // parameters times 1/c <=> metric times c^2
        let q = p.scaled(1.0 / c);
        let r0 = curvature(&p).unwrap();
        let r1 = curvature(&q).unwrap();
        assert!((r1.scalar - r0.scalar / (c * c)).abs() < 1e-9 * (1.0 + r0.scalar.abs()));
        for i in 0..6 {
            for j in 0..6 {
                assert!((r1.ricci[i][j] - r0.ricci[i][j] / (c * c)).abs() < 1e-9 * (1.0 + r0.scalar.abs()));
            }
        }
    }
}

#[test]
fn factor_swap_preserves_invariants() {
    // swapping the two factors of the all-ones-diagonal product rows
    let p = z2xz2_point(0.8, 1.25, 0.0, 0.0, 0.0);
    let q = z2xz2_point(1.25, 0.8, 0.0, 0.0, 0.0);
    let (rp, rq) = (curvature(&p).unwrap(), curvature(&q).unwrap());
    assert!((rp.scalar - rq.scalar).abs() < 1e-12);
    assert!((rp.invariant_r2 - rq.invariant_r2).abs() < 1e-12);
}
