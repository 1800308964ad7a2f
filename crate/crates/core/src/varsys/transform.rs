//! The square-root coordinate change between original and transformed
//! parameters.
//!
//! Transformed to original: `a = sqrt(BC)`, `b = sqrt(AC)`, `c = sqrt(AB)`,
//! `d = sqrt(EF)`, `e = sqrt(DF)`, `f = sqrt(DE)`, and each off-diagonal is
//! its capital times one of `a, b, c`. Original to transformed is rational:
//! `A = bc/a`, `B = ac/b`, `C = ab/c`, `D = ef/d`, `E = df/e`, `F = de/f`.

use crate::exactnum::{FieldScalar, RadicalScalar};

use super::{MU_ORIGINAL, MU_TRANSFORMED, ORIGINAL_NAMES, TRANSFORMED_NAMES};

/// For an off-diagonal index `k` in `6..15` (or a diagonal index), the
/// diagonal parameter (`0` = a, `1` = b, `2` = c) it is scaled by.
pub fn offdiag_scale_index(k: usize) -> usize {
    match ORIGINAL_NAMES[k] {
        "x" | "alpha" | "beta" => 0,
        "y" | "u" | "gamma" => 1,
        "z" | "v" | "w" => 2,
        _ => k,
    }
}

/// `(a..f) -> (A..F)`; `None` if some diagonal value is zero.
pub fn forward_diagonal<T: FieldScalar>(d: &[T; 6]) -> Option<[T; 6]> {
    let q = |p: &T, r: &T, s: &T| -> Option<T> {
        let mut n = p.clone();
        n *= r;
        n.div_exact(s)
    };
    Some([
        q(&d[1], &d[2], &d[0])?,
        q(&d[0], &d[2], &d[1])?,
        q(&d[0], &d[1], &d[2])?,
        q(&d[4], &d[5], &d[3])?,
        q(&d[3], &d[5], &d[4])?,
        q(&d[3], &d[4], &d[5])?,
    ])
}

fn products<T: FieldScalar>(d: &[T; 6]) -> [T; 6] {
    let m = |p: &T, r: &T| {
        let mut n = p.clone();
        n *= r;
        n
    };
    [
        m(&d[1], &d[2]),
        m(&d[0], &d[2]),
        m(&d[0], &d[1]),
        m(&d[4], &d[5]),
        m(&d[3], &d[5]),
        m(&d[3], &d[4]),
    ]
}

/// `(A..F) -> (a..f)` in Q(sqrt2, 3^(1/4)); `None` when a square root
/// leaves the field's monomial shape.
pub fn inverse_diagonal(d: &[RadicalScalar; 6]) -> Option<[RadicalScalar; 6]> {
    let p = products(d);
    let mut out: [RadicalScalar; 6] = Default::default();
    for (k, v) in p.iter().enumerate() {
        out[k] = v.sqrt_monomial()?;
    }
    Some(out)
}

fn lookup<'a, T>(vals: &'a [(String, T)], name: &str) -> Option<&'a T> {
    vals.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

/// Original-coordinate assignment (`a..f`, any off-diagonals, optional `mu`)
/// to transformed coordinates.
pub fn forward_point<T: FieldScalar>(orig: &[(String, T)]) -> Option<Vec<(String, T)>> {
    let mut d: [T; 6] = std::array::from_fn(|_| T::zero());
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = lookup(orig, ORIGINAL_NAMES[k])?.clone();
    }
    let cap = forward_diagonal(&d)?;
    let mut out: Vec<(String, T)> = (0..6)
        .map(|k| (TRANSFORMED_NAMES[k].to_string(), cap[k].clone()))
        .collect();
    for k in 6..15 {
        if let Some(v) = lookup(orig, ORIGINAL_NAMES[k]) {
            out.push((
                TRANSFORMED_NAMES[k].to_string(),
                v.div_exact(&d[offdiag_scale_index(k)])?,
            ));
        }
    }
    if let Some(m) = lookup(orig, MU_ORIGINAL) {
        out.push((MU_TRANSFORMED.to_string(), m.clone()));
    }
    Some(out)
}

fn inverse_with<T: FieldScalar>(
    trans: &[(String, T)],
    diag: impl Fn(&[T; 6]) -> Option<[T; 6]>,
) -> Option<Vec<(String, T)>> {
    let mut cap: [T; 6] = std::array::from_fn(|_| T::zero());
    for (k, slot) in cap.iter_mut().enumerate() {
        *slot = lookup(trans, TRANSFORMED_NAMES[k])?.clone();
    }
    let d = diag(&cap)?;
    let mut out: Vec<(String, T)> = (0..6).map(|k| (ORIGINAL_NAMES[k].to_string(), d[k].clone())).collect();
    for k in 6..15 {
        if let Some(v) = lookup(trans, TRANSFORMED_NAMES[k]) {
            let mut x = v.clone();
            x *= &d[offdiag_scale_index(k)];
            out.push((ORIGINAL_NAMES[k].to_string(), x));
        }
    }
    if let Some(m) = lookup(trans, MU_TRANSFORMED) {
        out.push((MU_ORIGINAL.to_string(), m.clone()));
    }
    Some(out)
}

/// Transformed assignment to original coordinates, exactly.
pub fn inverse_point(trans: &[(String, RadicalScalar)]) -> Option<Vec<(String, RadicalScalar)>> {
    inverse_with(trans, inverse_diagonal)
}

/// Transformed assignment to original coordinates in floating point;
/// requires positive diagonal values.
pub fn inverse_point_f64(trans: &[(String, f64)]) -> Option<Vec<(String, f64)>> {
    inverse_with(trans, |d| {
        let p = products(d);
        if p.iter().any(|&v| v <= 0.0) {
            return None;
        }
        Some(p.map(f64::sqrt))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use num_traits::One;

    #[test]
    fn table_row_round_trip() {
        // a = 3^(1/4)/sqrt2 on the first factor, sqrt2/3^(1/4) on the second
        let r = RadicalScalar::monomial(Rational::one(), -1, 1);
        let s = RadicalScalar::monomial(Rational::one(), 1, -1);
        let x = RadicalScalar::monomial(Rational::one(), -1, -1);
        let orig: Vec<(String, RadicalScalar)> = vec![
            ("a".into(), r.clone()),
            ("b".into(), r.clone()),
            ("c".into(), r),
            ("d".into(), s.clone()),
            ("e".into(), s.clone()),
            ("f".into(), s),
            ("x".into(), x.clone()),
            ("y".into(), -x.clone()),
            ("z".into(), x),
        ];
        let t = forward_point(&orig).unwrap();
        let back = inverse_point(&t).unwrap();
        assert_eq!(back, orig);
    }
}
