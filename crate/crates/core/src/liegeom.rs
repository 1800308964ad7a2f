//! Curvature of left-invariant metrics on SU(2) x SU(2).
//!
//! The metric is given through the basis-change matrix `A`: the rows of `A`
//! express a g-orthonormal frame `(X1, X2, X3, Y1, Y2, Y3)` in the
//! Q-orthonormal frame `(E1, E2, E3, F1, F2, F3)`, `Q = -B/2`. All curvature
//! quantities are computed in the orthonormal frame, where the metric is the
//! identity.

use num_traits::Float;
use thiserror::Error;

pub const DIM: usize = 6;

/// Order of the 15 metric parameters.
pub const PARAM_NAMES: [&str; 15] = [
    "a", "b", "c", "d", "e", "f", "x", "y", "z", "u", "v", "w", "alpha", "beta", "gamma",
];

/// Bracket constant: `[E1, E2] = KAPPA * E3` cyclically, same for the F's.
pub const KAPPA: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieGeomError {
    #[error("diagonal parameter {name} = {value} is not positive")]
    NonPositiveDiagonal { name: &'static str, value: f64 },
    #[error("diagonal parameter {name} is zero")]
    ZeroDiagonal { name: &'static str },
}

type Tensor3<T> = [[[T; DIM]; DIM]; DIM];
type Mat<T> = [[T; DIM]; DIM];

fn c<T: Float>(v: f64) -> T {
    T::from(v).unwrap()
}

fn zeros3<T: Float>() -> Tensor3<T> {
    [[[T::zero(); DIM]; DIM]; DIM]
}

/// Structure constants: `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<T> {
    pub c: Tensor3<T>,
}

/// su(2) + su(2) in a basis that is orthonormal for `Q = -B/2`.
pub fn structure_constants_normalized<T: Float>() -> LieAlgebra<T> {
    let kappa = c::<T>(KAPPA);
    let mut t = zeros3::<T>();
    for off in [0, 3] {
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            t[off + i][off + j][off + k] = kappa;
            t[off + j][off + i][off + k] = -kappa;
        }
    }
    LieAlgebra { c: t }
}

impl<T: Float> LieAlgebra<T> {
    pub fn ad(&self, i: usize) -> Mat<T> {
        // (ad e_i)(e_j) = sum_k c_ijk e_k, column j of the matrix
        let mut m = [[T::zero(); DIM]; DIM];
        for j in 0..DIM {
            for k in 0..DIM {
                m[k][j] = self.c[i][j][k];
            }
        }
        m
    }

    /// `B(e_i, e_j) = tr(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> Mat<T> {
        let mut b = [[T::zero(); DIM]; DIM];
        for i in 0..DIM {
            let ai = self.ad(i);
            for j in 0..DIM {
                let aj = self.ad(j);
                let mut tr = T::zero();
                for p in 0..DIM {
                    for q in 0..DIM {
                        tr = tr + ai[p][q] * aj[q][p];
                    }
                }
                b[i][j] = tr;
            }
        }
        b
    }

    /// Largest absolute value of the Jacobiator over basis triples.
    pub fn jacobi_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for r in 0..DIM {
                        let mut s = T::zero();
                        for m in 0..DIM {
                            s = s
                                + self.c[j][k][m] * self.c[i][m][r]
                                + self.c[k][i][m] * self.c[j][m][r]
                                + self.c[i][j][m] * self.c[k][m][r];
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn antisymmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    worst = worst.max((self.c[i][j][k] + self.c[j][i][k]).abs());
                }
            }
        }
        worst
    }
}

/// The 15 parameters of the lower block-triangular matrix
///
/// ```text
///     | a 0 0 0 0 0 |
///     | 0 b 0 0 0 0 |
/// A = | 0 0 c 0 0 0 |
///     | x u v d 0 0 |
///     | α y w 0 e 0 |
///     | β γ z 0 0 f |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisChange<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
    pub x: T,
    pub y: T,
    pub z: T,
    pub u: T,
    pub v: T,
    pub w: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Float> BasisChange<T> {
    /// All diagonal entries 1, off-diagonal 0: the metric Q itself.
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        BasisChange::from_array([o, o, o, o, o, o, z, z, z, z, z, z, z, z, z])
    }

    /// Parameters in [`PARAM_NAMES`] order.
    pub fn from_array(p: [T; 15]) -> Self {
        BasisChange {
            a: p[0],
            b: p[1],
            c: p[2],
            d: p[3],
            e: p[4],
            f: p[5],
            x: p[6],
            y: p[7],
            z: p[8],
            u: p[9],
            v: p[10],
            w: p[11],
            alpha: p[12],
            beta: p[13],
            gamma: p[14],
        }
    }

    pub fn to_array(&self) -> [T; 15] {
        [
            self.a, self.b, self.c, self.d, self.e, self.f, self.x, self.y, self.z, self.u, self.v, self.w, self.alpha,
            self.beta, self.gamma,
        ]
    }

    /// Looks up a parameter by its name in [`PARAM_NAMES`] (`γ` etc. also accepted).
    pub fn set(&mut self, name: &str, value: T) -> bool {
        let idx = match name {
            "α" => Some(12),
            "β" => Some(13),
            "γ" | "g" => Some(14),
            _ => PARAM_NAMES.iter().position(|&n| n == name),
        };
        match idx {
            Some(i) => {
                let mut arr = self.to_array();
                arr[i] = value;
                *self = BasisChange::from_array(arr);
                true
            }
            None => false,
        }
    }

    pub fn matrix(&self) -> Mat<T> {
        let z = T::zero();
        [
            [self.a, z, z, z, z, z],
            [z, self.b, z, z, z, z],
            [z, z, self.c, z, z, z],
            [self.x, self.u, self.v, self.d, z, z],
            [self.alpha, self.y, self.w, z, self.e, z],
            [self.beta, self.gamma, self.z, z, z, self.f],
        ]
    }

    pub fn diagonal(&self) -> [T; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn determinant(&self) -> T {
        self.diagonal().iter().fold(T::one(), |acc, &v| acc * v)
    }

    /// Every parameter multiplied by `s`: the metric is divided by `s^2`.
    pub fn scaled(&self, s: T) -> Self {
        let mut p = self.to_array();
        for v in p.iter_mut() {
            *v = *v * s;
        }
        BasisChange::from_array(p)
    }

    fn check_positive(&self) -> Result<(), LieGeomError> {
        for (k, v) in self.diagonal().iter().enumerate() {
            if !(*v > T::zero()) {
                return Err(LieGeomError::NonPositiveDiagonal {
                    name: PARAM_NAMES[k],
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Inverse of the lower block-triangular matrix.
    fn inverse_matrix(&self) -> Mat<T> {
        let a = self.matrix();
        let mut inv = [[T::zero(); DIM]; DIM];
        // forward substitution column by column: A * inv = I
        for col in 0..DIM {
            for row in 0..DIM {
                let mut s = if row == col { T::one() } else { T::zero() };
                for k in 0..row {
                    s = s - a[row][k] * inv[k][col];
                }
                inv[row][col] = s / a[row][row];
            }
        }
        inv
    }
}

/// Curvature data of one metric, all in the g-orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<T> {
    pub ricci: Mat<T>,
    pub scalar: T,
    /// `V = (abcdef)^-1`.
    pub volume_factor: T,
    /// `S / 6` when the metric is Einstein within [`EINSTEIN_TOL`].
    pub einstein_lambda: Option<T>,
    /// `max |Ric - (S/6) Id|`.
    pub einstein_residual: T,
    /// Squared norm of the curvature tensor.
    pub invariant_r2: T,
    /// `max |Ric - Ric^T|`.
    pub ricci_asymmetry: T,
}

/// Residual below which a report is declared Einstein.
pub const EINSTEIN_TOL: f64 = 1e-9;

/// Structure constants `c_ijk = g([X_i, X_j], X_k)` of the orthonormal frame.
pub fn frame_structure_constants<T: Float>(params: &BasisChange<T>) -> Tensor3<T> {
    let c0 = structure_constants_normalized::<T>().c;
    let a = params.matrix();
    let ainv = params.inverse_matrix();
    // [X_i, X_j] = sum_{p,q} A_ip A_jq [e_p, e_q] = sum_r (..)_r e_r,  e_r = sum_k Ainv_rk X_k
    let mut out = zeros3::<T>();
    for i in 0..DIM {
        for j in 0..DIM {
            let mut er = [T::zero(); DIM];
            for p in 0..DIM {
                if a[i][p] == T::zero() {
                    continue;
                }
                for q in 0..DIM {
                    if a[j][q] == T::zero() {
                        continue;
                    }
                    let w = a[i][p] * a[j][q];
                    for r in 0..DIM {
                        er[r] = er[r] + w * c0[p][q][r];
                    }
                }
            }
            for k in 0..DIM {
                let mut s = T::zero();
                for r in 0..DIM {
                    s = s + er[r] * ainv[r][k];
                }
                out[i][j][k] = s;
            }
        }
    }
    out
}

/// Full curvature report via the Koszul formula in the orthonormal frame.
pub fn curvature<T: Float>(params: &BasisChange<T>) -> Result<CurvatureReport<T>, LieGeomError> {
    params.check_positive()?;
    let cs = frame_structure_constants(params);
    let half = c::<T>(0.5);
    let mut gam = zeros3::<T>();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                gam[i][j][k] = half * (cs[i][j][k] - cs[j][k][i] + cs[k][i][j]);
            }
        }
    }
    // R(X_i, X_j) X_l = sum_n r[i][j][l][n] X_n
    let mut ricci = [[T::zero(); DIM]; DIM];
    let mut r2 = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for l in 0..DIM {
                for n in 0..DIM {
                    let mut s = T::zero();
                    for m in 0..DIM {
                        s = s + gam[j][l][m] * gam[i][m][n] - gam[i][l][m] * gam[j][m][n] - cs[i][j][m] * gam[m][l][n];
                    }
                    r2 = r2 + s * s;
                    if n == i {
                        ricci[j][l] = ricci[j][l] + s;
                    }
                }
            }
        }
    }
    let mut scalar = T::zero();
    let mut asym = T::zero();
    for i in 0..DIM {
        scalar = scalar + ricci[i][i];
        for j in 0..DIM {
            asym = asym.max((ricci[i][j] - ricci[j][i]).abs());
        }
    }
    let lambda = scalar / c::<T>(DIM as f64);
    let mut residual = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            let target = if i == j { lambda } else { T::zero() };
            residual = residual.max((ricci[i][j] - target).abs());
        }
    }
    let einstein_lambda = (residual < c::<T>(EINSTEIN_TOL)).then_some(lambda);
    Ok(CurvatureReport {
        ricci,
        scalar,
        volume_factor: T::one() / params.determinant(),
        einstein_lambda,
        einstein_residual: residual,
        invariant_r2: r2,
        ricci_asymmetry: asym,
    })
}

/// Closed-form rational expression for the scalar curvature in the 15
/// parameters.
pub fn scalar_curvature_formula<T: Float>(p: &BasisChange<T>) -> Result<T, LieGeomError> {
    for (k, v) in p.diagonal().iter().enumerate() {
        if *v == T::zero() {
            return Err(LieGeomError::ZeroDiagonal { name: PARAM_NAMES[k] });
        }
    }
    let BasisChange {
        a,
        b,
        c: cc,
        d,
        e,
        f,
        x,
        y,
        z,
        u,
        v,
        w,
        alpha: al,
        beta: be,
        gamma: ga,
    } = *p;
    let sq = |t: T| t * t;
    let (a2, b2, c2, d2, e2, f2) = (sq(a), sq(b), sq(cc), sq(d), sq(e), sq(f));
    let quad = a2 + b2 + c2 + d2 + e2 + f2 + sq(x) + sq(y) + sq(z) + sq(u) + sq(v) + sq(w) + sq(al) + sq(be) + sq(ga);
    let def = d * e / f;
    let dfe = d * f / e;
    let efd = e * f / d;
    let brace = a2 * b2 / c2
        + b2 * c2 / a2
        + c2 * a2 / b2
        + d2 * e2 / f2
        + e2 * f2 / d2
        + f2 * d2 / e2
        + (a2 / c2 + c2 / a2) * (sq(u) + sq(y) + sq(ga))
        + (a2 / b2 + b2 / a2) * (sq(v) + sq(w) + sq(z))
        + (b2 / c2 + c2 / b2) * (sq(x) + sq(al) + sq(be))
        + (sq(u * w - v * y - def * be) + sq(v * ga - u * z - dfe * al) + sq(y * z - w * ga - efd * x)) / a2
        + (sq(v * al - x * w - def * ga) + sq(x * z - v * be - dfe * y) + sq(w * be - z * al - efd * u)) / b2
        + (sq(x * y - u * al - def * z) + sq(u * be - x * ga - dfe * w) + sq(al * ga - y * be - efd * v)) / c2;
    Ok(quad - brace * c::<T>(0.5))
}
