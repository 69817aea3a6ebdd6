//! Siegel modular forms of genus two from theta constants, the action of
//! Sp4(ℤ) on the half-space, and the induced isometry of the rank-five lattice.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{data, Context, Horner, MPoly};
use crate::numerics::{det2, mul2, Complex, Mat2, SiegelPoint};
use crate::theta::{fundamental_thetas, syzygy_tables, FundamentalThetas, SyzygyTables};

/// Compiled appendix polynomials used by the theta-polynomial route.
pub struct FormPolys {
    pub p8: MPoly,
    pub p12: MPoly,
    pub q20: MPoly,
    pub q24: MPoly,
    h: [Horner; 4],
}

static FORM_POLYS: OnceLock<std::result::Result<FormPolys, Error>> = OnceLock::new();

pub fn form_polys() -> Result<&'static FormPolys> {
    FORM_POLYS
        .get_or_init(|| {
            let d = data()?;
            let ctx = Context::parse("a b c d")?;
            let p8 = d.poly("P8", &ctx)?;
            let p12 = d.poly("P12", &ctx)?;
            let q20 = d.poly("Q20", &ctx)?;
            let q24 = d.poly("Q24", &ctx)?;
            let h = [
                Horner::compile(&p8),
                Horner::compile(&p12),
                Horner::compile(&q20),
                Horner::compile(&q24),
            ];
            Ok(FormPolys { p8, p12, q20, q24, h })
        })
        .as_ref()
        .map_err(|e| e.clone())
}

/// The arguments (a, b, c, d) of the appendix polynomials: `2^{-3/2}·θ_{m_i}(κ/2)`.
/// With this normalization E4 = 2⁴P8, E6 = 2⁶P12, C10 = −2²Q20 and C12 = 2⁴3⁻¹Q24.
pub fn kummer_abcd(kappa: &SiegelPoint, eps: f64) -> Result<[Complex; 4]> {
    let half = kappa.scale(0.5)?;
    let t = fundamental_thetas(&half, eps)?;
    let s = 2f64.powf(-1.5);
    Ok([t.a * s, t.b * s, t.c * s, t.d * s])
}

/// Which route produced the headline values of a [`FormsVector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormsRoute {
    ThetaPolynomial,
    DirectFormula,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteDiagnostics {
    /// a, b, c, d fed to the appendix polynomials.
    pub abcd: [Complex; 4],
    pub c10_direct: Complex,
    pub c12_direct: Complex,
    pub c10_rel_err: f64,
    pub c12_rel_err: f64,
    /// |C5² + C10| / max(|C5²|, |C10|).
    pub c5_relation_err: f64,
    pub theta_radius: usize,
}

/// E4, E6, C5, C10, C12 at one period point.
#[derive(Clone, Debug, Serialize)]
pub struct FormsVector {
    #[serde(rename = "E4")]
    pub e4: Complex,
    #[serde(rename = "E6")]
    pub e6: Complex,
    #[serde(rename = "C5")]
    pub c5: Complex,
    #[serde(rename = "C10")]
    pub c10: Complex,
    #[serde(rename = "C12")]
    pub c12: Complex,
    pub weights: [u32; 5],
    pub route: FormsRoute,
    pub route_diagnostics: RouteDiagnostics,
}

pub const FORM_WEIGHTS: [u32; 5] = [4, 6, 5, 10, 12];

/// Values of the direct product and Göpel-sum formulas.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirectCusp {
    pub c5: Complex,
    pub c10: Complex,
    pub c12: Complex,
}

/// C5 = 2⁻⁷∏θ_m, C10 = −2⁻¹⁴∏θ_m², C12 = 2⁻¹⁷3⁻¹ Σ over Göpel complements of (∏θ)⁴.
pub fn direct_cusp_forms(t: &FundamentalThetas, tables: &SyzygyTables) -> DirectCusp {
    let prod: Complex = t.even.iter().map(|(_, z)| *z).product();
    let c5 = prod * 2f64.powi(-7);
    let c10 = -(prod * prod) * 2f64.powi(-14);
    let mut sum = Complex::new(0.0, 0.0);
    for q in &tables.gopel {
        let p: Complex = SyzygyTables::complement(q)
            .iter()
            .map(|m| t.get(m).expect("even characteristic"))
            .product();
        sum += p.powu(4);
    }
    DirectCusp {
        c5,
        c10,
        c12: sum * (2f64.powi(-17) / 3.0),
    }
}

fn rel_err(x: Complex, y: Complex) -> f64 {
    let m = x.norm().max(y.norm());
    if m == 0.0 {
        0.0
    } else {
        (x - y).norm() / m
    }
}

/// Forms by the theta-polynomial route, with the direct route as diagnostics.
pub fn evaluate_forms(kappa: &SiegelPoint, eps: f64) -> Result<FormsVector> {
    let polys = form_polys()?;
    let abcd = kummer_abcd(kappa, eps)?;
    let th = fundamental_thetas(kappa, eps)?;
    let direct = direct_cusp_forms(&th, &syzygy_tables());
    let e4 = polys.h[0].eval(&abcd) * 16.0;
    let e6 = polys.h[1].eval(&abcd) * 64.0;
    let c10 = polys.h[2].eval(&abcd) * -4.0;
    let c12 = polys.h[3].eval(&abcd) * (16.0 / 3.0);
    let c5 = direct.c5;
    Ok(FormsVector {
        e4,
        e6,
        c5,
        c10,
        c12,
        weights: FORM_WEIGHTS,
        route: FormsRoute::ThetaPolynomial,
        route_diagnostics: RouteDiagnostics {
            abcd,
            c10_direct: direct.c10,
            c12_direct: direct.c12,
            c10_rel_err: rel_err(c10, direct.c10),
            c12_rel_err: rel_err(c12, direct.c12),
            c5_relation_err: rel_err(c5 * c5, -c10),
            theta_radius: th.radius,
        },
    })
}

pub const CUSP_ROUTE_TOL: f64 = 1e-8;
pub const C5_RELATION_TOL: f64 = 1e-9;

/// Outcome of comparing the two routes to C10 and C12.
#[derive(Clone, Debug, Serialize)]
pub struct CuspReport {
    pub c10_theta_polynomial: Complex,
    pub c10_product: Complex,
    pub c12_theta_polynomial: Complex,
    pub c12_gopel: Complex,
    pub c5: Complex,
    pub c10_rel_err: f64,
    pub c12_rel_err: f64,
    pub c5_relation_err: f64,
    /// Both C10 values are at rounding level relative to the size of the Q20 terms.
    pub c10_on_zero_locus: bool,
    pub pass: bool,
}

pub fn cusp_cross_check(kappa: &SiegelPoint, eps: f64) -> Result<CuspReport> {
    let f = evaluate_forms(kappa, eps)?;
    let d = &f.route_diagnostics;
    let polys = form_polys()?;
    let scale = 4.0 * polys.q20.eval_abs_terms(&d.abcd);
    let zero_level = 1e-11 * scale;
    let on_zero = f.c10.norm() <= zero_level && d.c10_direct.norm() <= zero_level;
    let c10_ok = d.c10_rel_err < CUSP_ROUTE_TOL || on_zero;
    let c5_ok = d.c5_relation_err < C5_RELATION_TOL || on_zero;
    Ok(CuspReport {
        c10_theta_polynomial: f.c10,
        c10_product: d.c10_direct,
        c12_theta_polynomial: f.c12,
        c12_gopel: d.c12_direct,
        c5: f.c5,
        c10_rel_err: d.c10_rel_err,
        c12_rel_err: d.c12_rel_err,
        c5_relation_err: d.c5_relation_err,
        c10_on_zero_locus: on_zero,
        pass: c10_ok && c5_ok && d.c12_rel_err < CUSP_ROUTE_TOL,
    })
}

/// Integral symplectic 4×4 matrix `[[A, B], [C, D]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sp4Matrix(pub [[i64; 4]; 4]);

/// Standard symplectic form.
pub const J4: [[i64; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];

fn mul4(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut r = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

fn transpose4(a: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut r = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[j][i];
        }
    }
    r
}

impl Sp4Matrix {
    pub fn new(m: [[i64; 4]; 4]) -> Result<Self> {
        if mul4(&mul4(&transpose4(&m), &J4), &m) != J4 {
            return Err(Error::Domain("matrix is not symplectic".into()));
        }
        Ok(Sp4Matrix(m))
    }

    pub fn identity() -> Self {
        let mut m = [[0i64; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Sp4Matrix(m)
    }

    pub fn neg_identity() -> Self {
        Sp4Matrix(Self::identity().0.map(|r| r.map(|x| -x)))
    }

    /// `[[0, −I], [I, 0]]`, acting as κ ↦ −κ⁻¹.
    pub fn involution() -> Self {
        Sp4Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    }

    /// `[[I, S], [0, I]]` for symmetric integral S = [[s11, s12], [s12, s22]].
    pub fn translation(s11: i64, s12: i64, s22: i64) -> Self {
        Sp4Matrix([[1, 0, s11, s12], [0, 1, s12, s22], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    /// `[[U, 0], [0, U^{-T}]]` for U ∈ GL2(ℤ).
    pub fn rotation(u: [[i64; 2]; 2]) -> Result<Self> {
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        if det.abs() != 1 {
            return Err(Error::Domain("rotation block must be unimodular".into()));
        }
        // U^{-T} = (1/det)·[[u11, −u10], [−u01, u00]]
        let w = [[u[1][1] * det, -u[1][0] * det], [-u[0][1] * det, u[0][0] * det]];
        Self::new([
            [u[0][0], u[0][1], 0, 0],
            [u[1][0], u[1][1], 0, 0],
            [0, 0, w[0][0], w[0][1]],
            [0, 0, w[1][0], w[1][1]],
        ])
    }

    pub fn mul(&self, o: &Self) -> Self {
        Sp4Matrix(mul4(&self.0, &o.0))
    }

    /// Inverse `−J gᵀ J`.
    pub fn inverse(&self) -> Self {
        let t = mul4(&mul4(&J4, &transpose4(&self.0)), &J4);
        Sp4Matrix(t.map(|r| r.map(|x| -x)))
    }

    fn block(&self, r: usize, c: usize) -> Mat2 {
        let m = &self.0;
        let f = |i: usize, j: usize| Complex::new(m[r + i][c + j] as f64, 0.0);
        [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.0.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }
}

fn add2(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

/// (Aκ + B)(Cκ + D)⁻¹, re-symmetrized.
pub fn sp4_act(g: &Sp4Matrix, kappa: &SiegelPoint) -> Result<SiegelPoint> {
    let k = kappa.matrix();
    let num = add2(&mul2(&g.block(0, 0), &k), &g.block(0, 2));
    let den = add2(&mul2(&g.block(2, 0), &k), &g.block(2, 2));
    let det = det2(&den);
    let scale = den.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-13 * scale * scale {
        return Err(Error::Singular(format!("det(C kappa + D) = {det} is numerically zero")));
    }
    let inv = [[den[1][1] / det, -den[0][1] / det], [-den[1][0] / det, den[0][0] / det]];
    SiegelPoint::from_matrix(&mul2(&num, &inv))
}

/// Automorphy factor det(Cκ + D).
pub fn automorphy_det(g: &Sp4Matrix, kappa: &SiegelPoint) -> Complex {
    let den = add2(&mul2(&g.block(2, 0), &kappa.matrix()), &g.block(2, 2));
    det2(&den)
}

/// Gram matrix of the lattice in the basis {p1, p2, q1, q2, r}.
pub const GRAM: [[i64; 5]; 5] = [
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 0, 0, -2],
];

/// Period vector ω(τ, u, z) = (τ, 1, u, z² − τu, z).
pub fn period_vector(k: &SiegelPoint) -> [Complex; 5] {
    [k.tau, Complex::new(1.0, 0.0), k.u, k.z * k.z - k.tau * k.u, k.z]
}

/// Integral isometry of the lattice, `MᵀGM = G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryMatrix(pub [[i64; 5]; 5]);

impl IsometryMatrix {
    pub fn identity() -> Self {
        let mut m = [[0i64; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        IsometryMatrix(m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = [[0i64; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                r[i][j] = (0..5).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        IsometryMatrix(r)
    }

    pub fn neg(&self) -> Self {
        IsometryMatrix(self.0.map(|r| r.map(|x| -x)))
    }

    /// Exact check of `MᵀGM = G` in arbitrary precision.
    pub fn preserves_gram(&self) -> bool {
        let m = &self.0;
        for i in 0..5 {
            for j in 0..5 {
                let mut s = BigInt::zero();
                for k in 0..5 {
                    for l in 0..5 {
                        if GRAM[k][l] != 0 {
                            s += BigInt::from(m[k][i]) * BigInt::from(GRAM[k][l]) * BigInt::from(m[l][j]);
                        }
                    }
                }
                if s != BigInt::from(GRAM[i][j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by cofactor expansion.
    pub fn det(&self) -> BigInt {
        fn rec(m: &[[i64; 5]; 5], rows: &[usize], cols: u8) -> BigInt {
            let r = rows[0];
            if rows.len() == 1 {
                let c = (0..5).find(|c| cols & (1 << c) == 0).expect("free column");
                return BigInt::from(m[r][c]);
            }
            let mut acc = BigInt::zero();
            let mut sign = BigInt::one();
            for c in 0..5 {
                if cols & (1 << c) != 0 {
                    continue;
                }
                if m[r][c] != 0 {
                    acc += &sign * BigInt::from(m[r][c]) * rec(m, &rows[1..], cols | (1 << c));
                }
                sign = -sign;
            }
            acc
        }
        rec(&self.0, &[0, 1, 2, 3, 4], 0)
    }

    pub fn apply(&self, v: &[Complex; 5]) -> [Complex; 5] {
        let mut r = [Complex::new(0.0, 0.0); 5];
        for (i, ri) in r.iter_mut().enumerate() {
            *ri = (0..5).map(|k| v[k] * self.0[i][k] as f64).sum();
        }
        r
    }
}

/// Fixed sample points for the equivariance fit.
fn fit_points() -> Vec<SiegelPoint> {
    (0..6)
        .map(|s| {
            let s = s as f64;
            SiegelPoint::new(
                Complex::new(0.11 * s - 0.3, 1.0 + 0.13 * s),
                Complex::new(0.07 * s - 0.2, 0.05 * s - 0.1),
                Complex::new(0.2 - 0.09 * s, 1.2 + 0.07 * s),
            )
            .expect("sample point in the half-space")
        })
        .collect()
}

/// Residual of `M·ω(κ) ∥ ω(gκ)` at κ, relative to |M·ω(κ)|.
pub fn equivariance_residual(m: &IsometryMatrix, g: &Sp4Matrix, kappa: &SiegelPoint) -> Result<f64> {
    let lhs = m.apply(&period_vector(kappa));
    let rhs = period_vector(&sp4_act(g, kappa)?);
    let s = lhs[1];
    let norm: f64 = lhs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let err: f64 = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - s * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(err / norm)
}

/// Lattice isometry induced by g, fitted from the requirement that M·ω(κ) is
/// proportional to ω(gκ). Normalized to determinant +1 since ±M induce the
/// same map of the period domain.
pub fn sp4_to_isometry(g: &Sp4Matrix) -> Result<IsometryMatrix> {
    Sp4Matrix::new(g.0)?;
    let pts = fit_points();
    let mut rows: Vec<[f64; 25]> = Vec::new();
    for k in &pts {
        let w = period_vector(k);
        let w2 = period_vector(&sp4_act(g, k)?);
        for i in [0usize, 2, 3, 4] {
            let mut re = [0.0; 25];
            let mut im = [0.0; 25];
            for l in 0..5 {
                re[i * 5 + l] += w[l].re;
                im[i * 5 + l] += w[l].im;
                let t = -w2[i] * w[l];
                re[5 + l] += t.re;
                im[5 + l] += t.im;
            }
            rows.push(re);
            rows.push(im);
        }
    }
    let a = DMatrix::from_fn(rows.len(), 25, |r, c| rows[r][c]);
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Derivation("singular value decomposition failed".into()))?;
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&x, &y| sv[x].total_cmp(&sv[y]));
    let (s0, s1) = (sv[order[0]], sv[order[1]]);
    if !(s0 <= 1e-8 * sv.max() && s1 > 1e-6 * sv.max()) {
        return Err(Error::Derivation(format!(
            "equivariance system has no isolated null vector (singular values {s0:e}, {s1:e})"
        )));
    }
    let nv: Vec<f64> = (0..25).map(|c| v_t[(order[0], c)]).collect();
    let m0 = DMatrix::from_fn(5, 5, |i, j| nv[i * 5 + j]);
    let g5 = DMatrix::from_fn(5, 5, |i, j| GRAM[i][j] as f64);
    let gm = m0.transpose() * &g5 * &m0;
    let ratio = gm.dot(&g5) / g5.dot(&g5);
    if !(ratio > 0.0) {
        return Err(Error::Derivation("fitted map does not preserve the form up to a positive scale".into()));
    }
    let mut mf = m0 / ratio.sqrt();
    if mf.determinant() < 0.0 {
        mf = -mf;
    }
    let mut out = [[0i64; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            let x = mf[(i, j)];
            let r = x.round();
            if (x - r).abs() > 1e-6 * (1.0 + r.abs()) {
                return Err(Error::Derivation(format!("entry ({i},{j}) = {x} is not integral")));
            }
            out[i][j] = r as i64;
        }
    }
    let m = IsometryMatrix(out);
    if !m.preserves_gram() || m.det() != BigInt::one() {
        return Err(Error::Derivation("rounded matrix is not an isometry of determinant one".into()));
    }
    Ok(m)
}

/// The 5×5 matrix printed alongside the group isomorphism, transcribed for
/// comparison only: its first and third rows coincide.
pub const PRINTED_ISOMETRY_ROWS_EQUAL: (usize, usize) = (0, 2);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, I};

    #[test]
    fn generators_are_symplectic() {
        assert!(Sp4Matrix::new(Sp4Matrix::involution().0).is_ok());
        assert!(Sp4Matrix::new(Sp4Matrix::translation(1, 2, 3).0).is_ok());
        assert!(Sp4Matrix::rotation([[1, 1], [0, 1]]).is_ok());
        assert!(Sp4Matrix::new([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).is_err());
        let g = Sp4Matrix::involution().mul(&Sp4Matrix::translation(1, 0, 0));
        assert_eq!(g.mul(&g.inverse()), Sp4Matrix::identity());
    }

    #[test]
    fn action_examples() {
        let k = SiegelPoint::new(c(0.1, 1.1), c(0.2, 0.1), c(-0.3, 0.9)).unwrap();
        let t = sp4_act(&Sp4Matrix::translation(1, -1, 2), &k).unwrap();
        assert!((t.tau - k.tau - 1.0).norm() < 1e-14);
        assert!((t.z - k.z + 1.0).norm() < 1e-14);
        assert!((t.u - k.u - 2.0).norm() < 1e-14);
        let j = sp4_act(&Sp4Matrix::involution(), &k).unwrap();
        let d = k.det();
        assert!((j.tau + k.u / d).norm() < 1e-14);
        assert!((j.z - k.z / d).norm() < 1e-14);
        assert!((j.u + k.tau / d).norm() < 1e-14);
        let id = sp4_act(&Sp4Matrix::identity(), &k).unwrap();
        assert_eq!(id, k);
    }

    #[test]
    fn isometry_of_trivial_elements() {
        assert_eq!(sp4_to_isometry(&Sp4Matrix::identity()).unwrap(), IsometryMatrix::identity());
        assert_eq!(sp4_to_isometry(&Sp4Matrix::neg_identity()).unwrap(), IsometryMatrix::identity());
    }

    #[test]
    fn translation_isometry_is_integral_and_equivariant() {
        let g = Sp4Matrix::translation(1, 0, 0);
        let m = sp4_to_isometry(&g).unwrap();
        assert!(m.preserves_gram());
        let k = SiegelPoint::diagonal(c(0.2, 1.3), I).unwrap();
        assert!(equivariance_residual(&m, &g, &k).unwrap() < 1e-12);
    }

    #[test]
    fn diagonal_point_has_real_forms() {
        let k = SiegelPoint::diagonal(I, I).unwrap();
        let f = evaluate_forms(&k, 1e-12).unwrap();
        for z in [f.e4, f.e6, f.c10, f.c12] {
            assert!(z.im.abs() <= 1e-12 * (1.0 + z.re.abs()));
        }
        assert!(f.c10.norm() < 1e-11);
    }
}
