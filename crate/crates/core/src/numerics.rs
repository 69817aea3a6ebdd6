//! Complex helpers, points of the Siegel half-space, weighted projective points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

pub const I: Complex = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// 2×2 complex matrix as rows.
pub type Mat2 = [[Complex; 2]; 2];

pub fn det2(m: &Mat2) -> Complex {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[Complex::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// Point κ = [[τ, z], [z, u]] with positive definite imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub tau: Complex,
    pub z: Complex,
    pub u: Complex,
}

/// How far a point is from the boundary of the half-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiegelMargins {
    pub im_tau: f64,
    pub im_det: f64,
    /// Least eigenvalue of Im κ, the quantity that drives theta truncation.
    pub lambda_min: f64,
}

/// Accepts (τ, z, u) iff Im τ > 0 and Im τ·Im u > (Im z)².
pub fn validate_siegel_point(tau: Complex, z: Complex, u: Complex) -> Result<SiegelPoint> {
    if !(is_finite(tau) && is_finite(z) && is_finite(u)) {
        return Err(Error::Domain("non-finite entry in period matrix".into()));
    }
    let p = SiegelPoint { tau, z, u };
    let m = p.margins();
    if m.im_tau <= 0.0 {
        return Err(Error::Domain(format!("Im(tau) = {} is not positive", m.im_tau)));
    }
    if m.im_det <= 0.0 {
        return Err(Error::Domain(format!(
            "Im(tau)*Im(u) - Im(z)^2 = {} is not positive",
            m.im_det
        )));
    }
    Ok(p)
}

impl SiegelPoint {
    pub fn new(tau: Complex, z: Complex, u: Complex) -> Result<Self> {
        validate_siegel_point(tau, z, u)
    }

    pub fn diagonal(tau: Complex, u: Complex) -> Result<Self> {
        validate_siegel_point(tau, Complex::new(0.0, 0.0), u)
    }

    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        validate_siegel_point(m[0][0], (m[0][1] + m[1][0]) * 0.5, m[1][1])
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.tau, self.z], [self.z, self.u]]
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        validate_siegel_point(self.tau * s, self.z * s, self.u * s)
    }

    pub fn det(&self) -> Complex {
        self.tau * self.u - self.z * self.z
    }

    pub fn margins(&self) -> SiegelMargins {
        let (a, b, d) = (self.tau.im, self.z.im, self.u.im);
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b * b).sqrt();
        SiegelMargins {
            im_tau: a,
            im_det: a * d - b * b,
            lambda_min: 0.5 * (tr - disc),
        }
    }
}

/// Absolute and relative tolerance pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        if !(abs_eps > 0.0 && rel_eps > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(Tolerance { abs_eps, rel_eps })
    }

    /// Same value for both components.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    pub fn close(&self, a: Complex, b: Complex) -> bool {
        (a - b).norm() <= self.abs_eps + self.rel_eps * a.norm().max(b.norm())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-9,
            rel_eps: 1e-9,
        }
    }
}

/// Point of a weighted projective space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub weights: Vec<u32>,
    pub coords: Vec<Complex>,
}

impl WeightedPoint {
    pub fn new(coords: Vec<Complex>, weights: Vec<u32>) -> Result<Self> {
        if coords.len() != weights.len() || coords.is_empty() {
            return Err(Error::Domain("coordinates and weights must have equal nonzero length".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Domain("weights must be positive".into()));
        }
        if !coords.iter().all(|z| is_finite(*z)) {
            return Err(Error::Domain("non-finite weighted coordinate".into()));
        }
        if coords.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::Domain("all weighted coordinates vanish".into()));
        }
        Ok(WeightedPoint { weights, coords })
    }

    /// Coordinates `t^{w_i}·p_i`.
    pub fn scaled(&self, t: Complex) -> WeightedPoint {
        WeightedPoint {
            weights: self.weights.clone(),
            coords: self
                .coords
                .iter()
                .zip(&self.weights)
                .map(|(p, &w)| p * t.powu(w))
                .collect(),
        }
    }
}

/// Principal w-th root, argument in (−π/w, π/w].
pub fn principal_root(z: Complex, w: u32) -> Complex {
    if z.norm() == 0.0 {
        return z;
    }
    Complex::from_polar(z.norm().powf(1.0 / w as f64), z.arg() / w as f64)
}

/// Pivot used by [`wp_normalize`]: the index maximizing `|p_i|^(1/w_i)`, ties
/// (relative 1e-9) broken toward the larger weight, then the smaller index.
fn normalization_pivot(p: &WeightedPoint) -> usize {
    let size: Vec<f64> = p
        .coords
        .iter()
        .zip(&p.weights)
        .map(|(z, &w)| z.norm().powf(1.0 / w as f64))
        .collect();
    let mut best = 0;
    for i in 1..size.len() {
        let (s, b) = (size[i], size[best]);
        if s > b * (1.0 + 1e-9) {
            best = i;
        } else if s >= b * (1.0 - 1e-9) && p.weights[i] > p.weights[best] {
            best = i;
        }
    }
    best
}

/// Rescales so that the pivot coordinate becomes 1 using the principal root.
/// Also returns the scale `t` with `result = t^w · p`.
pub fn wp_normalize_with_scale(p: &WeightedPoint) -> (WeightedPoint, Complex) {
    let j = normalization_pivot(p);
    let t = principal_root(Complex::new(1.0, 0.0) / p.coords[j], p.weights[j]);
    let mut out = p.scaled(t);
    out.coords[j] = Complex::new(1.0, 0.0);
    (out, t)
}

/// Deterministic representative of the weighted class: every coordinate ends
/// up with modulus at most 1 and the pivot coordinate equals 1.
pub fn wp_normalize(p: &WeightedPoint) -> WeightedPoint {
    wp_normalize_with_scale(p).0
}

/// Scale `t` with `q = t^w·p` within tolerance, if one exists.
pub fn wp_equal_scale(p: &WeightedPoint, q: &WeightedPoint, tol: &Tolerance) -> Result<Option<Complex>> {
    if p.weights != q.weights {
        return Err(Error::Domain("weighted points have different weights".into()));
    }
    for x in [p, q] {
        if x.coords.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::Domain("all weighted coordinates vanish".into()));
        }
    }
    let (pn, sp) = wp_normalize_with_scale(p);
    let (qn, sq) = wp_normalize_with_scale(q);
    let j = (0..pn.coords.len())
        .max_by(|&a, &b| pn.coords[a].norm().total_cmp(&pn.coords[b].norm()).then(b.cmp(&a)))
        .expect("nonempty");
    let ratio = qn.coords[j] / pn.coords[j];
    if ratio.norm() <= tol.abs_eps {
        return Ok(None);
    }
    let w = pn.weights[j];
    let r0 = principal_root(ratio, w);
    for k in 0..w {
        let t = r0 * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / w as f64);
        let ok = pn
            .coords
            .iter()
            .zip(&qn.coords)
            .zip(&pn.weights)
            .all(|((a, b), &wi)| tol.close(a * t.powu(wi), *b));
        if ok {
            return Ok(Some(t * sp / sq));
        }
    }
    Ok(None)
}

/// True iff `q_i = t^{w_i}·p_i` for some `t ≠ 0`, compared on normalized representatives.
pub fn wp_equal(p: &WeightedPoint, q: &WeightedPoint, tol: &Tolerance) -> Result<bool> {
    Ok(wp_equal_scale(p, q, tol)?.is_some())
}

/// Smallest max-coordinate distance between normalized representatives over
/// the admissible scalings; `None` if the pivot ratio vanishes.
pub fn wp_residual(p: &WeightedPoint, q: &WeightedPoint) -> Result<Option<f64>> {
    if p.weights != q.weights {
        return Err(Error::Domain("weighted points have different weights".into()));
    }
    let pn = wp_normalize(p);
    let qn = wp_normalize(q);
    let j = (0..pn.coords.len())
        .max_by(|&a, &b| pn.coords[a].norm().total_cmp(&pn.coords[b].norm()).then(b.cmp(&a)))
        .expect("nonempty");
    let ratio = qn.coords[j] / pn.coords[j];
    if !(ratio.norm() > 0.0) || !is_finite(ratio) {
        return Ok(None);
    }
    let w = pn.weights[j];
    let r0 = principal_root(ratio, w);
    let best = (0..w)
        .map(|k| {
            let t = r0 * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / w as f64);
            pn.coords
                .iter()
                .zip(&qn.coords)
                .zip(&pn.weights)
                .map(|((a, b), &wi)| (a * t.powu(wi) - b).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_of_rescaled_point_is_tiny() {
        let p = wp(&[1.5, -2.0, 0.25, 3.0], &[2, 4, 6, 10]);
        let q = p.scaled(c(0.3, -1.1));
        assert!(wp_residual(&p, &q).unwrap().unwrap() < 1e-12);
        let r = wp(&[1.5, -2.0, 0.5, 3.0], &[2, 4, 6, 10]);
        assert!(wp_residual(&p, &r).unwrap().unwrap() > 1e-3);
    }

    fn wp(v: &[f64], w: &[u32]) -> WeightedPoint {
        WeightedPoint::new(v.iter().map(|&x| c(x, 0.0)).collect(), w.to_vec()).unwrap()
    }

    #[test]
    fn siegel_validation() {
        assert!(validate_siegel_point(I, c(0.0, 0.0), I).is_ok());
        assert!(matches!(validate_siegel_point(I, I, I), Err(Error::Domain(_))));
        assert!(validate_siegel_point(c(1.0, 1.0), c(0.1, 0.2), c(0.0, 2.0)).is_ok());
    }

    #[test]
    fn equality_examples() {
        let tol = Tolerance::default();
        let w = [2, 3, 5, 6];
        let t = wp_equal_scale(&wp(&[1.0, 1.0, 1.0, 1.0], &w), &wp(&[4.0, 8.0, 32.0, 64.0], &w), &tol)
            .unwrap()
            .unwrap();
        assert!((t - c(2.0, 0.0)).norm() < 1e-12);
        assert!(!wp_equal(&wp(&[1.0, 0.0, 0.0, 0.0], &w), &wp(&[1.0, 0.0, 0.0, 1.0], &w), &tol).unwrap());
        let t = wp_equal_scale(&wp(&[1.0, 1.0], &[2, 3]), &wp(&[1.0, -1.0], &[2, 3]), &tol)
            .unwrap()
            .unwrap();
        assert!((t + 1.0).norm() < 1e-12);
    }

    #[test]
    fn normalization_examples() {
        let w = [2, 3, 5, 6];
        let n = wp_normalize(&wp(&[4.0, 8.0, 32.0, 64.0], &w));
        for z in &n.coords {
            assert!((z - c(1.0, 0.0)).norm() < 1e-12);
        }
        let n = wp_normalize(&wp(&[0.0, 0.0, 0.0, 5.0], &w));
        assert_eq!(n.coords[3], c(1.0, 0.0));
        let p = WeightedPoint::new(vec![c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], w.to_vec()).unwrap();
        let (n, t) = wp_normalize_with_scale(&p);
        assert!((n.coords[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((t * t * p.coords[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(t.arg() > -std::f64::consts::FRAC_PI_2 && t.arg() <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn degenerate_points_rejected() {
        assert!(WeightedPoint::new(vec![c(0.0, 0.0); 4], vec![2, 3, 5, 6]).is_err());
        assert!(WeightedPoint::new(vec![c(1.0, 0.0)], vec![2, 3]).is_err());
    }

    #[test]
    fn lambda_min_matches_eigenvalues() {
        let p = SiegelPoint::new(c(0.0, 2.0), c(0.0, 0.5), c(0.0, 1.0)).unwrap();
        let m = nalgebra::Matrix2::<f64>::new(2.0, 0.5, 0.5, 1.0);
        let ev = m.symmetric_eigenvalues();
        assert!((p.margins().lambda_min - ev.min()).abs() < 1e-14);
    }
}
