//! Seeded numeric sweeps over the Siegel half-space.
//!
//! Sampling: `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`, uniform
//! draws in the order re τ, im τ, re u, im u, re z, im z with
//! Im τ, Im u ∈ [0.8, 1.5], Im z ∈ [−0.3, 0.3], real parts ∈ [−0.5, 0.5];
//! a draw is discarded and repeated until Im κ is positive definite.

use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, QPoly};
use crate::forms::{
    automorphy_det, cusp_cross_check, equivariance_residual, evaluate_forms, kummer_abcd, sp4_act,
    sp4_to_isometry, FormsVector, IsometryMatrix, Sp4Matrix, PRINTED_ISOMETRY_ROWS_EQUAL,
};
use crate::k3family::{
    alternate_fibration, ic_from_forms, ic_from_params, inverse_period, specialize_univariate,
    split_j_pair, two_isogeny_quotient, K3Params,
};
use crate::kummer::cached_chain;
use crate::numerics::{c, wp_residual, Complex, SiegelPoint, I};
use crate::theta::genus1_suite;

pub const SAMPLER: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.9), uniform f64 draws";

pub const C10_C12_ROUTE_TOL: f64 = 1e-8;
pub const C5_RELATION_TOL: f64 = 1e-9;
pub const MODULARITY_TOL: f64 = 1e-6;
pub const TRANSLATION_TOL: f64 = 1e-9;
pub const H1_TOL: f64 = 1e-8;
pub const H4_TOL: f64 = 1e-6;
pub const WP_TOL: f64 = 1e-8;
pub const SPLIT_REF_TOL: f64 = 1e-6;
pub const SPLIT_SYM_TOL: f64 = 1e-8;
pub const EQUIVARIANCE_TOL: f64 = 1e-9;
pub const BRIDGE_TOL: f64 = 1e-7;

/// Deterministic source of period points and symplectic words.
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// Generators for random words, by name.
pub const GENERATOR_NAMES: [&str; 10] = ["J", "T11", "T11'", "T12", "T12'", "T22", "T22'", "R", "R'", "S"];

pub fn generator(name: &str) -> Result<Sp4Matrix> {
    Ok(match name {
        "J" => Sp4Matrix::involution(),
        "T11" => Sp4Matrix::translation(1, 0, 0),
        "T11'" => Sp4Matrix::translation(-1, 0, 0),
        "T12" => Sp4Matrix::translation(0, 1, 0),
        "T12'" => Sp4Matrix::translation(0, -1, 0),
        "T22" => Sp4Matrix::translation(0, 0, 1),
        "T22'" => Sp4Matrix::translation(0, 0, -1),
        "R" => Sp4Matrix::rotation([[1, 1], [0, 1]])?,
        "R'" => Sp4Matrix::rotation([[1, -1], [0, 1]])?,
        "S" => Sp4Matrix::rotation([[0, 1], [1, 0]])?,
        _ => return Err(Error::Input(format!("unknown generator {name}"))),
    })
}

/// A word in the generators with its product.
#[derive(Clone, Debug, Serialize)]
pub struct Sp4Word {
    pub letters: Vec<&'static str>,
    pub matrix: Sp4Matrix,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn kappa(&mut self) -> SiegelPoint {
        loop {
            let tau = c(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5));
            let u = c(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5));
            let z = c(self.uniform(-0.5, 0.5), self.uniform(-0.3, 0.3));
            if let Ok(p) = SiegelPoint::new(tau, z, u) {
                return p;
            }
        }
    }

    /// z = 0: a point of H1.
    pub fn diagonal(&mut self) -> SiegelPoint {
        let tau = c(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5));
        let u = c(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5));
        SiegelPoint::diagonal(tau, u).expect("diagonal point in the half-space")
    }

    /// u = τ: a point of H4.
    pub fn tau_equals_u(&mut self) -> SiegelPoint {
        loop {
            let tau = c(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5));
            let z = c(self.uniform(-0.5, 0.5), self.uniform(-0.3, 0.3));
            if let Ok(p) = SiegelPoint::new(tau, z, tau) {
                return p;
            }
        }
    }

    pub fn kappas(&mut self, n: usize) -> Vec<SiegelPoint> {
        (0..n).map(|_| self.kappa()).collect()
    }

    /// Word of length 1..=6; the length is drawn first, then the letters.
    pub fn word(&mut self) -> Sp4Word {
        let len = self.rng.random_range(1..=6usize);
        let letters: Vec<&'static str> = (0..len)
            .map(|_| GENERATOR_NAMES[self.rng.random_range(0..GENERATOR_NAMES.len())])
            .collect();
        let matrix = letters
            .iter()
            .fold(Sp4Matrix::identity(), |m, l| m.mul(&generator(l).expect("known generator")));
        Sp4Word { letters, matrix }
    }
}

/// One sweep: the worst error over its samples against a pinned tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct SweepCheck {
    pub name: String,
    pub anchor: String,
    pub samples: usize,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u64,
}

impl SweepCheck {
    fn new(name: &str, anchor: &str, samples: usize, max_err: f64, tol: f64) -> Self {
        SweepCheck {
            name: name.into(),
            anchor: anchor.into(),
            samples,
            max_err,
            tol,
            pass: max_err.is_finite() && max_err <= tol,
            detail: None,
            millis: 0,
        }
    }

    fn failed(name: &str, anchor: &str, samples: usize, tol: f64, e: &Error) -> Self {
        let mut s = Self::new(name, anchor, samples, f64::INFINITY, tol);
        s.detail = Some(format!("error: {e}"));
        s
    }

    fn with_detail(mut self, d: String) -> Self {
        self.detail = Some(d);
        self
    }
}

pub fn rel_err(x: Complex, y: Complex) -> f64 {
    let m = x.norm().max(y.norm());
    if m == 0.0 {
        0.0
    } else {
        (x - y).norm() / m
    }
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// C10 and C12 by the polynomial and the direct theta route; C5² = −C10.
pub fn route_agreement(points: &[SiegelPoint], eps: f64) -> Vec<SweepCheck> {
    let anchor = "forms.cusp_routes";
    let reports: Result<Vec<_>> = points.iter().map(|k| cusp_cross_check(k, eps)).collect();
    match reports {
        Ok(r) => vec![
            SweepCheck::new(
                "numeric.cusp_routes",
                anchor,
                r.len(),
                max_of(r.iter().map(|x| x.c10_rel_err.max(x.c12_rel_err))),
                C10_C12_ROUTE_TOL,
            ),
            SweepCheck::new(
                "numeric.c5_relation",
                anchor,
                r.len(),
                max_of(r.iter().map(|x| x.c5_relation_err)),
                C5_RELATION_TOL,
            ),
        ],
        Err(e) => vec![
            SweepCheck::failed("numeric.cusp_routes", anchor, points.len(), C10_C12_ROUTE_TOL, &e),
            SweepCheck::failed("numeric.c5_relation", anchor, points.len(), C5_RELATION_TOL, &e),
        ],
    }
}

fn weighted_forms(f: &FormsVector) -> [(&'static str, Complex, u32); 4] {
    [("E4", f.e4, 4), ("E6", f.e6, 6), ("C10", f.c10, 10), ("C12", f.c12, 12)]
}

/// f(−κ⁻¹) = det(κ)ᵏ f(κ) per form, and invariance under the three unit translations.
pub fn modularity(points: &[SiegelPoint], eps: f64) -> Vec<SweepCheck> {
    let anchor = "forms.modularity";
    let run = || -> Result<([f64; 4], f64)> {
        let mut inv = [0.0f64; 4];
        let mut trans = 0.0f64;
        let j = Sp4Matrix::involution();
        let shifts = [
            Sp4Matrix::translation(1, 0, 0),
            Sp4Matrix::translation(0, 1, 0),
            Sp4Matrix::translation(0, 0, 1),
        ];
        for k in points {
            let f = evaluate_forms(k, eps)?;
            let gk = sp4_act(&j, k)?;
            let fg = evaluate_forms(&gk, eps)?;
            let det = automorphy_det(&j, k);
            for (slot, ((_, x, w), (_, y, _))) in inv.iter_mut().zip(weighted_forms(&f).iter().zip(weighted_forms(&fg)))
            {
                *slot = slot.max(rel_err(y, det.powu(*w) * x));
            }
            for s in &shifts {
                let ft = evaluate_forms(&sp4_act(s, k)?, eps)?;
                for ((_, x, _), (_, y, _)) in weighted_forms(&f).iter().zip(weighted_forms(&ft)) {
                    trans = trans.max(rel_err(*x, y));
                }
            }
        }
        Ok((inv, trans))
    };
    let names = ["E4", "E6", "C10", "C12"];
    match run() {
        Ok((inv, trans)) => {
            let mut out: Vec<SweepCheck> = names
                .iter()
                .zip(inv)
                .map(|(n, e)| SweepCheck::new(&format!("numeric.modularity.{n}"), anchor, points.len(), e, MODULARITY_TOL))
                .collect();
            out.push(SweepCheck::new("numeric.translation", anchor, points.len(), trans, TRANSLATION_TOL));
            out
        }
        Err(e) => {
            let mut out: Vec<SweepCheck> = names
                .iter()
                .map(|n| SweepCheck::failed(&format!("numeric.modularity.{n}"), anchor, points.len(), MODULARITY_TOL, &e))
                .collect();
            out.push(SweepCheck::failed("numeric.translation", anchor, points.len(), TRANSLATION_TOL, &e));
            out
        }
    }
}

/// Normalized |γ| on z = 0 and normalized |D4| on τ = u.
pub fn humbert(diagonal: &[SiegelPoint], tau_eq_u: &[SiegelPoint], eps: f64) -> Vec<SweepCheck> {
    let h1 = diagonal
        .iter()
        .map(|k| {
            let ip = inverse_period(k, eps)?;
            Ok((K3Params::from_weighted(&ip.point)?.normalized_gamma(), ip.h1))
        })
        .collect::<Result<Vec<_>>>();
    let h4 = tau_eq_u
        .iter()
        .map(|k| Ok(inverse_period(k, eps)?.d4_normalized))
        .collect::<Result<Vec<f64>>>();
    let mut out = Vec::new();
    out.push(match h1 {
        Ok(v) => {
            let flagged = v.iter().filter(|(_, f)| *f).count();
            SweepCheck::new("numeric.humbert.h1", "humbert.h1", v.len(), max_of(v.iter().map(|x| x.0)), H1_TOL)
                .with_detail(format!("{flagged} of {} flagged as H1", v.len()))
        }
        Err(e) => SweepCheck::failed("numeric.humbert.h1", "humbert.h1", diagonal.len(), H1_TOL, &e),
    });
    out.push(match h4 {
        Ok(v) => SweepCheck::new("numeric.humbert.h4", "humbert.h4", v.len(), max_of(v.iter().copied()), H4_TOL),
        Err(e) => SweepCheck::failed("numeric.humbert.h4", "humbert.h4", tau_eq_u.len(), H4_TOL, &e),
    });
    out
}

/// Generic points are not flagged: the smallest normalized |γ| stays above the H1 threshold.
pub fn humbert_control(points: &[SiegelPoint], eps: f64) -> SweepCheck {
    let name = "numeric.humbert.generic";
    let v = points
        .iter()
        .map(|k| K3Params::from_weighted(&inverse_period(k, eps)?.point).map(|p| p.normalized_gamma()))
        .collect::<Result<Vec<f64>>>();
    match v {
        Ok(v) => {
            let least = v.iter().copied().fold(f64::INFINITY, f64::min);
            // the check passes when the reciprocal stays within 1/H1_TOL
            let mut s = SweepCheck::new(name, "humbert.h1", v.len(), 1.0 / least, 1.0 / H1_TOL);
            s.detail = Some(format!("least normalized |gamma| = {least:.3e}"));
            s
        }
        Err(e) => SweepCheck::failed(name, "humbert.h1", points.len(), 1.0 / H1_TOL, &e),
    }
}

/// ic_from_forms(κ) and ic_from_params(inverse_period(κ)) agree in WP(2,4,6,10).
pub fn ic_consistency(points: &[SiegelPoint], eps: f64, tol: f64) -> SweepCheck {
    let anchor = "correspondence.igusa_clebsch";
    let v = points
        .iter()
        .map(|k| {
            let a = ic_from_forms(k, eps)?.to_weighted()?;
            let p = K3Params::from_weighted(&inverse_period(k, eps)?.point)?;
            let b = ic_from_params(&p)?.to_weighted()?;
            Ok(wp_residual(&a, &b)?.unwrap_or(f64::INFINITY))
        })
        .collect::<Result<Vec<f64>>>();
    match v {
        Ok(v) => SweepCheck::new("numeric.ic_consistency", anchor, v.len(), max_of(v), tol),
        Err(e) => SweepCheck::failed("numeric.ic_consistency", anchor, points.len(), tol, &e),
    }
}

/// Split-case figures at one diagonal point.
#[derive(Clone, Debug, Serialize)]
pub struct SplitSample {
    pub kappa: SiegelPoint,
    pub j_pair: [Complex; 2],
    pub oracle: [Complex; 2],
    pub ref_err: f64,
    pub sym_err: f64,
}

/// j-pair from the parameters against the q-series j of each diagonal entry.
pub fn split_sample(k: &SiegelPoint, eps: f64) -> Result<SplitSample> {
    if k.z != Complex::new(0.0, 0.0) {
        return Err(Error::Domain("split sample needs z = 0".into()));
    }
    let p = K3Params::from_weighted(&inverse_period(k, eps)?.point)?;
    let s = split_j_pair(&p)?;
    let mut oracle = [genus1_suite(k.tau, eps)?.j, genus1_suite(k.u, eps)?.j];
    oracle.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let ref_err = rel_err(s.j[0], oracle[0]).max(rel_err(s.j[1], oracle[1]));
    let (j1, j2) = (oracle[0] / 1728.0, oracle[1] / 1728.0);
    let a3 = p.alpha * p.alpha * p.alpha;
    let sym_err = rel_err(j1 + j2, (a3 - p.beta * p.beta) / p.delta + 1.0).max(rel_err(j1 * j2, a3 / p.delta));
    Ok(SplitSample {
        kappa: *k,
        j_pair: s.j,
        oracle,
        ref_err,
        sym_err,
    })
}

/// diag(i, 2i) followed by the given diagonal points.
pub fn split_case(diagonal: &[SiegelPoint], eps: f64) -> Vec<SweepCheck> {
    let anchor = "correspondence.split";
    let head = SiegelPoint::diagonal(I, 2.0 * I).expect("diag(i, 2i)");
    let mut pts = vec![head];
    pts.extend_from_slice(diagonal);
    match pts.iter().map(|k| split_sample(k, eps)).collect::<Result<Vec<_>>>() {
        Ok(v) => {
            let j = v[0].j_pair;
            vec![
                SweepCheck::new("numeric.split.j_pair", anchor, v.len(), max_of(v.iter().map(|s| s.ref_err)), SPLIT_REF_TOL)
                    .with_detail(format!("diag(i, 2i): j = {{{:.6}, {:.6}}}", j[0].re, j[1].re)),
                SweepCheck::new(
                    "numeric.split.symmetric",
                    anchor,
                    v.len(),
                    max_of(v.iter().map(|s| s.sym_err)),
                    SPLIT_SYM_TOL,
                ),
            ]
        }
        Err(e) => vec![
            SweepCheck::failed("numeric.split.j_pair", anchor, pts.len(), SPLIT_REF_TOL, &e),
            SweepCheck::failed("numeric.split.symmetric", anchor, pts.len(), SPLIT_SYM_TOL, &e),
        ],
    }
}

/// Lattice isometries of random words: Gram preservation, multiplicativity up
/// to sign, and equivariance of the period vector.
pub fn isometry(words: &[Sp4Word], points: &[SiegelPoint]) -> Vec<SweepCheck> {
    let anchor = "forms.isometry";
    let mats = match words.iter().map(|w| sp4_to_isometry(&w.matrix)).collect::<Result<Vec<IsometryMatrix>>>() {
        Ok(m) => m,
        Err(e) => {
            return ["gram", "multiplicative", "equivariance"]
                .iter()
                .map(|n| SweepCheck::failed(&format!("numeric.isometry.{n}"), anchor, words.len(), 0.0, &e))
                .collect()
        }
    };
    let bad_gram = mats.iter().filter(|m| !m.preserves_gram() || m.det() != 1.into()).count();
    let n = words.len();
    let mut bad_mul = 0usize;
    let mut mul_err = None;
    for i in 0..n {
        let j = (i + 1) % n;
        match sp4_to_isometry(&words[i].matrix.mul(&words[j].matrix)) {
            Ok(m) => {
                let prod = mats[i].mul(&mats[j]);
                if m != prod && m != prod.neg() {
                    bad_mul += 1;
                }
            }
            Err(e) => {
                bad_mul += 1;
                mul_err.get_or_insert(e);
            }
        }
    }
    let mut equiv = 0.0f64;
    let mut equiv_err = None;
    for (w, m) in words.iter().zip(&mats) {
        for k in points {
            match equivariance_residual(m, &w.matrix, k) {
                Ok(r) => equiv = equiv.max(r),
                Err(e) => {
                    equiv = f64::INFINITY;
                    equiv_err.get_or_insert(e);
                }
            }
        }
    }
    let (r0, r1) = PRINTED_ISOMETRY_ROWS_EQUAL;
    let mut gram = SweepCheck::new("numeric.isometry.gram", anchor, n, bad_gram as f64, 0.0)
        .with_detail(format!("exact M^T G M = G and det M = 1; the printed 5x5 matrix repeats row {} as row {}", r0 + 1, r1 + 1));
    gram.pass = bad_gram == 0;
    let mut mul = SweepCheck::new("numeric.isometry.multiplicative", anchor, n, bad_mul as f64, 0.0);
    if let Some(e) = mul_err {
        mul.detail = Some(format!("error: {e}"));
    }
    let mut eq = SweepCheck::new("numeric.isometry.equivariance", anchor, n * points.len(), equiv, EQUIVARIANCE_TOL);
    if let Some(e) = equiv_err {
        eq.detail = Some(format!("error: {e}"));
    }
    vec![gram, mul, eq]
}

fn quotient_polys() -> Result<&'static (QPoly, QPoly)> {
    static Q: OnceLock<Result<(QPoly, QPoly)>> = OnceLock::new();
    Q.get_or_init(|| {
        let a = alternate_fibration()?;
        let y = two_isogeny_quotient(&a.two_torsion);
        Ok((y.p, y.q))
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn eta_coefficients(p: &MPoly, abcd: &[Complex; 4]) -> Result<Vec<Complex>> {
    let mut pt = abcd.to_vec();
    pt.push(Complex::new(0.0, 0.0));
    p.coefficients_in(4).iter().map(|q| q.eval_complex(&pt)).collect()
}

/// Worst per-coefficient relative error between the two sides, padding the shorter list with zeros.
fn coefficient_err(x: &[Complex], y: &[Complex]) -> f64 {
    let zero = Complex::new(0.0, 0.0);
    (0..x.len().max(y.len()))
        .map(|i| rel_err(*x.get(i).unwrap_or(&zero), *y.get(i).unwrap_or(&zero)))
        .fold(0.0, f64::max)
}

/// Relative error between the Kummer-side (hatM, hatN) at theta-derived
/// (a, b, c, d) and the two-isogeny quotient (P_Y, Q_Y) of the alternate
/// fibration at the inverse-period parameters.
pub fn bridge_sample(k: &SiegelPoint, eps: f64) -> Result<f64> {
    let (_, chain) = cached_chain()?;
    let (py, qy) = quotient_polys()?;
    let abcd = kummer_abcd(k, eps)?;
    let hm = eta_coefficients(&chain.hat_m, &abcd)?;
    let hn = eta_coefficients(&chain.hat_n, &abcd)?;
    let p = K3Params::from_weighted(&inverse_period(k, eps)?.point)?;
    let pm = specialize_univariate(py, &p)?;
    let qm = specialize_univariate(qy, &p)?;
    Ok(coefficient_err(&hm, &pm).max(coefficient_err(&hn, &qm)))
}

pub fn bridge(points: &[SiegelPoint], eps: f64) -> SweepCheck {
    let anchor = "kummer.parameter_match";
    match points.iter().map(|k| bridge_sample(k, eps)).collect::<Result<Vec<f64>>>() {
        Ok(v) => SweepCheck::new("numeric.bridge", anchor, v.len(), max_of(v), BRIDGE_TOL),
        Err(e) => SweepCheck::failed("numeric.bridge", anchor, points.len(), BRIDGE_TOL, &e),
    }
}

/// Sweep configuration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub eps: f64,
    /// Tolerance for weighted-point comparisons.
    pub wp_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 10,
            seed: 7,
            eps: 1e-12,
            wp_tol: WP_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub sampler: &'static str,
    pub config: SweepConfig,
    pub checks: Vec<SweepCheck>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl NumericReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// All sweeps. Samples are drawn up front in a fixed order (generic, diagonal,
/// τ = u, words), so the report depends only on the configuration.
pub fn run_numeric_suite(cfg: &SweepConfig, jobs: usize) -> Result<NumericReport> {
    if cfg.samples == 0 {
        return Err(Error::Input("samples must be at least 1".into()));
    }
    if !(cfg.eps > 0.0 && cfg.wp_tol > 0.0) {
        return Err(Error::Input("eps and tol must be positive".into()));
    }
    let mut s = Sampler::new(cfg.seed);
    let generic = s.kappas(cfg.samples);
    let diagonal: Vec<_> = (0..cfg.samples).map(|_| s.diagonal()).collect();
    let teq: Vec<_> = (0..cfg.samples).map(|_| s.tau_equals_u()).collect();
    let words: Vec<_> = (0..cfg.samples.max(2)).map(|_| s.word()).collect();
    let eps = cfg.eps;
    type Job<'a> = Box<dyn Fn() -> Vec<SweepCheck> + Send + Sync + 'a>;
    let jobs_list: Vec<Job> = vec![
        Box::new(|| route_agreement(&generic, eps)),
        Box::new(|| modularity(&generic, eps)),
        Box::new(|| humbert(&diagonal, &teq, eps)),
        Box::new(|| vec![humbert_control(&generic, eps)]),
        Box::new(|| vec![ic_consistency(&generic, eps, cfg.wp_tol)]),
        Box::new(|| split_case(&diagonal, eps)),
        Box::new(|| isometry(&words, &generic)),
        Box::new(|| vec![bridge(&generic, eps)]),
    ];
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    let checks: Vec<SweepCheck> = pool.install(|| {
        jobs_list
            .par_iter()
            .map(|f| {
                let t = Instant::now();
                let mut v = f();
                let ms = t.elapsed().as_millis() as u64;
                for c in &mut v {
                    c.millis = ms;
                }
                v
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(NumericReport {
        sampler: SAMPLER,
        config: *cfg,
        total: checks.len(),
        passed,
        failed: checks.len() - passed,
        checks,
    })
}
