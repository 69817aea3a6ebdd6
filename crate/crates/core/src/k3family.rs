//! The quartic family X(α, β, γ, δ) ⊂ ℙ³: normal form, the two elliptic
//! fibrations, the van Geemen–Sarti involution, the fiberwise two-isogeny,
//! and the inverse period map with its Igusa–Clebsch and split-j outputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{data, identity_check, parse_poly, Coeff, Context, IdentityReport, Poly, QPoly};
use crate::forms::{evaluate_forms, FormsVector};
use crate::numerics::{wp_normalize, Complex, SiegelPoint, WeightedPoint};

pub const PARAM_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
pub const PARAM_WEIGHTS: [u32; 4] = [2, 3, 5, 6];
pub const IC_WEIGHTS: [u32; 4] = [2, 4, 6, 10];

/// Relative threshold of the weighted vanishing tests.
pub const VANISHING_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    K3,
    RationalSurface,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct K3Params {
    pub alpha: Complex,
    pub beta: Complex,
    pub gamma: Complex,
    pub delta: Complex,
}

impl K3Params {
    pub fn new(alpha: Complex, beta: Complex, gamma: Complex, delta: Complex) -> Self {
        K3Params { alpha, beta, gamma, delta }
    }

    pub fn from_real(v: [f64; 4]) -> Self {
        let c = |x: f64| Complex::new(x, 0.0);
        Self::new(c(v[0]), c(v[1]), c(v[2]), c(v[3]))
    }

    pub fn as_array(&self) -> [Complex; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn from_weighted(p: &WeightedPoint) -> Result<Self> {
        if p.weights != PARAM_WEIGHTS {
            return Err(Error::Input(format!("expected weights {PARAM_WEIGHTS:?}, got {:?}", p.weights)));
        }
        let c = &p.coords;
        Ok(Self::new(c[0], c[1], c[2], c[3]))
    }

    pub fn to_weighted(&self) -> Result<WeightedPoint> {
        WeightedPoint::new(self.as_array().to_vec(), PARAM_WEIGHTS.to_vec())
    }

    pub fn kind(&self) -> SurfaceKind {
        if self.gamma == Complex::zero() && self.delta == Complex::zero() {
            SurfaceKind::RationalSurface
        } else {
            SurfaceKind::K3
        }
    }

    /// Weighted size `max |p_i|^{1/w_i}` over the coordinates other than `skip`.
    fn scale_without(&self, skip: Option<usize>) -> f64 {
        self.as_array()
            .iter()
            .zip(PARAM_WEIGHTS)
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, (z, w))| z.norm().powf(1.0 / w as f64))
            .fold(0.0, f64::max)
    }

    /// |γ| / max(|α|^{5/2}, |β|^{5/3}, |δ|^{5/6}), invariant under rescaling.
    pub fn normalized_gamma(&self) -> f64 {
        self.gamma.norm() / self.scale_without(Some(2)).powi(5)
    }

    /// Normalized |γ| at most 1e-8.
    pub fn gamma_vanishes(&self) -> bool {
        self.gamma.norm() <= VANISHING_TOL * self.scale_without(Some(2)).powi(5)
    }

    pub fn delta_vanishes(&self) -> bool {
        self.delta.norm() <= VANISHING_TOL * self.scale_without(Some(3)).powi(6)
    }

    /// A weighted-homogeneous quantity of the given weight is negligible.
    fn weighted_zero(&self, value: Complex, abs_terms: f64) -> bool {
        value.norm() <= VANISHING_TOL * abs_terms
    }
}

/// `α, β, γ, δ` as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactParams(pub [BigRational; 4]);

impl ExactParams {
    pub fn from_i64(v: [i64; 4]) -> Self {
        ExactParams(v.map(|x| BigRational::from_integer(BigInt::from(x))))
    }
}

fn ctx(extra: &str) -> Context {
    Context::parse(&format!("alpha beta gamma delta {extra}")).expect("valid context")
}

pub fn params_context() -> Context {
    Context::parse("alpha beta gamma delta").expect("valid context")
}

fn data_q(name: &str, c: &Context) -> Result<QPoly> {
    Ok(data()?.poly(name, c)?.to_rational())
}

fn bind_params<C: Coeff>(p: &Poly<C>, vals: &[C; 4], target: &Context) -> Result<Poly<C>> {
    let src = p.ctx().clone();
    let bindings: Vec<(&str, Poly<C>)> = PARAM_NAMES
        .iter()
        .zip(vals)
        .map(|(n, v)| (*n, Poly::constant(&src, v.clone())))
        .collect();
    p.substitute(&bindings, target)
}

/// Evaluate a polynomial in the parameters and one more variable at numeric
/// parameters, returning ascending coefficients in that variable.
pub fn specialize_univariate(p: &QPoly, params: &K3Params) -> Result<Vec<Complex>> {
    let parts = p.coefficients_in(4);
    let vals = params.as_array();
    parts
        .iter()
        .map(|q| {
            let mut pt = vals.to_vec();
            pt.push(Complex::zero());
            q.eval_complex(&pt)
        })
        .collect()
}

/// y²zw − 4x³z + 3αxzw² + βzw³ + γxz²w − ½(δz²w² + w⁴) in ℚ[α,β,γ,δ,x,y,z,w].
pub fn quartic_symbolic() -> QPoly {
    parse_poly(
        "y^2*z*w - 4*x^3*z + 3*alpha*x*z*w^2 + beta*z*w^3 + gamma*x*z^2*w - 1/2*delta*z^2*w^2 - 1/2*w^4",
        &ctx("x y z w"),
    )
    .expect("quartic parses")
}

/// The quartic at exact parameters, as a polynomial in x, y, z, w.
pub fn quartic_polynomial(p: &ExactParams) -> Result<QPoly> {
    bind_params(&quartic_symbolic(), &p.0, &Context::parse("x y z w")?)
}

pub fn quartic_eval(p: &K3Params, pt: &[Complex; 4]) -> Result<Complex> {
    let mut v = p.as_array().to_vec();
    v.extend_from_slice(pt);
    quartic_symbolic().eval_complex(&v)
}

pub fn quartic_gradient(p: &K3Params, pt: &[Complex; 4]) -> Result<[Complex; 4]> {
    let q = quartic_symbolic();
    let mut v = p.as_array().to_vec();
    v.extend_from_slice(pt);
    let mut out = [Complex::zero(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = q.derivative(4 + i).eval_complex(&v)?;
    }
    Ok(out)
}

/// Q(q⁴α, q⁶β, q¹⁰γ, q¹²δ, q⁸x, q⁹y, z, q⁶w) = q²⁴·Q.
pub fn rescaling_covariance_check() -> Result<IdentityReport> {
    let q = quartic_symbolic();
    let target = ctx("x y z w q");
    let qv = QPoly::var(&target, "q")?;
    let sc = |name: &str, e: u32| -> Result<(String, QPoly)> {
        Ok((name.to_string(), &qv.pow(e) * &QPoly::var(&target, name)?))
    };
    let owned = [
        sc("alpha", 4)?,
        sc("beta", 6)?,
        sc("gamma", 10)?,
        sc("delta", 12)?,
        sc("x", 8)?,
        sc("y", 9)?,
        sc("w", 6)?,
    ];
    let b: Vec<(&str, QPoly)> = owned.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    let lhs = q.substitute(&b, &target)?;
    let rhs = &qv.pow(24) * &q.embed(&target)?;
    Ok(identity_check(&lhs, &rhs))
}

/// v² = u³ + f·u + g over a base coordinate.
#[derive(Clone, Debug)]
pub struct WeierstrassFibration {
    pub base: &'static str,
    pub f: QPoly,
    pub g: QPoly,
    /// 4f³ + 27g².
    pub disc: QPoly,
}

impl WeierstrassFibration {
    fn new(base: &'static str, f: QPoly, g: QPoly) -> Self {
        let disc = &(&f.pow(3) * &QPoly::from_i64(f.ctx(), 4)) + &(&g.pow(2) * &QPoly::from_i64(g.ctx(), 27));
        WeierstrassFibration { base, f, g, disc }
    }

    pub fn specialize(&self, p: &K3Params) -> Result<NumericFibration> {
        Ok(NumericFibration {
            base: self.base,
            f: specialize_univariate(&self.f, p)?,
            g: specialize_univariate(&self.g, p)?,
            disc: specialize_univariate(&self.disc, p)?,
        })
    }
}

/// Ascending coefficient lists in the base coordinate.
#[derive(Clone, Debug, Serialize)]
pub struct NumericFibration {
    pub base: &'static str,
    pub f: Vec<Complex>,
    pub g: Vec<Complex>,
    pub disc: Vec<Complex>,
}

/// y² = z³ + P·z² + Q·z.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTorsionFibration<C: Coeff> {
    pub p: Poly<C>,
    pub q: Poly<C>,
}

impl<C: Coeff> TwoTorsionFibration<C> {
    /// 16Q²(P² − 4Q).
    pub fn discriminant(&self) -> Poly<C> {
        let ctx = self.p.ctx();
        let inner = &self.p.pow(2) - &self.q.scale_i64(4);
        &(&self.q.pow(2) * &inner) * &Poly::from_i64(ctx, 16)
    }
}

#[derive(Clone, Debug)]
pub struct StandardFibration {
    pub fibration: WeierstrassFibration,
    /// disc = λ¹⁰ · (reduced discriminant from the data set).
    pub disc_identity: IdentityReport,
    /// Same comparison against the expansion as printed.
    pub printed_expansion: IdentityReport,
}

pub fn standard_fibration() -> Result<StandardFibration> {
    let c = ctx("lambda");
    let fib = WeierstrassFibration::new("lambda", data_q("f_s", &c)?, data_q("g_s", &c)?);
    let l10 = QPoly::var(&c, "lambda")?.pow(10);
    let reduced = data_q("disc_s_reduced", &c)?;
    let printed = data_q("disc_s_reduced_printed", &c)?;
    Ok(StandardFibration {
        disc_identity: identity_check(&fib.disc, &(&l10 * &reduced)),
        printed_expansion: identity_check(&fib.disc, &(&l10 * &printed)),
        fibration: fib,
    })
}

#[derive(Clone, Debug)]
pub struct AlternateFibration {
    pub fibration: WeierstrassFibration,
    pub two_torsion: TwoTorsionFibration<BigRational>,
    /// 4f³ + 27g² = −(1/16)(2γμ − δ)²·R(μ).
    pub disc_identity: IdentityReport,
    /// Ratio disc(two-torsion) / disc(Weierstrass), when the two are proportional.
    pub proportionality: Option<BigRational>,
}

/// `c` with `a = c·b`, if one exists.
pub fn proportional<C: Coeff>(a: &Poly<C>, b: &Poly<C>) -> Option<C> {
    let (exps, cb) = b.leading_term()?;
    let ca = a.coeff(&exps);
    let c = ca.div_exact(cb)?;
    (a - &b.scale(&c)).is_zero().then_some(c)
}

pub fn alternate_fibration() -> Result<AlternateFibration> {
    let c = ctx("mu");
    let f = data_q("f_a12", &c)?.scale(&BigRational::new(1.into(), 12.into()));
    let g = data_q("g_a108", &c)?.scale(&BigRational::new(1.into(), 108.into()));
    let fib = WeierstrassFibration::new("mu", f, g);
    let lin = data_q("disc_a_linear", &c)?;
    let sex = data_q("disc_a_sextic", &c)?;
    let rhs = (&lin.pow(2) * &sex).scale(&BigRational::new((-1).into(), 16.into()));
    let p = parse_poly("4*mu^3 - 3*alpha*mu - beta", &c)?;
    let q = parse_poly("1/4*delta - 1/2*gamma*mu", &c)?;
    let tt = TwoTorsionFibration { p, q };
    Ok(AlternateFibration {
        disc_identity: identity_check(&fib.disc, &rhs),
        proportionality: proportional(&tt.discriminant(), &fib.disc),
        two_torsion: tt,
        fibration: fib,
    })
}

/// Quotient by the two-torsion section: (P, Q) ↦ (−2P, P² − 4Q).
pub fn two_isogeny_quotient<C: Coeff>(f: &TwoTorsionFibration<C>) -> TwoTorsionFibration<C> {
    TwoTorsionFibration {
        p: f.p.scale_i64(-2),
        q: &f.p.pow(2) - &f.q.scale_i64(4),
    }
}

/// Image (z₂, y₂) = (y₁²/z₁², (Q − z₁²)·y₁/z₁²) of a point under the isogeny.
pub fn two_isogeny_point(q: Complex, z1: Complex, y1: Complex) -> Result<(Complex, Complex)> {
    if z1 == Complex::zero() {
        return Err(Error::Domain("point lies over the kernel of the isogeny".into()));
    }
    let z1s = z1 * z1;
    Ok((y1 * y1 / z1s, (q - z1s) * y1 / z1s))
}

/// Declared Kodaira fibers and discriminant data of both fibrations.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub kind: SurfaceKind,
    pub standard: Vec<(String, String)>,
    pub alternate: Vec<(String, String)>,
    /// 3αγ²δ + 2βγ³ − δ³, deciding I₂ against III over [δ : 2γ].
    pub type_selector: Complex,
    pub gamma_vanishes: bool,
    pub d4: Complex,
    pub d4_vanishes: bool,
    pub overlap: Complex,
    pub overlap_vanishes: bool,
    pub standard_disc_reduced: Vec<Complex>,
    pub alternate_disc_linear: Vec<Complex>,
    pub alternate_disc_sextic: Vec<Complex>,
}

pub fn fiber_report(p: &K3Params) -> Result<FiberReport> {
    if p.kind() == SurfaceKind::RationalSurface {
        return Err(Error::Domain("γ = δ = 0 gives a rational surface".into()));
    }
    let pc = params_context();
    let v = p.as_array();
    let d = data()?;
    let d4p = d.poly("D4", &pc)?;
    let ovp = d.poly("discrr3", &pc)?;
    let d4 = d4p.eval_complex(&v)?;
    let overlap = ovp.eval_complex(&v)?;
    let g0 = p.gamma_vanishes();
    let (a, b, g, dl) = (p.alpha, p.beta, p.gamma, p.delta);
    let sel = 3.0 * a * g * g * dl + 2.0 * b * g * g * g - dl * dl * dl;
    let sel_scale = (3.0 * a.norm() * g.norm_sqr() * dl.norm() + 2.0 * b.norm() * g.norm().powi(3) + dl.norm().powi(3)).max(f64::MIN_POSITIVE);

    let mut standard = vec![("[0:1]".to_string(), "II*".to_string())];
    standard.push(("[1:0]".to_string(), if g0 { "II*" } else { "III*" }.to_string()));
    let mut alternate = vec![("[1:0]".to_string(), if g0 { "I12*" } else { "I10*" }.to_string())];
    if !g0 {
        let t = if p.weighted_zero(sel, sel_scale) { "III" } else { "I2" };
        alternate.push((format!("[{}:{}]", fmt_c(dl), fmt_c(2.0 * g)), t.to_string()));
    }
    let c_l = ctx("lambda");
    let c_m = ctx("mu");
    Ok(FiberReport {
        kind: p.kind(),
        standard,
        alternate,
        type_selector: sel,
        gamma_vanishes: g0,
        d4,
        d4_vanishes: p.weighted_zero(d4, d4p.eval_abs_terms(&v)),
        overlap,
        overlap_vanishes: p.weighted_zero(overlap, ovp.eval_abs_terms(&v)),
        standard_disc_reduced: specialize_univariate(&data_q("disc_s_reduced", &c_l)?, p)?,
        alternate_disc_linear: specialize_univariate(&data_q("disc_a_linear", &c_m)?, p)?,
        alternate_disc_sextic: specialize_univariate(&data_q("disc_a_sextic", &c_m)?, p)?,
    })
}

fn fmt_c(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{z}")
    }
}

/// Ψ[x,y,z,w] = [xz(δw−2γx), −yz(δw−2γx), w³, zw(δw−2γx)] over ℚ[α,β,γ,δ].
pub fn vgs_involution_symbolic() -> [QPoly; 4] {
    let c = ctx("x y z w");
    let p = |s: &str| parse_poly::<BigRational>(s, &c).expect("map component parses");
    [
        p("x*z*(delta*w - 2*gamma*x)"),
        p("-y*z*(delta*w - 2*gamma*x)"),
        p("w^3"),
        p("z*w*(delta*w - 2*gamma*x)"),
    ]
}

pub fn vgs_involution_apply(p: &K3Params, pt: &[Complex; 4]) -> Result<[Complex; 4]> {
    let [x, y, z, w] = *pt;
    let l = p.delta * w - 2.0 * p.gamma * x;
    let out = [x * z * l, -y * z * l, w * w * w, z * w * l];
    let size = pt.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let coef = 1f64.max(p.delta.norm()).max(2.0 * p.gamma.norm());
    let floor = 1e-14 * coef * size.powi(3);
    if size == 0.0 || out.iter().all(|c| c.norm() <= floor) {
        return Err(Error::Indeterminacy(format!("Ψ is undefined at {pt:?}")));
    }
    Ok(out)
}

/// Ψ∘Ψ = h·[x,y,z,w] for a polynomial h, returned on success.
pub fn vgs_involution_square() -> Result<(QPoly, bool)> {
    let psi = vgs_involution_symbolic();
    let c = psi[0].ctx().clone();
    let twice: Vec<QPoly> = psi
        .iter()
        .map(|comp| {
            comp.substitute(
                &[("x", psi[0].clone()), ("y", psi[1].clone()), ("z", psi[2].clone()), ("w", psi[3].clone())],
                &c,
            )
        })
        .collect::<Result<_>>()?;
    let x = QPoly::var(&c, "x")?;
    let h = twice[0].div_exact(&x).ok_or_else(|| Error::Derivation("Ψ∘Ψ first component not divisible by x".into()))?;
    let ok = ["x", "y", "z", "w"]
        .iter()
        .zip(&twice)
        .all(|(v, t)| QPoly::var(&c, v).map(|xv| (&h * &xv) == *t).unwrap_or(false));
    Ok((h, ok))
}

/// Q∘Ψ = W·Q, with W returned when the division is exact.
pub fn vgs_quartic_invariance() -> Result<Option<QPoly>> {
    let psi = vgs_involution_symbolic();
    let q = quartic_symbolic();
    let c = q.ctx().clone();
    let comp = q.substitute(
        &[("x", psi[0].clone()), ("y", psi[1].clone()), ("z", psi[2].clone()), ("w", psi[3].clone())],
        &c,
    )?;
    Ok(comp.div_exact(&q))
}

/// Output of the inverse period map.
#[derive(Clone, Debug, Serialize)]
pub struct InversePeriod {
    /// [E4, E6, 2¹²3⁵C10, 2¹²3⁶C12] in WP(2,3,5,6).
    pub point: WeightedPoint,
    pub normalized: WeightedPoint,
    /// κ lies on the Humbert surface of discriminant one (γ ≈ 0).
    pub h1: bool,
    /// |D4| at the normalized point over the sum of its term moduli.
    pub d4_normalized: f64,
    pub forms: FormsVector,
}

pub const C10_FACTOR: f64 = 4096.0 * 243.0;
pub const C12_FACTOR: f64 = 4096.0 * 729.0;

pub fn inverse_period(kappa: &SiegelPoint, eps: f64) -> Result<InversePeriod> {
    let forms = evaluate_forms(kappa, eps)?;
    let coords = vec![forms.e4, forms.e6, forms.c10 * C10_FACTOR, forms.c12 * C12_FACTOR];
    let point = WeightedPoint::new(coords, PARAM_WEIGHTS.to_vec())?;
    let normalized = wp_normalize(&point);
    let np = K3Params::from_weighted(&normalized)?;
    let d4p = data()?.poly("D4", &params_context())?;
    let v = np.as_array();
    let d4_normalized = d4p.eval_complex(&v)?.norm() / d4p.eval_abs_terms(&v).max(f64::MIN_POSITIVE);
    Ok(InversePeriod {
        h1: np.gamma_vanishes(),
        point,
        normalized,
        d4_normalized,
        forms,
    })
}

/// Weighted quadruple [A, B, C, D] with weights (2, 4, 6, 10).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IgusaClebsch {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl IgusaClebsch {
    pub fn to_weighted(&self) -> Result<WeightedPoint> {
        WeightedPoint::new(vec![self.a, self.b, self.c, self.d], IC_WEIGHTS.to_vec())
    }
}

/// [2³3δ, 2²3²αγ², 2³3²(4αδ + βγ)γ², 2²γ⁶].
pub fn ic_from_params(p: &K3Params) -> Result<IgusaClebsch> {
    if p.gamma_vanishes() {
        return Err(Error::Domain("γ = 0: the abelian surface is a product, use the split j-pair".into()));
    }
    let (a, b, g, d) = (p.alpha, p.beta, p.gamma, p.delta);
    let g2 = g * g;
    Ok(IgusaClebsch {
        a: 24.0 * d,
        b: 36.0 * a * g2,
        c: 72.0 * (4.0 * a * d + b * g) * g2,
        d: 4.0 * g2 * g2 * g2,
    })
}

/// Exact counterpart of [`ic_from_params`].
pub fn ic_from_params_exact(p: &ExactParams) -> Result<[BigRational; 4]> {
    let [a, b, g, d] = &p.0;
    if g.is_zero() {
        return Err(Error::Domain("γ = 0".into()));
    }
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let g2 = g * g;
    Ok([
        r(24) * d,
        r(36) * a * &g2,
        r(72) * (r(4) * a * d + b * g) * &g2,
        r(4) * &g2 * &g2 * &g2,
    ])
}

/// [2³3·C12/C10, 2²E4, 2⁵E4C12/C10 + 2³3⁻¹E6, 2¹⁴C10].
pub fn ic_from_forms(kappa: &SiegelPoint, eps: f64) -> Result<IgusaClebsch> {
    let f = evaluate_forms(kappa, eps)?;
    // same test as for the inverse-period point, so the two maps agree on H1
    let p = K3Params::new(f.e4, f.e6, f.c10 * C10_FACTOR, f.c12 * C12_FACTOR);
    if p.gamma_vanishes() {
        return Err(Error::Humbert(format!("C10 = {} vanishes: κ lies on H1", f.c10)));
    }
    let r = f.c12 / f.c10;
    Ok(IgusaClebsch {
        a: 24.0 * r,
        b: 4.0 * f.e4,
        c: 32.0 * f.e4 * r + f.e6 * (8.0 / 3.0),
        d: 16384.0 * f.c10,
    })
}

/// Unordered j-pair of the product E₁ × E₂ at γ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitJ {
    /// Roots of X² − ((α³ − β²)/δ + 1)X + α³/δ, normalized so j(i) = 1.
    pub normalized: [Complex; 2],
    /// 1728 times the above.
    pub j: [Complex; 2],
}

pub fn split_j_pair(p: &K3Params) -> Result<SplitJ> {
    if !p.gamma_vanishes() {
        return Err(Error::Domain("γ ≠ 0: the abelian surface is not a product".into()));
    }
    if p.delta_vanishes() {
        return Err(Error::Domain("δ = 0 at γ = 0 gives a rational surface".into()));
    }
    let a3 = p.alpha * p.alpha * p.alpha;
    let s = (a3 - p.beta * p.beta) / p.delta + 1.0;
    let prod = a3 / p.delta;
    let disc = (s * s - 4.0 * prod).sqrt();
    let mut r = [(s + disc) / 2.0, (s - disc) / 2.0];
    // the smaller root from Vieta avoids cancellation
    let big = if r[0].norm() >= r[1].norm() { 0 } else { 1 };
    if r[big] != Complex::zero() {
        r[1 - big] = prod / r[big];
    }
    r.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(SplitJ {
        normalized: r,
        j: r.map(|z| z * 1728.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, wp_equal, Tolerance};

    #[test]
    fn trivial_quartic() {
        let q = quartic_polynomial(&ExactParams::from_i64([0, 0, 0, 0])).unwrap();
        let e = parse_poly("y^2*z*w - 4*x^3*z - 1/2*w^4", q.ctx()).unwrap();
        assert_eq!(q, e);
    }

    #[test]
    fn special_points_are_singular() {
        let p = K3Params::new(c(0.3, 0.1), c(-1.2, 0.0), c(0.7, 0.2), c(1.1, -0.4));
        for pt in [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]] {
            let pt = pt.map(|x| c(x, 0.0));
            assert_eq!(quartic_eval(&p, &pt).unwrap(), Complex::zero());
            assert!(quartic_gradient(&p, &pt).unwrap().iter().all(|z| *z == Complex::zero()));
        }
    }

    #[test]
    fn rescaling() {
        assert!(rescaling_covariance_check().unwrap().pass);
    }

    #[test]
    fn fibration_discriminants() {
        let s = standard_fibration().unwrap();
        assert!(s.disc_identity.pass);
        assert!(!s.printed_expansion.pass);
        let a = alternate_fibration().unwrap();
        assert!(a.disc_identity.pass);
        assert_eq!(a.proportionality, Some(BigRational::from_integer((-16).into())));
    }

    #[test]
    fn ic_examples() {
        let ic = ic_from_params(&K3Params::from_real([1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!([ic.a, ic.b, ic.c, ic.d], [24.0, 36.0, 360.0, 4.0].map(|x| c(x, 0.0)));
        let ic = ic_from_params(&K3Params::from_real([0.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!([ic.a, ic.b, ic.c, ic.d], [0.0, 0.0, 0.0, 4.0].map(|x| c(x, 0.0)));
        assert!(matches!(ic_from_params(&K3Params::from_real([1.0, 1.0, 0.0, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn ic_weighted_rescaling() {
        let p = K3Params::new(c(0.3, 0.2), c(-0.5, 1.0), c(1.5, -0.2), c(0.25, 0.5));
        let t = c(0.7, 1.3);
        let w = p.to_weighted().unwrap().scaled(t);
        let q = K3Params::from_weighted(&w).unwrap();
        let a = ic_from_params(&p).unwrap().to_weighted().unwrap();
        let b = ic_from_params(&q).unwrap().to_weighted().unwrap();
        assert!(wp_equal(&a, &b, &Tolerance::default()).unwrap());
    }

    #[test]
    fn split_examples() {
        let s = split_j_pair(&K3Params::from_real([0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(s.normalized, [c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(split_j_pair(&K3Params::from_real([1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn fiber_types() {
        let r = fiber_report(&K3Params::from_real([0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.standard[1].1, "II*");
        assert_eq!(r.alternate[0].1, "I12*");
        assert_eq!(r.d4, c(11664.0, 0.0));
        // α = 0, γ = δ = 1 and 2β = 1 make the selector vanish
        let r = fiber_report(&K3Params::from_real([0.0, 0.5, 1.0, 1.0])).unwrap();
        assert_eq!(r.alternate[1].1, "III");
        let r = fiber_report(&K3Params::from_real([0.0, 0.6, 1.0, 1.0])).unwrap();
        assert_eq!(r.alternate[1].1, "I2");
        assert!(fiber_report(&K3Params::from_real([1.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn involution() {
        let (h, ok) = vgs_involution_square().unwrap();
        assert!(ok && !h.is_zero());
        assert!(vgs_quartic_invariance().unwrap().is_some());
        let p = K3Params::from_real([1.0, 2.0, 3.0, 4.0]);
        let img = vgs_involution_apply(&p, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((img[0] / img[3] - 0.2).norm() < 1e-15);
        assert!(matches!(
            vgs_involution_apply(&p, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::Indeterminacy(_))
        ));
    }

    #[test]
    fn isogeny_examples() {
        let c0 = Context::parse("mu").unwrap();
        let f = |p: i64, q: i64| TwoTorsionFibration::<BigRational> {
            p: QPoly::from_i64(&c0, p),
            q: QPoly::from_i64(&c0, q),
        };
        assert_eq!(two_isogeny_quotient(&f(0, 0)), f(0, 0));
        assert_eq!(two_isogeny_quotient(&f(1, 0)), f(-2, 1));
        let a = alternate_fibration().unwrap().two_torsion;
        let twice = two_isogeny_quotient(&two_isogeny_quotient(&a));
        assert_eq!(twice.p, a.p.scale_i64(4));
        assert_eq!(twice.q, a.q.scale_i64(16));
    }
}
