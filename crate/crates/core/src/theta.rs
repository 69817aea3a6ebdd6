//! Genus-two theta constants with half-integer characteristics, genus-one
//! Eisenstein series, and the Göpel/asyzygy combinatorics of even characteristics.

use std::f64::consts::PI;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{Complex, SiegelPoint};

/// Characteristic `[u; v]` with `u, v ∈ {0, 1/2}²`, stored doubled as 0/1 flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaChar {
    pub u: [u8; 2],
    pub v: [u8; 2],
}

impl ThetaChar {
    pub const fn new(u: [u8; 2], v: [u8; 2]) -> Self {
        ThetaChar { u, v }
    }

    /// Four flags `[2u1, 2u2, 2v1, 2v2]`.
    pub fn flags(&self) -> [u8; 4] {
        [self.u[0], self.u[1], self.v[0], self.v[1]]
    }

    pub fn from_flags(f: [u8; 4]) -> Result<Self> {
        if f.iter().any(|&x| x > 1) {
            return Err(Error::Input("characteristic flags must be 0 or 1".into()));
        }
        Ok(ThetaChar::new([f[0], f[1]], [f[2], f[3]]))
    }

    /// Even iff `4·u·v ≡ 0 (mod 2)`.
    pub fn is_even(&self) -> bool {
        (self.u[0] * self.v[0] + self.u[1] * self.v[1]) % 2 == 0
    }

    /// Componentwise sum modulo 1 (modulo 2 on the flags).
    pub fn add(&self, o: &ThetaChar) -> ThetaChar {
        ThetaChar::new(
            [(self.u[0] + o.u[0]) % 2, (self.u[1] + o.u[1]) % 2],
            [(self.v[0] + o.v[0]) % 2, (self.v[1] + o.v[1]) % 2],
        )
    }

    /// All sixteen characteristics, flags in lexicographic order.
    pub fn all() -> Vec<ThetaChar> {
        (0u8..16)
            .map(|k| ThetaChar::new([(k >> 3) & 1, (k >> 2) & 1], [(k >> 1) & 1, k & 1]))
            .collect()
    }

    pub fn even() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(|m| m.is_even()).collect()
    }

    pub fn odd() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(|m| !m.is_even()).collect()
    }
}

impl Serialize for ThetaChar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.flags().serialize(s)
    }
}

/// The four characteristics with `u = 0` that give a, b, c, d.
pub const M1: ThetaChar = ThetaChar::new([0, 0], [0, 0]);
pub const M2: ThetaChar = ThetaChar::new([0, 0], [1, 1]);
pub const M3: ThetaChar = ThetaChar::new([0, 0], [1, 0]);
pub const M4: ThetaChar = ThetaChar::new([0, 0], [0, 1]);
pub const FUNDAMENTAL: [ThetaChar; 4] = [M1, M2, M3, M4];

/// Truncation settings for lattice sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaConfig {
    pub radius_cap: usize,
    pub lambda_min_floor: f64,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig {
            radius_cap: 64,
            lambda_min_floor: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaValue {
    pub value: Complex,
    pub radius: usize,
}

/// Upper bound on `Σ_{|n|∞ > r} exp(−π λ |n+u|²)` using `8k` lattice points per
/// shell and `|n+u| ≥ k − 1/2` on shell `k`.
pub fn tail_bound(lambda: f64, r: usize) -> f64 {
    let mut total = 0.0;
    let mut k = r + 1;
    loop {
        let x = k as f64 - 0.5;
        let t = 8.0 * k as f64 * (-PI * lambda * x * x).exp();
        total += t;
        if t < total * 1e-17 || t == 0.0 || k > r + 10_000 {
            return total;
        }
        k += 1;
    }
}

/// Smallest radius whose tail bound is below `eps`.
pub fn truncation_radius(kappa: &SiegelPoint, eps: f64, cfg: &ThetaConfig) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let lambda = kappa.margins().lambda_min;
    if lambda < cfg.lambda_min_floor {
        return Err(Error::Precision(format!(
            "least eigenvalue {lambda:.3e} of Im(kappa) is below the admitted minimum {}",
            cfg.lambda_min_floor
        )));
    }
    let mut r = 1;
    while tail_bound(lambda, r) >= eps {
        r += 1;
        if r > cfg.radius_cap {
            return Err(Error::Precision(format!(
                "truncation radius would exceed the cap {} (lambda_min = {lambda:.3e}, eps = {eps:e})",
                cfg.radius_cap
            )));
        }
    }
    Ok(r)
}

fn lattice_sum(kappa: &SiegelPoint, m: &ThetaChar, r: i64) -> Complex {
    let (tau, z, u) = (kappa.tau, kappa.z, kappa.u);
    let h = [m.u[0] as f64 * 0.5, m.u[1] as f64 * 0.5];
    let w = [m.v[0] as f64 * 0.5, m.v[1] as f64 * 0.5];
    let mut acc = Complex::new(0.0, 0.0);
    for n1 in -r..=r {
        let x1 = n1 as f64 + h[0];
        for n2 in -r..=r {
            let x2 = n2 as f64 + h[1];
            let quad = tau * (x1 * x1) + z * (2.0 * x1 * x2) + u * (x2 * x2);
            let lin = 2.0 * (x1 * w[0] + x2 * w[1]);
            let e = Complex::new(0.0, PI) * (quad + lin);
            acc += e.exp();
        }
    }
    acc
}

/// θ[u; v](κ) = Σ exp(πi (n+u)ᵀκ(n+u) + 2πi (n+u)ᵀv) over ℤ², truncated.
pub fn theta_constant_g2(kappa: &SiegelPoint, m: &ThetaChar, eps: f64) -> Result<ThetaValue> {
    theta_constant_g2_with(kappa, m, eps, &ThetaConfig::default())
}

pub fn theta_constant_g2_with(kappa: &SiegelPoint, m: &ThetaChar, eps: f64, cfg: &ThetaConfig) -> Result<ThetaValue> {
    let r = truncation_radius(kappa, eps, cfg)?;
    Ok(ThetaValue {
        value: lattice_sum(kappa, m, r as i64),
        radius: r,
    })
}

/// Theta constants at the four fundamental characteristics plus the full even table.
#[derive(Clone, Debug, Serialize)]
pub struct FundamentalThetas {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub even: Vec<(ThetaChar, Complex)>,
    pub odd_max: f64,
    pub radius: usize,
}

impl FundamentalThetas {
    pub fn abcd(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn get(&self, m: &ThetaChar) -> Option<Complex> {
        self.even.iter().find(|(n, _)| n == m).map(|(_, z)| *z)
    }
}

/// Odd constants vanish identically; numerically they must stay below this.
fn odd_gate(eps: f64) -> f64 {
    eps.max(1e-12)
}

pub fn fundamental_thetas(kappa: &SiegelPoint, eps: f64) -> Result<FundamentalThetas> {
    let cfg = ThetaConfig::default();
    let r = truncation_radius(kappa, eps, &cfg)?;
    let even: Vec<(ThetaChar, Complex)> = ThetaChar::even()
        .into_iter()
        .map(|m| (m, lattice_sum(kappa, &m, r as i64)))
        .collect();
    let odd_max = ThetaChar::odd()
        .iter()
        .map(|m| lattice_sum(kappa, m, r as i64).norm())
        .fold(0.0, f64::max);
    if odd_max >= odd_gate(eps) {
        return Err(Error::Precision(format!(
            "odd theta constant of size {odd_max:e} exceeds the gate {:e}",
            odd_gate(eps)
        )));
    }
    let find = |m: ThetaChar| even.iter().find(|(n, _)| *n == m).map(|x| x.1).expect("even");
    Ok(FundamentalThetas {
        a: find(M1),
        b: find(M2),
        c: find(M3),
        d: find(M4),
        odd_max,
        radius: r,
        even,
    })
}

/// Genus-one values at τ.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Genus1Values {
    pub e4: Complex,
    pub e6: Complex,
    pub delta: Complex,
    pub j: Complex,
    pub terms: usize,
}

pub const GENUS1_TERM_CAP: usize = 5000;

fn sigma(k: u32, n: usize) -> f64 {
    let mut s = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += (d as f64).powi(k as i32);
            let e = n / d;
            if e != d {
                s += (e as f64).powi(k as i32);
            }
        }
        d += 1;
    }
    s
}

/// E4 = 1 + 240 Σ σ3(n) qⁿ, E6 = 1 − 504 Σ σ5(n) qⁿ, Δ = (E4³ − E6²)/1728, j = E4³/Δ.
pub fn genus1_suite(tau: Complex, eps: f64) -> Result<Genus1Values> {
    if !(tau.im > 0.0) {
        return Err(Error::Domain("genus-one point needs Im(tau) > 0".into()));
    }
    let q = (Complex::new(0.0, 2.0 * PI) * tau).exp();
    let aq = q.norm();
    let mut s3 = Complex::new(0.0, 0.0);
    let mut s5 = Complex::new(0.0, 0.0);
    let mut qn = Complex::new(1.0, 0.0);
    let mut n = 0;
    loop {
        n += 1;
        if n > GENUS1_TERM_CAP {
            return Err(Error::Precision(format!(
                "q-series needs more than {GENUS1_TERM_CAP} terms at Im(tau) = {}",
                tau.im
            )));
        }
        qn *= q;
        s3 += qn * sigma(3, n);
        s5 += qn * sigma(5, n);
        // σ5(m) ≤ m^6, and the ratio of consecutive bounds stays below aq·(1+1/n)^6.
        let nf = n as f64;
        let ratio = aq * ((nf + 2.0) / (nf + 1.0)).powi(6);
        if ratio < 1.0 {
            let next = 504.0 * (nf + 1.0).powi(6) * aq.powf(nf + 1.0);
            if next / (1.0 - ratio) < eps {
                break;
            }
        }
    }
    let e4 = 1.0 + 240.0 * s3;
    let e6 = 1.0 - 504.0 * s5;
    let delta = (e4 * e4 * e4 - e6 * e6) / 1728.0;
    Ok(Genus1Values {
        e4,
        e6,
        delta,
        j: e4 * e4 * e4 / delta,
        terms: n,
    })
}

/// Göpel quadruples and asyzygous triples of even characteristics.
#[derive(Clone, Debug, Serialize)]
pub struct SyzygyTables {
    pub gopel: Vec<[ThetaChar; 4]>,
    pub asyzygous_triples: Vec<[ThetaChar; 3]>,
}

impl SyzygyTables {
    /// The six even characteristics outside a Göpel quadruple.
    pub fn complement(quad: &[ThetaChar; 4]) -> Vec<ThetaChar> {
        ThetaChar::even().into_iter().filter(|m| !quad.contains(m)).collect()
    }
}

fn syzygous(t: &[ThetaChar]) -> bool {
    t[0].add(&t[1]).add(&t[2]).is_even()
}

pub fn syzygy_tables() -> SyzygyTables {
    let even = ThetaChar::even();
    let asyzygous_triples = even
        .iter()
        .copied()
        .combinations(3)
        .filter(|t| !syzygous(t))
        .map(|t| [t[0], t[1], t[2]])
        .collect();
    let gopel = even
        .iter()
        .copied()
        .combinations(4)
        .filter(|q| q.iter().copied().combinations(3).all(|t| syzygous(&t)))
        .map(|q| [q[0], q[1], q[2], q[3]])
        .collect();
    SyzygyTables {
        gopel,
        asyzygous_triples,
    }
}
