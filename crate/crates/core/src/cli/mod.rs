//! Command-line front end. All output is JSON; see `k3atlas --help`.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{evaluate_forms, kummer_abcd};
use crate::k3family::{
    fiber_report, ic_from_forms, ic_from_params, inverse_period, split_j_pair, K3Params, IC_WEIGHTS,
};
use crate::kummer::{build_hudson, build_plane_config, run_exact_suite, SuiteReport, NODE_NAMES};
use crate::numerics::{c, wp_normalize, Complex, SiegelPoint, WeightedPoint};
use crate::sweeps::{bridge_sample, run_numeric_suite, NumericReport, SweepConfig, WP_TOL};
use crate::theta::genus1_suite;

#[derive(Parser, Debug)]
#[command(name = "k3atlas", version, about = "Siegel modular forms, the quartic K3 family and the exact Kummer-side verifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Theta truncation tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub eps: f64,
    /// Tolerance for weighted-point comparisons.
    #[arg(long, global = true, default_value_t = WP_TOL)]
    pub tol: f64,
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct KappaArgs {
    /// τ as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// z as `re,im` (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// u as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// α,β,γ,δ as four reals, or JSON: four numbers or `[re, im]` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Replace the parameters by their normalized weighted representative.
    #[arg(long)]
    pub wp: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Exact,
    Numeric,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// E4, E6, C5, C10, C12 at κ with route diagnostics.
    Forms(KappaArgs),
    /// [α, β, γ, δ] in WP(2,3,5,6) from κ.
    InvertPeriod(KappaArgs),
    /// Igusa-Clebsch invariants from parameters or from κ.
    IgusaClebsch {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        kappa: KappaArgs,
    },
    /// Fiber types and discriminant data of both elliptic fibrations.
    Fibration(ParamArgs),
    /// j-pair of the product case γ = 0, from parameters or a diagonal κ.
    Split {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        kappa: KappaArgs,
    },
    /// Kummer configuration; with κ also the numeric Hudson data.
    Kummer(KappaArgs),
    /// Exact identity suite and/or seeded numeric sweeps.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteKind::All)]
        suite: SuiteKind,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

/// Envelope around every command's result.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    pub anchor: &'static str,
    pub millis: u64,
    pub result: Value,
}

pub fn parse_complex(s: &str) -> Result<Complex> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Input(format!("`{t}` is not a finite number")))
    };
    match parts.as_slice() {
        [re] => Ok(c(num(re)?, 0.0)),
        [re, im] => Ok(c(num(re)?, num(im)?)),
        _ => Err(Error::Input(format!("expected `re,im`, got `{s}`"))),
    }
}

fn json_complex(v: &Value) -> Result<Complex> {
    let f = |x: &Value| x.as_f64().ok_or_else(|| Error::Input(format!("`{x}` is not a number")));
    match v {
        Value::Number(_) => Ok(c(f(v)?, 0.0)),
        Value::Array(a) if a.len() == 2 => Ok(c(f(&a[0])?, f(&a[1])?)),
        _ => Err(Error::Input(format!("`{v}` is not a number or [re, im]"))),
    }
}

pub fn parse_params(s: &str) -> Result<K3Params> {
    let s = s.trim();
    let vals: Vec<Complex> = if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Input(format!("params JSON: {e}")))?;
        v.as_array()
            .ok_or_else(|| Error::Input("params JSON must be an array".into()))?
            .iter()
            .map(json_complex)
            .collect::<Result<_>>()?
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .map(|x| c(x, 0.0))
                    .ok_or_else(|| Error::Input(format!("`{t}` is not a finite number")))
            })
            .collect::<Result<_>>()?
    };
    let [a, b, g, d]: [Complex; 4] = vals
        .try_into()
        .map_err(|v: Vec<Complex>| Error::Input(format!("expected four parameters, got {}", v.len())))?;
    Ok(K3Params::new(a, b, g, d))
}

impl KappaArgs {
    fn given(&self) -> bool {
        self.tau.is_some() || self.u.is_some() || self.z.is_some()
    }

    pub fn point(&self) -> Result<SiegelPoint> {
        let need = |o: &Option<String>, n: &str| {
            o.as_deref()
                .ok_or_else(|| Error::Input(format!("--{n} is required")))
                .and_then(parse_complex)
        };
        let tau = need(&self.tau, "tau")?;
        let u = need(&self.u, "u")?;
        let z = match &self.z {
            Some(s) => parse_complex(s)?,
            None => c(0.0, 0.0),
        };
        SiegelPoint::new(tau, z, u)
    }
}

impl ParamArgs {
    fn get(&self) -> Result<Option<K3Params>> {
        let Some(s) = &self.params else { return Ok(None) };
        let p = parse_params(s)?;
        if self.wp {
            return Ok(Some(K3Params::from_weighted(&wp_normalize(&p.to_weighted()?))?));
        }
        Ok(Some(p))
    }

    fn required(&self) -> Result<K3Params> {
        self.get()?.ok_or_else(|| Error::Input("--params is required".into()))
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    serde_json::to_value(t).map_err(|e| Error::Input(format!("serialization: {e}")))
}

#[derive(Serialize)]
struct VerifyResult {
    suite: SuiteKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericReport>,
}

fn kummer_result(k: &KappaArgs, eps: f64) -> Result<(bool, Value)> {
    let h = build_hudson()?;
    let inc = h.incidence()?;
    let rows: Vec<usize> = inc.iter().map(|r| r.iter().filter(|x| **x).count()).collect();
    let cols: Vec<usize> = (0..16).map(|j| inc.iter().filter(|r| r[j]).count()).collect();
    let pc = build_plane_config()?;
    let lines = pc.line_incidence()?;
    let config_ok = rows.iter().chain(&cols).all(|&n| n == 6);
    let mut out = json!({
        "nodes": NODE_NAMES,
        "trope_node_counts": rows,
        "node_trope_counts": cols,
        "line_incidence": lines,
    });
    if !k.given() {
        return Ok((config_ok, out));
    }
    let kappa = k.point()?;
    let abcd = kummer_abcd(&kappa, eps)?;
    let coeffs = h.coefficients.iter().map(|r| r.eval_complex(&abcd)).collect::<Result<Vec<_>>>()?;
    let mut pt = abcd.to_vec();
    pt.extend([c(0.0, 0.0); 4]);
    // relative size of the quartic at each node
    let mut worst = 0.0f64;
    for (_, node) in &h.nodes {
        let xyzw = node.iter().map(|p| p.eval_complex(&abcd)).collect::<Result<Vec<_>>>()?;
        pt[4..].copy_from_slice(&xyzw);
        let v = h.quartic.eval_complex(&pt)?.norm() / h.quartic.eval_abs_terms(&pt).max(f64::MIN_POSITIVE);
        worst = worst.max(v);
    }
    let bridge = bridge_sample(&kappa, eps)?;
    let ok = config_ok && worst < 1e-9 && bridge < crate::sweeps::BRIDGE_TOL;
    out["kappa"] = to_value(&kappa)?;
    out["abcd"] = to_value(&abcd)?;
    out["hudson_coefficients"] = to_value(&coeffs)?;
    out["node_residual"] = json!(worst);
    out["bridge_rel_err"] = json!(bridge);
    Ok((ok, out))
}

/// Runs one request; `ok` in the report is false when a check failed.
pub fn eval_request(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    if !(g.eps > 0.0 && g.eps < 1.0) {
        return Err(Error::Input("--eps must lie in (0, 1)".into()));
    }
    if !(g.tol > 0.0) {
        return Err(Error::Input("--tol must be positive".into()));
    }
    let start = Instant::now();
    let (command, anchor, ok, result) = match &cli.command {
        Command::Forms(k) => ("forms", "forms.evaluate", true, to_value(&evaluate_forms(&k.point()?, g.eps)?)?),
        Command::InvertPeriod(k) => {
            let ip = inverse_period(&k.point()?, g.eps)?;
            ("invert-period", "correspondence.inverse_period", true, to_value(&ip)?)
        }
        Command::IgusaClebsch { params, kappa } => {
            let ic = match (params.get()?, kappa.given()) {
                (Some(p), false) => ic_from_params(&p)?,
                (None, true) => ic_from_forms(&kappa.point()?, g.eps)?,
                _ => return Err(Error::Input("give either --params or --tau/--z/--u".into())),
            };
            let wp = WeightedPoint::new(vec![ic.a, ic.b, ic.c, ic.d], IC_WEIGHTS.to_vec())?;
            let wp = if params.wp { wp_normalize(&wp) } else { wp };
            ("igusa-clebsch", "correspondence.igusa_clebsch", true, to_value(&wp)?)
        }
        Command::Fibration(p) => {
            let r = fiber_report(&p.required()?)?;
            ("fibration", "k3.fibrations", true, to_value(&r)?)
        }
        Command::Split { params, kappa } => {
            let (p, oracle) = match (params.get()?, kappa.given()) {
                (Some(p), false) => (p, None),
                (None, true) => {
                    let k = kappa.point()?;
                    if k.z != c(0.0, 0.0) {
                        return Err(Error::Input("the split case needs z = 0".into()));
                    }
                    let p = K3Params::from_weighted(&inverse_period(&k, g.eps)?.point)?;
                    (p, Some([genus1_suite(k.tau, g.eps)?.j, genus1_suite(k.u, g.eps)?.j]))
                }
                _ => return Err(Error::Input("give either --params or --tau/--u".into())),
            };
            let s = split_j_pair(&p)?;
            let mut v = to_value(&s)?;
            if let Some(o) = oracle {
                v["genus_one_j"] = to_value(&o)?;
            }
            ("split", "correspondence.split", true, v)
        }
        Command::Kummer(k) => {
            let (ok, v) = kummer_result(k, g.eps)?;
            ("kummer", "kummer.configuration", ok, v)
        }
        Command::Verify {
            suite,
            samples,
            seed,
            jobs,
        } => {
            if *samples == 0 {
                return Err(Error::Input("--samples must be at least 1".into()));
            }
            let exact = matches!(suite, SuiteKind::Exact | SuiteKind::All)
                .then(|| run_exact_suite(*jobs))
                .transpose()?;
            let cfg = SweepConfig {
                samples: *samples,
                seed: *seed,
                eps: g.eps,
                wp_tol: g.tol,
            };
            let numeric = matches!(suite, SuiteKind::Numeric | SuiteKind::All)
                .then(|| run_numeric_suite(&cfg, *jobs))
                .transpose()?;
            let ok = exact.as_ref().map_or(true, |r| r.all_pass()) && numeric.as_ref().map_or(true, |r| r.all_pass());
            let v = to_value(&VerifyResult {
                suite: *suite,
                exact,
                numeric,
            })?;
            ("verify", "verify", ok, v)
        }
    };
    Ok(Report {
        command,
        ok,
        anchor,
        millis: start.elapsed().as_millis() as u64,
        result,
    })
}

/// Exit status: 0 success, 1 failed check, 2 input or domain error.
pub fn run(cli: Cli) -> ExitCode {
    let pretty = cli.global.pretty;
    match eval_request(&cli) {
        Ok(r) => {
            let s = if pretty {
                serde_json::to_string_pretty(&r)
            } else {
                serde_json::to_string(&r)
            };
            let mut out = std::io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(out, "{}", s.expect("report serializes"));
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::Identity { .. }) => {
            eprintln!("k3atlas: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("k3atlas: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn main() -> ExitCode {
    run(Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_and_params_parse() {
        assert_eq!(parse_complex("-0.5, 1").unwrap(), c(-0.5, 1.0));
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan,1").is_err());
        let p = parse_params("1,2,3,4").unwrap();
        assert_eq!(p.delta, c(4.0, 0.0));
        let q = parse_params("[1, [2, 0.5], 3, [4, 0]]").unwrap();
        assert_eq!(q.beta, c(2.0, 0.5));
        assert!(parse_params("1,2,3").is_err());
    }

    #[test]
    fn igusa_clebsch_request() {
        let cli = Cli::try_parse_from(["k3atlas", "igusa-clebsch", "--params", "1,1,1,1"]).unwrap();
        let r = eval_request(&cli).unwrap();
        let coords: Vec<f64> = r.result["coords"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
        assert_eq!(coords, vec![24.0, 36.0, 360.0, 4.0]);
        assert_eq!(r.result["weights"], json!([2, 4, 6, 10]));
    }

    #[test]
    fn bad_kappa_is_a_domain_error() {
        let cli = Cli::try_parse_from(["k3atlas", "forms", "--tau", "0,-1", "--u", "0,1"]).unwrap();
        assert!(matches!(eval_request(&cli), Err(Error::Domain(_))));
    }
}
