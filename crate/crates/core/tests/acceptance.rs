//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use k3atlas::kummer::{run_exact_suite, SuiteStatus};
use k3atlas::numerics::I;
use k3atlas::numerics::SiegelPoint;
use k3atlas::sweeps::{
    bridge, humbert, ic_consistency, isometry, modularity, route_agreement, split_sample, Sampler, SweepCheck,
    SPLIT_REF_TOL, SPLIT_SYM_TOL, WP_TOL,
};
use k3atlas::theta::syzygy_tables;

const EPS: f64 = 1e-12;
const SEED: u64 = 7;

struct Line {
    pass: bool,
    text: String,
}

fn summarize(checks: &[SweepCheck]) -> (bool, String) {
    let pass = checks.iter().all(|c| c.pass);
    let text = checks
        .iter()
        .map(|c| format!("{} {:.2e}/{:.0e}", c.name.trim_start_matches("numeric."), c.max_err, c.tol))
        .collect::<Vec<_>>()
        .join(", ");
    (pass, text)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn exact_criteria() -> [Line; 2] {
    let (r, dt) = timed(|| run_exact_suite(0));
    let r = match r {
        Ok(r) => r,
        Err(e) => {
            let l = |n: &str| Line { pass: false, text: format!("{n}: error {e}") };
            return [l("exact suite"), l("P24 constant")];
        }
    };
    let failed: Vec<&str> = r
        .entries
        .iter()
        .filter(|e| e.status == SuiteStatus::Fail)
        .map(|e| e.identity_name.as_str())
        .collect();
    let c1 = Line {
        pass: r.total >= 40 && failed.is_empty() && dt < Duration::from_secs(300),
        text: format!(
            "exact suite: {}/{} identities pass in {:.1}s (need >= 40, < 300s){}",
            r.passed,
            r.total,
            dt.as_secs_f64(),
            if failed.is_empty() { String::new() } else { format!("; failing {failed:?}") }
        ),
    };
    let ok = |n: &str| r.entries.iter().any(|e| e.identity_name == n && e.status == SuiteStatus::Pass);
    let c = r.p24_constant.clone().unwrap_or_else(|| "none".into());
    let closes = ok("match.delta_p") && ok("match.delta_q") && ok("identity.p24");
    let c2 = Line {
        pass: c == "256" && ok("probe.p24_constant") && closes,
        text: format!("P24 constant: chain derives {c} (printed 254); delta identity closes exactly: {closes}"),
    };
    [c1, c2]
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let [c1, c2] = exact_criteria();
    lines.push(c1);
    lines.push(c2);

    let pts25 = Sampler::new(SEED).kappas(25);
    let (checks, dt) = timed(|| route_agreement(&pts25, EPS));
    let (pass, text) = summarize(&checks);
    lines.push(Line {
        pass: pass && dt < Duration::from_secs(30),
        text: format!("cusp routes, 25 points: {text}; {:.2}s (< 30s)", dt.as_secs_f64()),
    });

    let t = syzygy_tables();
    lines.push(Line {
        pass: t.gopel.len() == 15 && t.asyzygous_triples.len() == 60,
        text: format!("census: {} Goepel quadruples (15), {} asyzygous triples (60)", t.gopel.len(), t.asyzygous_triples.len()),
    });

    let pts10 = Sampler::new(SEED).kappas(10);
    let (pass, text) = summarize(&modularity(&pts10, EPS));
    lines.push(Line { pass, text: format!("modularity, 10 points: {text}") });

    let mut s = Sampler::new(SEED);
    let diag: Vec<SiegelPoint> = (0..10).map(|_| s.diagonal()).collect();
    let teq: Vec<SiegelPoint> = (0..10).map(|_| s.tau_equals_u()).collect();
    let (pass, text) = summarize(&humbert(&diag, &teq, EPS));
    lines.push(Line { pass, text: format!("Humbert, 10 + 10 points: {text}") });

    let (pass, text) = summarize(&[ic_consistency(&pts25, EPS, WP_TOL)]);
    lines.push(Line { pass, text: format!("IC correspondence, 25 points: {text}") });

    let head = SiegelPoint::diagonal(I, 2.0 * I).unwrap();
    lines.push(match split_sample(&head, EPS) {
        Ok(sp) => {
            let lit = [1728.0, 287496.0];
            let lit_err = sp.j_pair.iter().zip(lit).map(|(z, l)| (z - l).norm() / l).fold(0.0, f64::max);
            Line {
                pass: sp.ref_err <= SPLIT_REF_TOL && lit_err <= SPLIT_REF_TOL && sp.sym_err <= SPLIT_SYM_TOL,
                text: format!(
                    "split diag(i,2i): j = {{{:.4}, {:.4}}}, vs q-series {:.2e}/{:.0e}, symmetric functions {:.2e}/{:.0e}",
                    sp.j_pair[0].re, sp.j_pair[1].re, sp.ref_err, SPLIT_REF_TOL, sp.sym_err, SPLIT_SYM_TOL
                ),
            }
        }
        Err(e) => Line { pass: false, text: format!("split diag(i,2i): error {e}") },
    });

    let mut s = Sampler::new(SEED);
    let words: Vec<_> = (0..20).map(|_| s.word()).collect();
    let (pass, text) = summarize(&isometry(&words, &pts10));
    lines.push(Line { pass, text: format!("isometry, 20 words x 10 points: {text}") });

    let (pass, text) = summarize(&[bridge(&pts10, EPS)]);
    lines.push(Line { pass, text: format!("numeric/symbolic bridge, 10 points: {text}") });

    let mut all = true;
    for (i, l) in lines.iter().enumerate() {
        all &= l.pass;
        println!("criterion {:>2}: {} {}", i + 1, if l.pass { "PASS" } else { "FAIL" }, l.text);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
