use std::collections::HashSet;

use k3atlas::forms::kummer_abcd;
use k3atlas::kummer::{build_hudson, cached_chain, run_exact_suite, SuiteStatus};
use k3atlas::numerics::{c, SiegelPoint};
use k3atlas::sweeps::{bridge_sample, Sampler};

#[test]
fn exact_suite_report_shape() {
    let r = run_exact_suite(0).unwrap();
    assert!(r.total >= 40);
    assert_eq!(r.passed + r.failed, r.total);
    let names: HashSet<_> = r.entries.iter().map(|e| e.identity_name.as_str()).collect();
    assert_eq!(names.len(), r.total, "identity names are unique");
    assert!(r.entries.iter().all(|e| !e.anchor.is_empty()));
    for e in r.entries.iter().filter(|e| e.status == SuiteStatus::Fail) {
        panic!("{} failed: {:?} {:?}", e.identity_name, e.detail, e.witness_terms);
    }
    assert_eq!(r.p24_constant.as_deref(), Some("256"));
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["entries"][0]["status"], "PASS");
    assert!(v["entries"][0].get("witness_terms").is_none());
}

#[test]
fn numeric_hudson_nodes_at_theta_values() {
    let h = build_hudson().unwrap();
    let k = SiegelPoint::diagonal(c(0.0, 1.0), c(0.0, 2.0)).unwrap();
    let abcd = kummer_abcd(&k, 1e-12).unwrap();
    // denominators stay away from zero off the diagonal-product locus of the coefficients
    for r in &h.coefficients {
        assert!(r.eval_complex(&abcd).unwrap().re.is_finite());
    }
    let mut pt = abcd.to_vec();
    pt.extend([c(0.0, 0.0); 4]);
    for (name, node) in &h.nodes {
        for (i, p) in node.iter().enumerate() {
            pt[4 + i] = p.eval_complex(&abcd).unwrap();
        }
        let v = h.quartic.eval_complex(&pt).unwrap().norm() / h.quartic.eval_abs_terms(&pt);
        assert!(v < 1e-12, "node {name}: {v}");
    }
}

#[test]
fn bridge_at_seeded_points() {
    cached_chain().unwrap();
    let mut s = Sampler::new(99);
    for k in s.kappas(4) {
        let e = bridge_sample(&k, 1e-12).unwrap();
        assert!(e < 1e-9, "{e}");
    }
}
