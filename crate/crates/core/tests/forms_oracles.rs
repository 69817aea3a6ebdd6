use k3atlas::forms::{
    automorphy_det, evaluate_forms, sp4_act, sp4_to_isometry, IsometryMatrix, Sp4Matrix,
};
use k3atlas::numerics::{c, Complex, SiegelPoint};
use k3atlas::sweeps::{rel_err, Sampler};
use k3atlas::theta::{genus1_suite, syzygy_tables, theta_constant_g2, ThetaChar};
use proptest::prelude::*;

const EPS: f64 = 1e-12;

fn arb_kappa() -> impl Strategy<Value = SiegelPoint> {
    any::<u64>().prop_map(|s| Sampler::new(s).kappa())
}

#[test]
fn diagonal_forms_factor_through_genus_one() {
    for (t, u) in [(c(0.0, 1.0), c(0.0, 2.0)), (c(0.3, 0.9), c(-0.2, 1.3)), (c(-0.45, 1.1), c(0.1, 0.85))] {
        let f = evaluate_forms(&SiegelPoint::diagonal(t, u).unwrap(), EPS).unwrap();
        let (a, b) = (genus1_suite(t, EPS).unwrap(), genus1_suite(u, EPS).unwrap());
        // E6(i) = 0, so compare on a scale of at least one
        let close = |x: Complex, y: Complex| (x - y).norm() <= 1e-10 * x.norm().max(y.norm()).max(1.0);
        assert!(close(f.e4, a.e4 * b.e4));
        assert!(close(f.e6, a.e6 * b.e6));
        assert!(rel_err(f.c12, a.delta * b.delta) < 1e-9);
        assert!(f.c10.norm() < 1e-12 * (a.delta * b.delta).norm());
    }
}

#[test]
fn census() {
    let t = syzygy_tables();
    assert_eq!(t.gopel.len(), 15);
    assert_eq!(t.asyzygous_triples.len(), 60);
    assert_eq!(ThetaChar::even().len(), 10);
    assert_eq!(ThetaChar::odd().len(), 6);
}

#[test]
fn odd_theta_constants_vanish() {
    let k = SiegelPoint::new(c(0.1, 1.0), c(0.2, 0.1), c(-0.3, 1.2)).unwrap();
    for m in ThetaChar::odd() {
        assert!(theta_constant_g2(&k, &m, EPS).unwrap().value.norm() < 1e-12);
    }
}

fn word(seed: u64) -> Sp4Matrix {
    let mut s = Sampler::new(seed);
    // short words keep gκ well inside the half-space
    loop {
        let w = s.word();
        if w.letters.len() <= 3 {
            return w.matrix;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn automorphy_under_random_words(k in arb_kappa(), seed in any::<u64>()) {
        let g = word(seed);
        let gk = sp4_act(&g, &k).unwrap();
        prop_assume!(gk.margins().lambda_min > 0.25);
        let f = evaluate_forms(&k, EPS).unwrap();
        let h = evaluate_forms(&gk, EPS).unwrap();
        let j = automorphy_det(&g, &k);
        for (x, y, w) in [(f.e4, h.e4, 4), (f.e6, h.e6, 6), (f.c10, h.c10, 10), (f.c12, h.c12, 12)] {
            prop_assert!(rel_err(y, j.powu(w) * x) < 1e-8, "weight {} err {}", w, rel_err(y, j.powu(w) * x));
        }
    }
}

/// Exterior square of g on e_i∧e_j, i < j.
fn wedge2(g: &Sp4Matrix) -> Vec<Vec<i128>> {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let m = |r: usize, c: usize| g.0[r][c] as i128;
    pairs
        .iter()
        .map(|&(k, l)| pairs.iter().map(|&(i, j)| m(k, i) * m(l, j) - m(l, i) * m(k, j)).collect())
        .collect()
}

/// Characteristic polynomial det(xI − A), leading coefficient first (Faddeev–LeVerrier).
fn charpoly(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let mut coeffs = vec![1i128];
    let mut m: Vec<Vec<i128>> = vec![vec![0; n]; n];
    for k in 1..=n {
        let mut am = mul(a, &m);
        for i in 0..n {
            am[i][i] += coeffs[k - 1];
        }
        m = am;
        let am = mul(a, &m);
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0);
        coeffs.push(-tr / k as i128);
    }
    coeffs
}

/// Quotient by (x − 1), asserting zero remainder.
fn div_x_minus_1(p: &[i128]) -> Vec<i128> {
    let mut q = Vec::with_capacity(p.len() - 1);
    let mut acc = 0i128;
    for &c in &p[..p.len() - 1] {
        acc = acc + c;
        q.push(acc);
    }
    assert_eq!(acc + p[p.len() - 1], 0, "1 is not an eigenvalue");
    q
}

fn iso_i128(m: &IsometryMatrix) -> Vec<Vec<i128>> {
    m.0.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

#[test]
fn isometry_matches_exterior_square() {
    for seed in 0..40 {
        let g = Sampler::new(seed).word().matrix;
        let m = sp4_to_isometry(&g).unwrap();
        assert!(m.preserves_gram());
        let want = div_x_minus_1(&charpoly(&wedge2(&g)));
        assert_eq!(charpoly(&iso_i128(&m)), want, "seed {seed}");
    }
}

#[test]
fn involution_acts_as_inverse() {
    let k = SiegelPoint::new(c(0.1, 1.1), c(0.05, 0.2), c(-0.2, 0.9)).unwrap();
    let g = sp4_act(&Sp4Matrix::involution(), &k).unwrap();
    let km = k.matrix();
    let gm = g.matrix();
    // κ · (−κ⁻¹) = −I
    let p: Complex = km[0][0] * gm[0][0] + km[0][1] * gm[1][0];
    assert!((p + 1.0).norm() < 1e-12);
}
