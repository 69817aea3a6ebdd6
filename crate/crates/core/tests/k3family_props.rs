use k3atlas::k3family::{
    alternate_fibration, ic_from_params, quartic_eval, quartic_gradient, split_j_pair, two_isogeny_point,
    two_isogeny_quotient, vgs_involution_apply, K3Params, IC_WEIGHTS,
};
use k3atlas::numerics::{c, wp_residual, Complex, WeightedPoint};
use k3atlas::theta::genus1_suite;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn arb_c() -> impl Strategy<Value = Complex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
}

fn arb_params() -> impl Strategy<Value = K3Params> {
    (arb_c(), arb_c(), arb_c(), arb_c())
        .prop_filter("γ away from zero", |(_, _, g, _)| g.norm() > 0.1)
        .prop_map(|(a, b, g, d)| K3Params::new(a, b, g, d))
}

/// A point of the quartic with the given x, z, w, solving for y.
fn point_on(p: &K3Params, x: Complex, z: Complex, w: Complex) -> [Complex; 4] {
    let rhs = 4.0 * x * x * x * z - 3.0 * p.alpha * x * z * w * w - p.beta * z * w * w * w - p.gamma * x * z * z * w
        + 0.5 * (p.delta * z * z * w * w + w * w * w * w);
    [x, (rhs / (z * w)).sqrt(), z, w]
}

fn relative_residual(p: &K3Params, pt: &[Complex; 4]) -> f64 {
    let scale = pt.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(4)
        * [p.alpha, p.beta, p.gamma, p.delta].iter().map(|z| z.norm()).fold(1.0, f64::max);
    quartic_eval(p, pt).unwrap().norm() / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ic_is_weighted_covariant(p in arb_params(), t in arb_c()) {
        prop_assume!(t.norm() > 0.3 && t.norm() < 1.5);
        let w = p.to_weighted().unwrap().scaled(t);
        let q = K3Params::from_weighted(&w).unwrap();
        let a = ic_from_params(&p).unwrap();
        let b = ic_from_params(&q).unwrap();
        // parameter weights (2,3,5,6) become IC weights (2,4,6,10) with t ↦ t³
        let scaled = WeightedPoint::new(vec![a.a, a.b, a.c, a.d], IC_WEIGHTS.to_vec()).unwrap().scaled(t.powu(3));
        for (x, y) in scaled.coords.iter().zip([b.a, b.b, b.c, b.d]) {
            prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(y.norm()).max(1e-300));
        }
        prop_assert!(wp_residual(&a.to_weighted().unwrap(), &b.to_weighted().unwrap()).unwrap().unwrap() < 1e-9);
    }

    #[test]
    fn involution_preserves_the_quartic(p in arb_params(), x in arb_c(), z in arb_c(), w in arb_c()) {
        prop_assume!(z.norm() > 0.2 && w.norm() > 0.2);
        let pt = point_on(&p, x, z, w);
        prop_assert!(relative_residual(&p, &pt) < 1e-12);
        let img = vgs_involution_apply(&p, &pt).unwrap();
        prop_assert!(relative_residual(&p, &img) < 1e-9);
        // Ψ∘Ψ is the identity up to a scalar
        let back = vgs_involution_apply(&p, &img).unwrap();
        let k = (0..4).max_by(|&i, &j| pt[i].norm().total_cmp(&pt[j].norm())).unwrap();
        let s = back[k] / pt[k];
        for i in 0..4 {
            prop_assert!((back[i] - s * pt[i]).norm() <= 1e-8 * back[k].norm());
        }
    }

    #[test]
    fn isogeny_maps_points_to_the_quotient(pp in arb_c(), qq in arb_c(), z in arb_c()) {
        prop_assume!(z.norm() > 0.2);
        let y = (z * z * z + pp * z * z + qq * z).sqrt();
        let (z2, y2) = two_isogeny_point(qq, z, y).unwrap();
        let (p2, q2) = (-2.0 * pp, pp * pp - 4.0 * qq);
        let lhs = y2 * y2;
        let rhs = z2 * z2 * z2 + p2 * z2 * z2 + q2 * z2;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(rhs.norm()).max(1.0));
    }

    #[test]
    fn split_pair_recovers_genus_one_j(tr in -0.5f64..0.5, ti in 0.9f64..1.6, ur in -0.5f64..0.5, ui in 0.9f64..1.6) {
        let (t, u) = (c(tr, ti), c(ur, ui));
        let (a, b) = (genus1_suite(t, 1e-14).unwrap(), genus1_suite(u, 1e-14).unwrap());
        // params of E_τ × E_u: α = E4E4, β = E6E6, γ = 0, δ = 2¹²3⁶ΔΔ
        let p = K3Params::new(a.e4 * b.e4, a.e6 * b.e6, c(0.0, 0.0), a.delta * b.delta * (4096.0 * 729.0));
        let s = split_j_pair(&p).unwrap();
        let mut want = [a.j, b.j];
        want.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let err = |x: Complex, y: Complex| (x - y).norm() / x.norm().max(y.norm()).max(1.0);
        prop_assert!(err(s.j[0], want[0]).max(err(s.j[1], want[1])) < 1e-8 || err(s.j[0], want[1]).max(err(s.j[1], want[0])) < 1e-8);
    }
}

#[test]
fn special_points_of_the_quartic() {
    let p = K3Params::new(c(0.3, 0.0), c(-1.0, 0.5), c(0.7, 0.1), c(1.2, 0.0));
    let z0 = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    for pt in [[z0, one, z0, z0], [z0, z0, one, z0]] {
        assert_eq!(quartic_eval(&p, &pt).unwrap(), z0);
        assert!(quartic_gradient(&p, &pt).unwrap().iter().all(|g| *g == z0));
    }
}

#[test]
fn quotient_of_the_alternate_fibration() {
    let a = alternate_fibration().unwrap();
    let y = two_isogeny_quotient(&a.two_torsion);
    let yy = two_isogeny_quotient(&y);
    // applying the quotient twice rescales P by 4 and Q by 16
    assert_eq!(yy.p, a.two_torsion.p.scale_i64(4));
    assert_eq!(yy.q, a.two_torsion.q.scale_i64(16));
    let lead = y.q.coefficients_in(4).last().unwrap().constant_term();
    assert_eq!(lead.to_f64(), Some(16.0));
}
