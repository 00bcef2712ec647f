use monopot_core::clifford::blade_product_sign;
use monopot_core::terms::DownstreamChain;
use monopot_core::{AlgebraContext, Multivector, Point, TermSum};
use proptest::prelude::*;

fn mv(m: usize, coeffs: &[f64]) -> Multivector {
    let ctx = AlgebraContext::new(m).unwrap();
    let n = ctx.blade_count();
    Multivector::from_coeffs(ctx, coeffs.iter().cycle().take(n).copied().collect()).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..64)
}

proptest! {
    #[test]
    fn product_is_associative(m in 2usize..5, a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (mv(m, &a), mv(m, &b), mv(m, &c));
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        prop_assert!(l.approx_eq(&r, 1e-11 * (1.0 + l.max_abs())));
    }

    #[test]
    fn conjugation_is_an_anti_involution(m in 2usize..5, a in coeffs(), b in coeffs()) {
        let (a, b) = (mv(m, &a), mv(m, &b));
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        let l = (&a * &b).conjugate();
        let r = &b.conjugate() * &a.conjugate();
        prop_assert!(l.approx_eq(&r, 1e-12 * (1.0 + l.max_abs())));
    }

    #[test]
    fn embedded_vectors_square_to_minus_norm(m in 2usize..7, x0 in -3.0..3.0f64, x in prop::collection::vec(-3.0..3.0f64, 6)) {
        let ctx = AlgebraContext::new(m).unwrap();
        let v = Multivector::vector(ctx, x0, &x[..m]);
        let n2 = x0 * x0 + x[..m].iter().map(|t| t * t).sum::<f64>();
        let sq = &v * &v;
        prop_assert!(sq.approx_eq(&Multivector::scalar(ctx, -n2), 1e-12 * (1.0 + n2)));
        // x conj(x) = |x|^2
        let nn = &v * &v.conjugate();
        prop_assert!(nn.approx_eq(&Multivector::scalar(ctx, n2), 1e-12 * (1.0 + n2)));
    }

    #[test]
    fn blade_signs_are_consistent(a in 0usize..64, b in 0usize..64) {
        // e_A e_B = s e_{A^B} and e_B e_A = s' e_{A^B}; they differ by the commutation sign
        let (ga, gb, gab) = ((a.count_ones()) as i32, (b.count_ones()) as i32, ((a & b).count_ones()) as i32);
        let swap = if (ga * gb - gab) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(blade_product_sign(a, b), swap * blade_product_sign(b, a));
    }

    #[test]
    fn term_sum_partials_commute(m in 2usize..6, k in 1usize..4) {
        let ctx = AlgebraContext::new(m).unwrap();
        let chain = DownstreamChain::new(ctx, 4);
        let c = chain.get(k).unwrap();
        let l = c.d_x0().dirac_vec();
        let r = c.dirac_vec().d_x0();
        prop_assert!(l.sub(&r).is_empty());
    }

    #[test]
    fn term_sums_match_finite_differences(m in 2usize..5, x0 in 0.3..1.5f64, x in prop::collection::vec(-1.0..1.0f64, 4), lower in any::<bool>()) {
        let ctx = AlgebraContext::new(m).unwrap();
        let chain = DownstreamChain::new(ctx, 3);
        let x0 = if lower { -x0 } else { x0 };
        let p = Point::new(x0, x[..m].to_vec());
        let h = 1e-5;
        let c1 = chain.get(1).unwrap();
        let up = c1.evaluate(&Point::new(x0 + h, p.xvec.clone())).unwrap();
        let dn = c1.evaluate(&Point::new(x0 - h, p.xvec.clone())).unwrap();
        let fd = (&up - &dn).scale(0.5 / h);
        let exact = c1.d_x0().evaluate(&p).unwrap();
        prop_assert!((&fd - &exact).norm() <= 1e-6 * (1.0 + exact.norm()));
        // Dbar C_{-1} = d/dx0 C_{-1} = C_{-2}
        let c2 = chain.get(2).unwrap().evaluate(&p).unwrap();
        let dbar = c1.apply_cr(true).evaluate(&p).unwrap();
        prop_assert!((&dbar - &c2).norm() <= 1e-12 * (1.0 + c2.norm()));
    }
}

#[test]
fn downstream_chain_is_exactly_monogenic() {
    for m in 2..=6 {
        let ctx = AlgebraContext::new(m).unwrap();
        let chain = DownstreamChain::new(ctx, 6);
        for k in 1..=6 {
            let c = chain.get(k).unwrap();
            assert!(c.apply_cr(false).is_empty(), "m = {m}, k = {k}");
            assert!(!c.apply_cr(true).is_empty());
        }
    }
}

#[test]
fn green_function_is_harmonic_but_not_monogenic() {
    let ctx = AlgebraContext::new(3).unwrap();
    let g = TermSum::green_scalar(ctx);
    let lap = g.d_x0().d_x0().add(&g.dirac_vec().dirac_vec().scaled(-1.0));
    assert!(lap.is_empty());
    assert!(!g.apply_cr(false).is_empty());
}
