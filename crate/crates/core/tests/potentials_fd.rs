use monopot_core::hyperfunctions::{fd_chain_residual, fd_dirac_residual, fd_laplacian_residual};
use monopot_core::{AlgebraContext, Component, Point, PotentialId, Potentials};
use proptest::prelude::*;

fn point(m: usize) -> impl Strategy<Value = Point> {
    (0.5..2.0f64, prop::collection::vec(-1.0..1.0f64, m + 1), any::<bool>()).prop_filter_map("shell", move |(rad, dir, lower)| {
        let n = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if n < 1e-3 {
            return None;
        }
        let x: Vec<f64> = dir.iter().map(|d| d / n * rad).collect();
        let x0 = if lower { -x[0].abs() } else { x[0].abs() };
        // even-dimensional lower potentials are singular on the negative axis
        let r = x[1..].iter().map(|t| t * t).sum::<f64>().sqrt();
        let clear = x0 > 0.0 || m % 2 == 1 || r > 0.05;
        (x0.abs() > 0.1 && clear).then(|| Point::new(x0, x[1..].to_vec()))
    })
}

fn battery(n: usize) -> impl Strategy<Value = (usize, Vec<Point>)> {
    (2usize..5).prop_flat_map(move |m| (Just(m), prop::collection::vec(point(m), n)))
}

fn ids(m: usize) -> Vec<PotentialId> {
    let mut v: Vec<PotentialId> = (1..=5).map(|k| PotentialId::c(-k)).collect();
    v.push(PotentialId::c(0));
    v.push(PotentialId::c(1));
    if m >= 3 {
        v.push(PotentialId::c(2));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potentials_are_monogenic((m, pts) in battery(4)) {
        let pots = Potentials::new(AlgebraContext::new(m).unwrap());
        for id in ids(m) {
            let rep = fd_dirac_residual(&pots, id, &pts, 1e-4).unwrap();
            prop_assert!(rep.max_rel() <= 1e-5, "m = {m}, {id}: {rep:?}");
        }
    }

    #[test]
    fn chain_steps_down((m, pts) in battery(4)) {
        let pots = Potentials::new(AlgebraContext::new(m).unwrap());
        for k in [-3, -1, 0, 1, 2] {
            if k == 2 && m < 3 {
                continue;
            }
            let rep = fd_chain_residual(&pots, k, &pts, 1e-4).unwrap();
            prop_assert!(rep.max_rel() <= 1e-5, "m = {m}, k = {k}: {rep:?}");
        }
    }

    #[test]
    fn components_are_harmonic((m, pts) in battery(3)) {
        let pots = Potentials::new(AlgebraContext::new(m).unwrap());
        for id in ids(m) {
            for comp in [Component::A, Component::B] {
                let rep = fd_laplacian_residual(&pots, PotentialId::new(comp, id.k), &pts, 1e-4).unwrap();
                prop_assert!(rep.max_rel() <= 1e-4, "m = {m}, {comp:?}{}: {rep:?}", id.k);
            }
        }
    }
}
