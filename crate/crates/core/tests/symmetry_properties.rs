mod common;

use darboux_core::dynamics::{hamiltonian_flow, IntegratorConfig};
use darboux_core::geometry::{d_eta, eta};
use darboux_core::hamiltonian::TranslationInvariant;
use darboux_core::sampling::{point, rng, uniform_vec, unit_vec, vector};
use darboux_core::symmetry::{
    check_equivariance, check_momentum_condition, momentum_condition_residual, ActionFamily, AlgebraElement,
    GroupAction, GroupElement,
};
use darboux_core::{Chart, Point, ScalarField};
use nalgebra::Vector3;
use proptest::prelude::*;

use common::max_abs_diff;

fn families() -> Vec<GroupAction> {
    vec![
        GroupAction::new(ActionFamily::LiftedTranslation { k: 2 }, Chart::symplectic(3).unwrap()).unwrap(),
        GroupAction::new(ActionFamily::LiftedRotationSo3, Chart::symplectic(3).unwrap()).unwrap(),
        GroupAction::new(ActionFamily::ContactTranslation { k: 1 }, Chart::contact(2).unwrap()).unwrap(),
    ]
}

#[test]
fn momentum_condition_at_a_thousand_points() {
    for action in families() {
        let mut r = rng(5);
        let worst = (0..1000)
            .map(|_| check_momentum_condition(&action, &point(&mut r, action.chart(), 2.0)).unwrap())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{}: {worst:e}", action.family().name());
    }
}

#[test]
fn so3_equivariance_at_a_thousand_samples() {
    let action = &families()[1];
    let mut r = rng(6);
    for _ in 0..1000 {
        let g = action.sample_element(&mut r, 1.0);
        let pt = point(&mut r, action.chart(), 2.0);
        assert!(check_equivariance(action, &g, &pt).unwrap() < 1e-12);
    }
}

#[test]
fn rodrigues_quarter_turn() {
    let action = &families()[1];
    let xi = AlgebraElement::new(vec![0.0, 0.0, 1.0]).unwrap();
    let g = action.exp(&xi, std::f64::consts::FRAC_PI_2).unwrap();
    let pt = Point::new(action.chart(), vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
    let image = action.act(&g, &pt).unwrap();
    assert!(max_abs_diff(image.coords(), &[0.0, 1.0, 0.0, -2.0, 0.0, 0.0]) < 1e-15);
}

#[test]
fn momentum_examples() {
    let t = GroupAction::new(ActionFamily::LiftedTranslation { k: 2 }, Chart::symplectic(2).unwrap()).unwrap();
    let pt = Point::new(t.chart(), vec![4.0, -7.0, 3.0, -1.0]).unwrap();
    assert_eq!(t.momentum(&pt).unwrap().components(), &[3.0, -1.0]);
    let so3 = &families()[1];
    let pt = Point::new(so3.chart(), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
    assert_eq!(so3.momentum(&pt).unwrap().components(), &[0.0, 0.0, 1.0]);
}

#[test]
fn zero_contact_level_is_preserved_by_the_flow() {
    // H depends on q₂ but not q₁, so only the first translation is a symmetry
    let chart = Chart::contact(2).unwrap();
    let gamma = 0.25;
    let h = ScalarField::new(chart, "H", move |x| {
        (x[2] * x[2] + x[3] * x[3]) / 2.0 + x[1].powi(2) + 0.3 * x[1].sin() + gamma * x[4]
    });
    let action = GroupAction::new(ActionFamily::ContactTranslation { k: 1 }, chart).unwrap();
    let x0 = Point::new(chart, vec![0.4, 0.8, 0.0, -0.5, 1.0]).unwrap();
    let traj = hamiltonian_flow(&h, &x0, &IntegratorConfig::rk4(1e-3, 5.0)).unwrap();
    for i in 0..traj.len() {
        let j = action.momentum(&traj.point(i)).unwrap();
        assert!(j.components()[0].abs() < 1e-9);
    }
}

#[test]
fn symplectic_level_set_is_invariant() {
    let chart = Chart::symplectic(2).unwrap();
    let h = ScalarField::new(chart, "H", |x| (x[2] * x[2] + x[3] * x[3]) / 2.0 + x[1].cos() + x[2] * x[3]);
    let action = GroupAction::new(ActionFamily::LiftedTranslation { k: 1 }, chart).unwrap();
    let x0 = Point::new(chart, vec![0.0, 0.3, 0.7, -0.2]).unwrap();
    let mu = action.momentum(&x0).unwrap();
    let traj = hamiltonian_flow(&h, &x0, &IntegratorConfig::rk4(1e-3, 5.0)).unwrap();
    for i in 0..traj.len() {
        assert!(action.momentum(&traj.point(i)).unwrap().distance(&mu) < 1e-7);
    }
}

#[test]
fn momentum_dissipation_requires_invariance() {
    use darboux_core::symmetry::momentum_dissipation_check;
    let chart = Chart::contact(1).unwrap();
    let h = ScalarField::new(chart, "H", |x| x[1] * x[1] / 2.0 + x[0] * x[0]);
    let action = GroupAction::new(ActionFamily::ContactTranslation { k: 1 }, chart).unwrap();
    let x0 = Point::new(chart, vec![0.5, 0.0, 0.0]).unwrap();
    let traj = hamiltonian_flow(&h, &x0, &IntegratorConfig::rk4(1e-2, 1.0)).unwrap();
    assert!(momentum_dissipation_check(&action, &h, &traj, 0).is_err());

    let free = TranslationInvariant {
        mass: 1.0,
        drift: vec![],
        gamma: 0.2,
    }
    .field(chart)
    .unwrap();
    let x0 = Point::new(chart, vec![0.5, 0.0, 1.0]).unwrap();
    let traj = hamiltonian_flow(&free, &x0, &IntegratorConfig::rk4(1e-2, 1.0)).unwrap();
    let r = momentum_dissipation_check(&action, &free, &traj, 0).unwrap();
    assert!(r.iter().all(|v| *v == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generators_match_difference_quotients(seed in any::<u64>()) {
        let mut r = rng(seed);
        for action in families() {
            let pt = point(&mut r, action.chart(), 2.0);
            let xi = AlgebraElement::new(uniform_vec(&mut r, action.algebra_dim(), 1.0)).unwrap();
            let h = 1e-5;
            let fwd = action.act(&action.exp(&xi, h).unwrap(), &pt).unwrap();
            let bwd = action.act(&action.exp(&xi, -h).unwrap(), &pt).unwrap();
            let fd: Vec<f64> = fwd.coords().iter().zip(bwd.coords()).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            let gen = action.generator(&xi, &pt).unwrap();
            prop_assert!(max_abs_diff(gen.components(), &fd) < 1e-7);
        }
    }

    #[test]
    fn momentum_residual_is_scale_invariant(seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut r = rng(seed);
        let action = &families()[1];
        let pt = point(&mut r, action.chart(), 2.0);
        let xi = uniform_vec(&mut r, 3, 1.0);
        let a = momentum_condition_residual(action, &AlgebraElement::new(xi.clone()).unwrap(), &pt).unwrap();
        let scaled = AlgebraElement::new(xi.iter().map(|x| c * x).collect()).unwrap();
        let b = momentum_condition_residual(action, &scaled, &pt).unwrap();
        prop_assert!(a < 1e-6 && b < 1e-6);
    }

    #[test]
    fn abelian_momenta_are_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        for action in families().into_iter().filter(|a| a.family().is_abelian()) {
            let g = action.sample_element(&mut r, 3.0);
            let pt = point(&mut r, action.chart(), 2.0);
            prop_assert!(check_equivariance(&action, &g, &pt).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rotations_preserve_norms_and_cross_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let action = &families()[1];
        let g = action.sample_element(&mut r, 1.0);
        let GroupElement::Rotation(o) = g.clone() else { unreachable!() };
        let pt = point(&mut r, action.chart(), 2.0);
        let image = action.act(&g, &pt).unwrap();
        let (q, p) = (Vector3::from_column_slice(pt.q()), Vector3::from_column_slice(pt.p()));
        let (oq, op) = (Vector3::from_column_slice(image.q()), Vector3::from_column_slice(image.p()));
        prop_assert!((oq.norm() - q.norm()).abs() < 1e-12);
        prop_assert!((op.norm() - p.norm()).abs() < 1e-12);
        prop_assert!((oq.cross(&op) - o * q.cross(&p)).amax() < 1e-12);
    }

    #[test]
    fn one_parameter_subgroups(seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let mut r = rng(seed);
        for action in families() {
            let xi = AlgebraElement::new(unit_vec(&mut r, action.algebra_dim())).unwrap();
            let lhs = action.compose(&action.exp(&xi, s).unwrap(), &action.exp(&xi, t).unwrap()).unwrap();
            let rhs = action.exp(&xi, s + t).unwrap();
            let pt = point(&mut r, action.chart(), 2.0);
            let (a, b) = (action.act(&lhs, &pt).unwrap(), action.act(&rhs, &pt).unwrap());
            prop_assert!(max_abs_diff(a.coords(), b.coords()) < 1e-12);
        }
    }

    #[test]
    fn contact_translations_are_contactomorphisms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let action = &families()[2];
        let g = action.sample_element(&mut r, 3.0);
        let pt = point(&mut r, action.chart(), 2.0);
        let image = action.act(&g, &pt).unwrap();
        let (u, v) = (vector(&mut r, &pt), vector(&mut r, &pt));
        let (gu, gv) = (action.pushforward(&g, &u).unwrap(), action.pushforward(&g, &v).unwrap());
        prop_assert!((eta(&image, &gu).unwrap() - eta(&pt, &u).unwrap()).abs() < 1e-12);
        prop_assert!((d_eta(&image, &gu, &gv).unwrap() - d_eta(&pt, &u, &v).unwrap()).abs() < 1e-12);
    }
}
