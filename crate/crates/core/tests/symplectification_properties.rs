mod common;

use darboux_core::corpus::{builtin, complement_dimensions, legendrian_lagrangian_agreement};
use darboux_core::geometry::{classify_tangent_space, d_eta, SubmanifoldType};
use darboux_core::sampling::{point, rng, vector};
use darboux_core::symmetry::{ActionFamily, GroupAction};
use darboux_core::symplectification::{
    base_point, closedness_residual, commutativity_check, lift_point, lift_submanifold,
    lifted_action_invariance_check, lifted_momentum, lifted_momentum_direct, mu_nonzero_probe, omega_determinant,
    omega_lifted,
};
use darboux_core::{Chart, Point, TangentVector};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn legendrian_iff_lagrangian_on_the_corpus() {
    let entries = legendrian_lagrangian_agreement(7, 100).unwrap();
    assert!(entries.len() >= 5);
    for e in &entries {
        assert_eq!(e.disagreements, 0, "{}", e.name);
        assert_eq!(e.samples, 100);
    }
    assert!(entries.iter().any(|e| e.legendrian == 100));
    assert!(entries.iter().any(|e| e.legendrian == 0));
}

#[test]
fn corpus_dimension_formulas() {
    let mut r = rng(13);
    for sub in builtin() {
        for b in sub.samples(&mut r, 20) {
            let d = complement_dimensions(&b).unwrap();
            assert!(d.holds(), "{}: {d:?}", sub.name);
        }
    }
}

#[test]
fn vertical_coisotropics_lift_to_coisotropics() {
    let mut r = rng(14);
    for sub in builtin().into_iter().filter(|s| s.expected == SubmanifoldType::Coisotropic) {
        for b in sub.samples(&mut r, 10) {
            let lifted = lift_submanifold(std::slice::from_ref(&b), r.gen_range(-1.0..1.0)).unwrap();
            assert_eq!(lifted[0].rank(), b.rank() + 1);
            assert_eq!(classify_tangent_space(&lifted[0]).unwrap(), SubmanifoldType::Coisotropic, "{}", sub.name);
        }
    }
}

#[test]
fn commutativity_at_zero_level() {
    for (n, k) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
        let rep = commutativity_check(n, k, &vec![0.0; k], 42, 1000).unwrap();
        assert_eq!(rep.samples, 1000);
        assert!(rep.max_residual < 1e-12, "({n},{k}): {:e}", rep.max_residual);
        assert!(rep.well_defined_residual < 1e-12, "({n},{k}): {:e}", rep.well_defined_residual);
    }
}

#[test]
fn nonzero_level_breaks_the_product_structure() {
    for t in [0.5, -1.0, 2.0] {
        let probe = mu_nonzero_probe(2, 1, &[0.8], t, 5).unwrap();
        assert!(probe.product_structure_fails);
        assert!((probe.lifted_momentum[0] - t.exp() * probe.base_momentum[0]).abs() < 1e-12);
    }
}

#[test]
fn lifted_translations_preserve_alpha_and_omega() {
    let action = GroupAction::new(ActionFamily::ContactTranslation { k: 2 }, Chart::contact(3).unwrap()).unwrap();
    let mut r = rng(15);
    for _ in 0..100 {
        let g = action.sample_element(&mut r, 3.0);
        let pt = lift_point(&point(&mut r, action.chart(), 2.0), r.gen_range(-1.0..1.0)).unwrap();
        let rep = lifted_action_invariance_check(&action, &g, &pt, &mut r, 5).unwrap();
        assert!(rep.alpha < 1e-12 && rep.omega < 1e-12, "{rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn omega_is_closed(seed in any::<u64>(), n in 1usize..=3) {
        let pt = point(&mut rng(seed), Chart::symplectified(n).unwrap(), 1.0);
        prop_assert!(closedness_residual(&pt).unwrap() < 1e-6);
    }

    #[test]
    fn omega_nondegenerate(seed in any::<u64>(), n in 1usize..=3) {
        let pt = point(&mut rng(seed), Chart::symplectified(n).unwrap(), 1.5);
        let det = omega_determinant(&pt).unwrap();
        prop_assert!(det.abs() > 1e-12);
        let expected = (2.0 * (n as f64 + 1.0) * pt.t().unwrap()).exp();
        prop_assert!((det / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn omega_on_a_t_slice_is_scaled_deta(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let pt = point(&mut r, Chart::symplectified(n).unwrap(), 1.5);
        let t_slot = 2 * n + 1;
        let strip_t = |w: TangentVector| {
            let mut c = w.into_components();
            c[t_slot] = 0.0;
            TangentVector::new(&pt, c).unwrap()
        };
        let u = strip_t(vector(&mut r, &pt));
        let v = strip_t(vector(&mut r, &pt));
        let x = base_point(&pt).unwrap();
        let ub = TangentVector::new(&x, u.components()[..t_slot].to_vec()).unwrap();
        let vb = TangentVector::new(&x, v.components()[..t_slot].to_vec()).unwrap();
        let lhs = omega_lifted(&pt, &u, &v).unwrap();
        let rhs = pt.t().unwrap().exp() * d_eta(&x, &ub, &vb).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_is_antisymmetric(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let pt = point(&mut r, Chart::symplectified(n).unwrap(), 2.0);
        let (u, v) = (vector(&mut r, &pt), vector(&mut r, &pt));
        prop_assert_eq!(omega_lifted(&pt, &u, &v).unwrap(), -omega_lifted(&pt, &v, &u).unwrap());
    }

    #[test]
    fn lifted_momentum_scales_by_exp_t(seed in any::<u64>(), t in -2.0f64..2.0) {
        let mut r = rng(seed);
        let action = GroupAction::new(ActionFamily::ContactTranslation { k: 2 }, Chart::contact(2).unwrap()).unwrap();
        let x = point(&mut r, action.chart(), 2.0);
        let pt = lift_point(&x, t).unwrap();
        let a = lifted_momentum(&action, &pt).unwrap();
        let b = lifted_momentum_direct(&action, &pt).unwrap();
        prop_assert!(a.distance(&b) < 1e-12);
        let j = action.momentum(&x).unwrap();
        for (l, m) in a.components().iter().zip(j.components()) {
            prop_assert!((l - t.exp() * m).abs() < 1e-12 * t.exp().max(1.0) * m.abs().max(1.0));
        }
        // J̃⁻¹(0) = J⁻¹(0) × ℝ
        let mut c = x.into_coords();
        c[2] = 0.0;
        c[3] = 0.0;
        let on_zero = lift_point(&Point::new(action.chart(), c).unwrap(), t).unwrap();
        prop_assert!(lifted_momentum(&action, &on_zero).unwrap().components().iter().all(|m| *m == 0.0));
    }
}
