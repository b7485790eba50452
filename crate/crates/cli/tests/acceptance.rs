//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Run with `cargo test -p darboux-cli --test acceptance`.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use darboux_core::corpus::{builtin, complement_dimensions, legendrian_lagrangian_agreement};
use darboux_core::dynamics::{hamiltonian_flow, monitor, IntegratorConfig, Trajectory};
use darboux_core::geometry::{
    eta, eta_covector, flat_contact, flat_symplectic, horizontal_space, sharp_contact, sharp_lambda, sharp_symplectic,
    PointPosition, SubmanifoldType,
};
use darboux_core::hamiltonian::{
    divergence_contact, reeb_derivative, xh_contact, CentralPotential, ContactDamped, Polynomial, Potential,
    RadialPotential,
};
use darboux_core::reduction::{reduce_contact_translation, reduce_so3, ReducedSystem};
use darboux_core::sampling::{covector, point, rng, uniform_vec, vector};
use darboux_core::symmetry::{check_equivariance, check_momentum_condition, ActionFamily, GroupAction, GroupElement};
use darboux_core::symplectification::{commutativity_check, mu_nonzero_probe, omega_lifted};
use darboux_core::{Chart, Covector, Point, ScalarField, SubspaceBasis, TangentVector};
use rand::Rng;

struct Outcome {
    pass: bool,
    summary: String,
}

fn at_most(label: &str, residual: f64, tol: f64) -> (bool, String) {
    (residual < tol, format!("{label} = {residual:.3e} (< {tol:e})"))
}

fn combine(parts: Vec<(bool, String)>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|(p, _)| *p),
        summary: parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join("; "),
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_state_deviation(a: &Trajectory, b: &Trajectory) -> f64 {
    assert_eq!(a.len(), b.len());
    a.states().iter().zip(b.states()).map(|(x, y)| max_abs_diff(x, y)).fold(0.0, f64::max)
}

fn damped() -> ScalarField {
    ContactDamped {
        mass: 1.0,
        potential: Potential::Quadratic { stiffness: vec![1.0] },
        gamma: 0.1,
    }
    .field(Chart::contact(1).unwrap())
    .unwrap()
}

fn kepler() -> CentralPotential {
    CentralPotential {
        mass: 1.0,
        radial: RadialPotential::Kepler { k: 1.0 },
    }
}

fn damped_run() -> (Trajectory, f64) {
    let h = damped();
    let x0 = Point::new(h.chart(), vec![1.0, 0.0, 0.0]).unwrap();
    let start = Instant::now();
    let traj = hamiltonian_flow(&h, &x0, &IntegratorConfig::rk4(1e-3, 10.0)).unwrap();
    (traj, start.elapsed().as_secs_f64())
}

/// `q(t)` for `q̈ + γq̇ + q = 0`, `q(0) = 1`, `q̇(0) = 0`.
fn damped_newton(gamma: f64, t: f64) -> f64 {
    let a = gamma / 2.0;
    let w = (1.0 - a * a).sqrt();
    (-a * t).exp() * ((w * t).cos() + a / w * (w * t).sin())
}

fn criterion_1() -> Outcome {
    let (traj, seconds) = damped_run();
    let err = traj
        .times()
        .iter()
        .zip(traj.states())
        .map(|(t, x)| (x[0] - damped_newton(0.1, *t)).abs())
        .fold(0.0, f64::max);
    combine(vec![
        at_most("max |q - q_exact|", err, 1e-6),
        (seconds < 1.0, format!("runtime = {seconds:.3} s (< 1 s)")),
    ])
}

fn criterion_2() -> Outcome {
    let (traj, _) = damped_run();
    let h = damped();
    let h0 = h.value(&traj.point(0)).unwrap();
    let worst = (0..traj.len())
        .map(|i| {
            let e = h.value(&traj.point(i)).unwrap();
            (e - h0 * (-0.1 * traj.times()[i]).exp()).abs() / h0.abs()
        })
        .fold(0.0, f64::max);
    let rep = monitor(&traj, &h).unwrap();
    combine(vec![
        at_most("max |H(t) - H(0)e^(-0.1t)| / |H(0)|", worst, 1e-5),
        at_most("monitor relative decay", rep.relative_decay_residual.unwrap(), 1e-5),
    ])
}

/// Random polynomial of degree at most 3 that depends on `z`.
fn random_contact_polynomial<R: Rng>(r: &mut R, chart: Chart) -> ScalarField {
    let dim = chart.dim();
    let z = chart.z_index().unwrap();
    let mut terms: Vec<(f64, Vec<u32>)> = (0..8)
        .map(|_| {
            let mut e = vec![0u32; dim];
            for _ in 0..r.gen_range(1..=3) {
                e[r.gen_range(0..dim)] += 1;
            }
            (r.gen_range(-1.0..=1.0), e)
        })
        .collect();
    let mut e = vec![0u32; dim];
    e[z] = 1;
    terms.push((r.gen_range(0.2..=1.0), e.clone()));
    e[r.gen_range(0..dim)] += 1;
    terms.push((r.gen_range(0.2..=1.0), e));
    Polynomial { terms }.field(chart).unwrap()
}

/// `div X_H` by central differences of the components of `X_H`.
fn divergence_by_differences(h: &ScalarField, x: &Point) -> f64 {
    let step = 1e-4;
    (0..x.chart().dim())
        .map(|i| {
            let shifted = |s: f64| {
                let mut c = x.coords().to_vec();
                c[i] += s;
                xh_contact(h, &Point::new(x.chart(), c).unwrap()).unwrap().components()[i]
            };
            (shifted(step) - shifted(-step)) / (2.0 * step)
        })
        .sum()
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut parts = Vec::new();
    for n in 1..=3 {
        let chart = Chart::contact(n).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let h = random_contact_polynomial(&mut r, chart);
            let x = point(&mut r, chart, 1.0);
            let dz = reeb_derivative(&h, &x).unwrap();
            let core = divergence_contact(&h, &x).unwrap() + (n as f64 + 1.0) * dz;
            let oracle = divergence_by_differences(&h, &x) + (n as f64 + 1.0) * dz;
            worst = worst.max(core.abs()).max(oracle.abs());
        }
        parts.push(at_most(&format!("n = {n}: max |div X_H + (n+1) dH/dz|"), worst, 1e-5));
    }
    combine(parts)
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn criterion_4() -> Outcome {
    let h = kepler().field(Chart::symplectic(3).unwrap()).unwrap();
    let x0 = Point::new(h.chart(), vec![1.0, 0.2, -0.1, 0.1, 0.9, 0.3]).unwrap();
    let traj = hamiltonian_flow(&h, &x0, &IntegratorConfig::rk4(1e-3, 10.0)).unwrap();
    let e0 = h.value(&x0).unwrap();
    let l0 = cross(&x0.coords()[..3], &x0.coords()[3..]);
    let mut energy = 0.0f64;
    let mut l_drift = [0.0f64; 3];
    for (i, x) in traj.states().iter().enumerate() {
        energy = energy.max((h.value(&traj.point(i)).unwrap() - e0).abs());
        let l = cross(&x[..3], &x[3..]);
        for c in 0..3 {
            l_drift[c] = l_drift[c].max((l[c] - l0[c]).abs());
        }
    }
    combine(vec![
        at_most("energy drift", energy, 1e-8),
        at_most("L1 drift", l_drift[0], 1e-8),
        at_most("L2 drift", l_drift[1], 1e-8),
        at_most("L3 drift", l_drift[2], 1e-8),
    ])
}

/// Closed-form momentum maps and generators for the three families.
fn closed_form_momentum(family: ActionFamily, x: &[f64]) -> Vec<f64> {
    match family {
        ActionFamily::LiftedRotationSo3 => cross(&x[..3], &x[3..6]).to_vec(),
        ActionFamily::LiftedTranslation { k } | ActionFamily::ContactTranslation { k } => {
            let n = x.len() / 2;
            x[n..n + k].to_vec()
        }
    }
}

fn closed_form_generator(family: ActionFamily, i: usize, x: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; x.len()];
    match family {
        ActionFamily::LiftedRotationSo3 => {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            v[..3].copy_from_slice(&cross(&e, &x[..3]));
            v[3..].copy_from_slice(&cross(&e, &x[3..6]));
        }
        _ => v[i] = 1.0,
    }
    v
}

/// `|dĴ(ξ)(u) − ω(ξ_M, u)|` (symplectic) or `|Ĵ(ξ) + η(ξ_M)|` together with
/// `|dĴ(ξ)(u) − dη(ξ_M, u)|` (contact), for random `u`.
fn momentum_oracle<R: Rng>(family: ActionFamily, x: &[f64], r: &mut R) -> f64 {
    let dim = x.len();
    let n = dim / 2;
    let algebra = closed_form_momentum(family, x).len();
    let mut worst = 0.0f64;
    for i in 0..algebra {
        let g = closed_form_generator(family, i, x);
        let u = uniform_vec(r, dim, 1.0);
        let step = 1e-5;
        let shifted = |s: f64| {
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + s * b).collect();
            closed_form_momentum(family, &y)[i]
        };
        let dj = (shifted(step) - shifted(-step)) / (2.0 * step);
        // ω(a, b) = dη(a, b) = a_q·b_p − a_p·b_q
        let two_form = (0..n).map(|j| g[j] * u[n + j] - g[n + j] * u[j]).sum::<f64>();
        worst = worst.max((dj - two_form).abs());
        if let ActionFamily::ContactTranslation { .. } = family {
            let eta_g = g[2 * n] - (0..n).map(|j| x[n + j] * g[j]).sum::<f64>();
            worst = worst.max((closed_form_momentum(family, x)[i] + eta_g).abs());
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let families = [
        (ActionFamily::LiftedTranslation { k: 2 }, Chart::symplectic(3).unwrap()),
        (ActionFamily::LiftedRotationSo3, Chart::symplectic(3).unwrap()),
        (ActionFamily::ContactTranslation { k: 2 }, Chart::contact(3).unwrap()),
    ];
    let mut r = rng(5);
    let mut parts = Vec::new();
    for (family, chart) in families {
        let action = GroupAction::new(family, chart).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let x = point(&mut r, chart, 2.0);
            let coords = x.coords();
            let j = action.momentum(&x).unwrap();
            worst = worst
                .max(check_momentum_condition(&action, &x).unwrap())
                .max(max_abs_diff(j.components(), &closed_form_momentum(family, coords)))
                .max(momentum_oracle(family, coords, &mut r));
        }
        parts.push(at_most(&format!("{}: momentum condition", family.name()), worst, 1e-6));
    }
    combine(parts)
}

fn criterion_6() -> Outcome {
    let chart = Chart::symplectic(3).unwrap();
    let action = GroupAction::new(ActionFamily::LiftedRotationSo3, chart).unwrap();
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = point(&mut r, chart, 2.0);
        let g = action.exp(&action.basis(0), r.gen_range(-PI..=PI)).unwrap();
        let g = action
            .compose(&g, &action.exp(&action.basis(1), r.gen_range(-PI..=PI)).unwrap())
            .unwrap();
        let g = action
            .compose(&g, &action.exp(&action.basis(2), r.gen_range(-PI..=PI)).unwrap())
            .unwrap();
        worst = worst.max(check_equivariance(&action, &g, &x).unwrap());
        // J(Oq, Op) = O J(q, p)
        let GroupElement::Rotation(o) = &g else { unreachable!() };
        let rot = |v: &[f64]| -> Vec<f64> { (0..3).map(|i| (0..3).map(|j| o[(i, j)] * v[j]).sum()).collect() };
        let c = x.coords();
        let lhs = cross(&rot(&c[..3]), &rot(&c[3..]));
        let rhs = rot(&cross(&c[..3], &c[3..]));
        worst = worst.max(max_abs_diff(&lhs, &rhs));
    }
    combine(vec![at_most("max |J(g.x) - Ad*_(g^-1) J(x)|", worst, 1e-12)])
}

/// `H = |p|²/2 + 0.3 p₁ + p₁z/2 + q₂²/2 + q₂³/10 + 0.2 z` on the contact
/// chart `n = 2`, independent of `q₁`.
fn contact_invariant() -> ScalarField {
    let mono = |c: f64, e: [u32; 5]| (c, e.to_vec());
    Polynomial {
        terms: vec![
            mono(0.5, [0, 0, 2, 0, 0]),
            mono(0.5, [0, 0, 0, 2, 0]),
            mono(0.3, [0, 0, 1, 0, 0]),
            mono(0.5, [0, 0, 1, 0, 1]),
            mono(0.5, [0, 2, 0, 0, 0]),
            mono(0.1, [0, 3, 0, 0, 0]),
            mono(0.2, [0, 0, 0, 0, 1]),
        ],
    }
    .field(Chart::contact(2).unwrap())
    .unwrap()
}

fn kepler_reduction() -> (ReducedSystem, Point) {
    let red = reduce_so3(&kepler(), 1.0).unwrap();
    // planar orbit with q × p = (0, 0, 1)
    let x0 = Point::new(red.full_chart(), vec![1.2, 0.0, 0.0, 0.1, 1.0 / 1.2, 0.0]).unwrap();
    (red, x0)
}

fn contact_reduction() -> (ReducedSystem, Point) {
    let red = reduce_contact_translation(&contact_invariant(), 1, &[0.0]).unwrap();
    let x0 = Point::new(red.full_chart(), vec![0.4, -0.3, 0.0, 0.5, 0.2]).unwrap();
    (red, x0)
}

/// `max_t |π(Φ_t x₀) − Φ^μ_t(π x₀)|`, from two independent integrations.
fn commutation_deviation(red: &ReducedSystem, x0: &Point, t1: f64) -> f64 {
    let cfg = IntegratorConfig::rk4(1e-3, t1);
    let full = hamiltonian_flow(red.full_h(), x0, &cfg).unwrap();
    let reduced = hamiltonian_flow(red.reduced_h(), &red.project(x0).unwrap(), &cfg).unwrap();
    (0..full.len())
        .map(|i| max_abs_diff(red.project(&full.point(i)).unwrap().coords(), &reduced.states()[i]))
        .fold(0.0, f64::max)
}

/// `(|q|, q·p/|q|)`, the SO(3) quotient coordinates written out by hand.
fn radial_coordinates(x: &[f64]) -> [f64; 2] {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    [r, (x[0] * x[3] + x[1] * x[4] + x[2] * x[5]) / r]
}

fn criterion_7() -> Outcome {
    let (kred, kx0) = kepler_reduction();
    let (cred, cx0) = contact_reduction();
    let kepler_core = kred.check_commutation(&kx0, &IntegratorConfig::rk4(1e-3, 5.0)).unwrap().max_deviation;
    let contact_core = cred.check_commutation(&cx0, &IntegratorConfig::rk4(1e-3, 10.0)).unwrap().max_deviation;
    // the reduced Kepler flow against the hand-written quotient map
    let cfg = IntegratorConfig::rk4(1e-3, 5.0);
    let full = hamiltonian_flow(kred.full_h(), &kx0, &cfg).unwrap();
    let reduced = hamiltonian_flow(kred.reduced_h(), &Point::new(kred.reduced_chart(), radial_coordinates(kx0.coords()).to_vec()).unwrap(), &cfg).unwrap();
    let kepler_oracle = full
        .states()
        .iter()
        .zip(reduced.states())
        .map(|(x, y)| max_abs_diff(&radial_coordinates(x), y))
        .fold(0.0, f64::max);
    combine(vec![
        at_most(
            "Kepler mu0 = 1, T = 5",
            kepler_core.max(kepler_oracle).max(commutation_deviation(&kred, &kx0, 5.0)),
            1e-5,
        ),
        at_most(
            "contact translation mu = 0, T = 10",
            contact_core.max(commutation_deviation(&cred, &cx0, 10.0)),
            1e-7,
        ),
    ])
}

fn reconstruction_error(red: &ReducedSystem, x0: &Point) -> f64 {
    let cfg = IntegratorConfig::rk4(1e-3, 5.0);
    let direct = hamiltonian_flow(red.full_h(), x0, &cfg).unwrap();
    let reduced = hamiltonian_flow(red.reduced_h(), &red.project(x0).unwrap(), &cfg).unwrap();
    let rebuilt = red.reconstruct_from(&reduced, &red.section_offset(x0).unwrap()).unwrap();
    max_state_deviation(&rebuilt, &direct)
}

fn criterion_8() -> Outcome {
    let (kred, kx0) = kepler_reduction();
    let (cred, cx0) = contact_reduction();
    combine(vec![
        at_most("Kepler planar, T = 5", reconstruction_error(&kred, &kx0), 1e-4),
        at_most("contact translation, T = 5", reconstruction_error(&cred, &cx0), 1e-8),
    ])
}

fn criterion_9() -> Outcome {
    let corpus = builtin();
    let entries = legendrian_lagrangian_agreement(9, 100).unwrap();
    let disagreements: usize = entries.iter().map(|e| e.disagreements).sum();
    // every sample of a Legendrian entry is Legendrian, and no other sample is
    let misclassified = corpus
        .iter()
        .zip(&entries)
        .filter(|(sub, e)| {
            let expected = if sub.expected == SubmanifoldType::Legendrian { e.samples } else { 0 };
            e.legendrian != expected || e.lagrangian != expected
        })
        .count();
    let sampled = entries.iter().filter(|e| e.samples >= 100).count();
    combine(vec![
        (sampled >= 5, format!("{sampled} submanifolds x 100 points")),
        (disagreements == 0, format!("{disagreements} disagreements")),
        (misclassified == 0, format!("{misclassified} entries off their expected type")),
    ])
}

/// `Ω = eᵗ(dη + dt ∧ η)` on `(q, p, z, t)`, written out by hand.
fn omega_by_hand(x: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let n = (x.len() - 2) / 2;
    let eta = |w: &[f64]| w[2 * n] - (0..n).map(|i| x[n + i] * w[i]).sum::<f64>();
    let deta = (0..n).map(|i| u[i] * v[n + i] - u[n + i] * v[i]).sum::<f64>();
    x[2 * n + 1].exp() * (deta + u[2 * n + 1] * eta(v) - v[2 * n + 1] * eta(u))
}

/// Inserts `head` at `q_{1..k}` and zeros at `p_{1..k}` of a reduced
/// symplectified vector `(q', p', z, t)`.
fn insert_orbit(n: usize, k: usize, head: &[f64], w: &[f64]) -> Vec<f64> {
    let m = n - k;
    let mut out = head.to_vec();
    out.extend_from_slice(&w[..m]);
    out.extend(std::iter::repeat_n(0.0, k));
    out.extend_from_slice(&w[m..]);
    out
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    let mut r = rng(10);
    for (i, (n, k)) in [(1, 1), (2, 1), (2, 2), (3, 2)].into_iter().enumerate() {
        let rep = commutativity_check(n, k, &vec![0.0; k], 10 + i as u64, 1000).unwrap();
        // the same comparison with a hand-written Ω on J̃⁻¹(0) = {p₁..p_k = 0} × ℝ
        let full = Chart::symplectified(n).unwrap();
        let mut oracle = 0.0f64;
        for _ in 0..1000 {
            let m = 2 * (n - k) + 2;
            let y = uniform_vec(&mut r, m, 1.0);
            let (u, v) = (uniform_vec(&mut r, m, 1.0), uniform_vec(&mut r, m, 1.0));
            let reduced = omega_by_hand(&y, &u, &v);
            let x = insert_orbit(n, k, &uniform_vec(&mut r, k, 2.0), &y);
            let lu = insert_orbit(n, k, &uniform_vec(&mut r, k, 2.0), &u);
            let lv = insert_orbit(n, k, &uniform_vec(&mut r, k, 2.0), &v);
            let pt = Point::new(full, x.clone()).unwrap();
            let core = omega_lifted(
                &pt,
                &TangentVector::new(&pt, lu.clone()).unwrap(),
                &TangentVector::new(&pt, lv.clone()).unwrap(),
            )
            .unwrap();
            oracle = oracle
                .max((omega_by_hand(&x, &lu, &lv) - reduced).abs())
                .max((core - reduced).abs());
        }
        parts.push(at_most(
            &format!("(n, k) = ({n}, {k})"),
            rep.max_residual.max(rep.well_defined_residual).max(oracle),
            1e-12,
        ));
    }
    let probe = mu_nonzero_probe(2, 1, &[1.0], 1.0, 10).unwrap();
    let scaling = (probe.lifted_momentum[0] - 1.0f64.exp() * probe.base_momentum[0]).abs();
    parts.push(at_most("mu = 1 probe: |J~ - e^t J|", scaling, 1e-12));
    parts.push((
        probe.level_defect > 1e-6 && probe.product_structure_fails,
        format!("mu = 1 probe: level defect = {:.3e} (> 1e-6)", probe.level_defect),
    ));
    combine(parts)
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let (mut flat_sharp, mut kernel, mut image) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=3 {
        let contact = Chart::contact(n).unwrap();
        let symplectic = Chart::symplectic(n).unwrap();
        for _ in 0..1000 {
            let x = point(&mut r, contact, 2.0);
            let v = vector(&mut r, &x);
            let a = covector(&mut r, &x);
            flat_sharp = flat_sharp
                .max(max_abs_diff(
                    flat_contact(&x, &sharp_contact(&x, &a).unwrap()).unwrap().components(),
                    a.components(),
                ))
                .max(max_abs_diff(
                    sharp_contact(&x, &flat_contact(&x, &v).unwrap()).unwrap().components(),
                    v.components(),
                ));
            // ker ♯_Λ = span η, im ♯_Λ = ker η
            kernel = kernel.max(sharp_lambda(&x, &eta_covector(&x).unwrap()).unwrap().norm());
            image = image.max(eta(&x, &sharp_lambda(&x, &a).unwrap()).unwrap().abs());

            let y = point(&mut r, symplectic, 2.0);
            let b = covector(&mut r, &y);
            flat_sharp = flat_sharp.max(max_abs_diff(
                flat_symplectic(&y, &sharp_symplectic(&y, &b).unwrap()).unwrap().components(),
                b.components(),
            ));
        }
        // the image is all of ker η: ♯_Λ of the coordinate covectors spans it
        let x = point(&mut r, contact, 2.0);
        let images: Vec<Vec<f64>> = (0..contact.dim())
            .map(|i| sharp_lambda(&x, &Covector::coordinate(&x, i)).unwrap().into_components())
            .collect();
        let span = SubspaceBasis::spanned_by(&x, &images).unwrap();
        image = image.max(span.equality_residual(&horizontal_space(&x).unwrap()));
        if span.rank() != 2 * n {
            image = f64::INFINITY;
        }
    }
    // complement dimensions against the corpus' tagged positions
    let mut r = rng(12);
    let mut dimension_failures = 0usize;
    let mut checked = 0usize;
    for sub in builtin() {
        for b in sub.samples(&mut r, 100) {
            let (n, k) = (b.chart().n(), b.rank());
            let (lambda, deta_h) = match sub.position {
                PointPosition::Horizontal => (2 * n - k, 2 * n - k),
                PointPosition::Vertical => (2 * n + 1 - k, 2 * n + 1 - k),
                PointPosition::Oblique => (2 * n + 1 - k, 2 * n - k),
            };
            let d = complement_dimensions(&b).unwrap();
            checked += 1;
            if d.position != sub.position || d.lambda_dim != lambda || d.deta_horizontal_dim != deta_h || !d.holds() {
                dimension_failures += 1;
            }
        }
    }
    combine(vec![
        at_most("flat/sharp round trip", flat_sharp, 1e-12),
        at_most("|sharp_Lambda(eta)|", kernel, 1e-10),
        at_most("im sharp_Lambda vs ker eta", image, 1e-10),
        (
            dimension_failures == 0,
            format!("complement dimensions: {dimension_failures} of {checked} samples off"),
        ),
    ])
}

fn criterion_12() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_darboux"))
            .args(["commute", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    combine(vec![
        (a.status.code() == Some(0) && b.status.code() == Some(0), format!("exit codes {:?}, {:?}", a.status.code(), b.status.code())),
        (identical, format!("reports byte-identical: {identical} ({} bytes)", a.stdout.len())),
    ])
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("damped Newton equivalence", criterion_1),
        ("dissipation law", criterion_2),
        ("divergence identity", criterion_3),
        ("SO(3) conservation", criterion_4),
        ("momentum condition", criterion_5),
        ("SO(3) equivariance", criterion_6),
        ("reduction commutation", criterion_7),
        ("reconstruction", criterion_8),
        ("Legendrian/Lagrangian agreement", criterion_9),
        ("commutativity at mu = 0", criterion_10),
        ("structural identities", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {}", i + 1, outcome.summary);
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
