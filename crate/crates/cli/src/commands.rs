//! The subcommands. Each builds a [`Report`] and, where a trajectory is
//! involved, its CSV.

use darboux_core::corpus::{self, builtin, complement_dimensions, legendrian_lagrangian_agreement};
use darboux_core::dynamics::{
    attach_dissipation_residual, hamiltonian_flow, monitor, variational_volume, Trajectory,
};
use darboux_core::geometry::{
    classify_point, classify_submanifold, complement_omega, eta, eta_covector, flat_contact, flat_symplectic,
    sharp_contact, sharp_lambda, sharp_symplectic, PointPosition, SubmanifoldType,
};
use darboux_core::hamiltonian::{divergence_contact, reeb_derivative, BuiltinHamiltonian};
use darboux_core::reduction::{reduce_contact_translation, reduce_so3, reduce_translation_symplectic, ReducedSystem};
use darboux_core::sampling::{self, split_seed};
use darboux_core::symmetry::{
    attach_momentum, check_equivariance, check_momentum_condition, momentum_dissipation_check, ActionFamily,
    GroupAction, GroupElement,
};
use darboux_core::symplectification::{
    closedness_residual, commutativity_check, lift_point, lifted_action_invariance_check, lifted_complement_check,
    lifted_momentum, lifted_momentum_direct, mu_nonzero_probe, omega_determinant, omega_lifted,
};
use darboux_core::{Chart, ChartKind, Point, SubspaceBasis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::checks::{comparison, default_tolerance};
use crate::error::CliError;
use crate::report::{CheckResult, Provenance, Report};
use crate::scenario::{ActionSpec, Scenario, SystemChart};

/// The `(n, k)` cases `commute` runs when none is given.
pub const DEFAULT_COMMUTE_CASES: [(usize, usize); 4] = [(1, 1), (2, 1), (2, 2), (3, 2)];

/// Radius of the perturbation around trajectory states used by pointwise
/// checks.
const PROBE_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Simulate,
    Invariants,
    Reduce,
    Reconstruct,
    Symplectify { n: Option<usize> },
    Commute { n: Option<usize>, k: Option<usize>, mu: Vec<f64> },
    Classify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Invariants => "invariants",
            Command::Reduce => "reduce",
            Command::Reconstruct => "reconstruct",
            Command::Symplectify { .. } => "symplectify",
            Command::Commute { .. } => "commute",
            Command::Classify => "classify",
        }
    }

    fn default_samples(&self) -> usize {
        match self {
            Command::Commute { .. } | Command::Invariants | Command::Reduce => 1000,
            _ => 100,
        }
    }
}

/// A parsed scenario with the hash of its source bytes.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub sha256: String,
}

impl LoadedScenario {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let text = std::str::from_utf8(bytes).map_err(|e| CliError::Config(format!("scenario is not UTF-8: {e}")))?;
        Ok(LoadedScenario {
            scenario: crate::scenario::parse_scenario(text)?,
            sha256: sha256_hex(bytes),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub scenario: Option<LoadedScenario>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn execute(command: &Command, settings: &Settings) -> Result<Outcome, CliError> {
    let ctx = Context::new(command, settings)?;
    match command {
        Command::Simulate => simulate(&ctx),
        Command::Invariants => invariants(&ctx),
        Command::Reduce => reduce(&ctx),
        Command::Reconstruct => reconstruct(&ctx),
        Command::Symplectify { n } => symplectify(&ctx, *n),
        Command::Commute { n, k, mu } => commute(&ctx, *n, *k, mu),
        Command::Classify => classify(&ctx),
    }
}

struct Context<'a> {
    command: &'static str,
    scenario: Option<&'a Scenario>,
    scenario_sha: Option<&'a str>,
    seed: u64,
    samples: usize,
    family: Option<ActionFamily>,
    chart: Option<ChartKind>,
}

impl<'a> Context<'a> {
    fn new(command: &Command, settings: &'a Settings) -> Result<Self, CliError> {
        let scenario = settings.scenario.as_ref().map(|s| &s.scenario);
        let samples = settings.samples.unwrap_or_else(|| command.default_samples());
        if samples == 0 {
            return Err(CliError::Config("--samples must be at least 1".into()));
        }
        Ok(Context {
            command: command.name(),
            scenario,
            scenario_sha: settings.scenario.as_ref().map(|s| s.sha256.as_str()),
            seed: settings.seed.or(scenario.and_then(|s| s.seed)).unwrap_or(0),
            samples,
            family: scenario.and_then(|s| s.action.as_ref()).map(ActionSpec::family),
            chart: scenario.and_then(|s| s.chart().ok()).map(|c| c.kind()),
        })
    }

    fn require_scenario(&self) -> Result<&'a Scenario, CliError> {
        self.scenario
            .ok_or_else(|| CliError::Config(format!("`{}` needs --scenario <path>", self.command)))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        sampling::rng(split_seed(self.seed, stream))
    }

    /// Check ids to run: the scenario's checks that apply to this command,
    /// or `defaults` when it lists none of them.
    fn select(&self, applicable: &[&str], defaults: &[&'static str]) -> Vec<String> {
        let mut chosen: Vec<String> = Vec::new();
        for c in self.scenario.map(|s| s.checks.as_slice()).unwrap_or_default() {
            if applicable.contains(&c.id.as_str()) && !chosen.contains(&c.id) {
                chosen.push(c.id.clone());
            }
        }
        if chosen.is_empty() {
            chosen = defaults.iter().map(|s| s.to_string()).collect();
        }
        chosen
    }

    fn tolerance(&self, id: &str) -> f64 {
        self.scenario
            .and_then(|s| s.tolerance(id))
            .unwrap_or_else(|| default_tolerance(id, self.family, self.chart))
    }

    /// Result for check `id`, reported under `label`.
    fn result(&self, label: impl Into<String>, id: &str, residual: f64) -> CheckResult {
        CheckResult::new(label, residual, self.tolerance(id), comparison(id))
    }

    fn report(&self, checks: Vec<CheckResult>, details: Value, effective: Value) -> Report {
        let config_sha256 = match self.scenario_sha {
            Some(sha) => sha.to_string(),
            None => sha256_hex(effective.to_string().as_bytes()),
        };
        Report::new(
            self.command,
            checks,
            details,
            Provenance {
                seed: self.seed,
                samples: self.samples,
                config_sha256,
            },
        )
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    max_of(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

fn unsupported(id: &str, why: &str) -> CliError {
    CliError::Config(format!("check `{id}` {why}"))
}

/// Points near randomly chosen trajectory states.
fn probe_points(traj: &Trajectory, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
    (0..count)
        .map(|_| {
            let base = &traj.states()[rng.gen_range(0..traj.len())];
            let coords = base.iter().map(|x| x + rng.gen_range(-PROBE_RADIUS..=PROBE_RADIUS)).collect();
            Point::new(traj.chart(), coords).expect("finite probe point")
        })
        .collect()
}

fn trajectory_details(traj: &Trajectory) -> Value {
    let last = traj.states().last().cloned().unwrap_or_default();
    json!({
        "chart": traj.chart().to_string(),
        "columns": traj.chart().coordinate_names(),
        "recorded": traj.len(),
        "t_final": traj.times().last().copied().unwrap_or_default(),
        "final_state": last,
    })
}

fn simulate(ctx: &Context) -> Result<Outcome, CliError> {
    let sc = ctx.require_scenario()?;
    let h = sc.hamiltonian()?;
    let mut traj = hamiltonian_flow(&h, &sc.initial_point()?, &sc.integrator)?;
    if let Some(action) = sc.group_action()? {
        attach_momentum(&mut traj, &action)?;
    }
    let ids = ctx.select(&["energy_drift", "relative_decay_residual"], &[]);
    let mut checks = Vec::new();
    if !ids.is_empty() {
        let rep = monitor(&traj, &h)?;
        for id in &ids {
            let residual = match id.as_str() {
                "energy_drift" => rep.energy_drift,
                _ => rep.relative_decay_residual,
            }
            .ok_or_else(|| unsupported(id, "needs a contact chart"))?;
            checks.push(ctx.result(id.as_str(), id, residual));
        }
    }
    Ok(Outcome {
        report: ctx.report(checks, trajectory_details(&traj), Value::Null),
        csv: Some(traj.to_csv_string()),
    })
}

fn invariants(ctx: &Context) -> Result<Outcome, CliError> {
    let sc = ctx.require_scenario()?;
    let h = sc.hamiltonian()?;
    let action = sc.group_action()?;
    let contact = h.chart().kind() == ChartKind::Contact;
    let mut traj = hamiltonian_flow(&h, &sc.initial_point()?, &sc.integrator)?;
    if contact {
        attach_dissipation_residual(&mut traj, &h)?;
    }
    if let Some(a) = &action {
        attach_momentum(&mut traj, a)?;
    }

    let mut defaults: Vec<&'static str> = if contact {
        vec!["relative_decay_residual", "rate_residual", "divergence_identity", "volume_ratio"]
    } else {
        vec!["energy_drift"]
    };
    if action.is_some() {
        defaults.extend(["momentum_condition", "equivariance", "momentum_drift"]);
    }
    let ids = ctx.select(
        &[
            "energy_drift",
            "relative_decay_residual",
            "rate_residual",
            "divergence_identity",
            "volume_ratio",
            "momentum_condition",
            "equivariance",
            "momentum_drift",
        ],
        &defaults,
    );
    let rep = monitor(&traj, &h)?;
    let probes = probe_points(&traj, &mut ctx.rng(0), ctx.samples);
    let need_action = |id: &str| action.as_ref().ok_or_else(|| unsupported(id, "needs an `action`"));
    let mut checks = Vec::new();
    for id in &ids {
        let id = id.as_str();
        let residual = match id {
            "energy_drift" => rep.energy_drift.unwrap_or(f64::NAN),
            "relative_decay_residual" => rep
                .relative_decay_residual
                .ok_or_else(|| unsupported(id, "needs a contact chart"))?,
            "rate_residual" => rep.rate_residual.ok_or_else(|| unsupported(id, "needs at least two samples"))?,
            "divergence_identity" => {
                if !contact {
                    return Err(unsupported(id, "needs a contact chart"));
                }
                let n1 = (h.chart().n() + 1) as f64;
                let mut worst = 0.0f64;
                for p in &probes {
                    let r = divergence_contact(&h, p)? + n1 * reeb_derivative(&h, p)?;
                    worst = max_of([worst, r.abs()]);
                }
                worst
            }
            "volume_ratio" => {
                if !contact {
                    return Err(unsupported(id, "needs a contact chart"));
                }
                max_of(variational_volume(&traj, &h)?.iter().map(|s| (s.ratio - 1.0).abs()))
            }
            "momentum_condition" => {
                let a = need_action(id)?;
                let mut worst = 0.0f64;
                for p in &probes {
                    worst = max_of([worst, check_momentum_condition(a, p)?]);
                }
                worst
            }
            "equivariance" => {
                let a = need_action(id)?;
                let mut rng = ctx.rng(1);
                let mut worst = 0.0f64;
                for p in &probes {
                    let g = a.sample_element(&mut rng, 1.0);
                    worst = max_of([worst, check_equivariance(a, &g, p)?]);
                }
                worst
            }
            _ => max_of(momentum_dissipation_check(need_action(id)?, &h, &traj, ctx.seed)?),
        };
        checks.push(ctx.result(id, id, residual));
    }
    let mut details = trajectory_details(&traj);
    details["monitor"] = serde_json::to_value(&rep).expect("report serializes");
    Ok(Outcome {
        report: ctx.report(checks, details, Value::Null),
        csv: Some(traj.to_csv_string()),
    })
}

/// The reduced system named by the scenario's action, at the scenario's
/// momentum level (default: the momentum of the initial state).
fn reduced_system(sc: &Scenario) -> Result<(ReducedSystem, Point), CliError> {
    let spec = sc
        .action
        .as_ref()
        .ok_or_else(|| CliError::Config("reduction needs an `action` in the scenario".into()))?;
    let h = sc.hamiltonian()?;
    let x0 = sc.initial_point()?;
    let action = GroupAction::new(spec.family(), x0.chart())?;
    let j0 = action.momentum(&x0)?;
    let red = match spec {
        ActionSpec::LiftedTranslation { k, mu } => {
            reduce_translation_symplectic(&h, *k, mu.as_deref().unwrap_or(j0.components()))?
        }
        ActionSpec::ContactTranslation { k, mu } => {
            reduce_contact_translation(&h, *k, mu.as_deref().unwrap_or(j0.components()))?
        }
        ActionSpec::LiftedRotationSo3 { mu0 } => {
            let BuiltinHamiltonian::CentralPotential(central) = &sc.system.hamiltonian else {
                return Err(CliError::Config(
                    "SO(3) reduction needs a `central_potential` hamiltonian".into(),
                ));
            };
            reduce_so3(central, mu0.unwrap_or(j0.components()[2]))?
        }
    };
    if red.level_set_distance(&x0)? >= darboux_core::reduction::LEVEL_SET_TOL {
        return Err(darboux_core::Error::OffLevelSet(red.level_set_distance(&x0)?).into());
    }
    Ok((red, x0))
}

/// A group element fixing the momentum level: rotations about the `z`
/// axis for SO(3), any element for the abelian families.
fn isotropy_element(red: &ReducedSystem, rng: &mut ChaCha8Rng) -> Result<GroupElement, CliError> {
    let a = red.action();
    Ok(match red.family() {
        ActionFamily::LiftedRotationSo3 => a.exp(&a.basis(2), rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI))?,
        _ => a.sample_element(rng, 3.0),
    })
}

fn reduction_details(red: &ReducedSystem) -> Value {
    json!({
        "family": red.family().name(),
        "mu": red.mu().components(),
        "full_chart": red.full_chart().to_string(),
        "reduced_chart": red.reduced_chart().to_string(),
    })
}

fn reduce(ctx: &Context) -> Result<Outcome, CliError> {
    let sc = ctx.require_scenario()?;
    let (red, x0) = reduced_system(sc)?;
    let contact = red.full_chart().kind() == ChartKind::Contact;
    let cfg = &sc.integrator;
    let commutation = red.check_commutation(&x0, cfg)?;
    let mut reduced = hamiltonian_flow(red.reduced_h(), &red.project(&x0)?, cfg)?;
    if commutation.deviations.len() == reduced.len() {
        reduced.set_series("commutation_deviation", commutation.deviations.clone())?;
    }

    let mut defaults = vec!["commutation", "level_set_drift", "hamiltonian_compatibility"];
    if contact {
        defaults.push("reeb_projection");
    }
    let ids = ctx.select(
        &["commutation", "level_set_drift", "hamiltonian_compatibility", "reeb_projection"],
        &defaults,
    );
    // points of the level set over the reduced trajectory
    let mut rng = ctx.rng(0);
    let mut level_points = Vec::with_capacity(ctx.samples);
    for _ in 0..ctx.samples {
        let y = reduced.point(rng.gen_range(0..reduced.len()));
        let g = isotropy_element(&red, &mut rng)?;
        level_points.push(red.action().act(&g, &red.section(&y)?)?);
    }
    let mut checks = Vec::new();
    for id in &ids {
        let id = id.as_str();
        let residual = match id {
            "commutation" => commutation.max_deviation,
            "level_set_drift" => {
                let full = hamiltonian_flow(red.full_h(), &x0, cfg)?;
                let mut worst = 0.0f64;
                for i in 0..full.len() {
                    worst = max_of([worst, red.level_set_distance(&full.point(i))?]);
                }
                worst
            }
            "hamiltonian_compatibility" => {
                let mut worst = 0.0f64;
                for p in &level_points {
                    worst = max_of([worst, red.hamiltonian_compatibility(p)?]);
                }
                worst
            }
            _ => {
                if !contact {
                    return Err(unsupported(id, "needs a contact reduction"));
                }
                let mut worst = 0.0f64;
                for p in &level_points {
                    worst = max_of([worst, red.reeb_projection_residual(p)?]);
                }
                worst
            }
        };
        checks.push(ctx.result(id, id, residual));
    }
    let mut details = reduction_details(&red);
    details["trajectory"] = trajectory_details(&reduced);
    Ok(Outcome {
        report: ctx.report(checks, details, Value::Null),
        csv: Some(reduced.to_csv_string()),
    })
}

fn reconstruct(ctx: &Context) -> Result<Outcome, CliError> {
    let sc = ctx.require_scenario()?;
    let (red, x0) = reduced_system(sc)?;
    let cfg = &sc.integrator;
    let direct = hamiltonian_flow(red.full_h(), &x0, cfg)?;
    let reduced = hamiltonian_flow(red.reduced_h(), &red.project(&x0)?, cfg)?;
    let mut rebuilt = red.reconstruct_from(&reduced, &red.section_offset(&x0)?)?;
    let errors: Vec<f64> = rebuilt
        .states()
        .iter()
        .zip(direct.states())
        .map(|(a, b)| max_abs_diff(a, b))
        .collect();
    let residual = max_of(errors.iter().copied());
    rebuilt.set_series("reconstruction_error", errors)?;
    let checks = ctx
        .select(&["reconstruction"], &["reconstruction"])
        .iter()
        .map(|id| ctx.result(id.as_str(), id, residual))
        .collect();
    let mut details = reduction_details(&red);
    details["trajectory"] = trajectory_details(&rebuilt);
    Ok(Outcome {
        report: ctx.report(checks, details, Value::Null),
        csv: Some(rebuilt.to_csv_string()),
    })
}

fn symplectify(ctx: &Context, n: Option<usize>) -> Result<Outcome, CliError> {
    let scenario_n = ctx
        .scenario
        .filter(|s| s.system.chart == SystemChart::Contact)
        .map(|s| s.system.n);
    let ns: Vec<usize> = match n.or(scenario_n) {
        Some(0) => return Err(CliError::Config("--n must be at least 1".into())),
        Some(n) => vec![n],
        None => vec![1, 2, 3],
    };
    const ALL: [&str; 7] = [
        "closedness",
        "antisymmetry",
        "nondegeneracy",
        "lifted_momentum",
        "lifted_invariance",
        "legendrian_lagrangian",
        "lifted_complement",
    ];
    let ids = ctx.select(&ALL, &ALL);
    let mut worst = std::collections::BTreeMap::<&str, f64>::new();
    let mut bump = |id: &'static str, v: f64| {
        let e = worst.entry(id).or_insert(0.0);
        *e = max_of([*e, v]);
    };
    for &n in &ns {
        let chart = Chart::symplectified(n)?;
        let base = Chart::contact(n)?;
        let action = GroupAction::new(ActionFamily::ContactTranslation { k: n }, base)?;
        let mut rng = ctx.rng(n as u64);
        for _ in 0..ctx.samples {
            let pt = sampling::point(&mut rng, chart, 1.0);
            bump("closedness", closedness_residual(&pt)?);
            let (u, v) = (sampling::vector(&mut rng, &pt), sampling::vector(&mut rng, &pt));
            bump("antisymmetry", (omega_lifted(&pt, &u, &v)? + omega_lifted(&pt, &v, &u)?).abs());
            let expected = (2.0 * (n as f64 + 1.0) * pt.t().unwrap_or_default()).exp();
            bump("nondegeneracy", (omega_determinant(&pt)? / expected - 1.0).abs());

            let x = sampling::point(&mut rng, base, 2.0);
            let lifted = lift_point(&x, rng.gen_range(-2.0..=2.0))?;
            bump(
                "lifted_momentum",
                lifted_momentum(&action, &lifted)?.distance(&lifted_momentum_direct(&action, &lifted)?),
            );
            let g = action.sample_element(&mut rng, 3.0);
            let inv = lifted_action_invariance_check(&action, &g, &lifted, &mut rng, 2)?;
            bump("lifted_invariance", inv.alpha.max(inv.omega));
        }
    }
    let agreement = legendrian_lagrangian_agreement(ctx.seed, ctx.samples)?;
    bump("legendrian_lagrangian", agreement.iter().map(|e| e.disagreements).sum::<usize>() as f64);
    let mut rng = ctx.rng(100);
    let mut complements = Vec::new();
    for sub in builtin()
        .into_iter()
        .filter(|s| s.expected == SubmanifoldType::Coisotropic && s.position == PointPosition::Vertical)
    {
        let samples = sub.samples(&mut rng, ctx.samples);
        let rep = lifted_complement_check(&samples, rng.gen_range(-2.0..=2.0))?;
        bump(
            "lifted_complement",
            max_of([rep.equality_residual, rep.max_t_component, rep.max_eta]),
        );
        complements.push(json!({ "name": sub.name, "report": rep }));
    }
    let checks = ids
        .iter()
        .map(|id| ctx.result(id.as_str(), id, worst.get(id.as_str()).copied().unwrap_or(f64::NAN)))
        .collect();
    let details = json!({
        "n": ns,
        "legendrian_lagrangian": agreement,
        "lifted_complement": complements,
    });
    let effective = json!({ "command": ctx.command, "n": ns, "seed": ctx.seed, "samples": ctx.samples });
    Ok(Outcome {
        report: ctx.report(checks, details, effective),
        csv: None,
    })
}

fn commute(ctx: &Context, n: Option<usize>, k: Option<usize>, mu: &[f64]) -> Result<Outcome, CliError> {
    let scenario_case = ctx.scenario.and_then(|s| match (&s.system.chart, &s.action) {
        (SystemChart::Contact, Some(ActionSpec::ContactTranslation { k, .. })) => Some((s.system.n, *k)),
        _ => None,
    });
    let cases: Vec<(usize, usize)> = match (n, k) {
        (Some(n), Some(k)) => vec![(n, k)],
        (None, None) => scenario_case.map(|c| vec![c]).unwrap_or_else(|| DEFAULT_COMMUTE_CASES.to_vec()),
        _ => return Err(CliError::Config("--n and --k must be given together".into())),
    };
    for &(n, k) in &cases {
        if n == 0 || k == 0 || k > n {
            return Err(CliError::Config(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
    }
    if !mu.is_empty() && cases.iter().any(|&(_, k)| k != mu.len()) {
        return Err(CliError::Config(format!("--mu has {} values but k = {}", mu.len(), cases[0].1)));
    }
    if mu.iter().any(|m| *m != 0.0) {
        let (n, k) = cases[0];
        let probe = mu_nonzero_probe(n, k, mu, 1.0, ctx.seed)?;
        let err = commutativity_check(n, k, mu, ctx.seed, 1).unwrap_err();
        return Err(CliError::Config(format!(
            "{err}; at t = {}: J = {:?}, lifted J = {:?}",
            probe.t, probe.base_momentum, probe.lifted_momentum
        )));
    }

    let mut checks = Vec::new();
    let mut per_case = Vec::new();
    for (i, &(n, k)) in cases.iter().enumerate() {
        let rep = commutativity_check(n, k, &vec![0.0; k], split_seed(ctx.seed, i as u64), ctx.samples)?;
        checks.push(ctx.result(format!("commutativity_n{n}_k{k}"), "commutativity", rep.max_residual));
        checks.push(ctx.result(format!("well_defined_n{n}_k{k}"), "well_defined", rep.well_defined_residual));
        per_case.push(rep);
    }
    let (n0, k0) = cases[0];
    let probe = mu_nonzero_probe(n0, k0, &vec![1.0; k0], 1.0, ctx.seed)?;
    let scaling = max_of(
        probe
            .lifted_momentum
            .iter()
            .zip(&probe.base_momentum)
            .map(|(l, b)| (l - probe.t.exp() * b).abs()),
    );
    checks.push(ctx.result("mu_probe_scaling", "mu_probe_scaling", scaling));
    checks.push(ctx.result("mu_probe_level_defect", "mu_probe_level_defect", probe.level_defect));
    let details = json!({ "cases": per_case, "mu_probe": probe });
    let effective = json!({
        "command": ctx.command,
        "cases": cases,
        "seed": ctx.seed,
        "samples": ctx.samples,
    });
    Ok(Outcome {
        report: ctx.report(checks, details, effective),
        csv: None,
    })
}

fn classify(ctx: &Context) -> Result<Outcome, CliError> {
    const ALL: [&str; 7] = [
        "corpus_verdicts",
        "complement_dimensions",
        "legendrian_lagrangian",
        "flat_sharp",
        "sharp_lambda_kernel",
        "sharp_lambda_image",
        "double_complement",
    ];
    let ids = ctx.select(&ALL, &ALL);
    let mut rng = ctx.rng(0);
    let mut entries = Vec::new();
    let (mut mismatches, mut dimension_failures) = (0usize, 0usize);
    for sub in builtin() {
        let samples = sub.samples(&mut rng, ctx.samples);
        let verdict = classify_submanifold(&samples)?;
        let mut positions_ok = true;
        for (b, v) in samples.iter().zip(&verdict.per_sample) {
            let position = classify_point(b)?;
            positions_ok &= position == sub.position;
            mismatches += usize::from(*v != sub.expected || position != sub.position);
            dimension_failures += usize::from(!complement_dimensions(b)?.holds());
        }
        entries.push(json!({
            "name": sub.name,
            "chart": sub.chart.to_string(),
            "expected": sub.expected,
            "verdict": verdict.aggregate,
            "position": sub.position,
            "positions_match": positions_ok,
        }));
    }
    let agreement = legendrian_lagrangian_agreement(ctx.seed, ctx.samples)?;
    let disagreements = agreement.iter().map(|e| e.disagreements).sum::<usize>();

    let (mut flat_sharp, mut kernel, mut image, mut double) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 1..=3 {
        let mut rng = ctx.rng(n as u64);
        let contact = Chart::contact(n)?;
        let symplectic = Chart::symplectic(n)?;
        for _ in 0..ctx.samples {
            let x = sampling::point(&mut rng, contact, 2.0);
            let v = sampling::vector(&mut rng, &x);
            let back = sharp_contact(&x, &flat_contact(&x, &v)?)?;
            flat_sharp = max_of([flat_sharp, max_abs_diff(back.components(), v.components())]);
            let a = sampling::covector(&mut rng, &x);
            kernel = max_of([kernel, sharp_lambda(&x, &eta_covector(&x)?)?.norm()]);
            image = max_of([image, eta(&x, &sharp_lambda(&x, &a)?)?.abs()]);

            let y = sampling::point(&mut rng, symplectic, 2.0);
            let a = sampling::covector(&mut rng, &y);
            let back = flat_symplectic(&y, &sharp_symplectic(&y, &a)?)?;
            flat_sharp = max_of([flat_sharp, max_abs_diff(back.components(), a.components())]);
            let rank = rng.gen_range(0..=2 * n);
            let vectors = (0..rank).map(|_| sampling::uniform_vec(&mut rng, 2 * n, 1.0)).collect();
            let b = SubspaceBasis::new(&y, vectors)?;
            double = max_of([double, complement_omega(&complement_omega(&b)?)?.equality_residual(&b)]);
        }
    }
    let checks = ids
        .iter()
        .map(|id| {
            let residual = match id.as_str() {
                "corpus_verdicts" => mismatches as f64,
                "complement_dimensions" => dimension_failures as f64,
                "legendrian_lagrangian" => disagreements as f64,
                "flat_sharp" => flat_sharp,
                "sharp_lambda_kernel" => kernel,
                "sharp_lambda_image" => image,
                _ => double,
            };
            ctx.result(id.as_str(), id, residual)
        })
        .collect();
    let details = json!({
        "corpus": entries,
        "corpus_size": corpus::builtin().len(),
        "legendrian_lagrangian": agreement,
    });
    let effective = json!({ "command": ctx.command, "seed": ctx.seed, "samples": ctx.samples });
    Ok(Outcome {
        report: ctx.report(checks, details, effective),
        csv: None,
    })
}
