//! Runge-Kutta integration of vector fields, trajectories and invariant
//! monitors.
//!
//! Both integrators report states on the same output grid `t₀ + i·h`; the
//! adaptive method takes as many internal steps as its tolerances demand
//! between grid nodes. Observables are always recomputed from stored
//! states, never integrated alongside them.

use std::fmt;
use std::io::{self, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::geometry::{ChartKind, Point};
use crate::hamiltonian::{self, xh_contact_raw, xh_symplectic_raw, ScalarField};
use crate::{Chart, Error, Result};

/// Any coordinate beyond this magnitude aborts integration.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

/// Adaptive steps below this abort integration.
pub const MIN_STEP: f64 = 1e-14;

/// Finite-difference step for Jacobians of vector fields.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Largest internal step used by [`variational_volume`].
const VARIATIONAL_MAX_STEP: f64 = 1e-3;

pub trait VectorField {
    fn chart(&self) -> Chart;
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// `X_H` of a Hamiltonian, symplectic or contact according to its chart.
#[derive(Debug, Clone)]
pub struct HamiltonianField {
    h: ScalarField,
}

impl HamiltonianField {
    pub fn new(h: &ScalarField) -> Result<Self> {
        match h.chart().kind() {
            ChartKind::Symplectified => Err(Error::ChartMismatch {
                expected: "symplectic or contact".into(),
                found: h.chart().to_string(),
            }),
            _ => Ok(HamiltonianField { h: h.clone() }),
        }
    }

    pub fn hamiltonian(&self) -> &ScalarField {
        &self.h
    }
}

impl VectorField for HamiltonianField {
    fn chart(&self) -> Chart {
        self.h.chart()
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let chart = self.h.chart();
        let n = chart.n();
        let g = self.h.grad_raw(x);
        let v = match chart.kind() {
            ChartKind::Symplectic => xh_symplectic_raw(n, &g),
            _ => xh_contact_raw(n, x, self.h.eval_raw(x), &g),
        };
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("X_H of {} at {x:?}", self.h.name())));
        }
        Ok(v)
    }
}

/// A vector field given by a closure on raw coordinates.
pub struct FnField<F> {
    chart: Chart,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    pub fn new(chart: Chart, f: F) -> Self {
        FnField { chart, f }
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    fn chart(&self) -> Chart {
        self.chart
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok((self.f)(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4; output spacing for RK45.
    pub step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t0: f64,
    pub t1: f64,
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            step: 1e-3,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            t0: 0.0,
            t1: 1.0,
            record_every: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64, t1: f64) -> Self {
        IntegratorConfig {
            step,
            t1,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("integrator: {m}")));
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad("step must be positive");
        }
        if !(self.t1 > self.t0) || !self.t0.is_finite() || !self.t1.is_finite() {
            return bad("t1 must exceed t0");
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1");
        }
        Ok(())
    }

    /// Number of grid intervals and their (uniform) length.
    pub fn grid(&self) -> (usize, f64) {
        let span = self.t1 - self.t0;
        let ratio = span / self.step;
        let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        }
        .max(1.0) as usize;
        (steps, span / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Sampled integral curve `σ(t)` with named observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    chart: Chart,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    observables: Vec<Series>,
}

impl Trajectory {
    pub fn new(chart: Chart) -> Self {
        Trajectory {
            chart,
            times: Vec::new(),
            states: Vec::new(),
            observables: Vec::new(),
        }
    }

    pub fn from_parts(chart: Chart, times: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::Dimension {
                what: "trajectory states",
                expected: times.len(),
                found: states.len(),
            });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("trajectory times must be strictly increasing".into()));
        }
        for s in &states {
            Point::new(chart, s.clone())?;
        }
        Ok(Trajectory {
            chart,
            times,
            states,
            observables: Vec::new(),
        })
    }

    pub(crate) fn push(&mut self, t: f64, x: Vec<f64>) {
        self.times.push(t);
        self.states.push(x);
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn point(&self, i: usize) -> Point {
        Point::new(self.chart, self.states[i].clone()).expect("trajectory states are validated")
    }

    pub fn last_point(&self) -> Option<Point> {
        (!self.is_empty()).then(|| self.point(self.len() - 1))
    }

    pub fn observables(&self) -> &[Series] {
        &self.observables
    }

    pub fn observable(&self, name: &str) -> Option<&[f64]> {
        self.observables
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }

    /// Recomputes `f` at every stored state and records it under `name`,
    /// replacing an existing series of that name.
    pub fn add_observable<F>(&mut self, name: &str, f: F) -> Result<()>
    where
        F: Fn(&Point) -> Result<f64>,
    {
        let values = (0..self.len())
            .map(|i| f(&self.point(i)))
            .collect::<Result<Vec<_>>>()?;
        self.set_series(name, values)
    }

    pub fn set_series(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::Dimension {
                what: "observable series",
                expected: self.len(),
                found: values.len(),
            });
        }
        match self.observables.iter_mut().find(|s| s.name == name) {
            Some(s) => s.values = values,
            None => self.observables.push(Series {
                name: name.to_string(),
                values,
            }),
        }
        Ok(())
    }

    /// CSV with header `t,<coordinates>,<observables>` and 17 significant
    /// digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend(self.chart.coordinate_names());
        header.extend(self.observables.iter().map(|s| s.name.clone()));
        writeln!(w, "{}", header.join(","))?;
        for (i, (t, x)) in self.times.iter().zip(&self.states).enumerate() {
            let mut row = vec![fmt_f64(*t)];
            row.extend(x.iter().map(|v| fmt_f64(*v)));
            row.extend(self.observables.iter().map(|s| fmt_f64(s.values[i])));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Records `H` under the name `"H"`.
pub fn attach_energy(traj: &mut Trajectory, h: &ScalarField) -> Result<()> {
    traj.add_observable("H", |p| h.value(p))
}

/// Records `dH/dt + 𝓡(H)·H` (finite differences in time) under
/// `"dissipation_residual"`; identically `dH/dt` on symplectic charts.
pub fn attach_dissipation_residual(traj: &mut Trajectory, h: &ScalarField) -> Result<()> {
    let values = dissipation_residuals(traj, h)?;
    traj.set_series("dissipation_residual", values)
}

fn dissipation_residuals(traj: &Trajectory, h: &ScalarField) -> Result<Vec<f64>> {
    let energy = (0..traj.len())
        .map(|i| h.value(&traj.point(i)))
        .collect::<Result<Vec<_>>>()?;
    let rate = time_derivative(traj.times(), &energy);
    (0..traj.len())
        .map(|i| {
            let pt = traj.point(i);
            let expected = match pt.chart().kind() {
                ChartKind::Contact => hamiltonian::dissipation_rate(h, &pt)?,
                _ => 0.0,
            };
            Ok(rate[i] - expected)
        })
        .collect()
}

/// Second-order finite-difference derivative on a (possibly non-uniform)
/// grid; empty or single-sample input gives zeros.
pub fn time_derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    if n < 2 {
        return vec![0.0; n];
    }
    if n == 2 {
        let d = (y[1] - y[0]) / (t[1] - t[0]);
        return vec![d, d];
    }
    let three_point = |i0: usize, at: usize| {
        // derivative at t[at] of the quadratic through i0, i0+1, i0+2
        let (x0, x1, x2) = (t[i0], t[i0 + 1], t[i0 + 2]);
        let x = t[at];
        let l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
        let l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
        let l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
        l0 * y[i0] + l1 * y[i0 + 1] + l2 * y[i0 + 2]
    };
    (0..n)
        .map(|i| match i {
            0 => three_point(0, 0),
            i if i == n - 1 => three_point(n - 3, n - 1),
            i => three_point(i - 1, i),
        })
        .collect()
}

/// Cumulative trapezoid integral of `y` over `t`, starting at 0.
pub fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        if i > 0 {
            acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
        }
        out.push(acc);
    }
    out
}

// ---------------------------------------------------------------------------
// Integration.

#[derive(Debug, Clone, PartialEq)]
pub enum FlowErrorKind {
    StepUnderflow { step: f64 },
    BlowUp,
    Field(String),
}

/// Aborted integration, carrying everything recorded up to the failure.
#[derive(Debug, Clone)]
pub struct FlowError {
    pub kind: FlowErrorKind,
    pub t: f64,
    pub partial: Trajectory,
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FlowErrorKind::StepUnderflow { step } => {
                write!(f, "adaptive step {step:e} fell below {MIN_STEP:e} at t = {}", self.t)
            }
            FlowErrorKind::BlowUp => write!(
                f,
                "state left |x| <= {BLOW_UP_THRESHOLD:e} or became non-finite at t = {}",
                self.t
            ),
            FlowErrorKind::Field(m) => write!(f, "vector field failed at t = {}: {m}", self.t),
        }
    }
}

impl std::error::Error for FlowError {}

fn blown_up(x: &[f64]) -> bool {
    x.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP_THRESHOLD)
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(field: &dyn VectorField, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let k1 = field.eval(x)?;
    let k2 = field.eval(&axpy(x, 0.5 * h, &k1))?;
    let k3 = field.eval(&axpy(x, 0.5 * h, &k2))?;
    let k4 = field.eval(&axpy(x, h, &k3))?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince trial step: the 5th-order solution and the scaled
/// RMS error estimate.
fn dopri_step(field: &dyn VectorField, x: &[f64], h: f64, cfg: &IntegratorConfig) -> Result<(Vec<f64>, f64)> {
    let dim = x.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut xs = x.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let a = DP_A[s][j];
            if a != 0.0 {
                xs.iter_mut().zip(kj).for_each(|(v, d)| *v += h * a * d);
            }
        }
        debug_assert!(DP_C[s] >= 0.0);
        k.push(field.eval(&xs)?);
    }
    let mut y5 = x.to_vec();
    let mut err = 0.0;
    for i in 0..dim {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for s in 0..7 {
            d5 += DP_B5[s] * k[s][i];
            d4 += DP_B4[s] * k[s][i];
        }
        y5[i] += h * d5;
        let scale = cfg.abs_tol + cfg.rel_tol * x[i].abs().max(y5[i].abs());
        let e = h * (d5 - d4) / scale;
        err += e * e;
    }
    Ok((y5, (err / dim.max(1) as f64).sqrt()))
}

/// Integrates `field` from `x0` over `cfg.t0..cfg.t1`.
pub fn flow(field: &dyn VectorField, x0: &Point, cfg: &IntegratorConfig) -> std::result::Result<Trajectory, FlowError> {
    let mut traj = Trajectory::new(x0.chart());
    let fail = |kind, t, partial: &Trajectory| FlowError {
        kind,
        t,
        partial: partial.clone(),
    };
    if let Err(e) = cfg.validate() {
        return Err(fail(FlowErrorKind::Field(e.to_string()), cfg.t0, &traj));
    }
    if x0.chart() != field.chart() {
        let msg = format!("initial point on {}, field on {}", x0.chart(), field.chart());
        return Err(fail(FlowErrorKind::Field(msg), cfg.t0, &traj));
    }
    let (steps, h) = cfg.grid();
    let mut x = x0.coords().to_vec();
    traj.push(cfg.t0, x.clone());
    let mut h_try = h;
    for i in 1..=steps {
        let t_prev = cfg.t0 + (i - 1) as f64 * h;
        let t_node = if i == steps { cfg.t1 } else { cfg.t0 + i as f64 * h };
        match cfg.method {
            Method::Rk4 => match rk4_step(field, &x, t_node - t_prev) {
                Ok(next) => x = next,
                Err(e) => return Err(fail(FlowErrorKind::Field(e.to_string()), t_prev, &traj)),
            },
            Method::Rk45 => {
                let mut t = t_prev;
                while t < t_node {
                    let remaining = t_node - t;
                    let last = h_try >= remaining;
                    let step = if last { remaining } else { h_try };
                    let (y, err) = match dopri_step(field, &x, step, cfg) {
                        Ok(r) => r,
                        Err(e) => return Err(fail(FlowErrorKind::Field(e.to_string()), t, &traj)),
                    };
                    let factor = if !err.is_finite() {
                        0.2
                    } else if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if err <= 1.0 && !blown_up(&y) {
                        x = y;
                        t = if last { t_node } else { t + step };
                        if !last {
                            h_try = step * factor;
                        }
                    } else {
                        h_try = step * factor.min(1.0);
                    }
                    if h_try < MIN_STEP {
                        return Err(fail(FlowErrorKind::StepUnderflow { step: h_try }, t, &traj));
                    }
                    if blown_up(&x) {
                        return Err(fail(FlowErrorKind::BlowUp, t, &traj));
                    }
                }
            }
        }
        if blown_up(&x) {
            return Err(fail(FlowErrorKind::BlowUp, t_node, &traj));
        }
        if i % cfg.record_every == 0 || i == steps {
            traj.push(t_node, x.clone());
        }
    }
    Ok(traj)
}

/// Integrates `X_H` (symplectic or contact by chart) and records `H`.
pub fn hamiltonian_flow(h: &ScalarField, x0: &Point, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let field = HamiltonianField::new(h)?;
    let mut traj = flow(&field, x0, cfg)?;
    attach_energy(&mut traj, h)?;
    Ok(traj)
}

// ---------------------------------------------------------------------------
// Monitors.

/// Along-flow invariant residuals. Maxima combine with [`merge`](Self::merge),
/// which is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InvariantReport {
    pub samples: usize,
    /// `max |H(t) − H(0)|`.
    pub energy_drift: Option<f64>,
    /// Contact charts: `max |H(t) − H(0) exp(−∫𝓡(H) dt)|`.
    pub decay_residual: Option<f64>,
    /// `decay_residual / |H(0)|`.
    pub relative_decay_residual: Option<f64>,
    /// `max |dH/dt − (−𝓡(H) H)|` with `dH/dt` from finite differences in time.
    pub rate_residual: Option<f64>,
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl InvariantReport {
    pub fn merge(self, other: InvariantReport) -> InvariantReport {
        InvariantReport {
            samples: self.samples + other.samples,
            energy_drift: max_opt(self.energy_drift, other.energy_drift),
            decay_residual: max_opt(self.decay_residual, other.decay_residual),
            relative_decay_residual: max_opt(self.relative_decay_residual, other.relative_decay_residual),
            rate_residual: max_opt(self.rate_residual, other.rate_residual),
        }
    }
}

pub fn monitor(traj: &Trajectory, h: &ScalarField) -> Result<InvariantReport> {
    if traj.is_empty() {
        return Ok(InvariantReport::default());
    }
    if traj.chart() != h.chart() {
        return Err(Error::ChartMismatch {
            expected: h.chart().to_string(),
            found: traj.chart().to_string(),
        });
    }
    let points: Vec<Point> = (0..traj.len()).map(|i| traj.point(i)).collect();
    let energy = points.iter().map(|p| h.value(p)).collect::<Result<Vec<_>>>()?;
    let h0 = energy[0];
    let drift = energy.iter().map(|e| (e - h0).abs()).fold(0.0, f64::max);
    let mut report = InvariantReport {
        samples: traj.len(),
        energy_drift: Some(drift),
        ..Default::default()
    };
    if traj.chart().kind() == ChartKind::Contact {
        let rh = points
            .iter()
            .map(|p| hamiltonian::reeb_derivative(h, p))
            .collect::<Result<Vec<_>>>()?;
        let integral = cumulative_trapezoid(traj.times(), &rh);
        let decay = energy
            .iter()
            .zip(&integral)
            .map(|(e, s)| (e - h0 * (-s).exp()).abs())
            .fold(0.0, f64::max);
        report.decay_residual = Some(decay);
        report.relative_decay_residual = Some(if h0 != 0.0 { decay / h0.abs() } else { decay });
    }
    if traj.len() >= 2 {
        let residuals = dissipation_residuals(traj, h)?;
        report.rate_residual = Some(residuals.iter().map(|r| r.abs()).fold(0.0, f64::max));
    }
    Ok(report)
}

/// Central-difference Jacobian `∂Xᵢ/∂xⱼ`.
pub fn jacobian(field: &dyn VectorField, x: &[f64]) -> Result<DMatrix<f64>> {
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    let mut xs = x.to_vec();
    for j in 0..dim {
        xs[j] = x[j] + JACOBIAN_STEP;
        let fp = field.eval(&xs)?;
        xs[j] = x[j] - JACOBIAN_STEP;
        let fm = field.eval(&xs)?;
        xs[j] = x[j];
        for i in 0..dim {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * JACOBIAN_STEP);
        }
    }
    Ok(jac)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeSample {
    pub t: f64,
    /// `det DΦ_t` from the variational equation.
    pub determinant: f64,
    /// `exp(−(n+1) ∫ 𝓡(H) dt)`.
    pub predicted: f64,
    pub ratio: f64,
}

/// Propagates the variational equation `Ẏ = DX_H(x) Y` together with the
/// state and the predicted log-volume `ṡ = −(n+1) 𝓡(H)(x)`, sampled at
/// the trajectory's times.
pub fn variational_volume(traj: &Trajectory, h: &ScalarField) -> Result<Vec<VolumeSample>> {
    traj.chart().expect(ChartKind::Contact)?;
    if traj.chart() != h.chart() {
        return Err(Error::ChartMismatch {
            expected: h.chart().to_string(),
            found: traj.chart().to_string(),
        });
    }
    if traj.is_empty() {
        return Ok(Vec::new());
    }
    let field = HamiltonianField::new(h)?;
    let dim = traj.chart().dim();
    let n1 = (traj.chart().n() + 1) as f64;
    let z = 2 * traj.chart().n();

    // augmented layout: x (dim), Y column-major (dim²), s
    let rhs = |y: &[f64]| -> Result<Vec<f64>> {
        let x = &y[..dim];
        let mut out = field.eval(x)?;
        let jac = jacobian(&field, x)?;
        let ymat = DMatrix::from_column_slice(dim, dim, &y[dim..dim + dim * dim]);
        out.extend((jac * ymat).iter().copied());
        out.push(-n1 * h.grad_raw(x)[z]);
        Ok(out)
    };
    let aug = FnAugmented { f: rhs };
    let mut state = traj.states()[0].clone();
    state.extend(DMatrix::<f64>::identity(dim, dim).iter().copied());
    state.push(0.0);

    let sample = |t: f64, s: &[f64]| {
        let det = DMatrix::from_column_slice(dim, dim, &s[dim..dim + dim * dim]).determinant();
        let predicted = s[dim + dim * dim].exp();
        VolumeSample {
            t,
            determinant: det,
            predicted,
            ratio: det / predicted,
        }
    };
    let times = traj.times();
    let mut out = vec![sample(times[0], &state)];
    for w in times.windows(2) {
        let span = w[1] - w[0];
        let sub = (span / VARIATIONAL_MAX_STEP).ceil().max(1.0) as usize;
        let hs = span / sub as f64;
        for _ in 0..sub {
            state = rk4_step(&aug, &state, hs)?;
        }
        out.push(sample(w[1], &state));
    }
    Ok(out)
}

struct FnAugmented<F> {
    f: F,
}

impl<F> VectorField for FnAugmented<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    fn chart(&self) -> Chart {
        unreachable!("augmented systems are only stepped directly")
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        (self.f)(x)
    }
}
