//! Hamiltonian vector fields, their Jacobians, equilibrium residuals and
//! time integration with conservation monitoring.

use nalgebra::{Matrix6, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{casimirs, hamiltonian, integral_i, uv_join, uv_split, BodyState, InertiaSpectrum};
use crate::tol;

/// Which first integral generates the flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flow {
    H,
    I,
}

/// Lie–Poisson tensor `Gamma` with `d/dt s = Gamma(s) grad F(s)`.
pub fn lie_poisson_matrix(s: &BodyState) -> Matrix6<f64> {
    let [x1, x2, x3] = s.x;
    let [y1, y2, y3] = s.y;
    Matrix6::new(
        0.0, -x3, x2, 0.0, -y3, y2, //
        x3, 0.0, -x1, y3, 0.0, -y1, //
        -x2, x1, 0.0, -y2, y1, 0.0, //
        0.0, -y3, y2, 0.0, -x3, x2, //
        y3, 0.0, -y1, x3, 0.0, -x1, //
        -y2, y1, 0.0, -x2, x1, 0.0,
    )
}

/// Constant Hessian of the generating integral.
pub fn hessian(flow: Flow, j: &InertiaSpectrum) -> Matrix6<f64> {
    let d = match flow {
        Flow::H => j.omega_weights().map(|p| 1.0 / p),
        Flow::I => j.integral_weights().map(|q| 2.0 * q),
    };
    Matrix6::from_diagonal(&Vector6::from_column_slice(&d))
}

pub fn gradient(flow: Flow, s: &BodyState, j: &InertiaSpectrum) -> Vector6<f64> {
    hessian(flow, j) * s.to_vector()
}

/// Gradient of `C1`, the state itself.
pub fn grad_c1(s: &BodyState) -> Vector6<f64> {
    s.to_vector()
}

/// Gradient of `C2 = x . y`, namely `(y, x)`.
pub fn grad_c2(s: &BodyState) -> Vector6<f64> {
    BodyState::new(s.y, s.x).to_vector()
}

/// Right-hand side of the rigid-body equations, written out componentwise.
pub fn h_vector_field(s: &BodyState, j: &InertiaSpectrum) -> BodyState {
    let [l1, l2, l3, l4] = j.lambda();
    let [x1, x2, x3] = s.x;
    let [y1, y2, y3] = s.y;
    let r = |a: f64, b: f64| 1.0 / a - 1.0 / b;
    let dx1 = r(l1 + l2, l1 + l3) * x2 * x3 + r(l3 + l4, l2 + l4) * y2 * y3;
    let dx2 = r(l2 + l3, l1 + l2) * x1 * x3 + r(l1 + l4, l3 + l4) * y1 * y3;
    let dx3 = r(l1 + l3, l2 + l3) * x1 * x2 + r(l2 + l4, l1 + l4) * y1 * y2;
    let dy1 = r(l3 + l4, l1 + l3) * x2 * y3 + r(l1 + l2, l2 + l4) * x3 * y2;
    let dy2 = r(l2 + l3, l3 + l4) * x1 * y3 + r(l1 + l4, l1 + l2) * x3 * y1;
    let dy3 = r(l2 + l4, l2 + l3) * x1 * y2 + r(l1 + l3, l1 + l4) * x2 * y1;
    BodyState::from_coords([dx1, dx2, dx3, dy1, dy2, dy3])
}

/// Flow of the additional integral `I`, written out componentwise.
pub fn i_vector_field(s: &BodyState, j: &InertiaSpectrum) -> BodyState {
    let [q1, q2, q3, q4] = j.squares();
    let [x1, x2, x3] = s.x;
    let [y1, y2, y3] = s.y;
    let dx1 = 2.0 * (q2 - q3) * (x2 * x3 - y2 * y3);
    let dx2 = 2.0 * (q3 - q1) * (x3 * x1 - y3 * y1);
    let dx3 = 2.0 * (q1 - q2) * (x1 * x2 - y1 * y2);
    let dy1 = 2.0 * (q4 - q1) * (x2 * y3 - x3 * y2);
    let dy2 = 2.0 * (q4 - q2) * (x3 * y1 - x1 * y3);
    let dy3 = 2.0 * (q4 - q3) * (x1 * y2 - x2 * y1);
    BodyState::from_coords([dx1, dx2, dx3, dy1, dy2, dy3])
}

pub fn vector_field(flow: Flow, s: &BodyState, j: &InertiaSpectrum) -> BodyState {
    match flow {
        Flow::H => h_vector_field(s, j),
        Flow::I => i_vector_field(s, j),
    }
}

/// Exact Jacobian of the quadratic field `Gamma(s) Hess s`.
///
/// Column `k` is `Gamma(e_k) Hess s + Gamma(s) Hess e_k`.
pub fn jacobian(flow: Flow, s: &BodyState, j: &InertiaSpectrum) -> Matrix6<f64> {
    let hess = hessian(flow, j);
    let hs = hess * s.to_vector();
    let gs = lie_poisson_matrix(s) * hess;
    let mut out = Matrix6::zeros();
    for k in 0..6 {
        let mut e = [0.0; 6];
        e[k] = 1.0;
        let col = lie_poisson_matrix(&BodyState::from_coords(e)) * hs + gs.column(k);
        out.set_column(k, &col);
    }
    out
}

/// Central-difference Jacobian with step `step_scale * (1 + |s|)`.
pub fn jacobian_central_difference(flow: Flow, s: &BodyState, j: &InertiaSpectrum, step_scale: f64) -> Matrix6<f64> {
    let h = step_scale * (1.0 + s.norm());
    let base = s.coords();
    let mut out = Matrix6::zeros();
    for k in 0..6 {
        let mut plus = base;
        let mut minus = base;
        plus[k] += h;
        minus[k] -= h;
        let fp = vector_field(flow, &BodyState::from_coords(plus), j).to_vector();
        let fm = vector_field(flow, &BodyState::from_coords(minus), j).to_vector();
        out.set_column(k, &((fp - fm) / (2.0 * h)));
    }
    out
}

/// Left-hand sides of the six quadratic equilibrium conditions.
pub fn equilibrium_conditions(s: &BodyState, j: &InertiaSpectrum) -> [f64; 6] {
    let p = |a, b| j.pair(a, b);
    let [x1, x2, x3] = s.x;
    let [y1, y2, y3] = s.y;
    [
        p(2, 4) * p(3, 4) * x2 * x3 - p(1, 2) * p(1, 3) * y2 * y3,
        p(1, 4) * p(3, 4) * x1 * x3 - p(1, 2) * p(2, 3) * y1 * y3,
        p(1, 4) * p(2, 4) * x1 * x2 - p(1, 3) * p(2, 3) * y1 * y2,
        p(1, 2) * p(2, 4) * x2 * y3 - p(1, 3) * p(3, 4) * x3 * y2,
        p(1, 2) * p(1, 4) * x1 * y3 - p(2, 3) * p(3, 4) * x3 * y1,
        p(1, 3) * p(1, 4) * x1 * y2 - p(2, 3) * p(2, 4) * x2 * y1,
    ]
}

/// Largest coefficient magnitude among the equilibrium conditions.
fn condition_scale(j: &InertiaSpectrum) -> f64 {
    let w = j.omega_weights();
    let mut m = 0.0_f64;
    for a in 0..6 {
        for b in (a + 1)..6 {
            m = m.max((w[a] * w[b]).abs());
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResidual {
    /// Max absolute value of the six conditions.
    pub raw: f64,
    /// `raw` divided by the largest coefficient and by `|s|^2`.
    pub scaled: f64,
}

pub fn equilibrium_residual_detail(s: &BodyState, j: &InertiaSpectrum) -> EquilibriumResidual {
    let raw = equilibrium_conditions(s, j).iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let n2 = s.coords().iter().map(|c| c * c).sum::<f64>();
    let scaled = if n2 > 0.0 { raw / (condition_scale(j) * n2) } else { 0.0 };
    EquilibriumResidual { raw, scaled }
}

/// Scale-free equilibrium residual; zero exactly on equilibria.
pub fn equilibrium_residual(s: &BodyState, j: &InertiaSpectrum) -> f64 {
    equilibrium_residual_detail(s, j).scaled
}

/// `max |[J, Omega^2]_{ik}|` with the 4x4 inertia `J`.
pub fn commutator_residual(s: &BodyState, j: &InertiaSpectrum) -> f64 {
    let omega = crate::lie::omega_of(s, j).to_matrix();
    let o2 = omega * omega;
    let jm = nalgebra::Matrix4::from_diagonal(&nalgebra::Vector4::from_column_slice(&j.lambda()));
    (jm * o2 - o2 * jm).amax()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Rk4,
    ImplicitMidpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub step: f64,
    pub scheme: Scheme,
    pub max_steps: usize,
    /// Rescale `u` and `v` after every step to their initial lengths.
    pub projection: bool,
    /// Store every `record_every`-th state (the last state is always stored).
    pub record_every: usize,
    /// Abort when `|H - H0| / max(|H0|, tiny)` exceeds this.
    pub max_h_drift: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            scheme: Scheme::Rk4,
            max_steps: 10_000,
            projection: false,
            record_every: 1,
            max_h_drift: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!("step must be positive, got {}", self.step)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        if let Some(b) = self.max_h_drift {
            if !(b > 0.0) {
                return Err(Error::InvalidConfig(format!("max_h_drift must be positive, got {b}")));
            }
        }
        Ok(())
    }
}

/// Absolute deviations of the four integrals from their initial values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub c1: f64,
    pub c2: f64,
    pub h: f64,
    pub i: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    pub c1: f64,
    pub c2: f64,
    pub h: f64,
    pub i: f64,
}

impl Invariants {
    pub fn of(s: &BodyState, j: &InertiaSpectrum) -> Self {
        let o = casimirs(s);
        Self { c1: o.c1, c2: o.c2, h: hamiltonian(s, j), i: integral_i(s, j) }
    }

    fn drift_from(&self, base: &Self) -> Drift {
        Drift {
            c1: (self.c1 - base.c1).abs(),
            c2: (self.c2 - base.c2).abs(),
            h: (self.h - base.h).abs(),
            i: (self.i - base.i).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub flow: Flow,
    pub initial: Invariants,
    pub times: Vec<f64>,
    pub states: Vec<BodyState>,
    pub drifts: Vec<Drift>,
}

impl Trajectory {
    /// Componentwise maximum drift over the run.
    pub fn max_drift(&self) -> Drift {
        self.drifts.iter().fold(Drift::default(), |m, d| Drift {
            c1: m.c1.max(d.c1),
            c2: m.c2.max(d.c2),
            h: m.h.max(d.h),
            i: m.i.max(d.i),
        })
    }

    /// Maximum drift divided by the initial magnitudes.
    pub fn max_relative_drift(&self) -> Drift {
        let d = self.max_drift();
        let rel = |a: f64, b: f64| if b.abs() > 0.0 { a / b.abs() } else { a };
        // C2 can vanish while C1 cannot on a nonzero state; measure it against C1.
        Drift {
            c1: rel(d.c1, self.initial.c1),
            c2: rel(d.c2, self.initial.c1),
            h: rel(d.h, self.initial.h),
            i: rel(d.i, self.initial.i),
        }
    }

    pub fn last(&self) -> Option<&BodyState> {
        self.states.last()
    }
}

fn rk4_step(flow: Flow, s: &BodyState, j: &InertiaSpectrum, h: f64) -> BodyState {
    let f = |z: &BodyState| vector_field(flow, z, j);
    let k1 = f(s);
    let k2 = f(&(*s + k1 * (0.5 * h)));
    let k3 = f(&(*s + k2 * (0.5 * h)));
    let k4 = f(&(*s + k3 * h));
    *s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Implicit midpoint rule solved by Newton iteration. It preserves every
/// quadratic invariant, so `C1`, `C2`, `H` and `I` drift only through the
/// solver tolerance.
fn midpoint_step(flow: Flow, s: &BodyState, j: &InertiaSpectrum, h: f64) -> Result<BodyState> {
    let s0 = s.to_vector();
    let mut z = rk4_step(flow, s, j, h).to_vector();
    for _ in 0..50 {
        let m = BodyState::from_vector(&((s0 + z) * 0.5));
        let g = z - s0 - vector_field(flow, &m, j).to_vector() * h;
        let dg = Matrix6::identity() - jacobian(flow, &m, j) * (0.5 * h);
        let delta = dg
            .lu()
            .solve(&g)
            .ok_or_else(|| Error::Numerical("singular Newton matrix in implicit midpoint".into()))?;
        z -= delta;
        if delta.amax() <= 4.0 * f64::EPSILON * (1.0 + z.amax()) {
            return Ok(BodyState::from_vector(&z));
        }
    }
    Err(Error::Numerical("implicit midpoint Newton iteration did not converge".into()))
}

/// Rescale `u = x + y` and `v = x - y` to the given squared lengths.
pub fn project_to_orbit(s: &BodyState, du: f64, dv: f64) -> BodyState {
    let mut uv = uv_split(s);
    let scale = |w: &mut [f64; 3], target: f64| {
        let n = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.0 {
            let k = target.max(0.0).sqrt() / n;
            w.iter_mut().for_each(|c| *c *= k);
        }
    };
    scale(&mut uv.u, du);
    scale(&mut uv.v, dv);
    uv_join(&uv)
}

pub fn integrate(state0: &BodyState, j: &InertiaSpectrum, cfg: &IntegratorConfig, flow: Flow) -> Result<Trajectory> {
    cfg.validate()?;
    if !state0.is_finite() {
        return Err(Error::InvalidConfig("initial state has non-finite coordinates".into()));
    }
    let base = Invariants::of(state0, j);
    let uv0 = uv_split(state0);
    let (du, dv) = (uv0.du(), uv0.dv());

    let cap = cfg.max_steps / cfg.record_every + 2;
    let mut traj = Trajectory {
        flow,
        initial: base,
        times: Vec::with_capacity(cap),
        states: Vec::with_capacity(cap),
        drifts: Vec::with_capacity(cap),
    };
    traj.times.push(0.0);
    traj.states.push(*state0);
    traj.drifts.push(Drift::default());

    let mut s = *state0;
    for step in 1..=cfg.max_steps {
        s = match cfg.scheme {
            Scheme::Rk4 => rk4_step(flow, &s, j, cfg.step),
            Scheme::ImplicitMidpoint => midpoint_step(flow, &s, j, cfg.step)?,
        };
        if cfg.projection {
            s = project_to_orbit(&s, du, dv);
        }
        if !s.is_finite() {
            return Err(Error::Numerical(format!("state became non-finite at step {step}")));
        }
        let inv = Invariants::of(&s, j);
        if let Some(bound) = cfg.max_h_drift {
            let drift = (inv.h - base.h).abs() / base.h.abs().max(f64::MIN_POSITIVE);
            if drift > bound {
                return Err(Error::DriftExceeded { drift, bound, step });
            }
        }
        if step % cfg.record_every == 0 || step == cfg.max_steps {
            traj.times.push(step as f64 * cfg.step);
            traj.states.push(s);
            traj.drifts.push(inv.drift_from(&base));
        }
    }
    Ok(traj)
}

/// Whether the residual says `s` is an equilibrium.
pub fn is_equilibrium(s: &BodyState, j: &InertiaSpectrum) -> bool {
    equilibrium_residual(s, j) <= tol::RESIDUAL
}
