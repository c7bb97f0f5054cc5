//! Equilibrium families on a fixed adjoint orbit.
//!
//! Every equilibrium lies in one of the coordinate Cartan subalgebras
//! `t1 = span(E1, E4)`, `t2 = span(E2, E5)`, `t3 = span(E3, E6)` or in one of the
//! two three-dimensional subspaces `s+`, `s-`. On a regular orbit each `ti`
//! contributes a Weyl orbit of four points, while `s±` contribute curves.

use nalgebra::{Matrix6x4, QR, SMatrix, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::dynamics::{equilibrium_residual, gradient, grad_c1, grad_c2, Flow};
use crate::error::{Error, Result};
use crate::lie::{casimirs, BodyState, InertiaSpectrum, OrbitParams, Regularity};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    T1,
    T2,
    T3,
    SPlus,
    SMinus,
}

impl Family {
    pub const CARTAN: [Family; 3] = [Family::T1, Family::T2, Family::T3];

    pub fn is_cartan(self) -> bool {
        matches!(self, Family::T1 | Family::T2 | Family::T3)
    }

    /// Coordinate slot `k` with `x_k`, `y_k` nonzero for Cartan families.
    fn slot(self) -> Option<usize> {
        match self {
            Family::T1 => Some(0),
            Family::T2 => Some(1),
            Family::T3 => Some(2),
            _ => None,
        }
    }
}

/// Position inside a Weyl orbit `{M_{a,b}, M_{-a,-b}, M_{b,a}, M_{-b,-a}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylLabel {
    Ab,
    NegAb,
    Ba,
    NegBa,
}

impl WeylLabel {
    pub const ALL: [WeylLabel; 4] = [WeylLabel::Ab, WeylLabel::NegAb, WeylLabel::Ba, WeylLabel::NegBa];

    /// The `(x_k, y_k)` pair for Cartan parameters `(a, b)`.
    pub fn apply(self, a: f64, b: f64) -> (f64, f64) {
        match self {
            WeylLabel::Ab => (a, b),
            WeylLabel::NegAb => (-a, -b),
            WeylLabel::Ba => (b, a),
            WeylLabel::NegBa => (-b, -a),
        }
    }

    /// Whether the point is `M_{b,a}` or `M_{-b,-a}`.
    pub fn is_swapped(self) -> bool {
        matches!(self, WeylLabel::Ba | WeylLabel::NegBa)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub state: BodyState,
    pub family: Family,
    pub weyl_label: Option<WeylLabel>,
    pub cartan_params: Option<(f64, f64)>,
    pub s_params: Option<[f64; 3]>,
    pub orbit: OrbitParams,
}

impl Equilibrium {
    /// Check the type invariants against `j`.
    pub fn validate(&self, j: &InertiaSpectrum) -> Result<()> {
        let r = equilibrium_residual(&self.state, j);
        if r > tol::RESIDUAL {
            return Err(Error::NotEquilibrium(r));
        }
        let o = casimirs(&self.state);
        let scale = self.orbit.c1.abs().max(1.0);
        if (o.c1 - self.orbit.c1).abs() > 1e-9 * scale || (o.c2 - self.orbit.c2).abs() > 1e-9 * scale {
            return Err(Error::InvalidConfig(format!(
                "state Casimirs ({}, {}) differ from orbit ({}, {})",
                o.c1, o.c2, self.orbit.c1, self.orbit.c2
            )));
        }
        if let Some(k) = self.family.slot() {
            let c = self.state.coords();
            if (0..3).filter(|&i| i != k).any(|i| c[i] != 0.0 || c[i + 3] != 0.0) {
                return Err(Error::InvalidConfig(format!("{:?} point has off-slot coordinates", self.family)));
            }
        }
        Ok(())
    }
}

/// Cartan parameters with `a >= |b|`, `a^2 + b^2 = 2 c1`, `ab = c2`.
pub fn cartan_ab(orbit: &OrbitParams) -> Result<(f64, f64)> {
    let OrbitParams { c1, c2 } = *orbit;
    if !(c1 >= c2.abs()) {
        // Allow roundoff-level violations accepted by `OrbitParams::new`.
        if !(c1 >= c2.abs() - tol::REGULARITY_REL * c1.abs().max(c2.abs())) {
            return Err(Error::OutsideChamber { c1, c2 });
        }
    }
    let p = (c1 + c2).max(0.0).sqrt();
    let m = (c1 - c2).max(0.0).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok((r * (p + m), r * (p - m)))
}

/// One Cartan point; `alpha`, `beta` are the `(x_k, y_k)` entries.
pub fn cartan_state(family: Family, alpha: f64, beta: f64) -> Result<BodyState> {
    let k = family
        .slot()
        .ok_or_else(|| Error::InvalidConfig(format!("{family:?} is not a Cartan family")))?;
    let mut c = [0.0; 6];
    c[k] = alpha;
    c[k + 3] = beta;
    Ok(BodyState::from_coords(c))
}

pub fn cartan_point(family: Family, label: WeylLabel, orbit: &OrbitParams) -> Result<Equilibrium> {
    let (a, b) = cartan_ab(orbit)?;
    let (alpha, beta) = label.apply(a, b);
    Ok(Equilibrium {
        state: cartan_state(family, alpha, beta)?,
        family,
        weyl_label: Some(label),
        cartan_params: Some((a, b)),
        s_params: None,
        orbit: *orbit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylOrbit {
    pub family: Family,
    /// In the order `M_{a,b}, M_{-a,-b}, M_{b,a}, M_{-b,-a}`.
    pub points: [Equilibrium; 4],
}

/// The twelve Cartan equilibria on a regular orbit.
pub fn weyl_orbits(orbit: &OrbitParams) -> Result<[WeylOrbit; 3]> {
    if orbit.regularity() != Regularity::Regular {
        return Err(Error::NotRegular { c1: orbit.c1, c2: orbit.c2, regularity: orbit.regularity() });
    }
    let build = |family: Family| -> Result<WeylOrbit> {
        let p = |l| cartan_point(family, l, orbit);
        Ok(WeylOrbit { family, points: [p(WeylLabel::Ab)?, p(WeylLabel::NegAb)?, p(WeylLabel::Ba)?, p(WeylLabel::NegBa)?] })
    };
    Ok([build(Family::T1)?, build(Family::T2)?, build(Family::T3)?])
}

/// Pair sums `(P_i, Q_i)` with `x_i = a_i / P_i`, `y_i = ±a_i / Q_i` on `s±`.
fn s_denominators(j: &InertiaSpectrum) -> ([f64; 3], [f64; 3]) {
    (
        [j.pair(1, 4), j.pair(2, 4), j.pair(3, 4)],
        [j.pair(2, 3), j.pair(1, 3), j.pair(1, 2)],
    )
}

/// The element of `s+` (`sign > 0`) or `s-` with parameters `a`.
pub fn s_state(j: &InertiaSpectrum, a: [f64; 3], sign: f64) -> BodyState {
    let (p, q) = s_denominators(j);
    let sg = if sign < 0.0 { -1.0 } else { 1.0 };
    BodyState::new(std::array::from_fn(|i| a[i] / p[i]), std::array::from_fn(|i| sg * a[i] / q[i]))
}

/// Recover `(a, sign)` from a state in `s±`; `None` if it lies in neither.
pub fn s_params_of(j: &InertiaSpectrum, s: &BodyState) -> Option<([f64; 3], Family)> {
    let (p, q) = s_denominators(j);
    let a: [f64; 3] = std::array::from_fn(|i| s.x[i] * p[i]);
    let scale = s.max_abs().max(f64::MIN_POSITIVE);
    for (sg, fam) in [(1.0, Family::SPlus), (-1.0, Family::SMinus)] {
        if (0..3).all(|i| (s.y[i] - sg * a[i] / q[i]).abs() <= 1e-12 * scale) {
            return Some((a, fam));
        }
    }
    None
}

fn count_nonzero(a: &[f64; 3]) -> usize {
    let m = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    a.iter().filter(|v| v.abs() > 1e-12 * m).count()
}

pub fn s_equilibrium(j: &InertiaSpectrum, a: [f64; 3], sign: f64) -> Equilibrium {
    let state = s_state(j, a, sign);
    Equilibrium {
        state,
        family: if sign < 0.0 { Family::SMinus } else { Family::SPlus },
        weyl_label: None,
        cartan_params: None,
        s_params: Some(a),
        orbit: casimirs(&state),
    }
}

/// The segment of squared parameters `A_i = a_i^2 >= 0` solving the two
/// Casimir equations, which are linear in `A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SSegment {
    pub start: [f64; 3],
    pub end: [f64; 3],
    pub sign: f64,
}

impl SSegment {
    pub fn at(&self, t: f64) -> [f64; 3] {
        std::array::from_fn(|i| (self.start[i] + t * (self.end[i] - self.start[i])).max(0.0))
    }
}

/// `s± ∩ Orb` in squared coordinates, or `None` when empty.
///
/// On `s±` the Casimirs are `C1 = sum A_i (1/P_i^2 + 1/Q_i^2) / 2` and
/// `C2 = ±sum A_i / (P_i Q_i)`, so the intersection is the preimage under
/// `a -> a^2` of a segment in the closed positive octant.
pub fn s_segment(j: &InertiaSpectrum, orbit: &OrbitParams) -> Option<SSegment> {
    let scale = orbit.c1.abs().max(orbit.c2.abs());
    if orbit.c2.abs() <= tol::REGULARITY_REL * scale || scale == 0.0 {
        return None;
    }
    let sign = orbit.c2.signum();
    let (p, q) = s_denominators(j);
    let g = Vector3::from_fn(|i, _| 0.5 * (1.0 / (p[i] * p[i]) + 1.0 / (q[i] * q[i])));
    let h = Vector3::from_fn(|i, _| 1.0 / (p[i] * q[i]));
    let rhs = nalgebra::Vector2::new(orbit.c1, orbit.c2.abs());
    let d = g.cross(&h);
    if d.norm() <= 1e-14 * g.norm() * h.norm() {
        return None;
    }
    let m = nalgebra::Matrix2x3::from_rows(&[g.transpose(), h.transpose()]);
    let gram = m * m.transpose();
    let a0 = m.transpose() * gram.try_inverse()? * rhs;

    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let tiny = 1e-13 * a0.amax().max(f64::MIN_POSITIVE);
    for i in 0..3 {
        if d[i].abs() <= 1e-15 * d.amax() {
            if a0[i] < -tiny {
                return None;
            }
            continue;
        }
        let t = -a0[i] / d[i];
        if d[i] > 0.0 {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return None;
    }
    let start = a0 + d * lo;
    let end = a0 + d * hi;
    Some(SSegment {
        start: std::array::from_fn(|i| start[i].max(0.0)),
        end: std::array::from_fn(|i| end[i].max(0.0)),
        sign,
    })
}

/// Points of the `s±` curve on the orbit, with the family fixed by `sign(c2)`.
///
/// `count` interior parameters of the segment are taken uniformly and each is
/// lifted to every sign pattern of `(a1, a2, a3)`, so up to `8 * count` points
/// come back. Cartan points (fewer than two nonzero `a_i`) are skipped.
pub fn s_curve_sample(j: &InertiaSpectrum, orbit: &OrbitParams, count: usize) -> Vec<Equilibrium> {
    let Some(seg) = s_segment(j, orbit) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for k in 0..count {
        let t = (k as f64 + 0.5) / count as f64;
        let sq = seg.at(t);
        let base = sq.map(f64::sqrt);
        if count_nonzero(&base) < 2 {
            continue;
        }
        for mask in 0..8u8 {
            let a: [f64; 3] = std::array::from_fn(|i| if mask >> i & 1 == 1 { -base[i] } else { base[i] });
            // Sign flips of zero entries repeat earlier patterns.
            if (0..3).any(|i| mask >> i & 1 == 1 && base[i] == 0.0) {
                continue;
            }
            let mut e = s_equilibrium(j, a, seg.sign);
            e.orbit = *orbit;
            out.push(e);
        }
    }
    out
}

/// [`s_curve_sample`] restricted to one family; empty when `family` does
/// not match `sign(c2)`.
pub fn s_curve_sample_family(j: &InertiaSpectrum, orbit: &OrbitParams, family: Family, count: usize) -> Vec<Equilibrium> {
    s_curve_sample(j, orbit, count).into_iter().filter(|e| e.family == family).collect()
}

/// Orthonormal frame of `T_M Orb`, the orthogonal complement of the Casimir
/// gradients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentFrame {
    pub basis: Matrix6x4<f64>,
    normals: SMatrix<f64, 6, 2>,
}

impl TangentFrame {
    /// Fails when the Casimir gradients are dependent (non-regular point).
    pub fn at(s: &BodyState) -> Result<Self> {
        let mut m = SMatrix::<f64, 6, 8>::zeros();
        m.set_column(0, &grad_c1(s));
        m.set_column(1, &grad_c2(s));
        for k in 0..6 {
            m[(k, k + 2)] = 1.0;
        }
        let qr = QR::new(m);
        let r = qr.r();
        let q = qr.q();
        let n = grad_c1(s).norm();
        if n == 0.0 || r[(1, 1)].abs() <= 1e-10 * n {
            return Err(Error::NotRegular {
                c1: casimirs(s).c1,
                c2: casimirs(s).c2,
                regularity: casimirs(s).regularity(),
            });
        }
        Ok(Self { basis: q.fixed_columns::<4>(2).into_owned(), normals: q.fixed_columns::<2>(0).into_owned() })
    }

    /// Orthogonal projection onto the tangent space.
    pub fn project(&self, v: &Vector6<f64>) -> Vector6<f64> {
        v - self.normals * (self.normals.transpose() * v)
    }

    pub fn coordinates(&self, v: &Vector6<f64>) -> nalgebra::Vector4<f64> {
        self.basis.transpose() * v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumKind {
    /// `dI` restricted to the orbit vanishes.
    K0,
    K1,
}

/// `K0` iff the tangential part of `grad I` is negligible relative to `|grad I|`.
pub fn classify_k0_k1(eq: &Equilibrium, j: &InertiaSpectrum) -> Result<EquilibriumKind> {
    let frame = TangentFrame::at(&eq.state)?;
    let g = gradient(Flow::I, &eq.state, j);
    let t = frame.project(&g);
    Ok(if t.norm() <= tol::K0_REL * g.norm() { EquilibriumKind::K0 } else { EquilibriumKind::K1 })
}
