//! Linearizations restricted to the orbit tangent space, their characteristic
//! quartics, and Williamson classification.

use nalgebra::{Matrix4, Matrix6, Matrix6x4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{equilibrium_residual, jacobian, jacobian_central_difference, Flow};
use crate::equilibria::TangentFrame;
use crate::error::{Error, Result};
use crate::lie::{BodyState, InertiaSpectrum};
use crate::tol;

/// How the 6x6 Jacobians are obtained before restriction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianMethod {
    /// Exact, since both vector fields are quadratic.
    #[default]
    Analytic,
    /// Central differences with step `step_scale * (1 + |s|)`.
    CentralDifference { step_scale: f64 },
}

impl JacobianMethod {
    pub fn central_difference() -> Self {
        JacobianMethod::CentralDifference { step_scale: tol::FD_STEP }
    }

    fn jacobian(&self, flow: Flow, s: &BodyState, j: &InertiaSpectrum) -> Matrix6<f64> {
        match *self {
            JacobianMethod::Analytic => jacobian(flow, s, j),
            JacobianMethod::CentralDifference { step_scale } => jacobian_central_difference(flow, s, j, step_scale),
        }
    }
}

/// `DX_H` and `DX_I` at an equilibrium, in an orthonormal tangent frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestrictedLinearization {
    pub basis: Matrix6x4<f64>,
    pub matrix_h: Matrix4<f64>,
    pub matrix_i: Matrix4<f64>,
}

impl RestrictedLinearization {
    /// `|[DX_H, DX_I]|_F`, zero at equilibria.
    pub fn commutator_norm(&self) -> f64 {
        (self.matrix_h * self.matrix_i - self.matrix_i * self.matrix_h).norm()
    }

    pub fn combination(&self, alpha: f64) -> Matrix4<f64> {
        self.matrix_h + self.matrix_i * alpha
    }

    pub fn matrix(&self, source: QuarticSource) -> Matrix4<f64> {
        match source {
            QuarticSource::HFlow => self.matrix_h,
            QuarticSource::IFlow => self.matrix_i,
            QuarticSource::Combo { alpha } => self.combination(alpha),
        }
    }

    pub fn quartic(&self, source: QuarticSource) -> QuarticCoeffs {
        QuarticCoeffs::from_matrix(&self.matrix(source), source)
    }
}

pub fn restrict_linearization(s: &BodyState, j: &InertiaSpectrum) -> Result<RestrictedLinearization> {
    restrict_linearization_with(s, j, JacobianMethod::Analytic)
}

/// Restrict both Jacobians to `T_M Orb`. Fails away from equilibria, where
/// the Jacobians need not preserve the tangent space.
pub fn restrict_linearization_with(
    s: &BodyState,
    j: &InertiaSpectrum,
    method: JacobianMethod,
) -> Result<RestrictedLinearization> {
    let r = equilibrium_residual(s, j);
    if r > tol::RESIDUAL {
        return Err(Error::NotEquilibrium(r));
    }
    let frame = TangentFrame::at(s)?;
    let q = frame.basis;
    let restrict = |flow| q.transpose() * method.jacobian(flow, s, j) * q;
    Ok(RestrictedLinearization { basis: q, matrix_h: restrict(Flow::H), matrix_i: restrict(Flow::I) })
}

/// Which operator a quartic belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuarticSource {
    HFlow,
    IFlow,
    /// `DX_H + alpha DX_I`.
    Combo { alpha: f64 },
}

/// Even characteristic quartic `u z^4 + v z^2 + w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoeffs {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub source: QuarticSource,
    /// Frobenius norm of the originating matrix; sets the roundoff scale.
    pub scale: f64,
    /// Magnitudes of the discarded `z^3` and `z` coefficients.
    pub odd: [f64; 2],
}

/// Sum of the principal minors of order `k` (`e_k` of the eigenvalues).
pub fn principal_minor_sum(m: &Matrix4<f64>, k: usize) -> f64 {
    let mut total = 0.0;
    for mask in 0u8..16 {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
        let sub = nalgebra::DMatrix::from_fn(k, k, |r, c| m[(idx[r], idx[c])]);
        total += sub.determinant();
    }
    total
}

/// Monic characteristic polynomial `[1, c1, c2, c3, c4]` of a 4x4 matrix,
/// `det(zI - M) = z^4 + c1 z^3 + c2 z^2 + c3 z + c4`.
pub fn char_poly4(m: &Matrix4<f64>) -> [f64; 5] {
    [
        1.0,
        -m.trace(),
        principal_minor_sum(m, 2),
        -principal_minor_sum(m, 3),
        m.determinant(),
    ]
}

impl QuarticCoeffs {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        let scale = if u != 0.0 { (v / u).abs().sqrt().max((w / u).abs().sqrt().sqrt()) } else { 0.0 };
        Self { u, v, w, source: QuarticSource::HFlow, scale, odd: [0.0; 2] }
    }

    pub fn from_matrix(m: &Matrix4<f64>, source: QuarticSource) -> Self {
        let c = char_poly4(m);
        Self { u: 1.0, v: c[2], w: c[4], source, scale: m.norm(), odd: [c[1].abs(), c[3].abs()] }
    }

    /// `v^2 - 4uw`.
    pub fn discriminant(&self) -> f64 {
        self.v * self.v - 4.0 * self.u * self.w
    }

    /// Largest odd coefficient relative to the largest coefficient, each
    /// measured against the matching power of `scale`.
    pub fn odd_ratio(&self) -> f64 {
        let s = self.scale.max(f64::MIN_POSITIVE);
        let even = (self.u.abs()).max(self.v.abs() / s.powi(2)).max(self.w.abs() / s.powi(4));
        (self.odd[0] / s).max(self.odd[1] / s.powi(3)) / even
    }

    /// Roundoff floor for quantities of size `scale^4`.
    fn noise(&self) -> f64 {
        let s4 = self.scale.powi(4).max((self.v / self.u).powi(2)).max((self.w / self.u).abs());
        tol::QUARTIC_NOISE * f64::EPSILON * s4
    }

    /// Whether the four roots are pairwise distinct and nonzero, decided from
    /// the coefficients rather than from computed roots: roots of a double
    /// pair split by `O(sqrt(eps))` under roundoff, coefficients do not.
    pub fn has_distinct_roots(&self) -> bool {
        let v = self.v / self.u;
        let w = self.w / self.u;
        let n = self.noise();
        w.abs() > n && (v * v - 4.0 * w).abs() > n
    }

    /// Williamson type read off the coefficient signs.
    pub fn williamson(&self) -> Williamson {
        if !self.has_distinct_roots() {
            return Williamson::Degenerate;
        }
        let v = self.v / self.u;
        let w = self.w / self.u;
        if v * v - 4.0 * w < 0.0 {
            Williamson::FocusFocus
        } else if w < 0.0 {
            Williamson::CenterSaddle
        } else if v > 0.0 {
            Williamson::CenterCenter
        } else {
            Williamson::SaddleSaddle
        }
    }
}

/// Roots of `u z^4 + v z^2 + w` as `[r1, -r1, r2, -r2]`.
pub fn quartic_eigs(q: &QuarticCoeffs) -> [Complex64; 4] {
    let v = q.v / q.u;
    let w = q.w / q.u;
    let d = v * v - 4.0 * w;
    let (t1, t2) = if d >= 0.0 {
        let sd = d.sqrt();
        let big = -0.5 * (v + if v >= 0.0 { sd } else { -sd });
        if big == 0.0 {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (Complex64::new(big, 0.0), Complex64::new(w / big, 0.0))
        }
    } else {
        let im = 0.5 * (-d).sqrt();
        (Complex64::new(-0.5 * v, im), Complex64::new(-0.5 * v, -im))
    };
    let r1 = t1.sqrt();
    let r2 = t2.sqrt();
    [r1, -r1, r2, -r2]
}

/// Eigenvalues from a dense nonsymmetric solver, independent of the quartic
/// route. The characteristic quartic is used only if the solver fails.
pub fn matrix_eigenvalues(m: &Matrix4<f64>) -> [Complex64; 4] {
    let a = faer::Mat::<f64>::from_fn(4, 4, |i, k| m[(i, k)]);
    match a.eigenvalues() {
        Ok(ev) if ev.len() == 4 => std::array::from_fn(|i| Complex64::new(ev[i].re, ev[i].im)),
        _ => quartic_eigs(&QuarticCoeffs::from_matrix(m, QuarticSource::HFlow)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Williamson {
    CenterCenter,
    CenterSaddle,
    SaddleSaddle,
    FocusFocus,
    Degenerate,
}

/// Classify from eigenvalues, treating anything within `tol * radius` as equal.
pub fn williamson_classify(eigs: &[Complex64; 4], tol: f64) -> Williamson {
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if radius == 0.0 {
        return Williamson::Degenerate;
    }
    let gap = tol * radius;
    if eigs.iter().any(|z| z.norm() <= gap) {
        return Williamson::Degenerate;
    }
    for i in 0..4 {
        for k in (i + 1)..4 {
            if (eigs[i] - eigs[k]).norm() <= gap {
                return Williamson::Degenerate;
            }
        }
    }
    let real = eigs.iter().filter(|z| z.im.abs() <= gap).count();
    let imag = eigs.iter().filter(|z| z.re.abs() <= gap).count();
    match (real, imag) {
        (0, 4) => Williamson::CenterCenter,
        (2, 2) => Williamson::CenterSaddle,
        (4, 0) => Williamson::SaddleSaddle,
        (0, 0) => Williamson::FocusFocus,
        _ => Williamson::Degenerate,
    }
}

/// Largest distance from each eigenvalue to the nearest of `-z`, `conj z`.
pub fn pairing_defect(eigs: &[Complex64; 4]) -> f64 {
    let nearest = |t: Complex64| eigs.iter().map(|z| (z - t).norm()).fold(f64::INFINITY, f64::min);
    eigs.iter().map(|z| nearest(-z).max(nearest(z.conj()))).fold(0.0, f64::max)
}

/// A member of the span of `DX_H`, `DX_I` with four distinct eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondegenerateCombination {
    pub alpha: f64,
    pub quartic: QuarticCoeffs,
    pub eigenvalues: [Complex64; 4],
    pub williamson: Williamson,
}

/// `0` followed by `±kappa * 10^e` for 121 exponents `e` in `[-3, 3]`, with
/// `kappa = |DX_H| / |DX_I|` so the sweep is independent of the units of `l`.
pub fn default_alpha_sweep(lin: &RestrictedLinearization) -> Vec<f64> {
    let ni = lin.matrix_i.norm();
    let kappa = if ni > 0.0 { lin.matrix_h.norm() / ni } else { 1.0 };
    let mut out = vec![0.0];
    for k in 0..121 {
        let m = kappa * 10f64.powf(-3.0 + 6.0 * k as f64 / 120.0);
        out.push(m);
        out.push(-m);
    }
    out
}

/// First `alpha` in the sweep whose combination has distinct eigenvalues.
/// Values within `1e-6` (relative) of `exclude` are skipped.
pub fn nondegeneracy_search(
    lin: &RestrictedLinearization,
    alphas: &[f64],
    exclude: Option<f64>,
) -> Option<NondegenerateCombination> {
    alphas
        .iter()
        .filter(|&&a| exclude.is_none_or(|x| (a - x).abs() > 1e-6 * (1.0 + x.abs())))
        .find_map(|&alpha| {
            let source = if alpha == 0.0 { QuarticSource::HFlow } else { QuarticSource::Combo { alpha } };
            let q = lin.quartic(source);
            q.has_distinct_roots().then(|| NondegenerateCombination {
                alpha,
                quartic: q,
                eigenvalues: quartic_eigs(&q),
                williamson: q.williamson(),
            })
        })
}
