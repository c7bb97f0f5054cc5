//! Stability verdicts for every equilibrium family.
//!
//! Cartan points are classified twice: once from the closed-form quartic
//! coefficients and the case analysis in `l` and `b^2/a^2`, and once from the
//! numerically restricted linearization. Points on the `s±` curves are handled
//! by the energy–Casimir method.

use nalgebra::{Matrix6, SMatrix, SymmetricEigen, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{equilibrium_residual, hessian, i_vector_field, Flow};
use crate::equilibria::{cartan_ab, cartan_point, s_params_of, Family, TangentFrame, WeylLabel};
use crate::error::{Error, Result};
use crate::formulas::{self, EvenQuartic, T1BaCoefficients};
use crate::lie::{BodyState, InertiaSpectrum, OrbitParams, Regularity};
use crate::spectral::{
    default_alpha_sweep, matrix_eigenvalues, nondegeneracy_search, quartic_eigs,
    restrict_linearization, NondegenerateCombination, QuarticCoeffs, QuarticSource, Williamson,
};
use crate::tol;

/// Stability on the adjoint orbit or on the whole Lie–Poisson space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Unstable,
    /// Not decided by the linear and energy analysis.
    Open,
    /// The curve of equilibria is stable as a set; drift along it is not excluded.
    StableModuloDrift,
}

/// Special eigenvalue configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EigenShape {
    /// `±A ± iA`, focus-focus with vanishing middle coefficient.
    EqualParts,
    /// `A, -A, A, -A`.
    DoubleReal,
    /// `iA, -iA, iA, -iA`.
    DoubleImaginary,
}

/// `l1^2 + l4^2` versus `l2^2 + l3^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambdaCase {
    CaseI,
    CaseII,
}

impl LambdaCase {
    pub fn of(j: &InertiaSpectrum) -> Self {
        if j.is_case_two() {
            LambdaCase::CaseII
        } else {
            LambdaCase::CaseI
        }
    }
}

/// Region of `b^2/a^2` for the swapped points `M1_{b,a}`, `M1_{-b,-a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subcase {
    /// `[0, alpha1)`.
    SaddleSaddle,
    /// `(alpha1, alpha3) ∪ (alpha3, alpha2)`, or `(alpha1, 1)` in case II.
    FocusFocus,
    /// `(alpha2, 1)`.
    CenterCenter,
    /// `alpha3`.
    FocusFocusV0,
    /// `alpha1`.
    DegenerateUnstable,
    /// `alpha2`.
    DegenerateOpen,
}

/// A named sign condition from the case analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCheck {
    pub name: String,
    pub value: f64,
    pub holds: bool,
}

impl SignCheck {
    fn positive(name: &str, value: f64) -> Self {
        Self { name: name.into(), value, holds: value > 0.0 }
    }
    fn negative(name: &str, value: f64) -> Self {
        Self { name: name.into(), value, holds: value < 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct T1BAParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub ratio: f64,
    pub case: LambdaCase,
    pub subcase: Subcase,
    pub coefficients: T1BaCoefficients,
}

impl T1BAParams {
    pub fn new(j: &InertiaSpectrum, ratio: f64) -> Self {
        let c = T1BaCoefficients::new(j);
        let case = LambdaCase::of(j);
        let (alpha1, mut alpha2) = c.frontier_roots();
        let mut alpha3 = c.alpha3();
        if case == LambdaCase::CaseII {
            alpha2 = 1.0;
            alpha3 = 1.0;
        }
        let near = |alpha: f64| (ratio - alpha).abs() <= tol::FRONTIER_REL * (1.0 + alpha);
        let subcase = if near(alpha1) {
            Subcase::DegenerateUnstable
        } else if ratio < alpha1 {
            Subcase::SaddleSaddle
        } else if case == LambdaCase::CaseII {
            Subcase::FocusFocus
        } else if near(alpha2) {
            Subcase::DegenerateOpen
        } else if near(alpha3) {
            Subcase::FocusFocusV0
        } else if ratio < alpha2 {
            Subcase::FocusFocus
        } else {
            Subcase::CenterCenter
        };
        Self { alpha1, alpha2, alpha3, ratio, case, subcase, coefficients: c }
    }

    /// Type and verdicts (orbit, Lie–Poisson) prescribed for the subcase.
    pub fn prescription(&self) -> (Williamson, Verdict, Verdict, Option<EigenShape>) {
        use Verdict::*;
        match self.subcase {
            Subcase::SaddleSaddle => (Williamson::SaddleSaddle, Unstable, Unstable, None),
            Subcase::FocusFocus => (Williamson::FocusFocus, Unstable, Unstable, None),
            Subcase::CenterCenter => (Williamson::CenterCenter, Stable, Stable, None),
            Subcase::FocusFocusV0 => (Williamson::FocusFocus, Unstable, Unstable, Some(EigenShape::EqualParts)),
            Subcase::DegenerateUnstable => (Williamson::Degenerate, Unstable, Unstable, Some(EigenShape::DoubleReal)),
            Subcase::DegenerateOpen => (Williamson::Degenerate, Open, Unstable, Some(EigenShape::DoubleImaginary)),
        }
    }
}

/// Linear-stability verdict at one Cartan equilibrium.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub family: Family,
    pub weyl_label: WeylLabel,
    pub state: BodyState,
    /// `b^2 / a^2` of the orbit.
    pub ratio: f64,
    /// Numerical quartic of `DX_I` restricted to the orbit.
    pub i_quartic: QuarticCoeffs,
    /// Closed-form quartic of `DX_I`.
    pub i_quartic_closed: EvenQuartic,
    pub i_eigenvalues: [Complex64; 4],
    /// First member of `span(DX_H, DX_I)` with distinct eigenvalues, if any.
    pub combination: Option<NondegenerateCombination>,
    /// Schur eigenvalues of the combination (of `DX_I` if none was found).
    pub eigenvalues: [Complex64; 4],
    /// Type prescribed by the case analysis.
    pub williamson: Williamson,
    /// Type found from the numerical linearization.
    pub spectral_williamson: Williamson,
    pub nondegenerate: bool,
    pub orbit_verdict: Verdict,
    pub liepoisson_verdict: Verdict,
    pub subcase: Option<Subcase>,
    pub eigenshape: Option<EigenShape>,
    pub checks: Vec<SignCheck>,
}

impl StabilityReport {
    /// Whether the case analysis and the numerics agree on the type.
    pub fn consistent(&self) -> bool {
        self.williamson == self.spectral_williamson
    }
}

/// `b^2 / a^2` for the Cartan parameters of a regular orbit.
pub fn orbit_ratio(orbit: &OrbitParams) -> Result<f64> {
    let (a, b) = cartan_ab(orbit)?;
    Ok(b * b / (a * a))
}

fn require_regular(orbit: &OrbitParams) -> Result<()> {
    match orbit.regularity() {
        Regularity::Regular => Ok(()),
        regularity => Err(Error::NotRegular { c1: orbit.c1, c2: orbit.c2, regularity }),
    }
}

/// Classify one of the twelve Cartan points.
pub fn classify_weyl_point(
    j: &InertiaSpectrum,
    orbit: &OrbitParams,
    family: Family,
    label: WeylLabel,
) -> Result<StabilityReport> {
    require_regular(orbit)?;
    let eq = cartan_point(family, label, orbit)?;
    let (a, b) = eq.cartan_params.unwrap_or_default();
    let ratio = b * b / (a * a);
    let lin = restrict_linearization(&eq.state, j)?;
    let i_quartic = lin.quartic(QuarticSource::IFlow);

    let mut checks = Vec::new();
    let mut subcase = None;
    let mut exclude = None;
    let (i_closed, williamson, orbit_verdict, lp_verdict, eigenshape) = match (family, label.is_swapped()) {
        (Family::T1, false) => {
            let q = formulas::t1_ab_i(j, a, b);
            match LambdaCase::of(j) {
                LambdaCase::CaseI => {
                    checks.push(SignCheck::positive("v1", q.v));
                    checks.push(SignCheck::positive("w1", q.w));
                    checks.push(SignCheck::positive("delta1", q.discriminant()));
                }
                LambdaCase::CaseII => {
                    let (y2, _) = formulas::case_two_y2_z2(j);
                    checks.push(SignCheck::positive("|Y2|", y2.abs()));
                    exclude = formulas::case_two_excluded_alpha(j);
                }
            }
            (q, Williamson::CenterCenter, Verdict::Stable, Verdict::Stable, None)
        }
        (Family::T1, true) => {
            let q = formulas::t1_ba_i(j, a, b);
            let p = T1BAParams::new(j, ratio);
            let c = p.coefficients;
            checks.push(SignCheck::negative("S~1", c.s1));
            checks.push(SignCheck::positive("T~1", c.t1));
            checks.push(SignCheck::negative("T~2", c.t2));
            checks.push(SignCheck::positive("delta_f~", c.disc_f));
            subcase = Some(p.subcase);
            let (w, o, l, shape) = p.prescription();
            (q, w, o, l, shape)
        }
        (Family::T2, swapped) => {
            let q = if swapped { formulas::t2_i(j, b, a) } else { formulas::t2_i(j, a, b) };
            let (s2, t2, u2) = formulas::t2_discriminant_stu(j);
            checks.push(SignCheck::negative("w2", q.w));
            checks.push(SignCheck::negative("T2^2-4S2U2", t2 * t2 - 4.0 * s2 * u2));
            checks.push(SignCheck::positive("delta2", q.discriminant()));
            (q, Williamson::CenterSaddle, Verdict::Unstable, Verdict::Unstable, None)
        }
        (Family::T3, swapped) => {
            let q = if swapped { formulas::t3_i(j, b, a) } else { formulas::t3_i(j, a, b) };
            checks.push(SignCheck::positive("v3", q.v));
            checks.push(SignCheck::positive("w3", q.w));
            checks.push(SignCheck::positive("delta3", q.discriminant()));
            (q, Williamson::CenterCenter, Verdict::Stable, Verdict::Stable, None)
        }
        _ => return Err(Error::InvalidConfig(format!("{family:?} is not a Cartan family"))),
    };

    let combination = nondegeneracy_search(&lin, &default_alpha_sweep(&lin), exclude);
    let (eigenvalues, spectral_williamson) = match &combination {
        Some(c) => (matrix_eigenvalues(&lin.matrix(c.quartic.source)), c.williamson),
        None => (matrix_eigenvalues(&lin.matrix_i), Williamson::Degenerate),
    };
    Ok(StabilityReport {
        family,
        weyl_label: label,
        state: eq.state,
        ratio,
        i_quartic,
        i_quartic_closed: i_closed,
        i_eigenvalues: quartic_eigs(&i_quartic),
        nondegenerate: combination.is_some(),
        combination,
        eigenvalues,
        williamson,
        spectral_williamson,
        orbit_verdict,
        liepoisson_verdict: lp_verdict,
        subcase,
        eigenshape,
        checks,
    })
}

/// `M1_{a,b}`: center-center and stable.
pub fn classify_t1_ab(j: &InertiaSpectrum, orbit: &OrbitParams) -> Result<StabilityReport> {
    classify_weyl_point(j, orbit, Family::T1, WeylLabel::Ab)
}

/// `M1_{b,a}`: type depends on where `b^2/a^2` falls relative to `alpha1..3`.
pub fn classify_t1_ba(j: &InertiaSpectrum, orbit: &OrbitParams) -> Result<(T1BAParams, StabilityReport)> {
    let report = classify_weyl_point(j, orbit, Family::T1, WeylLabel::Ba)?;
    Ok((T1BAParams::new(j, report.ratio), report))
}

/// `M2_{a,b}`: center-saddle and unstable.
pub fn classify_t2(j: &InertiaSpectrum, orbit: &OrbitParams) -> Result<StabilityReport> {
    classify_weyl_point(j, orbit, Family::T2, WeylLabel::Ab)
}

/// `M3_{a,b}`: center-center and stable.
pub fn classify_t3(j: &InertiaSpectrum, orbit: &OrbitParams) -> Result<StabilityReport> {
    classify_weyl_point(j, orbit, Family::T3, WeylLabel::Ab)
}

/// Reports for all twelve Cartan points, ordered by family then Weyl label.
pub fn classify_all_cartan(j: &InertiaSpectrum, orbit: &OrbitParams) -> Result<Vec<StabilityReport>> {
    let mut out = Vec::with_capacity(12);
    for family in Family::CARTAN {
        for label in WeylLabel::ALL {
            out.push(classify_weyl_point(j, orbit, family, label)?);
        }
    }
    Ok(out)
}

/// Energy–Casimir analysis at a point of an `s±` curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyCasimirReport {
    pub family: Family,
    pub state: BodyState,
    pub s_params: [f64; 3],
    pub m0: f64,
    pub n0: f64,
    /// `|grad(H + m0 C1 + n0 C2)|` relative to `|grad H|`; zero at a critical point.
    pub gradient_residual: f64,
    /// Eigenvalues of the 6x6 Hessian, ascending.
    pub hess_eigs6: [f64; 6],
    /// Closed-form nonzero Hessian eigenvalues.
    pub alphas_closed: [f64; 3],
    /// Eigenvalues of the Hessian restricted to an orthonormal tangent frame, ascending.
    pub hess_eigs4: [f64; 4],
    /// Unit null direction of the restricted Hessian, in ambient coordinates.
    pub kernel_dir: [f64; 6],
    /// `|sin|` of the angle between `kernel_dir` and `X_I`.
    pub kernel_angle: f64,
    /// Product of nonzero restricted Hessian eigenvalues in the chart
    /// `(dx3, dy1, dy2, dy3)`; `None` when that chart is singular.
    pub beta_product: Option<f64>,
    pub beta_product_formula: Option<f64>,
    /// Middle coefficient of the restricted `H`-linearization, numerical and closed form.
    pub linearization_v: f64,
    pub linearization_v_closed: f64,
    pub orbit_verdict: Verdict,
    pub liepoisson_verdict: Verdict,
}

fn sorted_eigs<const N: usize>(m: SMatrix<f64, N, N>) -> Result<([f64; N], SMatrix<f64, N, N>)> {
    let e = SymmetricEigen::try_new(nalgebra::DMatrix::from_column_slice(N, N, m.as_slice()), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut idx: [usize; N] = std::array::from_fn(|i| i);
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.map(|i| e.eigenvalues[i]);
    let vecs = SMatrix::<f64, N, N>::from_fn(|r, c| e.eigenvectors[(r, idx[c])]);
    Ok((vals, vecs))
}

/// Columns parametrizing `T_M Orb` by `(dx3, dy1, dy2, dy3)`, with `dx1`,
/// `dx2` eliminated through the linearized Casimir constraints.
fn casimir_chart(s: &BodyState) -> Option<SMatrix<f64, 6, 4>> {
    let [x1, x2, x3] = s.x;
    let [y1, y2, y3] = s.y;
    let det = x1 * y2 - x2 * y1;
    if det.abs() <= 1e-12 * s.norm().powi(2) {
        return None;
    }
    let mut l = SMatrix::<f64, 6, 4>::zeros();
    // Free coordinates (dx3, dy1, dy2, dy3) in rows 2..6.
    for k in 0..4 {
        l[(k + 2, k)] = 1.0;
    }
    // x1 dx1 + x2 dx2 = -(x3 dx3 + y . dy), y1 dx1 + y2 dx2 = -(y3 dx3 + x . dy).
    let r1 = [x3, y1, y2, y3];
    let r2 = [y3, x1, x2, x3];
    for k in 0..4 {
        let (b1, b2) = (-r1[k], -r2[k]);
        l[(0, k)] = (b1 * y2 - x2 * b2) / det;
        l[(1, k)] = (x1 * b2 - b1 * y1) / det;
    }
    Some(l)
}

pub fn analyze_s_equilibrium(state: &BodyState, j: &InertiaSpectrum) -> Result<EnergyCasimirReport> {
    let r = equilibrium_residual(state, j);
    if r > tol::RESIDUAL {
        return Err(Error::NotEquilibrium(r));
    }
    let (a, family) = s_params_of(j, state)
        .ok_or_else(|| Error::InvalidConfig("state does not lie in s+ or s-".into()))?;
    let amax = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if a.iter().filter(|v| v.abs() > 1e-12 * amax).count() < 2 {
        return Err(Error::InvalidConfig("Cartan point: fewer than two nonzero s parameters".into()));
    }
    let sign = if family == Family::SMinus { -1.0 } else { 1.0 };
    let (m0, n0) = formulas::energy_casimir_multipliers(j, sign);

    let mut swap = Matrix6::zeros();
    for k in 0..3 {
        swap[(k, k + 3)] = 1.0;
        swap[(k + 3, k)] = 1.0;
    }
    let hess = hessian(Flow::H, j) + Matrix6::identity() * m0 + swap * n0;
    let sv = state.to_vector();
    let gradient_residual = (hess * sv).norm() / (hessian(Flow::H, j) * sv).norm();

    let (hess_eigs6, _) = sorted_eigs(hess)?;
    let frame = TangentFrame::at(state)?;
    let q = frame.basis;
    let (hess_eigs4, vecs4) = sorted_eigs(q.transpose() * hess * q)?;
    let kidx = (0..4).min_by(|&x, &y| hess_eigs4[x].abs().total_cmp(&hess_eigs4[y].abs())).unwrap_or(0);
    let kernel: Vector6<f64> = q * vecs4.column(kidx);
    let xi = i_vector_field(state, j).to_vector();
    let kernel_angle = {
        let u = xi / xi.norm();
        (kernel - u * u.dot(&kernel)).norm()
    };

    // In the chart basis the restricted Hessian is R^T A R with R = Q^T L and
    // A = Q^T Hess Q of rank 3, so e3 = pdet(A) |adj(R) k|^2 for the unit kernel k.
    let pdet: f64 = (0..4).filter(|&i| i != kidx).map(|i| hess_eigs4[i]).product();
    let k4 = vecs4.column(kidx).into_owned();
    let beta_product = casimir_chart(state).and_then(|l| {
        let r = q.transpose() * l;
        let lu = r.lu();
        let adj_k = lu.solve(&k4)? * lu.determinant();
        Some(pdet * adj_k.norm_squared())
    });

    let lin = restrict_linearization(state, j)?;
    let hq = lin.quartic(QuarticSource::HFlow);
    let k = formulas::s_linearization_k(j);
    let linearization_v_closed = (k[0] * a[0] * a[0] + k[1] * a[1] * a[1] + k[2] * a[2] * a[2]) / k[3];

    Ok(EnergyCasimirReport {
        family,
        state: *state,
        s_params: a,
        m0,
        n0,
        gradient_residual,
        hess_eigs6,
        alphas_closed: formulas::energy_casimir_alphas(j),
        hess_eigs4,
        kernel_dir: std::array::from_fn(|i| kernel[i]),
        kernel_angle,
        beta_product,
        beta_product_formula: formulas::beta_product(j, a),
        linearization_v: hq.v,
        linearization_v_closed,
        orbit_verdict: Verdict::StableModuloDrift,
        liepoisson_verdict: Verdict::StableModuloDrift,
    })
}

/// Slopes `|c2| / c1` of the frontiers `b^2/a^2 = alpha1, alpha2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierSlopes {
    pub case: LambdaCase,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub s1: f64,
    /// `None` in case II, where `alpha2 = 1` is the orbit boundary.
    pub s2: Option<f64>,
}

pub fn frontier_slopes(j: &InertiaSpectrum) -> FrontierSlopes {
    let p = T1BAParams::new(j, 0.0);
    FrontierSlopes {
        case: p.case,
        alpha1: p.alpha1,
        alpha2: p.alpha2,
        alpha3: p.alpha3,
        s1: formulas::slope_of_ratio(p.alpha1),
        s2: (p.case == LambdaCase::CaseI).then(|| formulas::slope_of_ratio(p.alpha2)),
    }
}
