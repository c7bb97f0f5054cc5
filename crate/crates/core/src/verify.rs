//! Seeded self-check suite run by `so4top verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    equilibrium_residual, grad_c1, grad_c2, gradient, h_vector_field, i_vector_field, integrate, lie_poisson_matrix,
    Flow, IntegratorConfig,
};
use crate::equilibria::{cartan_ab, classify_k0_k1, s_curve_sample, weyl_orbits, EquilibriumKind, TangentFrame};
use crate::formulas;
use crate::lie::{
    casimirs, hamiltonian, is_coordinate_cartan_equilibrium, omega_of, so4_bracket, uv_split, BodyState,
    InertiaSpectrum, OrbitParams,
};
use crate::stability::{analyze_s_equilibrium, classify_all_cartan, frontier_slopes, LambdaCase, T1BAParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifySpec {
    /// Random draws per check.
    pub draws: usize,
    /// Also draw case II spectra, `L1 + L4 = L2 + L3`.
    pub include_case_two: bool,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self { draws: 40, include_case_two: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub spec: VerifySpec,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Four distinct values in `(0.1, 10)`, sorted descending, away from case II.
pub fn random_generic_spectrum(rng: &mut ChaCha8Rng) -> InertiaSpectrum {
    loop {
        let mut l: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.1..10.0));
        l.sort_by(|a, b| b.total_cmp(a));
        let gap = (0..3).map(|i| l[i] - l[i + 1]).fold(f64::INFINITY, f64::min);
        let sq = l.map(|v| v * v);
        if gap < 1e-3 * l[0] || (sq[0] + sq[3] - sq[1] - sq[2]).abs() < 1e-3 * sq[0] {
            continue;
        }
        if let Ok(j) = InertiaSpectrum::new(l) {
            return j;
        }
    }
}

/// Spectrum with `L1 + L4 = L2 + L3` (`Li = li^2`), `l4` possibly negative.
pub fn random_case_two_spectrum(rng: &mut ChaCha8Rng) -> InertiaSpectrum {
    loop {
        let mut l: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.1..10.0));
        l.sort_by(|a, b| b.total_cmp(a));
        if let Ok(j) = InertiaSpectrum::case_two(l[0], l[1], l[2], rng.random_bool(0.3)) {
            if (0..3).all(|i| j.lambda()[i] - j.lambda()[i + 1] > 1e-3 * j.lambda()[0]) {
                return j;
            }
        }
    }
}

pub fn random_spectrum(rng: &mut ChaCha8Rng, include_case_two: bool) -> InertiaSpectrum {
    if include_case_two && rng.random_bool(0.25) {
        random_case_two_spectrum(rng)
    } else {
        random_generic_spectrum(rng)
    }
}

pub fn random_state(rng: &mut ChaCha8Rng) -> BodyState {
    BodyState::from_coords(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
}

/// Regular orbit with `c1` in `(0.5, 5)` and `|c2/c1| <= 0.98`.
pub fn random_orbit(rng: &mut ChaCha8Rng) -> OrbitParams {
    let c1 = rng.random_range(0.5..5.0);
    let slope = rng.random_range(-0.98..0.98);
    OrbitParams::regular(c1, c1 * slope).unwrap_or(OrbitParams { c1, c2: 0.5 * c1 })
}

struct Acc {
    name: &'static str,
    worst: f64,
    tol: f64,
    samples: usize,
    failed: bool,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, worst: 0.0, tol, samples: 0, failed: false }
    }

    /// Record a value that must not exceed the tolerance.
    fn at_most(&mut self, v: f64) {
        self.samples += 1;
        if !(v <= self.tol) {
            self.failed = true;
        }
        if v.is_nan() || v > self.worst {
            self.worst = v;
        }
    }

    /// Record a boolean condition; `worst` counts failures.
    fn holds(&mut self, ok: bool) {
        self.samples += 1;
        if !ok {
            self.failed = true;
            self.worst += 1.0;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { name: self.name.into(), passed: !self.failed, worst: self.worst, tolerance: self.tol, samples: self.samples }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn check_invariants(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut chamber = Acc::new("casimirs_in_chamber", 0.0);
    let mut uv = Acc::new("uv_norm_identities", 1e-12);
    let mut trace = Acc::new("hamiltonian_trace_form", 1e-12);
    let mut fields = Acc::new("vector_fields_match_poisson_tensor", 1e-12);
    let mut proj = Acc::new("tangent_frame_annihilates_casimir_gradients", 1e-12);
    for _ in 0..spec.draws {
        let j = random_spectrum(rng, spec.include_case_two);
        let s = random_state(rng);
        let c = casimirs(&s);
        chamber.at_most((c.c2.abs() - c.c1).max(0.0));
        let u = uv_split(&s);
        let scale = s.norm().powi(2);
        uv.at_most(((u.du() + u.dv()) - 4.0 * c.c1).abs() / scale);
        uv.at_most(((u.du() - u.dv()) - 4.0 * c.c2).abs() / scale);
        let mw = s.to_matrix() * omega_of(&s, &j).to_matrix();
        trace.at_most(rel(hamiltonian(&s, &j), -0.25 * mw.trace()));
        let gam = lie_poisson_matrix(&s);
        for (flow, field) in [(Flow::H, h_vector_field(&s, &j)), (Flow::I, i_vector_field(&s, &j))] {
            let want = gam * gradient(flow, &s, &j);
            fields.at_most((field.to_vector() - want).norm() / want.norm().max(1e-300));
        }
        if let Ok(f) = TangentFrame::at(&s) {
            for g in [grad_c1(&s), grad_c2(&s)] {
                proj.at_most(f.project(&g).norm() / g.norm());
            }
        }
    }
    vec![chamber.finish(), uv.finish(), trace.finish(), fields.finish(), proj.finish()]
}

fn check_bracket(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut acc = Acc::new("bracket_table_matches_poisson_tensor", 1e-12);
    for _ in 0..spec.draws.min(10) {
        let s = random_state(rng);
        let m = s.coords();
        let gam = lie_poisson_matrix(&s);
        for a in 0..6 {
            for b in 0..6 {
                let want: f64 = so4_bracket(a + 1, b + 1)
                    .map(|t| -t.iter().map(|(c, k)| *c as f64 * m[k - 1]).sum::<f64>())
                    .unwrap_or(f64::NAN);
                acc.at_most((gam[(a, b)] - want).abs());
            }
        }
    }
    let mut cartan = Acc::new("cartan_elements_are_equilibria", 0.0);
    for n in 4..=7 {
        for _ in 0..spec.draws.min(10) {
            let jd: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..10.0)).collect();
            let terms: Vec<(f64, (usize, usize))> =
                (0..n / 2).map(|k| (rng.random_range(-2.0..2.0), (2 * k + 1, 2 * k + 2))).collect();
            cartan.holds(is_coordinate_cartan_equilibrium(&terms, &jd).unwrap_or(false));
        }
    }
    vec![acc.finish(), cartan.finish()]
}

fn check_equilibria(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut res = Acc::new("equilibrium_residuals", 1e-10);
    let mut params = Acc::new("cartan_parameters", 1e-12);
    let mut kinds = Acc::new("cartan_k0_s_curve_k1", 0.0);
    let mut s_cas = Acc::new("s_curve_on_orbit", 1e-10);
    let mut generic = Acc::new("random_states_not_equilibria", 0.0);
    for _ in 0..spec.draws {
        let j = random_spectrum(rng, spec.include_case_two);
        let o = random_orbit(rng);
        let Ok((a, b)) = cartan_ab(&o) else { continue };
        params.at_most(rel(a * a + b * b, 2.0 * o.c1).max((a * b - o.c2).abs() / o.c1));
        params.at_most((b.abs() - a).max(0.0));
        if let Ok(ws) = weyl_orbits(&o) {
            for w in &ws {
                for e in &w.points {
                    res.at_most(equilibrium_residual(&e.state, &j));
                    kinds.holds(classify_k0_k1(e, &j).ok() == Some(EquilibriumKind::K0));
                }
            }
        }
        for e in s_curve_sample(&j, &o, 2) {
            res.at_most(equilibrium_residual(&e.state, &j));
            let c = casimirs(&e.state);
            s_cas.at_most(rel(c.c1, o.c1).max((c.c2 - o.c2).abs() / o.c1));
            kinds.holds(classify_k0_k1(&e, &j).ok() == Some(EquilibriumKind::K1));
        }
        generic.holds(equilibrium_residual(&random_state(rng), &j) > 1e-6);
    }
    vec![res.finish(), params.finish(), kinds.finish(), s_cas.finish(), generic.finish()]
}

fn check_classification(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut closed = Acc::new("closed_form_i_quartics", 1e-7);
    let mut commute = Acc::new("linearizations_commute_and_are_traceless", 1e-8);
    let mut signs = Acc::new("sign_claims", 0.0);
    let mut order = Acc::new("case_one_alpha_ordering", 0.0);
    let mut types = Acc::new("predicted_types_match_numerics", 0.0);
    let mut weyl = Acc::new("weyl_orbit_type_consistency", 0.0);
    for _ in 0..spec.draws {
        let j = random_spectrum(rng, spec.include_case_two);
        let o = random_orbit(rng);
        let Ok(reports) = classify_all_cartan(&j, &o) else { continue };
        let p = T1BAParams::new(&j, reports[0].ratio);
        if p.case == LambdaCase::CaseI {
            let c = p.coefficients;
            order.holds(p.alpha1 < p.alpha3 && p.alpha3 < p.alpha2 && p.alpha2 < 1.0 && c.f(p.alpha3) < 0.0);
        }
        let away = [p.alpha1, p.alpha2, p.alpha3].iter().all(|a| (p.ratio - a).abs() > 1e-4);
        for r in &reports {
            let scale = r.i_quartic.scale.powi(2);
            closed.at_most((r.i_quartic.v - r.i_quartic_closed.v).abs() / scale);
            closed.at_most((r.i_quartic.w - r.i_quartic_closed.w).abs() / (scale * scale));
            commute.at_most(r.i_quartic.odd_ratio());
            signs.holds(r.checks.iter().all(|c| c.holds));
            if away {
                types.holds(r.consistent());
            }
        }
        for fam in 0..3 {
            let g = &reports[4 * fam..4 * fam + 4];
            if fam == 0 {
                weyl.holds(g[0].spectral_williamson == g[1].spectral_williamson);
                weyl.holds(g[2].spectral_williamson == g[3].spectral_williamson);
            } else {
                weyl.holds(g.iter().all(|r| r.spectral_williamson == g[0].spectral_williamson));
            }
        }
    }
    vec![closed.finish(), commute.finish(), signs.finish(), order.finish(), types.finish(), weyl.finish()]
}

fn check_energy_casimir(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut grad = Acc::new("energy_casimir_critical_point", 1e-10);
    let mut zeros = Acc::new("energy_casimir_hessian_spectrum", 1e-8);
    let mut beta = Acc::new("energy_casimir_beta_product", 1e-8);
    let mut kernel = Acc::new("energy_casimir_kernel_along_i_flow", 1e-6);
    let mut lin = Acc::new("s_curve_linearization_v", 1e-8);
    let mut drawn = 0;
    for _ in 0..spec.draws * 4 {
        if drawn >= spec.draws {
            break;
        }
        let j = random_generic_spectrum(rng);
        let o = random_orbit(rng);
        let Some(e) = s_curve_sample(&j, &o, 1).into_iter().next() else { continue };
        let Ok(r) = analyze_s_equilibrium(&e.state, &j) else { continue };
        drawn += 1;
        grad.at_most(r.gradient_residual);
        let hs = r.hess_eigs6.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let nz = r.hess_eigs6.iter().filter(|v| v.abs() <= 1e-10 * hs).count();
        zeros.holds(nz == 3);
        let mut got: Vec<f64> = r.hess_eigs6.iter().copied().filter(|v| v.abs() > 1e-10 * hs).collect();
        let mut want = r.alphas_closed.to_vec();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            zeros.at_most(rel(*g, *w));
        }
        let h4 = r.hess_eigs4.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        zeros.holds(r.hess_eigs4.iter().filter(|v| v.abs() <= 1e-10 * h4).count() == 1);
        if let (Some(n), Some(f)) = (r.beta_product, r.beta_product_formula) {
            beta.at_most(rel(n, f));
        }
        kernel.at_most(r.kernel_angle);
        let scale = r.linearization_v.abs().max(r.linearization_v_closed.abs()).max(1e-300);
        lin.at_most((r.linearization_v - r.linearization_v_closed).abs() / scale);
    }
    vec![grad.finish(), zeros.finish(), beta.finish(), kernel.finish(), lin.finish()]
}

fn check_frontiers(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut acc = Acc::new("frontier_slopes_ordered", 0.0);
    for _ in 0..spec.draws {
        let j = random_spectrum(rng, spec.include_case_two);
        let f = frontier_slopes(&j);
        let ok = 0.0 < f.s1 && f.s1 < 1.0 && f.s2.is_none_or(|s2| f.s1 < s2 && s2 < 1.0);
        acc.holds(ok && rel(formulas::slope_of_ratio(f.alpha1), f.s1) < 1e-14);
    }
    vec![acc.finish()]
}

fn check_conservation(rng: &mut ChaCha8Rng, spec: &VerifySpec) -> Vec<CheckResult> {
    let mut rk4 = Acc::new("rk4_conservation", 1e-7);
    let mut projected = Acc::new("projected_casimir_drift", 1e-12);
    let cfg = IntegratorConfig { step: 1e-3, max_steps: 2000, record_every: 2000, ..IntegratorConfig::default() };
    for _ in 0..spec.draws.min(8) {
        let j = random_spectrum(rng, spec.include_case_two);
        let s = random_state(rng) * 0.5;
        if let Ok(t) = integrate(&s, &j, &IntegratorConfig { projection: false, ..cfg }, Flow::H) {
            let d = t.max_relative_drift();
            rk4.at_most(d.c1.max(d.c2).max(d.h).max(d.i));
        }
        if let Ok(t) = integrate(&s, &j, &IntegratorConfig { projection: true, ..cfg }, Flow::I) {
            let d = t.max_relative_drift();
            projected.at_most(d.c1.max(d.c2));
        }
    }
    vec![rk4.finish(), projected.finish()]
}

/// Run every check with a ChaCha8 stream seeded by `seed`.
pub fn run_suite(seed: u64, spec: &VerifySpec) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    checks.extend(check_invariants(&mut rng, spec));
    checks.extend(check_bracket(&mut rng, spec));
    checks.extend(check_equilibria(&mut rng, spec));
    checks.extend(check_classification(&mut rng, spec));
    checks.extend(check_energy_casimir(&mut rng, spec));
    checks.extend(check_frontiers(&mut rng, spec));
    checks.extend(check_conservation(&mut rng, spec));
    VerifyReport {
        schema_version: crate::scan::SCHEMA_VERSION,
        seed,
        spec: *spec,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
