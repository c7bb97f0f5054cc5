//! Worked examples and independent oracles for each module.

use nalgebra::{DMatrix, Matrix4};
use so4top::dynamics::{
    equilibrium_conditions, equilibrium_residual, h_vector_field, i_vector_field, integrate, jacobian,
    jacobian_central_difference, Flow, IntegratorConfig,
};
use so4top::equilibria::{
    cartan_ab, cartan_point, classify_k0_k1, s_curve_sample, s_state, weyl_orbits, EquilibriumKind,
    Family, WeylLabel,
};
use so4top::formulas::{self, T1BaCoefficients};
use so4top::lie::{
    casimirs, hamiltonian, integral_i, is_coordinate_cartan_equilibrium, momentum_of, omega_of, son_bracket,
    so4_bracket, uv_join, uv_split, BodyState, InertiaSpectrum, OrbitParams, Regularity,
};
use so4top::spectral::{
    char_poly4, nondegeneracy_search, quartic_eigs, restrict_linearization, williamson_classify, QuarticCoeffs,
    QuarticSource, Williamson, default_alpha_sweep,
};
use so4top::stability::{
    analyze_s_equilibrium, classify_all_cartan, classify_t1_ab, classify_t1_ba, classify_t2, classify_t3,
    frontier_slopes, Subcase, Verdict,
};
use num_complex::Complex64;

fn j4321() -> InertiaSpectrum {
    InertiaSpectrum::new([4.0, 3.0, 2.0, 1.0]).unwrap()
}

fn st(x: [f64; 3], y: [f64; 3]) -> BodyState {
    BodyState::new(x, y)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

// ---------------------------------------------------------------- lie core

#[test]
fn casimir_examples() {
    let c = casimirs(&st([0.0; 3], [0.0; 3]));
    assert_eq!((c.c1, c.c2, c.regularity()), (0.0, 0.0, Regularity::Origin));
    let c = casimirs(&st([1.0, 0.0, 0.0], [0.0; 3]));
    assert_eq!((c.c1, c.c2, c.regularity()), (0.5, 0.0, Regularity::Regular));
    let c = casimirs(&st([3.0, 0.0, 0.0], [1.0, 0.0, 0.0]));
    assert_eq!((c.c1, c.c2, c.regularity()), (5.0, 3.0, Regularity::Regular));
    assert_eq!(OrbitParams::new(1.0, 1.0).unwrap().regularity(), Regularity::SingularSphere);
    assert!(OrbitParams::new(1.0, 1.5).is_err());
}

#[test]
fn uv_examples() {
    let uv = uv_split(&st([1.0, 0.0, 0.0], [0.0; 3]));
    assert_eq!((uv.u, uv.v), ([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]));
    let s = st([3.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
    let uv = uv_split(&s);
    assert_eq!((uv.u, uv.v), ([4.0, 0.0, 0.0], [2.0, 0.0, 0.0]));
    assert_eq!((uv.du(), uv.dv()), (16.0, 4.0));
    assert_eq!(uv_join(&uv), s);
}

#[test]
fn angular_velocity_examples() {
    let j = j4321();
    assert_eq!(omega_of(&st([5.0, 0.0, 0.0], [0.0; 3]), &j).x, [1.0, 0.0, 0.0]);
    let w = omega_of(&st([0.0; 3], [0.0, 0.0, 5.0]), &j);
    assert!(close(w.y[2], 5.0 / 3.0, 1e-15));
    let s = st([1.0, -2.0, 0.5], [0.3, 0.7, -1.1]);
    assert!((momentum_of(&omega_of(&s, &j), &j) - s).max_abs() < 1e-14);
}

#[test]
fn omega_is_inverse_of_symmetric_product() {
    // M = J Omega + Omega J with J = diag(l).
    let j = j4321();
    let s = st([0.4, -1.3, 2.0], [0.9, -0.2, 0.6]);
    let w = omega_of(&s, &j).to_matrix();
    let jm = Matrix4::from_diagonal(&nalgebra::Vector4::from(j.lambda()));
    assert!((jm * w + w * jm - s.to_matrix()).amax() < 1e-14);
}

#[test]
fn integral_examples() {
    let j = j4321();
    assert_eq!(hamiltonian(&BodyState::default(), &j), 0.0);
    assert!(close(hamiltonian(&st([1.0, 0.0, 0.0], [0.0; 3]), &j), 0.1, 1e-15));
    assert_eq!(integral_i(&BodyState::default(), &j), 0.0);
    assert!(close(integral_i(&st([1.0, 0.0, 0.0], [0.0; 3]), &j), 13.0, 1e-15));
    assert!(close(integral_i(&st([0.0; 3], [1.0, 0.0, 0.0]), &j), 17.0, 1e-15));
}

#[test]
fn hamiltonian_matches_trace_form() {
    let j = InertiaSpectrum::new([2.7, 1.9, 0.8, 0.3]).unwrap();
    let s = st([0.4, -1.3, 2.0], [0.9, -0.2, 0.6]);
    let tr = (s.to_matrix() * omega_of(&s, &j).to_matrix()).trace();
    assert!(close(hamiltonian(&s, &j), -0.25 * tr, 1e-13));
}

fn e_matrix(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i - 1, j - 1)] = 1.0;
    m[(j - 1, i - 1)] = -1.0;
    m
}

#[test]
fn son_bracket_matches_matrix_commutator() {
    for n in 3..=6 {
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for s in 1..=n {
                        if i == j || k == s {
                            continue;
                        }
                        let (a, b) = (e_matrix(n, i, j), e_matrix(n, k, s));
                        let want = &a * &b - &b * &a;
                        let mut got = DMatrix::zeros(n, n);
                        for t in son_bracket(i, j, k, s, n).unwrap() {
                            got += e_matrix(n, t.p, t.q) * t.coeff as f64;
                        }
                        assert_eq!(got, want, "[E{i}{j}, E{k}{s}] in so({n})");
                    }
                }
            }
        }
    }
    assert!(son_bracket(1, 2, 3, 4, 4).unwrap().is_empty());
    assert!(son_bracket(1, 5, 2, 3, 4).is_err());
}

#[test]
fn so4_bracket_table_entries() {
    assert_eq!(so4_bracket(1, 5).unwrap(), vec![(1, 6)]);
    for a in 1..=6 {
        for b in 1..=6 {
            let ab = so4_bracket(a, b).unwrap();
            let ba: Vec<(i32, usize)> = so4_bracket(b, a).unwrap().into_iter().map(|(c, k)| (-c, k)).collect();
            assert_eq!(ab, ba);
        }
    }
}

#[test]
fn coordinate_cartan_examples() {
    let l4 = [4.0, 3.0, 2.0, 1.0];
    // 2 E1 + 3 E4 = -2 E23 + 3 E14.
    assert!(is_coordinate_cartan_equilibrium(&[(-2.0, (2, 3)), (3.0, (1, 4))], &l4).unwrap());
    let l6 = [6.0, 5.0, 4.0, 3.0, 2.0, 1.0];
    assert!(is_coordinate_cartan_equilibrium(&[(0.3, (1, 2)), (-1.7, (3, 4)), (2.2, (5, 6))], &l6).unwrap());
    // E1 + E2 = -E23 + E13 share index 3.
    assert!(!is_coordinate_cartan_equilibrium(&[(-1.0, (2, 3)), (1.0, (1, 3))], &l4).unwrap());
}

#[test]
fn spectrum_flags() {
    assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, 1.0]).unwrap().is_generic());
    let c2 = InertiaSpectrum::case_two(3.0, 2.5, 2.0, true).unwrap();
    assert!(c2.is_case_two() && c2.lambda()[3] < 0.0);
    assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, -2.0]).is_err());
}

// ---------------------------------------------------------------- dynamics

#[test]
fn vector_field_examples() {
    let j = j4321();
    let f = h_vector_field(&st([0.0, 1.0, 1.0], [0.0; 3]), &j);
    assert!(close(f.x[0], -1.0 / 42.0, 1e-15));
    let g = i_vector_field(&st([0.0, 1.0, 1.0], [0.0; 3]), &j);
    assert_eq!(g.coords(), [10.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    for a in [0.3, -1.2] {
        let t1 = st([a, 0.0, 0.0], [0.7, 0.0, 0.0]);
        assert_eq!(h_vector_field(&t1, &j).max_abs(), 0.0);
        let t2 = st([0.0, a, 0.0], [0.0, 0.4, 0.0]);
        assert_eq!(i_vector_field(&t2, &j).max_abs(), 0.0);
    }
}

#[test]
fn vector_field_matches_matrix_commutator() {
    // dM/dt = [M, Omega].
    let j = InertiaSpectrum::new([3.1, 2.2, 1.4, 0.6]).unwrap();
    let s = st([0.4, -1.3, 2.0], [0.9, -0.2, 0.6]);
    let m = s.to_matrix();
    let w = omega_of(&s, &j).to_matrix();
    let want = BodyState::from_matrix(&(m * w - w * m));
    assert!((h_vector_field(&s, &j) - want).max_abs() < 1e-14);
}

#[test]
fn residual_vanishes_iff_commutator_does() {
    let j = j4321();
    let jm = Matrix4::from_diagonal(&nalgebra::Vector4::from(j.lambda()));
    let oracle = |s: &BodyState| {
        let w = omega_of(s, &j).to_matrix();
        let w2 = w * w;
        (jm * w2 - w2 * jm).amax()
    };
    let eq = [
        st([0.0, 0.0, 1.5], [0.0, 0.0, -0.5]),
        s_state(&j, [1.0, 1.0, 0.0], 1.0),
        s_state(&j, [0.3, -0.8, 1.1], -1.0),
    ];
    for s in &eq {
        assert!(equilibrium_residual(s, &j) <= 1e-12);
        assert!(oracle(s) <= 1e-12);
    }
    let off = st([1.0, 1.0, 0.0], [0.0; 3]);
    assert!(equilibrium_conditions(&off, &j)[2].abs() > 0.0);
    assert!(equilibrium_residual(&off, &j) > 1e-3);
    assert!(oracle(&off) > 1e-3);
}

#[test]
fn equilibrium_start_is_constant() {
    let j = j4321();
    let s = cartan_point(Family::T1, WeylLabel::Ab, &OrbitParams::new(5.0, 3.0).unwrap()).unwrap().state;
    let t = integrate(&s, &j, &IntegratorConfig { max_steps: 100, ..Default::default() }, Flow::H).unwrap();
    assert!(t.states.iter().all(|x| (*x - s).max_abs() < 1e-15));
    let d = t.max_drift();
    assert_eq!([d.c1, d.c2, d.h, d.i], [0.0; 4]);
    assert!(t.times.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn jacobian_against_differences() {
    let j = j4321();
    let s = st([0.4, -1.3, 2.0], [0.9, -0.2, 0.6]);
    for flow in [Flow::H, Flow::I] {
        let a = jacobian(flow, &s, &j);
        let d = jacobian_central_difference(flow, &s, &j, 1e-6);
        assert!((a - d).amax() <= 1e-7 * a.amax());
    }
}

// -------------------------------------------------------------- equilibria

#[test]
fn cartan_parameters() {
    let (a, b) = cartan_ab(&OrbitParams::new(5.0, 3.0).unwrap()).unwrap();
    assert!(close(a, 3.0, 1e-15) && close(b, 1.0, 1e-15));
    let (a, b) = cartan_ab(&OrbitParams::new(1.0, 0.0).unwrap()).unwrap();
    assert!(close(a, 2f64.sqrt(), 1e-15) && b.abs() < 1e-15);
    let (a, b) = cartan_ab(&OrbitParams::new(1.0, 1.0).unwrap()).unwrap();
    assert!(close(a * a + b * b, 2.0, 1e-15) && close(a * b, 1.0, 1e-15));
}

#[test]
fn twelve_cartan_points() {
    let j = j4321();
    let o = OrbitParams::new(5.0, 3.0).unwrap();
    let ws = weyl_orbits(&o).unwrap();
    let first = ws[0].points[0].state;
    assert!((first - st([3.0, 0.0, 0.0], [1.0, 0.0, 0.0])).max_abs() < 1e-14);
    for w in &ws {
        for e in &w.points {
            e.validate(&j).unwrap();
            assert_eq!(equilibrium_residual(&e.state, &j), 0.0);
            let c = casimirs(&e.state);
            assert!(close(c.c1, 5.0, 1e-14) && close(c.c2, 3.0, 1e-14));
            assert_eq!(classify_k0_k1(e, &j).unwrap(), EquilibriumKind::K0);
            let nz = e.state.coords().iter().filter(|v| **v != 0.0).count();
            assert_eq!(nz, 2);
        }
    }
}

#[test]
fn s_curve_examples() {
    let j = j4321();
    assert!(equilibrium_residual(&s_state(&j, [1.0, 1.0, 0.0], 1.0), &j) <= 1e-12);
    assert!(s_curve_sample(&j, &OrbitParams::new(2.0, 0.0).unwrap(), 5).is_empty());
    // Orbit taken from an s+ point is populated with s+ only.
    let s = s_state(&j, [0.8, 0.5, 0.3], 1.0);
    let o = casimirs(&s);
    let pts = s_curve_sample(&j, &o, 6);
    assert!(!pts.is_empty());
    for e in &pts {
        assert_eq!(e.family, Family::SPlus);
        assert!(equilibrium_residual(&e.state, &j) <= 1e-10);
        e.validate(&j).unwrap();
        assert_eq!(classify_k0_k1(e, &j).unwrap(), EquilibriumKind::K1);
    }
    let neg = OrbitParams { c1: o.c1, c2: -o.c2 };
    assert!(s_curve_sample(&j, &neg, 6).iter().all(|e| e.family == Family::SMinus));
}

// ---------------------------------------------------------------- spectral

fn sorted(mut z: [Complex64; 4]) -> [Complex64; 4] {
    z.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    z
}

fn same(a: [Complex64; 4], b: [Complex64; 4]) -> bool {
    sorted(a).iter().zip(sorted(b).iter()).all(|(x, y)| (x - y).norm() < 1e-12)
}

#[test]
fn quartic_root_examples() {
    let c = |re, im| Complex64::new(re, im);
    assert!(same(quartic_eigs(&QuarticCoeffs::new(1.0, 5.0, 4.0)), [c(0., 1.), c(0., -1.), c(0., 2.), c(0., -2.)]));
    assert!(same(quartic_eigs(&QuarticCoeffs::new(1.0, -5.0, 4.0)), [c(1., 0.), c(-1., 0.), c(2., 0.), c(-2., 0.)]));
    assert!(same(quartic_eigs(&QuarticCoeffs::new(1.0, 0.0, 4.0)), [c(1., 1.), c(1., -1.), c(-1., 1.), c(-1., -1.)]));
}

#[test]
fn williamson_examples() {
    let c = |re, im| Complex64::new(re, im);
    assert_eq!(williamson_classify(&[c(0., 1.), c(0., -1.), c(0., 2.), c(0., -2.)], 1e-6), Williamson::CenterCenter);
    assert_eq!(williamson_classify(&[c(1., 0.), c(-1., 0.), c(0., 3.), c(0., -3.)], 1e-6), Williamson::CenterSaddle);
    assert_eq!(williamson_classify(&[c(1., 0.), c(-1., 0.), c(1., 0.), c(-1., 0.)], 1e-6), Williamson::Degenerate);
}

#[test]
fn restricted_h_quartic_at_t1_matches_closed_form() {
    let j = j4321();
    let e = cartan_point(Family::T1, WeylLabel::Ab, &OrbitParams::new(5.0, 3.0).unwrap()).unwrap();
    let lin = restrict_linearization(&e.state, &j).unwrap();
    let p = char_poly4(&lin.matrix_h);
    let closed = formulas::t1_ab_h(&j, 3.0, 1.0);
    let s = lin.matrix_h.norm();
    assert!((p[2] - closed.v).abs() <= 1e-12 * s * s);
    assert!((p[4] - closed.w).abs() <= 1e-12 * s.powi(4));
    assert!(p[1].abs() <= 1e-14 * s && p[3].abs() <= 1e-14 * s.powi(3));
    assert!(lin.commutator_norm() <= 1e-8);
    assert!(lin.matrix_h.trace().abs() < 1e-14 && lin.matrix_i.trace().abs() < 1e-12);
}

#[test]
fn s_point_h_linearization_pattern() {
    let j = j4321();
    let s = s_state(&j, [0.6, -0.4, 0.9], 1.0);
    let lin = restrict_linearization(&s, &j).unwrap();
    let q = lin.quartic(QuarticSource::HFlow);
    let k = formulas::s_linearization_k(&j);
    let v = (k[0] * 0.36 + k[1] * 0.16 + k[2] * 0.81) / k[3];
    assert!(q.w.abs() <= 1e-12 * q.scale.powi(4));
    assert!(close(q.v, v, 1e-10) && q.v > 0.0);
}

#[test]
fn nondegeneracy_search_examples() {
    let j = j4321();
    let o = OrbitParams::new(5.0, 3.0).unwrap();
    let t3 = cartan_point(Family::T3, WeylLabel::Ab, &o).unwrap();
    let lin = restrict_linearization(&t3.state, &j).unwrap();
    let c = nondegeneracy_search(&lin, &default_alpha_sweep(&lin), None).unwrap();
    assert_eq!(c.alpha, 0.0);

    let f = frontier_slopes(&j);
    let at_alpha1 = OrbitParams::from_ratio(1.0, f.alpha1).unwrap();
    let ba = cartan_point(Family::T1, WeylLabel::Ba, &at_alpha1).unwrap();
    let lin = restrict_linearization(&ba.state, &j).unwrap();
    assert!(nondegeneracy_search(&lin, &default_alpha_sweep(&lin), None).is_none());

    let c2 = InertiaSpectrum::case_two(3.0, 2.5, 2.0, false).unwrap();
    let r = classify_t1_ab(&c2, &o).unwrap();
    let comb = r.combination.unwrap();
    assert!(comb.eigenvalues.iter().all(|z| z.re.abs() < 1e-9 * z.norm()));
    assert_eq!(r.spectral_williamson, Williamson::CenterCenter);
    let ab = cartan_point(Family::T1, WeylLabel::Ab, &o).unwrap();
    let lin = restrict_linearization(&ab.state, &c2).unwrap();
    let large = nondegeneracy_search(&lin, &[1e3 * lin.matrix_h.norm() / lin.matrix_i.norm()], None).unwrap();
    assert_eq!(large.williamson, Williamson::CenterCenter);
    assert!(large.eigenvalues.iter().all(|z| z.re.abs() < 1e-9 * z.norm()));
}

// --------------------------------------------------------------- stability

#[test]
fn printed_coefficients_at_reference_point() {
    let j = j4321();
    let q = formulas::t1_ab_i(&j, 3.0, 1.0);
    assert_eq!((q.v.round(), q.w.round()), (3520.0, 2064384.0));
    assert!(close(formulas::t1_ba_i(&j, 3.0, 1.0).v, -2880.0, 1e-14));
    let q = formulas::t2_i(&j, 3.0, 1.0);
    assert!(close(q.v, 720.0, 1e-14) && close(q.w, -25200.0 * 64.0, 1e-14));
    let q = formulas::t3_i(&j, 3.0, 1.0);
    assert!(close(q.v, 7360.0, 1e-14) && close(q.w, 16.0 * 12.0 * 15.0 * 5.0 * 8.0 * 64.0, 1e-14));
}

#[test]
fn s1_plus_t1_identity() {
    for l in [[4.0, 3.0, 2.0, 1.0], [5.0, 2.2, 1.3, 0.4], [3.0, 2.5, 2.0, 3.75f64.sqrt()]] {
        let j = InertiaSpectrum::new(l).unwrap();
        let (s1, t1) = formulas::t1_ab_st(&j);
        let [a, b, c, d] = j.squares();
        let sq = 4.0 * (a + d - b - c).powi(2);
        assert!((s1 + t1 - sq).abs() <= 1e-10 * s1.abs().max(t1.abs()));
    }
}

#[test]
fn frontier_ratios_against_quadratic_formula() {
    let j = j4321();
    // f(t) = 225 t^2 - 234 t + 25.
    let d = 234.0f64 * 234.0 - 4.0 * 225.0 * 25.0;
    assert_eq!(d, 32256.0);
    let (r1, r2) = ((234.0 - d.sqrt()) / 450.0, (234.0 + d.sqrt()) / 450.0);
    let f = frontier_slopes(&j);
    assert!((f.alpha1 - r1).abs() <= 1e-9 && (f.alpha2 - r2).abs() <= 1e-9);
    assert!((f.alpha3 - 368.0 / 432.0).abs() <= 1e-12);
    assert!(0.0 < f.alpha1 && f.alpha1 < f.alpha3 && f.alpha3 < f.alpha2 && f.alpha2 < 1.0);
    let c = T1BaCoefficients::new(&j);
    assert!(c.f(f.alpha1).abs() < 1e-9 && c.f(f.alpha2).abs() < 1e-9 && c.f(f.alpha3) < 0.0);
    assert!((c.f(1.0) - (16.0f64 - 9.0 - 4.0 + 1.0).powi(2)).abs() < 1e-9);
    assert!((f.s1 - 0.62039).abs() < 5e-6);
    assert!((f.s2.unwrap() - 0.999111).abs() < 1e-6);
    let back = OrbitParams::new(1.0, f.s1).unwrap();
    let (a, b) = cartan_ab(&back).unwrap();
    assert!((b * b / (a * a) - f.alpha1).abs() <= 1e-10);
    assert_eq!(formulas::slope_of_ratio(1.0), 1.0);
}

#[test]
fn case_two_ordering() {
    let j = InertiaSpectrum::case_two(3.0, 2.5, 2.0, false).unwrap();
    let f = frontier_slopes(&j);
    assert_eq!((f.alpha2, f.alpha3), (1.0, 1.0));
    assert!(f.alpha1 > 0.0 && f.alpha1 < 1.0 && f.s2.is_none());
}

#[test]
fn reference_orbit_classification() {
    let j = j4321();
    let o = OrbitParams::new(5.0, 3.0).unwrap();
    let r = classify_t1_ab(&j, &o).unwrap();
    assert_eq!((r.williamson, r.orbit_verdict), (Williamson::CenterCenter, Verdict::Stable));
    let neg = so4top::stability::classify_weyl_point(&j, &o, Family::T1, WeylLabel::NegAb).unwrap();
    assert_eq!((neg.williamson, neg.spectral_williamson, neg.ratio), (r.williamson, r.spectral_williamson, r.ratio));
    let (p, ba) = classify_t1_ba(&j, &o).unwrap();
    assert_eq!(p.subcase, Subcase::SaddleSaddle);
    assert_eq!(ba.spectral_williamson, Williamson::SaddleSaddle);
    let t2 = classify_t2(&j, &o).unwrap();
    assert_eq!((t2.spectral_williamson, t2.orbit_verdict), (Williamson::CenterSaddle, Verdict::Unstable));
    let t3 = classify_t3(&j, &o).unwrap();
    assert_eq!((t3.spectral_williamson, t3.orbit_verdict), (Williamson::CenterCenter, Verdict::Stable));
    let all = classify_all_cartan(&j, &o).unwrap();
    let count = |w| all.iter().filter(|r| r.spectral_williamson == w).count();
    assert_eq!(count(Williamson::CenterSaddle), 4);
    assert_eq!(count(Williamson::CenterCenter), 6);
    assert_eq!(count(Williamson::SaddleSaddle), 2);
    assert!(classify_all_cartan(&j, &OrbitParams::new(0.0, 0.0).unwrap()).is_err());
    assert!(classify_all_cartan(&j, &OrbitParams::new(1.0, 1.0).unwrap()).is_err());
}

#[test]
fn swapped_t1_subcases() {
    let j = j4321();
    let f = frontier_slopes(&j);
    let at = |ratio: f64| classify_t1_ba(&j, &OrbitParams::from_ratio(2.0, ratio).unwrap()).unwrap();
    let (p, r) = at(0.95);
    assert_eq!((p.subcase, r.williamson, r.orbit_verdict), (Subcase::CenterCenter, Williamson::CenterCenter, Verdict::Stable));
    let (p, r) = at(0.0);
    assert_eq!((p.subcase, r.spectral_williamson), (Subcase::SaddleSaddle, Williamson::SaddleSaddle));
    let (p, r) = at(0.5 * (f.alpha1 + f.alpha3));
    assert_eq!((p.subcase, r.spectral_williamson), (Subcase::FocusFocus, Williamson::FocusFocus));
    let (p, _) = at(f.alpha3);
    assert_eq!(p.subcase, Subcase::FocusFocusV0);
    let (p, r) = at(f.alpha2);
    assert_eq!((p.subcase, r.orbit_verdict, r.liepoisson_verdict), (Subcase::DegenerateOpen, Verdict::Open, Verdict::Unstable));
}

#[test]
fn t2_eigenvalue_shape() {
    let j = j4321();
    let r = classify_t2(&j, &OrbitParams::new(5.0, 3.0).unwrap()).unwrap();
    let real = r.eigenvalues.iter().filter(|z| z.im.abs() < 1e-9 * z.norm()).count();
    let imag = r.eigenvalues.iter().filter(|z| z.re.abs() < 1e-9 * z.norm()).count();
    assert_eq!((real, imag), (2, 2));
}

#[test]
fn energy_casimir_reference_values() {
    let j = j4321();
    let al = formulas::energy_casimir_alphas(&j);
    assert!(close(al[0], 52.0 / 240.0, 1e-15) && close(al[1], 0.2, 1e-15) && close(al[2], 58.0 / 210.0, 1e-15));
    for sign in [1.0, -1.0] {
        let s = s_state(&j, [0.7, 0.4, -0.5], sign);
        let r = analyze_s_equilibrium(&s, &j).unwrap();
        assert!(r.gradient_residual < 1e-14);
        assert_eq!(r.hess_eigs6.iter().filter(|v| v.abs() < 1e-9).count(), 3);
        assert_eq!(r.hess_eigs4.iter().filter(|v| v.abs() < 1e-9).count(), 1);
        assert!(r.hess_eigs4.iter().all(|v| *v > -1e-12));
        assert!(r.kernel_angle < 1e-10);
        let (n, f) = (r.beta_product.unwrap(), r.beta_product_formula.unwrap());
        assert!(close(n, f, 1e-10));
        assert_eq!(r.orbit_verdict, Verdict::StableModuloDrift);
    }
}
