use std::ffi::CStr;
use std::ptr;

use so4top_ffi::*;

fn body(l: [f64; 4]) -> *mut So4Body {
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { so4_body_new(l.as_ptr(), &mut b) }, So4Status::Ok);
    assert!(!b.is_null());
    b
}

#[test]
fn body_lifecycle_and_invariants() {
    let b = body([4.0, 3.0, 2.0, 1.0]);
    let s = [3.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    let (mut h, mut i, mut c1, mut c2, mut r) = (0.0, 0.0, 0.0, 0.0, 1.0);
    unsafe {
        assert_eq!(so4_hamiltonian(b, s.as_ptr(), &mut h), So4Status::Ok);
        assert_eq!(so4_integral_i(b, s.as_ptr(), &mut i), So4Status::Ok);
        assert_eq!(so4_casimirs(s.as_ptr(), &mut c1, &mut c2), So4Status::Ok);
        assert_eq!(so4_equilibrium_residual(b, s.as_ptr(), &mut r), So4Status::Ok);
        so4_body_free(b);
    }
    // H = (x1^2/(l2+l3) + y1^2/(l1+l4)) / 2 = (9/5 + 1/5) / 2.
    assert!((h - 1.0).abs() < 1e-15);
    assert!(i > 0.0);
    assert_eq!((c1, c2), (5.0, 3.0));
    assert!(r < 1e-12);
}

#[test]
fn invalid_spectrum_sets_message() {
    let mut b = ptr::null_mut();
    let st = unsafe { so4_body_new([1.0, 2.0, 3.0, 4.0].as_ptr(), &mut b) };
    assert_eq!(st, So4Status::InvalidSpectrum);
    assert!(b.is_null());
    let msg = unsafe { CStr::from_ptr(so4_last_error()) }.to_string_lossy().into_owned();
    assert!(msg.contains("l1 > l2 > l3 > l4"), "{msg}");
}

#[test]
fn null_pointers_rejected() {
    let b = body([4.0, 3.0, 2.0, 1.0]);
    unsafe {
        assert_eq!(so4_hamiltonian(b, ptr::null(), ptr::null_mut()), So4Status::NullPointer);
        assert_eq!(so4_body_new(ptr::null(), ptr::null_mut()), So4Status::NullPointer);
        let mut h = 0.0;
        assert_eq!(so4_hamiltonian(ptr::null(), [0.0; 6].as_ptr(), &mut h), So4Status::NullPointer);
        so4_body_free(b);
        so4_body_free(ptr::null_mut());
        so4_string_free(ptr::null_mut());
        so4_trajectory_free(ptr::null_mut());
        assert_eq!(so4_trajectory_len(ptr::null()), 0);
    }
    assert!(last_error_string().unwrap().contains("null pointer"));
}

#[test]
fn classification_of_reference_orbit() {
    let b = body([4.0, 3.0, 2.0, 1.0]);
    let mut out = So4Classification {
        williamson: So4Williamson::Degenerate,
        spectral_williamson: So4Williamson::Degenerate,
        orbit_verdict: So4Verdict::Open,
        liepoisson_verdict: So4Verdict::Open,
        ratio: 0.0,
        nondegenerate: false,
    };
    let cases = [
        (So4Family::T1, So4WeylLabel::Ab, So4Williamson::CenterCenter),
        (So4Family::T1, So4WeylLabel::Ba, So4Williamson::SaddleSaddle),
        (So4Family::T2, So4WeylLabel::NegBa, So4Williamson::CenterSaddle),
        (So4Family::T3, So4WeylLabel::NegAb, So4Williamson::CenterCenter),
    ];
    for (f, l, want) in cases {
        assert_eq!(unsafe { so4_classify_cartan(b, 5.0, 3.0, f, l, &mut out) }, So4Status::Ok);
        assert_eq!(out.williamson, want);
        assert_eq!(out.spectral_williamson, want);
        assert!((out.ratio - 1.0 / 9.0).abs() < 1e-15);
    }
    assert_eq!(
        unsafe { so4_classify_cartan(b, 1.0, 1.0, So4Family::T1, So4WeylLabel::Ab, &mut out) },
        So4Status::NotRegular
    );
    assert_eq!(
        unsafe { so4_classify_cartan(b, 1.0, 2.0, So4Family::T1, So4WeylLabel::Ab, &mut out) },
        So4Status::OutsideChamber
    );

    let mut f = So4Frontiers { alpha1: 0.0, alpha2: 0.0, alpha3: 0.0, s1: 0.0, s2: 0.0, has_s2: false, case_two: true };
    assert_eq!(unsafe { so4_frontiers(b, &mut f) }, So4Status::Ok);
    assert!(f.has_s2 && !f.case_two);
    assert!((f.alpha3 - 23.0 / 27.0).abs() < 1e-12);
    assert!(f.alpha1 < f.alpha3 && f.alpha3 < f.alpha2);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { so4_classify_json(b, 5.0, 3.0, 2, &mut json) }, So4Status::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_string_lossy().into_owned();
    unsafe {
        so4_string_free(json);
        so4_body_free(b);
    }
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["cartan"].as_array().unwrap().len(), 12);
}

#[test]
fn trajectory_handle() {
    let b = body([4.0, 3.0, 2.0, 1.0]);
    let mut s = [0.0; 6];
    let st = unsafe { so4_cartan_point(5.0, 3.0, So4Family::T3, So4WeylLabel::Ab, s.as_mut_ptr()) };
    assert_eq!(st, So4Status::Ok);
    s[0] += 1e-3;
    let mut opts = so4_integrator_defaults();
    opts.steps = 200;
    opts.record_every = 50;
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { so4_integrate(b, s.as_ptr(), So4Flow::H, &opts, &mut t) }, So4Status::Ok);
    let n = unsafe { so4_trajectory_len(t) };
    assert_eq!(n, 5);
    let (mut time, mut st6, mut drift) = (0.0, [0.0; 6], [1.0; 4]);
    unsafe {
        assert_eq!(so4_trajectory_sample(t, n - 1, &mut time, st6.as_mut_ptr()), So4Status::Ok);
        assert_eq!(so4_trajectory_sample(t, n, &mut time, st6.as_mut_ptr()), So4Status::InvalidArgument);
        assert_eq!(so4_trajectory_max_drift(t, drift.as_mut_ptr()), So4Status::Ok);
        so4_trajectory_free(t);
    }
    assert!((time - 0.2).abs() < 1e-12);
    assert!(drift.iter().all(|d| *d < 1e-10));

    opts.max_h_drift = 1e-300;
    opts.steps = 1000;
    let st = unsafe { so4_integrate(b, [1.0, 0.5, 0.2, 0.1, -0.3, 0.4].as_ptr(), So4Flow::H, &opts, &mut t) };
    assert_eq!(st, So4Status::DriftExceeded);
    unsafe { so4_body_free(b) };
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(so4_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
