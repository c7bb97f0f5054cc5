//! C ABI for `so4top`.
//!
//! Every fallible function returns an [`So4Status`]; results are written
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`so4_last_error`]. Handles are opaque and must be released
//! with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use so4top::dynamics::{equilibrium_residual, integrate, Flow, IntegratorConfig, Scheme, Trajectory};
use so4top::equilibria::{Family, WeylLabel};
use so4top::scan::classify_orbit;
use so4top::spectral::Williamson;
use so4top::stability::{classify_weyl_point, frontier_slopes, Verdict};
use so4top::{BodyState, Error, InertiaSpectrum, OrbitParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4Status {
    Ok = 0,
    NullPointer = 1,
    InvalidSpectrum = 2,
    OutsideChamber = 3,
    NotRegular = 4,
    NotEquilibrium = 5,
    InvalidArgument = 6,
    DriftExceeded = 7,
    Numerical = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4Williamson {
    CenterCenter = 0,
    CenterSaddle = 1,
    SaddleSaddle = 2,
    FocusFocus = 3,
    Degenerate = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4Verdict {
    Stable = 0,
    Unstable = 1,
    Open = 2,
    StableModuloDrift = 3,
}

/// Cartan subalgebra `t1`, `t2` or `t3`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4Family {
    T1 = 1,
    T2 = 2,
    T3 = 3,
}

/// Position in the Weyl orbit: `(a,b)`, `(-a,-b)`, `(b,a)`, `(-b,-a)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4WeylLabel {
    Ab = 0,
    NegAb = 1,
    Ba = 2,
    NegBa = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So4Flow {
    H = 0,
    I = 1,
}

/// Stability of one Cartan equilibrium.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So4Classification {
    /// Type from the case analysis.
    pub williamson: So4Williamson,
    /// Type from the numerical linearization.
    pub spectral_williamson: So4Williamson,
    pub orbit_verdict: So4Verdict,
    pub liepoisson_verdict: So4Verdict,
    /// `b^2 / a^2`.
    pub ratio: f64,
    pub nondegenerate: bool,
}

/// Frontiers of the `M1_{b,a}` analysis and their slopes `|c2| / c1`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So4Frontiers {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub s1: f64,
    /// Meaningful only when `has_s2`; absent in case II.
    pub s2: f64,
    pub has_s2: bool,
    pub case_two: bool,
}

/// Integration settings.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So4IntegratorOptions {
    pub step: f64,
    pub steps: usize,
    /// Record every n-th step; 0 is treated as 1.
    pub record_every: usize,
    /// Project onto the initial orbit after each step.
    pub projection: bool,
    /// Use the implicit midpoint rule instead of RK4.
    pub implicit_midpoint: bool,
    /// Abort with `DRIFT_EXCEEDED` above this relative `H` drift; `<= 0` disables.
    pub max_h_drift: f64,
}

/// Rigid body with a fixed inertia spectrum.
pub struct So4Body {
    spectrum: InertiaSpectrum,
}

/// Recorded trajectory.
pub struct So4Trajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> So4Status {
    match e {
        Error::InvalidSpectrum(_) => So4Status::InvalidSpectrum,
        Error::OutsideChamber { .. } => So4Status::OutsideChamber,
        Error::NotRegular { .. } => So4Status::NotRegular,
        Error::NotEquilibrium(_) => So4Status::NotEquilibrium,
        Error::DriftExceeded { .. } => So4Status::DriftExceeded,
        Error::Numerical(_) => So4Status::Numerical,
        Error::IndexOutOfRange(_) | Error::InvalidConfig(_) => So4Status::InvalidArgument,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => So4Status::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Run `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> So4Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => So4Status::Ok,
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer: {name}"));
            So4Status::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(msg);
            So4Status::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            So4Status::Internal
        }
    }
}

unsafe fn body_ref<'a>(body: *const So4Body) -> Result<&'a So4Body, Fail> {
    body.as_ref().ok_or(Fail::Null("body"))
}

unsafe fn read_array<const N: usize>(p: *const f64, name: &'static str) -> Result<[f64; N], Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    let mut out = [0.0; N];
    ptr::copy_nonoverlapping(p, out.as_mut_ptr(), N);
    Ok(out)
}

unsafe fn read_state(p: *const f64) -> Result<BodyState, Fail> {
    let s = BodyState::from_coords(read_array::<6>(p, "state")?);
    if !s.is_finite() {
        return Err(Fail::Arg("state has non-finite coordinates".into()));
    }
    Ok(s)
}

unsafe fn write<T>(out: *mut T, v: T, name: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(name));
    }
    out.write(v);
    Ok(())
}

impl From<Williamson> for So4Williamson {
    fn from(w: Williamson) -> Self {
        match w {
            Williamson::CenterCenter => So4Williamson::CenterCenter,
            Williamson::CenterSaddle => So4Williamson::CenterSaddle,
            Williamson::SaddleSaddle => So4Williamson::SaddleSaddle,
            Williamson::FocusFocus => So4Williamson::FocusFocus,
            Williamson::Degenerate => So4Williamson::Degenerate,
        }
    }
}

impl From<Verdict> for So4Verdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Stable => So4Verdict::Stable,
            Verdict::Unstable => So4Verdict::Unstable,
            Verdict::Open => So4Verdict::Open,
            Verdict::StableModuloDrift => So4Verdict::StableModuloDrift,
        }
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn so4_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn so4_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a body from `lambda[4]` with `l1 > l2 > l3 > l4` and nonzero pair sums.
///
/// # Safety
/// `lambda` must point to 4 readable doubles and `out` to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn so4_body_new(lambda: *const f64, out: *mut *mut So4Body) -> So4Status {
    guard(|| {
        let l = read_array::<4>(lambda, "lambda")?;
        let spectrum = InertiaSpectrum::new(l)?;
        write(out, Box::into_raw(Box::new(So4Body { spectrum })), "out")
    })
}

/// Release a body; null is ignored.
///
/// # Safety
/// `body` must come from [`so4_body_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn so4_body_free(body: *mut So4Body) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Hamiltonian `H` at `state[6] = (x1, x2, x3, y1, y2, y3)`.
///
/// # Safety
/// `body` must be valid, `state` must point to 6 doubles, `out` to one.
#[no_mangle]
pub unsafe extern "C" fn so4_hamiltonian(body: *const So4Body, state: *const f64, out: *mut f64) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let s = read_state(state)?;
        write(out, so4top::lie::hamiltonian(&s, &b.spectrum), "out")
    })
}

/// Second integral `I` at `state[6]`.
///
/// # Safety
/// As for [`so4_hamiltonian`].
#[no_mangle]
pub unsafe extern "C" fn so4_integral_i(body: *const So4Body, state: *const f64, out: *mut f64) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let s = read_state(state)?;
        write(out, so4top::lie::integral_i(&s, &b.spectrum), "out")
    })
}

/// Casimirs `C1 = (|x|^2 + |y|^2) / 2` and `C2 = x . y`.
///
/// # Safety
/// `state` must point to 6 doubles; `c1` and `c2` to one each.
#[no_mangle]
pub unsafe extern "C" fn so4_casimirs(state: *const f64, c1: *mut f64, c2: *mut f64) -> So4Status {
    guard(|| {
        let s = read_state(state)?;
        let o = so4top::lie::casimirs(&s);
        write(c1, o.c1, "c1")?;
        write(c2, o.c2, "c2")
    })
}

/// Normalized equilibrium residual; below `1e-9` counts as an equilibrium.
///
/// # Safety
/// As for [`so4_hamiltonian`].
#[no_mangle]
pub unsafe extern "C" fn so4_equilibrium_residual(body: *const So4Body, state: *const f64, out: *mut f64) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let s = read_state(state)?;
        write(out, equilibrium_residual(&s, &b.spectrum), "out")
    })
}

/// Frontier ratios and slopes of the swapped `t1` points.
///
/// # Safety
/// `body` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so4_frontiers(body: *const So4Body, out: *mut So4Frontiers) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let f = frontier_slopes(&b.spectrum);
        let v = So4Frontiers {
            alpha1: f.alpha1,
            alpha2: f.alpha2,
            alpha3: f.alpha3,
            s1: f.s1,
            s2: f.s2.unwrap_or(f64::NAN),
            has_s2: f.s2.is_some(),
            case_two: b.spectrum.is_case_two(),
        };
        write(out, v, "out")
    })
}

/// Write the Cartan point `(family, label)` of the orbit `(c1, c2)` to `state[6]`.
///
/// # Safety
/// `state` must point to 6 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn so4_cartan_point(
    c1: f64,
    c2: f64,
    family: So4Family,
    label: So4WeylLabel,
    state: *mut f64,
) -> So4Status {
    guard(|| {
        if state.is_null() {
            return Err(Fail::Null("state"));
        }
        let orbit = OrbitParams::regular(c1, c2)?;
        let e = so4top::equilibria::cartan_point(family_of(family), label_of(label), &orbit)?;
        ptr::copy_nonoverlapping(e.state.coords().as_ptr(), state, 6);
        Ok(())
    })
}

fn family_of(f: So4Family) -> Family {
    match f {
        So4Family::T1 => Family::T1,
        So4Family::T2 => Family::T2,
        So4Family::T3 => Family::T3,
    }
}

fn label_of(l: So4WeylLabel) -> WeylLabel {
    match l {
        So4WeylLabel::Ab => WeylLabel::Ab,
        So4WeylLabel::NegAb => WeylLabel::NegAb,
        So4WeylLabel::Ba => WeylLabel::Ba,
        So4WeylLabel::NegBa => WeylLabel::NegBa,
    }
}

/// Classify one Cartan equilibrium of the regular orbit `(c1, c2)`.
///
/// # Safety
/// `body` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so4_classify_cartan(
    body: *const So4Body,
    c1: f64,
    c2: f64,
    family: So4Family,
    label: So4WeylLabel,
    out: *mut So4Classification,
) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let orbit = OrbitParams::regular(c1, c2)?;
        let r = classify_weyl_point(&b.spectrum, &orbit, family_of(family), label_of(label))?;
        let v = So4Classification {
            williamson: r.williamson.into(),
            spectral_williamson: r.spectral_williamson.into(),
            orbit_verdict: r.orbit_verdict.into(),
            liepoisson_verdict: r.liepoisson_verdict.into(),
            ratio: r.ratio,
            nondegenerate: r.nondegenerate,
        };
        write(out, v, "out")
    })
}

/// Full JSON classification of the orbit (twelve Cartan reports plus
/// `s_samples` segment parameters of the s-curve). Free with [`so4_string_free`].
///
/// # Safety
/// `body` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so4_classify_json(
    body: *const So4Body,
    c1: f64,
    c2: f64,
    s_samples: usize,
    out: *mut *mut c_char,
) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let orbit = OrbitParams::regular(c1, c2)?;
        let c = classify_orbit(&b.spectrum, &orbit, s_samples)?;
        let json = serde_json::to_string(&c).map_err(Error::from)?;
        let s = CString::new(json).map_err(|_| Fail::Arg("interior NUL in JSON".into()))?;
        write(out, s.into_raw(), "out")
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn so4_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default options: RK4, step `1e-3`, `1e4` steps, every step recorded.
#[no_mangle]
pub extern "C" fn so4_integrator_defaults() -> So4IntegratorOptions {
    let d = IntegratorConfig::default();
    So4IntegratorOptions {
        step: d.step,
        steps: d.max_steps,
        record_every: d.record_every,
        projection: d.projection,
        implicit_midpoint: d.scheme == Scheme::ImplicitMidpoint,
        max_h_drift: d.max_h_drift.unwrap_or(0.0),
    }
}

/// Integrate the `H` or `I` flow from `state[6]`.
///
/// # Safety
/// `body` must be valid, `state` must point to 6 doubles, `opts` and `out`
/// must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn so4_integrate(
    body: *const So4Body,
    state: *const f64,
    flow: So4Flow,
    opts: *const So4IntegratorOptions,
    out: *mut *mut So4Trajectory,
) -> So4Status {
    guard(|| {
        let b = body_ref(body)?;
        let s = read_state(state)?;
        let o = opts.as_ref().ok_or(Fail::Null("opts"))?;
        let cfg = IntegratorConfig {
            step: o.step,
            scheme: if o.implicit_midpoint { Scheme::ImplicitMidpoint } else { Scheme::Rk4 },
            max_steps: o.steps,
            projection: o.projection,
            record_every: o.record_every.max(1),
            max_h_drift: (o.max_h_drift > 0.0).then_some(o.max_h_drift),
        };
        let flow = match flow {
            So4Flow::H => Flow::H,
            So4Flow::I => Flow::I,
        };
        let t = integrate(&s, &b.spectrum, &cfg, flow)?;
        write(out, Box::into_raw(Box::new(So4Trajectory { inner: t })), "out")
    })
}

/// Number of recorded samples, or 0 for null.
///
/// # Safety
/// `traj` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn so4_trajectory_len(traj: *const So4Trajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.times.len())
}

/// Time and state of sample `index`.
///
/// # Safety
/// `traj` must be valid; `time` must point to one double and `state` to 6.
#[no_mangle]
pub unsafe extern "C" fn so4_trajectory_sample(
    traj: *const So4Trajectory,
    index: usize,
    time: *mut f64,
    state: *mut f64,
) -> So4Status {
    guard(|| {
        let t = traj.as_ref().ok_or(Fail::Null("traj"))?;
        let n = t.inner.times.len();
        if index >= n {
            return Err(Fail::Lib(Error::IndexOutOfRange(format!("sample {index} of {n}"))));
        }
        if state.is_null() {
            return Err(Fail::Null("state"));
        }
        write(time, t.inner.times[index], "time")?;
        ptr::copy_nonoverlapping(t.inner.states[index].coords().as_ptr(), state, 6);
        Ok(())
    })
}

/// Largest relative drift of `(C1, C2, H, I)` written to `out[4]`.
///
/// # Safety
/// `traj` must be valid and `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn so4_trajectory_max_drift(traj: *const So4Trajectory, out: *mut f64) -> So4Status {
    guard(|| {
        let t = traj.as_ref().ok_or(Fail::Null("traj"))?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let d = t.inner.max_relative_drift();
        ptr::copy_nonoverlapping([d.c1, d.c2, d.h, d.i].as_ptr(), out, 4);
        Ok(())
    })
}

/// Release a trajectory; null is ignored.
///
/// # Safety
/// `traj` must come from [`so4_integrate`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn so4_trajectory_free(traj: *mut So4Trajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Copy the message of `status`-returning calls into a Rust string; test helper.
#[doc(hidden)]
pub fn last_error_string() -> Option<String> {
    let p = so4_last_error();
    if p.is_null() {
        None
    } else {
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
