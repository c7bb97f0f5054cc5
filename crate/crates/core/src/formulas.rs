//! Closed-form coefficients of the characteristic quartics at the Cartan
//! equilibria and of the energy–Casimir quantities on the `s±` curves.
//!
//! Everything here is a polynomial or rational expression in `l_i` (or their
//! squares `L_i = l_i^2`) and the Cartan parameters `(a, b)`. These are kept
//! separate from the numerical linearizations so the two can check each other.

use serde::{Deserialize, Serialize};

use crate::lie::InertiaSpectrum;

/// Monic even quartic `z^4 + v z^2 + w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenQuartic {
    pub v: f64,
    pub w: f64,
}

impl EvenQuartic {
    /// Discriminant `v^2 - 4w` of the quadratic in `t = z^2`.
    pub fn discriminant(&self) -> f64 {
        self.v * self.v - 4.0 * self.w
    }
}

fn sq(j: &InertiaSpectrum) -> (f64, f64, f64, f64) {
    let [a, b, c, d] = j.squares();
    (a, b, c, d)
}

/// `S1`, `T1` with `v1 = S1 a^2 + T1 b^2` at `M1_{a,b}`.
pub fn t1_ab_st(j: &InertiaSpectrum) -> (f64, f64) {
    let (l1, l2, l3, l4) = sq(j);
    let s1 = 4.0 * (2.0 * l2 * l3 - l3 * l4 + l1 * l1 + l4 * l4 - l2 * l4 - l1 * l2 - l1 * l3);
    let t1 = 4.0 * (l2 * l2 - l1 * l2 + 2.0 * l1 * l4 - l2 * l4 - l1 * l3 - l3 * l4 + l3 * l3);
    (s1, t1)
}

/// `(S'1, T'1, U'1)` with `v1^2 - 4 w1 = 16 (L1 + L4 - L2 - L3)^2 (S'1 a^4 + T'1 a^2 b^2 + U'1 b^4)`.
pub fn t1_ab_discriminant_stu(j: &InertiaSpectrum) -> (f64, f64, f64) {
    let (l1, l2, l3, l4) = sq(j);
    let s = (l1 - l4).powi(2);
    let u = (l2 - l3).powi(2);
    let t = 2.0 * (-l3 * l4 - l1 * l3 + 2.0 * l1 * l4 + 2.0 * l2 * l3 - l1 * l2 - l2 * l4);
    (s, t, u)
}

/// Shared constant term of the `I`-quartic on the first Weyl orbit.
fn w1(j: &InertiaSpectrum, a: f64, b: f64) -> f64 {
    let (l1, l2, l3, l4) = sq(j);
    16.0 * (l1 - l2) * (l1 - l3) * (l2 - l4) * (l3 - l4) * (a * a - b * b).powi(2)
}

/// `I`-flow quartic at `M1_{a,b}` (and `M1_{-a,-b}`).
pub fn t1_ab_i(j: &InertiaSpectrum, a: f64, b: f64) -> EvenQuartic {
    let (s1, t1) = t1_ab_st(j);
    EvenQuartic { v: s1 * a * a + t1 * b * b, w: w1(j, a, b) }
}

/// `H`-flow quartic at `M1_{a,b}`.
pub fn t1_ab_h(j: &InertiaSpectrum, a: f64, b: f64) -> EvenQuartic {
    let [l1, l2, l3, l4] = j.lambda();
    let p = |x: f64, y: f64| x + y;
    let (a2, b2) = (a * a, b * b);
    let ca = a2 / p(l2, l3).powi(2);
    let cb = b2 / p(l1, l4).powi(2);
    let v = ca
        * ((l2 - l4) * (l3 - l4) / (p(l3, l4) * p(l2, l4)) + (l1 - l3) * (l1 - l2) / (p(l1, l2) * p(l1, l3)))
        - cb * ((l1 - l2) * (l2 - l4) / (p(l2, l4) * p(l1, l2)) + (l1 - l3) * (l3 - l4) / (p(l3, l4) * p(l1, l3)));
    let w = (l1 - l2) * (l1 - l3) * (l2 - l4) * (l3 - l4) / (p(l1, l2) * p(l1, l3) * p(l3, l4) * p(l2, l4))
        * (ca - cb).powi(2);
    EvenQuartic { v, w }
}

/// Coefficients governing the swapped points `M1_{b,a}`, `M1_{-b,-a}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct T1BaCoefficients {
    /// `v~1 = S~1 a^2 + T~1 b^2`.
    pub s1: f64,
    pub t1: f64,
    /// `f~(t) = S~2 t^2 + T~2 t + U~2`.
    pub s2: f64,
    pub t2: f64,
    pub u2: f64,
    /// Discriminant of `f~`.
    pub disc_f: f64,
}

impl T1BaCoefficients {
    pub fn new(j: &InertiaSpectrum) -> Self {
        let (l1, l2, l3, l4) = sq(j);
        Self {
            s1: -4.0 * ((l1 - l2) * (l2 - l4) + (l1 - l3) * (l3 - l4)),
            t1: 4.0 * ((l1 - l2) * (l1 - l3) + (l2 - l4) * (l3 - l4)),
            s2: (l1 - l4).powi(2),
            t2: -2.0 * ((l1 - l2) * (l3 - l4) + (l1 - l3) * (l2 - l4)),
            u2: (l2 - l3).powi(2),
            disc_f: 16.0 * (l1 - l2) * (l1 - l3) * (l2 - l4) * (l3 - l4),
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        (self.s2 * t + self.t2) * t + self.u2
    }

    /// Roots `alpha1 < alpha2` of `f~`, computed without cancellation.
    pub fn frontier_roots(&self) -> (f64, f64) {
        let sqrt_d = self.disc_f.max(0.0).sqrt();
        // t2 < 0, so -t2 + sqrt(d) has no cancellation; the small root follows
        // from the product of the roots.
        let big = (-self.t2 + sqrt_d) / (2.0 * self.s2);
        let small = self.u2 / (self.s2 * big);
        (small, big)
    }

    /// `alpha3 = -S~1 / T~1`, where `v~1` changes sign.
    pub fn alpha3(&self) -> f64 {
        -self.s1 / self.t1
    }
}

/// `I`-flow quartic at `M1_{b,a}` (and `M1_{-b,-a}`).
pub fn t1_ba_i(j: &InertiaSpectrum, a: f64, b: f64) -> EvenQuartic {
    let c = T1BaCoefficients::new(j);
    EvenQuartic { v: c.s1 * a * a + c.t1 * b * b, w: w1(j, a, b) }
}

/// `Y2`, `Z2` of the `M1_{a,b}` analysis when `L1 + L4 = L2 + L3`.
pub fn case_two_y2_z2(j: &InertiaSpectrum) -> (f64, f64) {
    let [l1, l2, l3, l4] = j.lambda();
    let y2 = -2.0 * (l1 + l2) * (l1 + l3) * (l2 + l4) * (l3 + l4) * (l1 + l4 - l2 - l3);
    let z2 = l1 * l4 - l2 * l3;
    (y2, z2)
}

/// The combination weight `-Z2 / Y2` to avoid, when defined.
pub fn case_two_excluded_alpha(j: &InertiaSpectrum) -> Option<f64> {
    let (y2, z2) = case_two_y2_z2(j);
    (y2 != 0.0).then(|| -z2 / y2)
}

/// `I`-flow quartic on the second Weyl orbit.
pub fn t2_i(j: &InertiaSpectrum, a: f64, b: f64) -> EvenQuartic {
    let (l1, l2, l3, l4) = sq(j);
    let ca = 4.0 * (-l3 * l4 - l2 * l3 - l1 * l4 + l2 * l2 - l1 * l2 + l4 * l4 + 2.0 * l1 * l3);
    let cb = 4.0 * (-l3 * l4 + 2.0 * l2 * l4 - l1 * l2 - l1 * l4 + l1 * l1 + l3 * l3 - l2 * l3);
    let w = -16.0 * (l1 - l2) * (l1 - l4) * (l2 - l3) * (l3 - l4) * (a * a - b * b).powi(2);
    EvenQuartic { v: ca * a * a + cb * b * b, w }
}

/// `(S2, T2, U2)` of the second-orbit discriminant factorization.
pub fn t2_discriminant_stu(j: &InertiaSpectrum) -> (f64, f64, f64) {
    let (l1, l2, l3, l4) = sq(j);
    let t = 2.0 * (-l1 * l2 - l1 * l4 + 2.0 * l1 * l3 + 2.0 * l2 * l4 - l3 * l4 - l2 * l3);
    ((l2 - l4).powi(2), t, (l1 - l3).powi(2))
}

/// `I`-flow quartic on the third Weyl orbit.
pub fn t3_i(j: &InertiaSpectrum, a: f64, b: f64) -> EvenQuartic {
    let (l1, l2, l3, l4) = sq(j);
    let ca = 4.0 * ((l1 - l3) * (l2 - l3) + (l1 - l4) * (l2 - l4));
    let cb = 4.0 * ((l1 - l3) * (l1 - l4) + (l2 - l3) * (l2 - l4));
    let w = 16.0 * (l1 - l3) * (l1 - l4) * (l2 - l3) * (l2 - l4) * (a * a - b * b).powi(2);
    EvenQuartic { v: ca * a * a + cb * b * b, w }
}

/// `(S3, T3, U3)` of the third-orbit discriminant factorization.
pub fn t3_discriminant_stu(j: &InertiaSpectrum) -> (f64, f64, f64) {
    let (l1, l2, l3, l4) = sq(j);
    let t = 2.0 * ((l1 - l3) * (l2 - l4) + (l1 - l4) * (l2 - l3));
    ((l3 - l4).powi(2), t, (l1 - l2).powi(2))
}

/// `[k1, k2, k3, k4]` with restricted `H`-linearization characteristic
/// polynomial `t^2 (k4 t^2 + k1 a1^2 + k2 a2^2 + k3 a3^2)` on `s±`.
pub fn s_linearization_k(j: &InertiaSpectrum) -> [f64; 4] {
    let [l1, l2, l3, l4] = j.lambda();
    let p = |x: f64, y: f64| x + y;
    let k1 = 4.0 * p(l3, l4) * p(l2, l4) * p(l1, l3) * p(l1, l2) * (l1 * l4 - l2 * l3).powi(2);
    let k2 = 4.0 * p(l3, l4) * p(l2, l3) * p(l1, l4) * p(l1, l2) * (l1 * l3 - l2 * l4).powi(2);
    let k3 = 4.0 * p(l2, l4) * p(l2, l3) * p(l1, l4) * p(l1, l3) * (l1 * l2 - l3 * l4).powi(2);
    let k4 = j.omega_weights().iter().map(|w| w * w).product();
    [k1, k2, k3, k4]
}

/// Lagrange multipliers `(m0, n0)` making `H + m0 C1 + n0 C2` critical on `s±`.
pub fn energy_casimir_multipliers(j: &InertiaSpectrum, sign: f64) -> (f64, f64) {
    let m0 = -1.0 / j.total();
    (m0, if sign < 0.0 { -m0 } else { m0 })
}

/// Nonzero eigenvalues of the Hessian of `H + m0 C1 + n0 C2`.
pub fn energy_casimir_alphas(j: &InertiaSpectrum) -> [f64; 3] {
    let [l1, l2, l3, l4] = j.lambda();
    let s = j.total();
    let f = |p: f64, q: f64| (p * p + q * q) / (p * q * s);
    [f(l1 + l3, l2 + l4), f(l1 + l4, l2 + l3), f(l1 + l2, l3 + l4)]
}

/// `beta1 beta2 beta3 = 4 (A1 + A2 (a3/a1)^2 + A3 (a3/a2)^2) / B`, defined
/// when `a1, a2 != 0`.
pub fn beta_product(j: &InertiaSpectrum, a: [f64; 3]) -> Option<f64> {
    if a[0] == 0.0 || a[1] == 0.0 {
        return None;
    }
    let [l1, l2, l3, l4] = j.lambda();
    let (q1, q2, q3, q4) = sq(j);
    let p = |x: f64, y: f64| x + y;
    let a1 = (q1 - q2).powi(2) * (q3 - q4).powi(2) * (p(l1, l2).powi(2) + p(l3, l4).powi(2));
    let a2 = (q1 - q4).powi(2) * (q2 - q3).powi(2) * p(l1, l4).powi(2);
    let a3 = (q1 - q3).powi(2) * (q2 - q4).powi(2) * p(l2, l4).powi(2);
    let big_b = p(l1, l2).powi(3)
        * p(l1, l3)
        * p(l1, l4)
        * p(l2, l3)
        * p(l2, l4)
        * p(l3, l4).powi(3)
        * (l1 - l2).powi(2)
        * j.total();
    let r1 = a[2] / a[0];
    let r2 = a[2] / a[1];
    Some(4.0 * (a1 + a2 * r1 * r1 + a3 * r2 * r2) / big_b)
}

/// Frontier slope `|c2| / c1` corresponding to `b^2 / a^2 = alpha`.
pub fn slope_of_ratio(alpha: f64) -> f64 {
    2.0 * alpha.sqrt() / (1.0 + alpha)
}
