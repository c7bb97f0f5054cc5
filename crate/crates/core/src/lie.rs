//! The Lie algebra so(4), its coordinates and the first integrals of the body.

use nalgebra::{DMatrix, Matrix4, Vector6};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tol;

/// Diagonal inertia parameters `J = diag(l1, l2, l3, l4)`.
///
/// Stored strictly decreasing. Pair sums `li + lj` must be nonzero because
/// they appear as denominators in the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct InertiaSpectrum {
    lambda: [f64; 4],
}

impl TryFrom<[f64; 4]> for InertiaSpectrum {
    type Error = Error;
    fn try_from(lambda: [f64; 4]) -> Result<Self> {
        Self::new(lambda)
    }
}

impl From<InertiaSpectrum> for [f64; 4] {
    fn from(j: InertiaSpectrum) -> Self {
        j.lambda
    }
}

impl InertiaSpectrum {
    pub fn new(lambda: [f64; 4]) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite entry in {lambda:?}")));
        }
        if !(lambda[0] > lambda[1] && lambda[1] > lambda[2] && lambda[2] > lambda[3]) {
            return Err(Error::InvalidSpectrum(format!(
                "expected l1 > l2 > l3 > l4, got {lambda:?}"
            )));
        }
        let scale = lambda.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        for i in 0..4 {
            for j in (i + 1)..4 {
                if lambda[i] + lambda[j] <= 1e-12 * scale {
                    return Err(Error::InvalidSpectrum(format!(
                        "pair sum l{} + l{} = {} is not positive",
                        i + 1,
                        j + 1,
                        lambda[i] + lambda[j]
                    )));
                }
            }
        }
        Ok(Self { lambda })
    }

    /// Spectrum on the `l1 + l4 = l2 + l3` hypersurface after the change of
    /// variables `li -> li^2`: `l4 = ±sqrt(l2^2 + l3^2 - l1^2)`.
    pub fn case_two(l1: f64, l2: f64, l3: f64, negative_l4: bool) -> Result<Self> {
        let rad = l2 * l2 + l3 * l3 - l1 * l1;
        if rad.is_nan() || rad < 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "l2^2 + l3^2 - l1^2 = {rad} is negative"
            )));
        }
        let l4 = if negative_l4 { -rad.sqrt() } else { rad.sqrt() };
        Self::new([l1, l2, l3, l4])
    }

    pub fn lambda(&self) -> [f64; 4] {
        self.lambda
    }

    /// `l1 + l2 + l3 + l4`.
    pub fn total(&self) -> f64 {
        self.lambda.iter().sum()
    }

    /// Squares `li^2`, the variables in which most closed forms are polynomial.
    pub fn squares(&self) -> [f64; 4] {
        self.lambda.map(|l| l * l)
    }

    /// Pair sum `li + lj` for 1-based indices.
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.lambda[i - 1] + self.lambda[j - 1]
    }

    /// Pair sums in coordinate order: `Omega_k = coord_k / p_k`.
    pub fn omega_weights(&self) -> [f64; 6] {
        [
            self.pair(2, 3),
            self.pair(1, 3),
            self.pair(1, 2),
            self.pair(1, 4),
            self.pair(2, 4),
            self.pair(3, 4),
        ]
    }

    /// Weights of the quadratic integral `I = sum_k q_k coord_k^2`.
    pub fn integral_weights(&self) -> [f64; 6] {
        let s = self.squares();
        [
            s[1] + s[2],
            s[0] + s[2],
            s[0] + s[1],
            s[0] + s[3],
            s[1] + s[3],
            s[2] + s[3],
        ]
    }

    /// At least one of `l1 + l4 != l2 + l3`, `l2 + l4 != l1 + l3`,
    /// `l3 + l4 != l1 + l2` holds; then `c1 > |c2|` on the `s±` families.
    pub fn is_generic(&self) -> bool {
        let [l1, l2, l3, l4] = self.lambda;
        let scale = self.lambda.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        [(l1 + l4, l2 + l3), (l2 + l4, l1 + l3), (l3 + l4, l1 + l2)]
            .iter()
            .any(|(p, q)| (p - q).abs() > 1e-12 * scale)
    }

    /// `l1^2 + l4^2 = l2^2 + l3^2`, the second case of the `M_{b,a}` analysis.
    pub fn is_case_two(&self) -> bool {
        let s = self.squares();
        let lhs = s[0] + s[3];
        let rhs = s[1] + s[2];
        (lhs - rhs).abs() <= tol::CASE_TWO_REL * lhs.abs().max(rhs.abs())
    }
}

/// A point `(x, y)` of so(4)* in the standard coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    pub x: [f64; 3],
    pub y: [f64; 3],
}

impl BodyState {
    pub fn new(x: [f64; 3], y: [f64; 3]) -> Self {
        Self { x, y }
    }

    pub fn from_coords(c: [f64; 6]) -> Self {
        Self { x: [c[0], c[1], c[2]], y: [c[3], c[4], c[5]] }
    }

    pub fn coords(&self) -> [f64; 6] {
        [self.x[0], self.x[1], self.x[2], self.y[0], self.y[1], self.y[2]]
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        Self::from_coords([v[0], v[1], v[2], v[3], v[4], v[5]])
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::from_column_slice(&self.coords())
    }

    pub fn norm(&self) -> f64 {
        self.coords().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// The skew matrix
    ///
    /// ```text
    /// [  0  -x3   x2  y1 ]
    /// [  x3   0  -x1  y2 ]
    /// [ -x2  x1    0  y3 ]
    /// [ -y1 -y2  -y3   0 ]
    /// ```
    pub fn to_matrix(&self) -> Matrix4<f64> {
        let [x1, x2, x3] = self.x;
        let [y1, y2, y3] = self.y;
        Matrix4::new(
            0.0, -x3, x2, y1, //
            x3, 0.0, -x1, y2, //
            -x2, x1, 0.0, y3, //
            -y1, -y2, -y3, 0.0,
        )
    }

    /// Inverse of [`BodyState::to_matrix`], reading the upper triangle.
    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        Self {
            x: [-m[(1, 2)], m[(0, 2)], -m[(0, 1)]],
            y: [m[(0, 3)], m[(1, 3)], m[(2, 3)]],
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let a = self.coords();
        let b = other.coords();
        Self::from_coords(std::array::from_fn(|i| f(a[i], b[i])))
    }
}

impl Add for BodyState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for BodyState {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Neg for BodyState {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_coords(self.coords().map(|c| -c))
    }
}

impl Mul<f64> for BodyState {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::from_coords(self.coords().map(|c| c * k))
    }
}

/// The `so(3) x so(3)` splitting `u = x + y`, `v = x - y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UvState {
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl UvState {
    /// `Du = |u|^2`.
    pub fn du(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum()
    }

    /// `Dv = |v|^2`.
    pub fn dv(&self) -> f64 {
        self.v.iter().map(|c| c * c).sum()
    }
}

pub fn uv_split(s: &BodyState) -> UvState {
    UvState {
        u: std::array::from_fn(|i| s.x[i] + s.y[i]),
        v: std::array::from_fn(|i| s.x[i] - s.y[i]),
    }
}

pub fn uv_join(uv: &UvState) -> BodyState {
    BodyState {
        x: std::array::from_fn(|i| 0.5 * (uv.u[i] + uv.v[i])),
        y: std::array::from_fn(|i| 0.5 * (uv.u[i] - uv.v[i])),
    }
}

/// Type of the adjoint orbit `{C1 = c1, C2 = c2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regularity {
    /// `c1 > |c2|`: a product of two 2-spheres.
    Regular,
    /// `c1 = |c2| > 0`: one sphere collapses to a point.
    SingularSphere,
    /// `c1 = c2 = 0`.
    Origin,
}

/// Values of the Casimirs `C1 = (|x|^2 + |y|^2)/2` and `C2 = x . y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    pub c1: f64,
    pub c2: f64,
}

impl OrbitParams {
    /// Validated orbit parameters; fails outside the chamber `c1 >= |c2|`.
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::OutsideChamber { c1, c2 });
        }
        if c1 < c2.abs() - tol::REGULARITY_REL * c1.abs().max(c2.abs()) {
            return Err(Error::OutsideChamber { c1, c2 });
        }
        Ok(Self { c1, c2 })
    }

    /// Like [`OrbitParams::new`] but rejects non-regular orbits.
    pub fn regular(c1: f64, c2: f64) -> Result<Self> {
        let o = Self::new(c1, c2)?;
        match o.regularity() {
            Regularity::Regular => Ok(o),
            regularity => Err(Error::NotRegular { c1, c2, regularity }),
        }
    }

    /// Orbit with `c1` fixed and `b^2/a^2 = ratio` for the Cartan parameters.
    pub fn from_ratio(c1: f64, ratio: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) || !(c1 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "ratio {ratio} must lie in [0, 1] and c1 {c1} must be positive"
            )));
        }
        let a2 = 2.0 * c1 / (1.0 + ratio);
        let a = a2.sqrt();
        let b = (ratio * a2).sqrt();
        Self::new(c1, a * b)
    }

    /// `Du = 2 c1 + 2 c2`.
    pub fn du(&self) -> f64 {
        2.0 * self.c1 + 2.0 * self.c2
    }

    /// `Dv = 2 c1 - 2 c2`.
    pub fn dv(&self) -> f64 {
        2.0 * self.c1 - 2.0 * self.c2
    }

    pub fn regularity(&self) -> Regularity {
        let scale = self.c1.abs().max(self.c2.abs());
        if scale <= f64::MIN_POSITIVE {
            return Regularity::Origin;
        }
        if self.c1 - self.c2.abs() <= tol::REGULARITY_REL * scale {
            Regularity::SingularSphere
        } else {
            Regularity::Regular
        }
    }

    /// `c2 / c1`, the slope coordinate of the Weyl chamber.
    pub fn slope(&self) -> f64 {
        self.c2 / self.c1
    }
}

pub fn casimirs(s: &BodyState) -> OrbitParams {
    let n2: f64 = s.coords().iter().map(|c| c * c).sum();
    let dot: f64 = (0..3).map(|i| s.x[i] * s.y[i]).sum();
    OrbitParams { c1: 0.5 * n2, c2: dot }
}

/// Angular velocity `Omega` with `M = J Omega + Omega J`, in coordinates.
pub fn omega_of(s: &BodyState, j: &InertiaSpectrum) -> BodyState {
    let p = j.omega_weights();
    let c = s.coords();
    BodyState::from_coords(std::array::from_fn(|k| c[k] / p[k]))
}

/// Inverse of [`omega_of`].
pub fn momentum_of(omega: &BodyState, j: &InertiaSpectrum) -> BodyState {
    let p = j.omega_weights();
    let c = omega.coords();
    BodyState::from_coords(std::array::from_fn(|k| c[k] * p[k]))
}

/// `H = sum_k coord_k^2 / (2 p_k)`.
pub fn hamiltonian(s: &BodyState, j: &InertiaSpectrum) -> f64 {
    let p = j.omega_weights();
    let c = s.coords();
    0.5 * (0..6).map(|k| c[k] * c[k] / p[k]).sum::<f64>()
}

/// The additional quadratic integral `I = sum_k q_k coord_k^2`.
pub fn integral_i(s: &BodyState, j: &InertiaSpectrum) -> f64 {
    let q = j.integral_weights();
    let c = s.coords();
    (0..6).map(|k| q[k] * c[k] * c[k]).sum()
}

/// One term `coeff * E_{pq}` with `p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTerm {
    pub coeff: i32,
    pub p: usize,
    pub q: usize,
}

/// `[E_ij, E_ks]` in so(n) for 1-based index pairs.
///
/// Uses `[E_ij, E_ks] = d_jk E_is + d_is E_jk - d_ik E_js - d_js E_ik` with
/// `E_rp = -E_pr` and `E_rr = 0`. Terms are merged and sorted.
pub fn son_bracket(i: usize, j: usize, k: usize, s: usize, n: usize) -> Result<Vec<BracketTerm>> {
    for (name, v) in [("i", i), ("j", j), ("k", k), ("s", s)] {
        if v == 0 || v > n {
            return Err(Error::IndexOutOfRange(format!("{name} = {v} not in 1..={n}")));
        }
    }
    if i == j || k == s {
        return Err(Error::IndexOutOfRange(format!("E_{i}{j} or E_{k}{s} has equal indices")));
    }
    let d = |a: usize, b: usize| i32::from(a == b);
    let raw = [
        (d(j, k), i, s),
        (d(i, s), j, k),
        (-d(i, k), j, s),
        (-d(j, s), i, k),
    ];
    let mut acc: Vec<BracketTerm> = Vec::new();
    for (c, a, b) in raw {
        if c == 0 || a == b {
            continue;
        }
        let (c, p, q) = if a < b { (c, a, b) } else { (-c, b, a) };
        match acc.iter_mut().find(|t| t.p == p && t.q == q) {
            Some(t) => t.coeff += c,
            None => acc.push(BracketTerm { coeff: c, p, q }),
        }
    }
    acc.retain(|t| t.coeff != 0);
    acc.sort_by_key(|t| (t.p, t.q));
    Ok(acc)
}

/// Index pair and sign of each so(4) basis element:
/// `E1 = -E23, E2 = E13, E3 = -E12, E4 = E14, E5 = E24, E6 = E34`.
pub const SO4_BASIS: [(i32, usize, usize); 6] =
    [(-1, 2, 3), (1, 1, 3), (-1, 1, 2), (1, 1, 4), (1, 2, 4), (1, 3, 4)];

/// `[E_a, E_b]` for the numbered so(4) basis, as `(coeff, c)` terms `coeff * E_c`.
pub fn so4_bracket(a: usize, b: usize) -> Result<Vec<(i32, usize)>> {
    if !(1..=6).contains(&a) || !(1..=6).contains(&b) {
        return Err(Error::IndexOutOfRange(format!("so(4) basis index ({a}, {b}) not in 1..=6")));
    }
    let (sa, i, j) = SO4_BASIS[a - 1];
    let (sb, k, s) = SO4_BASIS[b - 1];
    let terms = son_bracket(i, j, k, s, 4)?;
    Ok(terms
        .into_iter()
        .map(|t| {
            let c = SO4_BASIS.iter().position(|&(_, p, q)| p == t.p && q == t.q).unwrap_or(0);
            (sa * sb * t.coeff * SO4_BASIS[c].0, c + 1)
        })
        .collect())
}

/// Whether `Omega = sum c E_pq` over disjoint index pairs makes `Omega^2`
/// diagonal, i.e. `[J, Omega^2] = 0` for a generic diagonal `J`.
///
/// Pairs are 1-based `(p, q)`; `j_diag` fixes the dimension.
pub fn is_coordinate_cartan_equilibrium(terms: &[(f64, (usize, usize))], j_diag: &[f64]) -> Result<bool> {
    let n = j_diag.len();
    let mut omega = DMatrix::<f64>::zeros(n, n);
    for &(c, (p, q)) in terms {
        if p == 0 || q == 0 || p > n || q > n || p == q {
            return Err(Error::IndexOutOfRange(format!("pair ({p}, {q}) invalid for n = {n}")));
        }
        omega[(p - 1, q - 1)] += c;
        omega[(q - 1, p - 1)] -= c;
    }
    let o2 = &omega * &omega;
    let jm = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(j_diag));
    let comm = &jm * &o2 - &o2 * &jm;
    let scale = o2.amax() * jm.amax();
    Ok(comm.amax() <= 1e-12 * scale.max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_rejects_bad_ordering() {
        assert!(InertiaSpectrum::new([1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(InertiaSpectrum::new([4.0, 3.0, 3.0, 1.0]).is_err());
        assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, -3.0]).is_err());
        assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, -2.5]).is_err());
        assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, -1.5]).is_ok());
        assert!(InertiaSpectrum::new([4.0, 3.0, 2.0, 1.0]).is_ok());
    }

    #[test]
    fn case_two_construction() {
        let j = InertiaSpectrum::case_two(3.0, 2.5, 2.0, false).unwrap();
        assert!(j.is_case_two());
        assert!(j.is_generic());
        assert!(!InertiaSpectrum::new([4.0, 3.0, 2.0, 1.0]).unwrap().is_case_two());
    }

    #[test]
    fn matrix_round_trip() {
        let s = BodyState::from_coords([1.0, -2.0, 3.0, 0.5, 0.25, -4.0]);
        let m = s.to_matrix();
        assert_eq!(m, -m.transpose());
        assert_eq!(BodyState::from_matrix(&m), s);
    }

    #[test]
    fn orbit_regularity() {
        assert_eq!(OrbitParams::new(5.0, 3.0).unwrap().regularity(), Regularity::Regular);
        assert_eq!(OrbitParams::new(2.0, -2.0).unwrap().regularity(), Regularity::SingularSphere);
        assert_eq!(OrbitParams::new(0.0, 0.0).unwrap().regularity(), Regularity::Origin);
        assert!(OrbitParams::new(1.0, 2.0).is_err());
        assert!(OrbitParams::regular(2.0, 2.0).is_err());
    }

    #[test]
    fn bracket_antisymmetry() {
        for a in 1..=6 {
            for b in 1..=6 {
                let ab = so4_bracket(a, b).unwrap();
                let ba = so4_bracket(b, a).unwrap();
                let neg: Vec<_> = ba.iter().map(|&(c, e)| (-c, e)).collect();
                assert_eq!(ab, neg);
            }
        }
        assert!(so4_bracket(0, 1).is_err());
        assert!(son_bracket(1, 2, 3, 5, 4).is_err());
    }
}
