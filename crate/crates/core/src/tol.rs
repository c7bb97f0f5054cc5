//! Numerical tolerances shared across modules.
//!
//! Every comparison against zero in the library goes through one of these,
//! so that a single place documents how roundoff is treated.

/// Scaled equilibrium residual below which a state counts as an equilibrium.
pub const RESIDUAL: f64 = 1e-9;

/// Relative agreement between independently computed eigenvalues.
pub const EIG_REL: f64 = 1e-7;

/// Relative tolerance for `l1 + l4 = l2 + l3`.
pub const CASE_TWO_REL: f64 = 1e-12;

/// Relative tolerance for `c1 = |c2|` (singular orbit) and for `c1 = 0`.
pub const REGULARITY_REL: f64 = 1e-12;

/// Relative half-width of the band in which `b^2/a^2` counts as a frontier.
pub const FRONTIER_REL: f64 = 1e-8;

/// Relative tolerance for the `K0`/`K1` rank test.
pub const K0_REL: f64 = 1e-9;

/// Relative gap below which two eigenvalues are treated as equal.
pub const GAP_REL: f64 = 1e-6;

/// Multiple of `eps * scale^4` under which a quartic discriminant or constant
/// term is indistinguishable from zero.
pub const QUARTIC_NOISE: f64 = 64.0;

/// Relative step of the central-difference Jacobian.
pub const FD_STEP: f64 = 1e-6;
