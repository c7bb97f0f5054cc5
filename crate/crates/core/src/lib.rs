//! Equilibria and stability of the free rigid body on so(4).
//!
//! The phase space is the Lie–Poisson manifold so(4)* ≅ so(4) with coordinates
//! `(x1, x2, x3, y1, y2, y3)`. Symplectic leaves are products of two spheres
//! in the `u = x + y`, `v = x - y` splitting, fixed by the Casimirs `C1`, `C2`.
//!
//! Modules are layered bottom-up:
//!
//! - [`lie`]: algebra, coordinates, Casimirs, Hamiltonian and the extra integral
//! - [`dynamics`]: vector fields, Jacobians, residuals and integrators
//! - [`equilibria`]: Cartan (`t1`, `t2`, `t3`) and `s±` equilibrium families
//! - [`spectral`]: restricted linearizations and Williamson classification
//! - [`stability`]: per-family verdicts, closed forms and energy–Casimir tests
//! - [`scan`]: Weyl-chamber grid scans, configuration and reports

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod formulas;
pub mod lie;
pub mod scan;
pub mod spectral;
pub mod stability;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use lie::{BodyState, InertiaSpectrum, OrbitParams, Regularity, UvState};
