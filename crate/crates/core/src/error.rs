use crate::lie::Regularity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid inertia spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("orbit parameters (c1 = {c1}, c2 = {c2}) violate c1 >= |c2|")]
    OutsideChamber { c1: f64, c2: f64 },

    #[error(
        "orbit (c1 = {c1}, c2 = {c2}) is {regularity:?}: only regular orbits c1 > |c2| carry the twelve \
         isolated equilibria; c1 = |c2| > 0 is a singular sphere and c1 = c2 = 0 the origin"
    )]
    NotRegular { c1: f64, c2: f64, regularity: Regularity },

    #[error("state is not an equilibrium (scaled residual {0:e})")]
    NotEquilibrium(f64),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invariant drift {drift:e} exceeded bound {bound:e} at step {step}")]
    DriftExceeded { drift: f64, bound: f64, step: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    ///
    /// `1` for invalid input, `3` for numerical failure. Code `2` is reserved
    /// for verification failures, which are reports rather than errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DriftExceeded { .. } | Error::Numerical(_) => 3,
            _ => 1,
        }
    }
}
