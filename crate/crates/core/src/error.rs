use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Blaschke parameter: |lambda| = {modulus} is not < 1")]
    InvalidLambda { modulus: f64 },

    #[error("weight exponent a = {a} must be positive")]
    InvalidWeightExponent { a: f64 },

    #[error("anisotropy ratio phi = {phi} must be >= 1")]
    InvalidPhi { phi: f64 },

    #[error("map order K = {k} must be >= 1")]
    InvalidMapOrder { k: u32 },

    #[error("block D_{k} is empty")]
    EmptyBlock { k: i64 },

    #[error("window [{k_min}, {k_max}] contains no basis vectors")]
    EmptyWindow { k_min: i64, k_max: i64 },

    #[error("matrix dimension {dim} exceeds the eigensolver cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("QR iteration failed to converge on a {dim}x{dim} submatrix")]
    NonConvergence { dim: usize },

    #[error("no closed-form spectrum for this map specification")]
    UnsupportedSpec,

    #[error("fit window has {found} usable samples, need at least {needed}")]
    FitWindowTooSmall { needed: usize, found: usize },

    #[error("lambda = 0 makes the diagnostic vacuous")]
    ZeroLambda,

    #[error("unboundedness regime requires -log|lambda| < a(phi - 1)")]
    RegimeNotSatisfied,
}

pub type Result<T> = std::result::Result<T, Error>;
