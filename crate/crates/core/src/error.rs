//! Error type shared across the crate.
//!
//! Validation happens at construction boundaries (`CovarianceMatrix::new`,
//! `LindbladParams::new`, `ShapeDecomposition::new`); once a value exists it
//! is safe to feed to the numerical routines, which is why most of those
//! routines are infallible apart from time-argument checks.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating states and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// A variance that must be strictly positive is not.
    #[error("{name} = {value} must be strictly positive and finite")]
    NotPositive { name: &'static str, value: f64 },

    /// The covariance matrix is sharper than quantum mechanics allows:
    /// det(sigma) >= hbar^2/4 fails beyond tolerance.
    #[error("Heisenberg inequality violated: det(sigma) = {det} < hbar^2/4 = {bound}")]
    HeisenbergViolation { det: f64, bound: f64 },

    /// Shape parameters outside their domain (area >= 1, aleph > 0).
    #[error("invalid shape: area = {area} (requires >= 1) and aleph = {aleph} (requires > 0)")]
    InvalidShape { area: f64, aleph: f64 },

    /// Entropy requested for a phase-space area below the pure-state value.
    #[error("area = {area} is below 1; entropy is defined for area >= 1")]
    InvalidArea { area: f64 },

    /// Generator coefficients that do not damp the oscillator.
    #[error("non-dissipative generator: friction lambda = {lambda} must be > 0")]
    NonDissipative { lambda: f64 },

    /// The diffusion matrix is too weak for the given friction:
    /// D_pp D_qq - D_pq^2 >= (lambda hbar / 2)^2 fails.
    #[error(
        "diffusion matrix not positive: D_pp*D_qq - D_pq^2 = {lhs} < (lambda*hbar/2)^2 = {rhs}"
    )]
    DiffusionNotPositive { lhs: f64, rhs: f64 },

    /// Evolution or kernel evaluation requested at a negative (or NaN) time.
    #[error("time t = {t} must be >= 0")]
    NegativeTime { t: f64 },

    /// A constant or rate outside its admissible range.
    #[error("{name} = {value} is outside the admissible range ({requirement})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
}
