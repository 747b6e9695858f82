//! Gaussian-sector dynamics of a damped quantum harmonic oscillator.
//!
//! A quantum Brownian particle in a harmonic well, weakly coupled to a
//! thermal environment, relaxes under a quadratic Lindblad generator. That
//! generator maps quasi-free (Gaussian) states to quasi-free states, so the
//! entire evolution is carried by the 2x2 covariance matrix of position and
//! momentum. This crate implements that closed sector exactly:
//!
//! * [`gaussian`] — covariance matrices, the area/orientation/squeezing
//!   decomposition of a Gaussian state, and the statistical entropy as a
//!   function of the occupied phase-space area;
//! * [`lindblad`] — environment parameters (friction plus the diffusion
//!   matrix), the map from microscopic generator coefficients to those
//!   parameters, the exact propagator for the covariance matrix, and the
//!   stationary state it relaxes to;
//! * [`sieve`] — the predictability sieve: ranking initial states by the
//!   entropy they produce at a fixed later time, and locating the squeezing
//!   that minimizes it, both in closed form and with an independent
//!   derivative-free minimizer.
//!
//! The central physical result exposed here is that the sieve is degenerate
//! in the undamped limit (any squeezing does equally well as friction
//! vanishes) and otherwise selects a unique optimal squeezing `aleph*`
//! determined by the friction-to-frequency ratio and the anisotropy of the
//! diffusion matrix; for position-dominated diffusion the selected states
//! are position-squeezed, approaching coherent states as the coupling
//! weakens.
//!
//! Everything is deterministic: no global state, no randomness, and results
//! depend only on inputs, so repeated calls reproduce bit-identical output.

pub mod error;
pub mod gaussian;
pub mod lindblad;
mod mat;
pub mod sieve;

pub use error::{Error, Result};
pub use gaussian::{
    compose, decompose, entropy, CovarianceMatrix, PhysicalConstants, ShapeDecomposition,
};
pub use lindblad::{
    coefficients_to_parameters, det_sigma_expanded, evolve, propagator, stationary_covariance,
    GeneratorCoefficients, LindbladParams, Propagator,
};
pub use sieve::{
    optimal_shape_from_kernels, optimal_shape_numeric, optimal_squeezing_closed_form,
    sieve_kernels, sieve_objective, sieve_time_independence_check, GridSpec, SieveMethod,
    SievePoint, SieveResult, TimeIndependencePoint, TimeIndependenceReport,
};
