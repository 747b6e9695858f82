//! The quadratic Lindblad generator of quantum Brownian motion and its exact
//! action on covariance matrices.
//!
//! The environment enters through four numbers: the friction rate `lambda`
//! and the diffusion matrix `(D_qq, D_pp, D_pq)`. Complete positivity of the
//! generator requires
//!
//! ```text
//!   D_pp * D_qq - D_pq^2  >=  (lambda * hbar / 2)^2,
//! ```
//!
//! which is exactly the condition for the stationary state to satisfy the
//! Heisenberg inequality. When the generator is given microscopically, as
//! Lindblad operators `L_i = a_i q + b_i p`, the parameters follow from the
//! coefficients by [`coefficients_to_parameters`]; the positivity bound is
//! then automatic (it is the Cauchy-Schwarz inequality for the vectors `a`
//! and `b`).
//!
//! In the dimensionless frame the covariance matrix obeys a linear equation
//! whose solution is a damped rotation around the stationary point:
//!
//! ```text
//!   sigma(t) = R(t) (sigma(0) - sigma_inf) R(t)^T + sigma_inf,
//!   R(t) = exp(-lambda t) * [[cos(omega t), sin(omega t)],
//!                            [-sin(omega t), cos(omega t)]].
//! ```
//!
//! Everything downstream (entropy production, the sieve) is built on this
//! closed form; no ODE integration happens anywhere in the crate.

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, PhysicalConstants};
use num_complex::Complex64;

/// Relative slack accepted on the diffusion positivity bound, so parameter
/// sets computed from coefficients (or otherwise rounded) right at the
/// Cauchy-Schwarz edge are not rejected.
pub const POSITIVITY_REL_TOL: f64 = 1e-12;

/// Friction plus diffusion, together with the oscillator constants they act
/// on. The validated constructor enforces the complete-positivity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladParams {
    constants: PhysicalConstants,
    lambda: f64,
    d_qq: f64,
    d_pp: f64,
    d_pq: f64,
}

impl LindbladParams {
    /// Validate and build. Requires `lambda > 0`, `D_qq >= 0`, `D_pp >= 0`,
    /// finite `D_pq`, and the positivity bound
    /// `D_pp*D_qq - D_pq^2 >= (lambda*hbar/2)^2` up to
    /// [`POSITIVITY_REL_TOL`].
    pub fn new(
        constants: PhysicalConstants,
        lambda: f64,
        d_qq: f64,
        d_pp: f64,
        d_pq: f64,
    ) -> Result<Self> {
        let params = Self::new_unchecked(constants, lambda, d_qq, d_pp, d_pq)?;
        let lhs = d_pp * d_qq - d_pq * d_pq;
        let rhs = (lambda * constants.hbar() / 2.0).powi(2);
        if lhs < rhs * (1.0 - POSITIVITY_REL_TOL) {
            return Err(Error::DiffusionNotPositive { lhs, rhs });
        }
        Ok(params)
    }

    /// Build without the positivity check, for exploring deliberately
    /// unphysical generators. Range checks (`lambda > 0`, diffusion entries
    /// finite and non-negative on the diagonal) still apply since the
    /// formulas divide by `lambda`.
    ///
    /// Evolutions driven by such parameters may leave the physical state
    /// space: the Heisenberg inequality on evolved states is no longer
    /// guaranteed, and [`decompose`](crate::gaussian::decompose) will report
    /// the violation when it happens. Check [`positivity_margin`] to see how
    /// far outside the physical region the parameters sit.
    ///
    /// [`positivity_margin`]: Self::positivity_margin
    pub fn new_unchecked(
        constants: PhysicalConstants,
        lambda: f64,
        d_qq: f64,
        d_pp: f64,
        d_pq: f64,
    ) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonDissipative { lambda });
        }
        for (name, value) in [("D_qq", d_qq), ("D_pp", d_pp)] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "non-negative and finite",
                });
            }
        }
        if !d_pq.is_finite() {
            return Err(Error::InvalidParameter {
                name: "D_pq",
                value: d_pq,
                requirement: "finite",
            });
        }
        Ok(LindbladParams {
            constants,
            lambda,
            d_qq,
            d_pp,
            d_pq,
        })
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn d_qq(&self) -> f64 {
        self.d_qq
    }

    pub fn d_pp(&self) -> f64 {
        self.d_pp
    }

    pub fn d_pq(&self) -> f64 {
        self.d_pq
    }

    /// `D_pp*D_qq - D_pq^2 - (lambda*hbar/2)^2`; non-negative (up to
    /// rounding) for a completely positive generator.
    pub fn positivity_margin(&self) -> f64 {
        self.d_pp * self.d_qq - self.d_pq * self.d_pq
            - (self.lambda * self.constants.hbar() / 2.0).powi(2)
    }

    /// Whether the positivity bound holds within [`POSITIVITY_REL_TOL`].
    pub fn satisfies_positivity(&self) -> bool {
        let rhs = (self.lambda * self.constants.hbar() / 2.0).powi(2);
        self.positivity_margin() >= -POSITIVITY_REL_TOL * rhs
    }
}

/// Coefficients of (up to) two Lindblad operators `L_i = a_i q + b_i p`.
///
/// Two operators are the generic case for a quadratic generator; set the
/// second pair to zero for a single-operator model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeneratorCoefficients {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

/// Reduce microscopic Lindblad coefficients to friction and diffusion:
///
/// ```text
///   D_qq = hbar/2 * sum |a_i|^2,     D_pp = hbar/2 * sum |b_i|^2,
///   D_pq = -hbar/2 * Re sum a_i* b_i,   lambda = -Im sum a_i* b_i.
/// ```
///
/// Fails with [`Error::NonDissipative`] when the coefficients give
/// `lambda <= 0` (the oscillator would not damp). The returned parameters
/// always satisfy the positivity bound: by Cauchy-Schwarz,
/// `|sum a_i* b_i|^2 <= sum|a_i|^2 * sum|b_i|^2`, which is that bound.
pub fn coefficients_to_parameters(
    coefficients: &GeneratorCoefficients,
    constants: &PhysicalConstants,
) -> Result<LindbladParams> {
    let half_hbar = constants.hbar() / 2.0;
    let d_qq = half_hbar * (coefficients.a1.norm_sqr() + coefficients.a2.norm_sqr());
    let d_pp = half_hbar * (coefficients.b1.norm_sqr() + coefficients.b2.norm_sqr());
    let cross = coefficients.a1.conj() * coefficients.b1 + coefficients.a2.conj() * coefficients.b2;
    // `+ 0.0` turns a negative zero from the sign flip into plain zero.
    let d_pq = -half_hbar * cross.re + 0.0;
    let lambda = -cross.im;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonDissipative { lambda });
    }
    // Positivity holds analytically; `new` only re-checks it within
    // tolerance so borderline rounding cannot reject a valid generator.
    LindbladParams::new(*constants, lambda, d_qq, d_pp, d_pq)
}

/// The linear map carrying `sigma(0) - sigma_inf` forward: a rotation at the
/// oscillator frequency damped at rate `lambda` (so `det R = e^{-2 lambda t}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub r11: f64,
    pub r12: f64,
    pub r21: f64,
    pub r22: f64,
}

impl Propagator {
    pub fn det(&self) -> f64 {
        self.r11 * self.r22 - self.r12 * self.r21
    }
}

/// Propagator at time `t >= 0` (in the same units as `1/omega`).
pub fn propagator(t: f64, params: &LindbladParams) -> Result<Propagator> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime { t });
    }
    let decay = (-params.lambda() * t).exp();
    let (sin, cos) = (params.constants().omega() * t).sin_cos();
    Ok(Propagator {
        r11: decay * cos,
        r12: decay * sin,
        r21: -decay * sin,
        r22: decay * cos,
    })
}

/// The unique stationary covariance of the damped dynamics.
///
/// Every initial state relaxes to it; for a completely positive generator it
/// satisfies the Heisenberg inequality (the two bounds are the same
/// inequality in different variables).
pub fn stationary_covariance(params: &LindbladParams) -> CovarianceMatrix {
    let pc = params.constants();
    let (m, omega, lambda) = (pc.m(), pc.omega(), params.lambda());
    let (d_qq, d_pp, d_pq) = (params.d_qq(), params.d_pp(), params.d_pq());
    let m2 = m * m;
    let w2 = omega * omega;
    let l2 = lambda * lambda;
    let den = 2.0 * lambda * (w2 + l2);
    let sigma_qq = ((w2 + 2.0 * l2) * m2 * d_qq + d_pp + 2.0 * m * lambda * d_pq) / (m2 * den);
    let sigma_pp = ((w2 + 2.0 * l2) * d_pp + m2 * w2 * w2 * d_qq - 2.0 * m * lambda * w2 * d_pq) / den;
    let sigma_pq = (d_pp - m2 * w2 * d_qq + 2.0 * m * lambda * d_pq) / (2.0 * m * (w2 + l2));
    CovarianceMatrix::from_parts(sigma_qq, sigma_pp, sigma_pq)
}

/// Evolve a covariance matrix for a time `t >= 0`:
/// `sigma(t) = R(t) (sigma(0) - sigma_inf) R(t)^T + sigma_inf` in the
/// dimensionless frame.
///
/// The map is a semigroup in `t` and contracts everything to the stationary
/// state at rate `2*lambda` (in Frobenius norm, exactly
/// `|sigma(t) - sigma_inf| = e^{-2 lambda t} |sigma(0) - sigma_inf|`, since
/// the rotation part is orthogonal).
pub fn evolve(
    sigma0: &CovarianceMatrix,
    t: f64,
    params: &LindbladParams,
) -> Result<CovarianceMatrix> {
    let r = propagator(t, params)?;
    let pc = params.constants();
    let stationary = stationary_covariance(params).scaled(pc);
    let delta = sigma0.scaled(pc).sub(stationary);
    let moved = delta.congruence(r.r11, r.r12, r.r21, r.r22).add(stationary);
    Ok(CovarianceMatrix::from_scaled(moved, pc))
}

/// `det sigma(t)` through its exact three-term split
///
/// ```text
///   det sigma(t) = e^{-4 lambda t} det(sigma_0 - sigma_inf)
///                + e^{-2 lambda t} [dx*T_pp + dy*T_qq - 2 dz*T_pq]
///                + det sigma_inf,
/// ```
///
/// where `(dx, dy, dz)` are the dimensionless entries of
/// `sigma_0 - sigma_inf` and the `T` kernels are the rotated stationary
/// moments from [`sieve_kernels`](crate::sieve::sieve_kernels). Agrees with
/// `evolve(..)` followed by `det()` to rounding; the middle term is the one
/// the sieve minimizes, because for times `lambda t >> 1` it dominates the
/// approach to the stationary determinant.
pub fn det_sigma_expanded(sigma0: &CovarianceMatrix, t: f64, params: &LindbladParams) -> Result<f64> {
    let kernels = crate::sieve::sieve_kernels(t, params)?;
    let pc = params.constants();
    let stationary = stationary_covariance(params);
    let delta = sigma0.scaled(pc).sub(stationary.scaled(pc));
    let e2 = (-2.0 * params.lambda() * t).exp();
    let e4 = (-4.0 * params.lambda() * t).exp();
    let cross = delta.xx * kernels.t_pp() + delta.yy * kernels.t_qq() - 2.0 * delta.xy * kernels.t_pq();
    Ok(e4 * delta.det() + e2 * cross + stationary.det())
}
