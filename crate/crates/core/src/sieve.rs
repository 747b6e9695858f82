//! The predictability sieve over initial squeezing.
//!
//! Among all pure initial shapes `(theta, aleph)`, which produces the least
//! entropy once decoherence has acted for a while? Writing `det sigma(t)`
//! through [`det_sigma_expanded`](crate::lindblad::det_sigma_expanded), the
//! initial shape enters only the `e^{-2 lambda t}` term, through the linear
//! functional
//!
//! ```text
//!   f(theta, aleph) = (hbar A / 2) * [aleph^2 u(theta) + aleph^-2 v(theta)],
//!   u = cos^2 T_pp + sin^2 T_qq + 2 sin cos T_pq,
//!   v = sin^2 T_pp + cos^2 T_qq - 2 sin cos T_pq,
//! ```
//!
//! with the kernels `T_pp, T_qq, T_pq` built from the stationary covariance
//! rotated to time `t`. Minimizing over `aleph` at fixed `theta` gives the
//! matched pairing `aleph^4 = v/u` and `f = hbar A sqrt(u v)`; minimizing
//! the product over `theta` aligns `2 theta` with the kernel anisotropy.
//! Two facts make the result a genuine selection rule:
//!
//! * `aleph*` does not depend on the evaluation time: the kernels rotate
//!   rigidly, so only the orientation `theta*` co-rotates (at rate `omega`)
//!   while the selected squeezing stays put;
//! * `f` is linear in the initial area `A`, so the same shape wins for any
//!   initial purity; pure states are then best overall.
//!
//! Combining the rotated-kernel minimum with the stationary covariance
//! collapses to a closed form in the bare parameters,
//!
//! ```text
//!   aleph*^4 = (1 - r) / (1 + r),
//!   r = X / T' * lambda / sqrt(lambda^2 + omega^2),
//!   X  = hypot(m omega D_qq - D_pp/(m omega), 2 D_pq),
//!   T' = m omega D_qq + D_pp/(m omega),
//! ```
//!
//! implemented in [`optimal_squeezing_closed_form`]. `r < 1` always (it is a
//! Cauchy-Schwarz ratio damped by the friction fraction), `r -> 0` as
//! `lambda/omega -> 0` (every shape equally good: coherent-state limit), and
//! the sieve is degenerate whenever the kernels are isotropic.
//!
//! [`optimal_shape_numeric`] finds the same optimum by direct grid search
//! plus bracket refinement over objective evaluations only; it shares no
//! algebra with the closed forms and exists to cross-check them.

use crate::error::{Error, Result};
use crate::gaussian::ShapeDecomposition;
use crate::lindblad::{stationary_covariance, LindbladParams};
use crate::mat::wrap_orientation;
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative anisotropy below which the kernels count as isotropic and the
/// sieve as degenerate (every orientation and `aleph = 1` tie).
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Largest spread of `aleph*` across evaluation times accepted by
/// [`sieve_time_independence_check`].
pub const ALEPH_SPREAD_TOL: f64 = 1e-10;

/// The three quadratic kernels weighting an initial shape's contribution to
/// `det sigma(t)`, together with the evaluation time and `hbar` (kept here
/// so objective values are absolute, not merely proportional).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SievePoint {
    t_pp: f64,
    t_qq: f64,
    t_pq: f64,
    t: f64,
    hbar: f64,
}

impl SievePoint {
    /// Build from raw kernel values. Requires `t_pp > 0`, `t_qq > 0`,
    /// `t_pp*t_qq - t_pq^2 > 0` (the kernels inherit positive-definiteness
    /// from the stationary covariance), `t >= 0` and `hbar > 0`.
    pub fn new(t_pp: f64, t_qq: f64, t_pq: f64, t: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("T_pp", t_pp), ("T_qq", t_qq)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "strictly positive and finite",
                });
            }
        }
        if !t_pq.is_finite() || t_pp * t_qq - t_pq * t_pq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "T_pq",
                value: t_pq,
                requirement: "finite with T_pp*T_qq - T_pq^2 > 0",
            });
        }
        if !(t >= 0.0) {
            return Err(Error::NegativeTime { t });
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "hbar",
                value: hbar,
                requirement: "strictly positive and finite",
            });
        }
        Ok(SievePoint {
            t_pp,
            t_qq,
            t_pq,
            t,
            hbar,
        })
    }

    pub fn t_pp(&self) -> f64 {
        self.t_pp
    }

    pub fn t_qq(&self) -> f64 {
        self.t_qq
    }

    pub fn t_pq(&self) -> f64 {
        self.t_pq
    }

    /// Evaluation time the kernels were rotated to.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `T_pp + T_qq`; independent of the evaluation time.
    pub fn trace(&self) -> f64 {
        self.t_pp + self.t_qq
    }

    /// `hypot(T_pp - T_qq, 2 T_pq)`; also independent of the evaluation
    /// time, and zero exactly when the sieve is degenerate.
    pub fn anisotropy(&self) -> f64 {
        (self.t_pp - self.t_qq).hypot(2.0 * self.t_pq)
    }

    /// Isotropic kernels within [`DEGENERACY_REL_TOL`]: every orientation
    /// ties and the optimum collapses to `aleph = 1`.
    pub fn is_degenerate(&self) -> bool {
        let scale = DEGENERACY_REL_TOL * self.trace();
        (self.t_pp - self.t_qq).abs() <= scale && (2.0 * self.t_pq).abs() <= scale
    }
}

/// How a [`SieveResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveMethod {
    /// Stationary-angle formula on the kernels.
    ClosedForm,
    /// Grid search plus bracket refinement over objective evaluations.
    Numeric,
}

/// The sieve's verdict: the entropy-minimizing initial shape.
///
/// Reported on the `aleph <= 1` branch (for position-dominated diffusion
/// this is the position-squeezed representative); the gauge-equivalent
/// `aleph >= 1` twin is available through [`canonical_aleph`] /
/// [`canonical_theta`].
///
/// [`canonical_aleph`]: Self::canonical_aleph
/// [`canonical_theta`]: Self::canonical_theta
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveResult {
    /// Optimal orientation, in `[0, pi)`. Co-rotates with the evaluation
    /// time at rate `omega`.
    pub theta_star: f64,
    /// Optimal squeezing on the `aleph <= 1` branch. Independent of the
    /// evaluation time.
    pub aleph_star: f64,
    /// Objective `f(theta*, aleph*)` for a pure initial state (`A = 1`).
    pub objective_value: f64,
    /// Which route produced the numbers.
    pub method: SieveMethod,
    /// For [`SieveMethod::Numeric`]: `|aleph*_numeric - aleph*_closed|`
    /// against the closed form on the same kernels. `None` otherwise.
    pub cross_residual: Option<f64>,
    /// Isotropic kernels: `theta*` is arbitrary and `aleph* = 1` exactly.
    pub degenerate: bool,
}

impl SieveResult {
    /// Gauge twin of [`aleph_star`](Self::aleph_star) with `aleph >= 1`.
    pub fn canonical_aleph(&self) -> f64 {
        1.0 / self.aleph_star
    }

    /// Orientation paired with [`canonical_aleph`](Self::canonical_aleph);
    /// `0` in the degenerate case where orientation is meaningless.
    pub fn canonical_theta(&self) -> f64 {
        if self.aleph_star == 1.0 {
            0.0
        } else {
            wrap_orientation(self.theta_star + FRAC_PI_2)
        }
    }

    /// The optimal shape as a [`ShapeDecomposition`] with unit area.
    pub fn shape(&self) -> ShapeDecomposition {
        ShapeDecomposition::new(1.0, self.theta_star, self.aleph_star)
            .expect("sieve results are valid shapes")
    }
}

/// Kernels of the initial-shape functional at evaluation time `t`: the
/// stationary covariance conjugated by the free rotation,
///
/// ```text
///   T_pp = yy cos^2 + xx sin^2 + 2 xy sin cos,
///   T_qq = yy sin^2 + xx cos^2 - 2 xy sin cos,
///   T_pq = (xx - yy) sin cos + xy (cos^2 - sin^2),
/// ```
///
/// with `(xx, yy, xy)` the dimensionless stationary moments and the angle
/// `omega t`. Their trace and anisotropy are time-independent.
pub fn sieve_kernels(t: f64, params: &LindbladParams) -> Result<SievePoint> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime { t });
    }
    let pc = params.constants();
    let s = stationary_covariance(params).scaled(pc);
    let (sin, cos) = (pc.omega() * t).sin_cos();
    let (ss, cc, sc) = (sin * sin, cos * cos, sin * cos);
    Ok(SievePoint {
        t_pp: s.yy * cc + s.xx * ss + 2.0 * s.xy * sc,
        t_qq: s.yy * ss + s.xx * cc - 2.0 * s.xy * sc,
        t_pq: (s.xx - s.yy) * sc + s.xy * (cc - ss),
        t,
        hbar: pc.hbar(),
    })
}

/// `f(theta, aleph)` for a unit-area shape, without the area factor.
fn core_objective(theta: f64, aleph: f64, point: &SievePoint) -> f64 {
    let (u, v) = rotated_kernels(theta, point);
    let big = aleph * aleph;
    0.5 * point.hbar * (big * u + v / big)
}

/// The pair `(u, v)` of rotated kernel combinations at orientation `theta`.
fn rotated_kernels(theta: f64, point: &SievePoint) -> (f64, f64) {
    let (sin, cos) = theta.sin_cos();
    let (ss, cc, sc) = (sin * sin, cos * cos, sin * cos);
    let u = cc * point.t_pp + ss * point.t_qq + 2.0 * sc * point.t_pq;
    let v = ss * point.t_pp + cc * point.t_qq - 2.0 * sc * point.t_pq;
    (u, v)
}

/// The entropy-production functional a candidate initial shape scores:
/// `(hbar A / 2) (aleph^2 u(theta) + aleph^-2 v(theta))`. Linear in the
/// area, gauge invariant, and strictly positive.
pub fn sieve_objective(shape: &ShapeDecomposition, point: &SievePoint) -> f64 {
    shape.area() * core_objective(shape.theta(), shape.aleph(), point)
}

fn degenerate_result(point: &SievePoint, method: SieveMethod) -> SieveResult {
    SieveResult {
        theta_star: 0.0,
        aleph_star: 1.0,
        objective_value: core_objective(0.0, 1.0, point),
        method,
        cross_residual: None,
        degenerate: true,
    }
}

/// Minimize the sieve functional exactly on the given kernels.
///
/// The stationary orientation solves `tan(2 theta) = 2 T_pq / (T_pp -
/// T_qq)`; taking the `atan2` branch aligned with the anisotropy makes
/// `u(theta)` the *larger* rotated kernel, so the matched squeezing
/// `aleph^4 = v/u` lands on the `aleph <= 1` branch directly. Degenerate
/// kernels short-circuit to `aleph* = 1` with the flag set.
pub fn optimal_shape_from_kernels(point: &SievePoint) -> SieveResult {
    if point.is_degenerate() {
        return degenerate_result(point, SieveMethod::ClosedForm);
    }
    let theta = wrap_orientation(0.5 * (2.0 * point.t_pq).atan2(point.t_pp - point.t_qq));
    let (u, v) = rotated_kernels(theta, point);
    // v <= u analytically; rounding can overshoot by an ulp.
    let aleph = (v / u).sqrt().sqrt().min(1.0);
    SieveResult {
        theta_star: theta,
        aleph_star: aleph,
        objective_value: core_objective(theta, aleph, point),
        method: SieveMethod::ClosedForm,
        cross_residual: None,
        degenerate: false,
    }
}

/// The optimal squeezing straight from the bare parameters:
/// `aleph*^4 = (1 - r)/(1 + r)` with
/// `r = (X/T') * lambda/sqrt(lambda^2 + omega^2)`,
/// `X = hypot(m omega D_qq - D_pp/(m omega), 2 D_pq)` and
/// `T' = m omega D_qq + D_pp/(m omega)`.
///
/// Equals the kernel route [`optimal_shape_from_kernels`] applied to
/// [`sieve_kernels`] at any evaluation time, but never touches the
/// stationary covariance; isotropic diffusion (`X = 0`) gives exactly 1,
/// and `r -> 0` (hence `aleph* -> 1`) in the weak-friction limit.
pub fn optimal_squeezing_closed_form(params: &LindbladParams) -> f64 {
    let pc = params.constants();
    let mw = pc.m() * pc.omega();
    let anisotropy = (mw * params.d_qq() - params.d_pp() / mw).hypot(2.0 * params.d_pq());
    let trace = mw * params.d_qq() + params.d_pp() / mw;
    let damping_fraction = params.lambda() / params.lambda().hypot(pc.omega());
    let r = (anisotropy / trace) * damping_fraction;
    ((1.0 - r) / (1.0 + r)).sqrt().sqrt()
}

/// Search grid for [`optimal_shape_numeric`]: `theta` sampled uniformly on
/// `[0, pi)`, `aleph` logarithmically on `[aleph_min, aleph_max]`, followed
/// by `refine_rounds` of alternating bracket refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta_samples: usize,
    pub aleph_samples: usize,
    pub aleph_min: f64,
    pub aleph_max: f64,
    pub refine_rounds: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            theta_samples: 96,
            aleph_samples: 96,
            aleph_min: 0.05,
            aleph_max: 20.0,
            refine_rounds: 48,
        }
    }
}

/// Sample `f` at 17 points across `[center - half, center + half]`; return
/// the best sample and whether it sat on the bracket edge.
fn line_min(f: impl Fn(f64) -> f64, center: f64, half: f64) -> (f64, bool) {
    const SAMPLES: usize = 17;
    let mut best_k = 0usize;
    let mut best = f64::INFINITY;
    for k in 0..SAMPLES {
        let x = center + half * (2.0 * k as f64 / (SAMPLES - 1) as f64 - 1.0);
        let value = f(x);
        if value < best {
            best = value;
            best_k = k;
        }
    }
    let x = center + half * (2.0 * best_k as f64 / (SAMPLES - 1) as f64 - 1.0);
    (x, best_k == 0 || best_k == SAMPLES - 1)
}

/// Minimize the sieve functional by direct search: a dense global grid over
/// one gauge cell, then alternating one-dimensional bracket refinement in
/// `theta` and `ln aleph`. Uses nothing but objective evaluations, so it is
/// an independent check on the closed forms.
///
/// A bracket only shrinks when its minimum was interior, letting the
/// refinement walk out of a poorly seeded cell instead of collapsing onto a
/// grid artifact. Deterministic for fixed inputs.
pub fn optimal_shape_numeric(point: &SievePoint, grid: &GridSpec) -> SieveResult {
    assert!(
        grid.theta_samples >= 2 && grid.aleph_samples >= 2,
        "grid needs at least 2 samples per axis"
    );
    assert!(
        grid.aleph_min > 0.0 && grid.aleph_max > grid.aleph_min && grid.aleph_max.is_finite(),
        "invalid aleph range"
    );
    if point.is_degenerate() {
        return degenerate_result(point, SieveMethod::Numeric);
    }

    let objective = |theta: f64, log_aleph: f64| core_objective(theta, log_aleph.exp(), point);

    let l_min = grid.aleph_min.ln();
    let l_max = grid.aleph_max.ln();
    let d_theta = PI / grid.theta_samples as f64;
    let d_l = (l_max - l_min) / (grid.aleph_samples - 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid.theta_samples {
        let theta = i as f64 * d_theta;
        for j in 0..grid.aleph_samples {
            let log_aleph = l_min + j as f64 * d_l;
            let value = objective(theta, log_aleph);
            if value < best.0 {
                best = (value, theta, log_aleph);
            }
        }
    }
    let (_, mut theta, mut log_aleph) = best;

    let mut half_theta = d_theta;
    let mut half_l = d_l;
    for _ in 0..grid.refine_rounds {
        if half_theta < 1e-15 && half_l < 1e-15 {
            break;
        }
        let (new_theta, theta_edge) = line_min(|x| objective(x, log_aleph), theta, half_theta);
        theta = new_theta;
        if !theta_edge {
            half_theta *= 0.25;
        }
        let (new_l, l_edge) = line_min(|x| objective(theta, x), log_aleph, half_l);
        log_aleph = new_l;
        if !l_edge {
            half_l *= 0.25;
        }
    }

    let mut aleph = log_aleph.exp();
    // Report on the aleph <= 1 branch like the closed forms.
    if aleph > 1.0 {
        aleph = 1.0 / aleph;
        theta += FRAC_PI_2;
    }
    let theta = wrap_orientation(theta);
    let reference = optimal_shape_from_kernels(point);
    SieveResult {
        theta_star: theta,
        aleph_star: aleph,
        objective_value: core_objective(theta, aleph, point),
        method: SieveMethod::Numeric,
        cross_residual: Some((aleph - reference.aleph_star).abs()),
        degenerate: false,
    }
}

/// One evaluation time's verdict inside a [`TimeIndependenceReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeIndependencePoint {
    pub t: f64,
    pub theta_star: f64,
    pub aleph_star: f64,
    pub degenerate: bool,
}

/// Result of checking that the selected squeezing does not depend on when
/// the sieve is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeIndependenceReport {
    pub points: Vec<TimeIndependencePoint>,
    /// `max aleph* - min aleph*` across the times.
    pub aleph_spread: f64,
    /// The acceptance threshold used, [`ALEPH_SPREAD_TOL`].
    pub tolerance: f64,
    pub passed: bool,
}

/// Evaluate the sieve at each time in `times` (all `>= 0`, non-empty) and
/// report the spread of `aleph*`. The orientation `theta*` co-rotates with
/// the kernels, so only the squeezing is required to be constant.
pub fn sieve_time_independence_check(
    params: &LindbladParams,
    times: &[f64],
) -> Result<TimeIndependenceReport> {
    assert!(!times.is_empty(), "need at least one evaluation time");
    let mut points = Vec::with_capacity(times.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in times {
        let result = optimal_shape_from_kernels(&sieve_kernels(t, params)?);
        lo = lo.min(result.aleph_star);
        hi = hi.max(result.aleph_star);
        points.push(TimeIndependencePoint {
            t,
            theta_star: result.theta_star,
            aleph_star: result.aleph_star,
            degenerate: result.degenerate,
        });
    }
    let aleph_spread = hi - lo;
    Ok(TimeIndependenceReport {
        points,
        aleph_spread,
        tolerance: ALEPH_SPREAD_TOL,
        passed: aleph_spread <= ALEPH_SPREAD_TOL,
    })
}
