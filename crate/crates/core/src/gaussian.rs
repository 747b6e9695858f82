//! Quasi-free (Gaussian) states of a single oscillator mode.
//!
//! A quasi-free state is fixed, up to irrelevant first moments, by its
//! centered second moments `sigma_qq`, `sigma_pp` and the symmetrized
//! cross-correlation `sigma_pq`. All internal computation happens on the
//! dimensionless matrix
//!
//! ```text
//!   [ m*omega*sigma_qq    sigma_pq            ]
//!   [ sigma_pq            sigma_pp/(m*omega)  ]
//! ```
//!
//! whose determinant equals `sigma_qq*sigma_pp - sigma_pq^2` (the scaling is
//! determinant-preserving) and is bounded below by `hbar^2/4` -- the
//! Heisenberg inequality for mixed states.
//!
//! That matrix factors into three intuitive pieces,
//!
//! ```text
//!   sigma = (hbar A / 2) * O(theta)^T diag(aleph^2, 1/aleph^2) O(theta),
//! ```
//!
//! an occupied phase-space area `A >= 1` (A = 1 is a pure state), a rotation
//! by `theta`, and a squeezing factor `aleph`. The decomposition carries a
//! gauge freedom: `theta` only matters mod pi, and swapping
//! `aleph -> 1/aleph` while advancing `theta` by pi/2 describes the same
//! ellipse. [`ShapeDecomposition::canonicalize`] picks the representative
//! with `aleph >= 1` and `theta` in `[0, pi)`, with `theta = 0` for the
//! rotationally degenerate case `aleph = 1`.
//!
//! The statistical (von Neumann) entropy of a quasi-free state depends on
//! the covariance only through the area, making `A` (equivalently
//! `det sigma`) the natural purity ranking used by the sieve.

use crate::error::{Error, Result};
use crate::mat::{wrap_orientation, Sym2};
use std::f64::consts::FRAC_PI_2;

/// Relative slack on the Heisenberg bound `det(sigma) >= hbar^2/4`, so that
/// states produced by long chains of rounded arithmetic are not rejected.
pub const HEISENBERG_REL_TOL: f64 = 1e-9;

/// Absolute slack for the same bound, relevant only when `hbar^2/4`
/// underflows toward zero in exotic unit systems.
pub const HEISENBERG_ABS_TOL: f64 = 1e-15;

/// How far below 1 an area may fall (rounding only) before being rejected.
pub const AREA_TOL: f64 = 1e-12;

/// Mass, angular frequency and Planck's constant defining the oscillator
/// and the unit system. Defaults to natural units `m = omega = hbar = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    m: f64,
    omega: f64,
    hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            m: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

impl PhysicalConstants {
    /// All three constants must be strictly positive and finite.
    pub fn new(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("m", m), ("omega", omega), ("hbar", hbar)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "strictly positive and finite",
                });
            }
        }
        Ok(PhysicalConstants { m, omega, hbar })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The scale `m*omega` converting position variance to the dimensionless
    /// frame.
    pub(crate) fn mass_omega(&self) -> f64 {
        self.m * self.omega
    }
}

/// Centered second moments of a quasi-free state.
///
/// Constructed through [`CovarianceMatrix::new`], which enforces positive
/// variances and the Heisenberg inequality; internal routines (evolution,
/// stationary state) build values directly since the dynamics preserves
/// those properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    sigma_qq: f64,
    sigma_pp: f64,
    sigma_pq: f64,
}

impl CovarianceMatrix {
    /// Validate and build a covariance matrix.
    ///
    /// Requires `sigma_qq > 0`, `sigma_pp > 0`, finite `sigma_pq`, and
    /// `det(sigma) >= hbar^2/4` up to [`HEISENBERG_REL_TOL`] /
    /// [`HEISENBERG_ABS_TOL`].
    pub fn new(
        sigma_qq: f64,
        sigma_pp: f64,
        sigma_pq: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if !(sigma_qq > 0.0) || !sigma_qq.is_finite() {
            return Err(Error::NotPositive {
                name: "sigma_qq",
                value: sigma_qq,
            });
        }
        if !(sigma_pp > 0.0) || !sigma_pp.is_finite() {
            return Err(Error::NotPositive {
                name: "sigma_pp",
                value: sigma_pp,
            });
        }
        if !sigma_pq.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma_pq",
                value: sigma_pq,
                requirement: "finite",
            });
        }
        let sigma = CovarianceMatrix {
            sigma_qq,
            sigma_pp,
            sigma_pq,
        };
        let det = sigma.det();
        let bound = constants.hbar * constants.hbar / 4.0;
        let slack = (HEISENBERG_REL_TOL * bound).max(HEISENBERG_ABS_TOL);
        if det < bound - slack {
            return Err(Error::HeisenbergViolation { det, bound });
        }
        Ok(sigma)
    }

    /// Build without validation; used where the value is known to come from
    /// a physical map applied to an already validated state.
    pub(crate) fn from_parts(sigma_qq: f64, sigma_pp: f64, sigma_pq: f64) -> Self {
        CovarianceMatrix {
            sigma_qq,
            sigma_pp,
            sigma_pq,
        }
    }

    pub fn sigma_qq(&self) -> f64 {
        self.sigma_qq
    }

    pub fn sigma_pp(&self) -> f64 {
        self.sigma_pp
    }

    pub fn sigma_pq(&self) -> f64 {
        self.sigma_pq
    }

    /// `det(sigma) = sigma_qq*sigma_pp - sigma_pq^2`; invariant under the
    /// dimensionless rescaling.
    pub fn det(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_pq * self.sigma_pq
    }

    /// Occupied phase-space area `A = 2*sqrt(det sigma)/hbar >= 1`.
    pub fn area(&self, constants: &PhysicalConstants) -> f64 {
        2.0 * self.det().sqrt() / constants.hbar
    }

    /// The dimensionless matrix this state reduces to.
    pub(crate) fn scaled(&self, constants: &PhysicalConstants) -> Sym2 {
        let mw = constants.mass_omega();
        Sym2 {
            xx: mw * self.sigma_qq,
            xy: self.sigma_pq,
            yy: self.sigma_pp / mw,
        }
    }

    /// Inverse of [`scaled`](Self::scaled); no validation.
    pub(crate) fn from_scaled(s: Sym2, constants: &PhysicalConstants) -> Self {
        let mw = constants.mass_omega();
        CovarianceMatrix {
            sigma_qq: s.xx / mw,
            sigma_pp: s.yy * mw,
            sigma_pq: s.xy,
        }
    }
}

/// A Gaussian state's geometry: area `A`, orientation `theta`, squeezing
/// `aleph` of the phase-space ellipse.
///
/// `theta` is stored as given (any finite angle); use
/// [`canonicalize`](Self::canonicalize) for the unique representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeDecomposition {
    area: f64,
    theta: f64,
    aleph: f64,
}

impl ShapeDecomposition {
    /// Requires `area >= 1` (up to [`AREA_TOL`]), finite `theta`, and
    /// `aleph > 0` finite.
    pub fn new(area: f64, theta: f64, aleph: f64) -> Result<Self> {
        let area_ok = area.is_finite() && area >= 1.0 - AREA_TOL;
        let aleph_ok = aleph.is_finite() && aleph > 0.0;
        if !area_ok || !aleph_ok || !theta.is_finite() {
            return Err(Error::InvalidShape { area, aleph });
        }
        Ok(ShapeDecomposition { area, theta, aleph })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn aleph(&self) -> f64 {
        self.aleph
    }

    /// The gauge-fixed representative: `aleph >= 1`, `theta` in `[0, pi)`,
    /// and `theta = 0` when the ellipse is a circle (`aleph = 1`), where the
    /// orientation is meaningless.
    pub fn canonicalize(&self) -> Self {
        let (mut aleph, mut theta) = (self.aleph, self.theta);
        if aleph < 1.0 {
            aleph = 1.0 / aleph;
            theta += FRAC_PI_2;
        }
        let theta = if aleph == 1.0 {
            0.0
        } else {
            wrap_orientation(theta)
        };
        ShapeDecomposition {
            area: self.area,
            theta,
            aleph,
        }
    }
}

/// Split a covariance matrix into area, orientation and squeezing.
///
/// Returns the canonical representative (`aleph >= 1`, `theta` in
/// `[0, pi)`). Validation is repeated here because evolved states are built
/// without checks; a matrix that drifted below the Heisenberg bound (only
/// possible with deliberately unphysical parameters) is rejected rather
/// than silently clamped.
pub fn decompose(
    sigma: &CovarianceMatrix,
    constants: &PhysicalConstants,
) -> Result<ShapeDecomposition> {
    // Re-run the constructor checks; cheap compared to the trigonometry.
    let sigma = CovarianceMatrix::new(sigma.sigma_qq, sigma.sigma_pp, sigma.sigma_pq, constants)?;
    let s = sigma.scaled(constants);
    let area = (2.0 / constants.hbar) * s.det().sqrt();
    // Rounding (or the Heisenberg slack) can leave the area a hair under the
    // pure-state value; snap it back.
    let area = area.max(1.0);
    let half = constants.hbar * area / 2.0;
    // b is symmetric with det b = 1; its eigenvalues are aleph^2 and
    // 1/aleph^2 and the eigenbasis angle is the orientation.
    let b_xx = s.xx / half;
    let b_yy = s.yy / half;
    let b_xy = s.xy / half;
    let mean = 0.5 * (b_xx + b_yy);
    let h = 0.5 * (b_xx - b_yy);
    let spread = h.hypot(b_xy);
    if spread == 0.0 {
        // A circle: aleph = 1 exactly and the orientation is a pure gauge.
        return Ok(ShapeDecomposition {
            area,
            theta: 0.0,
            aleph: 1.0,
        });
    }
    // mean >= sqrt(1 + spread^2) since det b = mean^2 - spread^2 = 1, so the
    // larger eigenvalue mean + spread is >= 1 up to rounding.
    let aleph = (mean + spread).sqrt().max(1.0);
    let theta = wrap_orientation(0.5 * (-b_xy).atan2(h));
    Ok(ShapeDecomposition { area, theta, aleph })
}

/// Rebuild the covariance matrix described by a shape. The inverse of
/// [`decompose`] up to gauge.
pub fn compose(shape: &ShapeDecomposition, constants: &PhysicalConstants) -> CovarianceMatrix {
    let half = constants.hbar * shape.area / 2.0;
    let (sin, cos) = shape.theta.sin_cos();
    let big = shape.aleph * shape.aleph;
    let small = 1.0 / big;
    let s = Sym2 {
        xx: half * (cos * cos * big + sin * sin * small),
        xy: half * (sin * cos * (small - big)),
        yy: half * (sin * sin * big + cos * cos * small),
    };
    CovarianceMatrix::from_scaled(s, constants)
}

/// Statistical entropy of a quasi-free state with phase-space area `A`:
///
/// ```text
///   S(A) = (A+1)/2 * ln((A+1)/2) - (A-1)/2 * ln((A-1)/2),
/// ```
///
/// with the pure-state limit `S(1) = 0` taken exactly (the `x ln x` tail
/// vanishes). Strictly increasing in `A`, so ranking states by entropy at a
/// fixed time is the same as ranking them by `det sigma`.
pub fn entropy(area: f64) -> Result<f64> {
    if !(area >= 1.0 - AREA_TOL) || !area.is_finite() {
        return Err(Error::InvalidArea { area });
    }
    let up = 0.5 * (area + 1.0);
    let down = 0.5 * (area - 1.0);
    let tail = if down > 0.0 { down * down.ln() } else { 0.0 };
    Ok(up * up.ln() - tail)
}
