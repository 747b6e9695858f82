//! Tiny 2x2 symmetric-matrix arithmetic for the dimensionless covariance
//! computations. Kept private: the public API speaks in named physical
//! quantities, not raw matrix entries.

use std::f64::consts::PI;

/// Symmetric 2x2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn add(self, o: Sym2) -> Sym2 {
        Sym2 {
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            yy: self.yy + o.yy,
        }
    }

    pub fn sub(self, o: Sym2) -> Sym2 {
        Sym2 {
            xx: self.xx - o.xx,
            xy: self.xy - o.xy,
            yy: self.yy - o.yy,
        }
    }

    /// Congruence `R * self * R^T` with `R = [[r11, r12], [r21, r22]]`;
    /// symmetry is preserved for any R.
    pub fn congruence(self, r11: f64, r12: f64, r21: f64, r22: f64) -> Sym2 {
        Sym2 {
            xx: r11 * r11 * self.xx + 2.0 * r11 * r12 * self.xy + r12 * r12 * self.yy,
            xy: r11 * r21 * self.xx + (r11 * r22 + r12 * r21) * self.xy + r12 * r22 * self.yy,
            yy: r21 * r21 * self.xx + 2.0 * r21 * r22 * self.xy + r22 * r22 * self.yy,
        }
    }

}

/// Reduce an angle to the fundamental orientation interval `[0, pi)`.
pub(crate) fn wrap_orientation(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    // rem_euclid can return exactly PI when theta is a tiny negative number.
    if t >= PI {
        0.0
    } else {
        t
    }
}
