//! Shared fixtures for the integration tests: seeded random generators for
//! valid parameter sets and states, plus reference implementations (an RK4
//! integrator for the moment equations and a plain linear solve for the
//! stationary state) that share no algebra with the library's closed forms.

#![allow(dead_code)]

use lindblad_sieve::{
    compose, CovarianceMatrix, LindbladParams, PhysicalConstants, ShapeDecomposition,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..=hi.ln()).exp()
}

/// Random constants in a moderate range around natural units.
pub fn sample_constants(rng: &mut ChaCha8Rng) -> PhysicalConstants {
    let m = log_uniform(rng, 0.2, 5.0);
    let omega = log_uniform(rng, 0.2, 5.0);
    let hbar = log_uniform(rng, 0.5, 2.0);
    PhysicalConstants::new(m, omega, hbar).unwrap()
}

/// A random parameter set with `lambda/omega` drawn log-uniformly from
/// `[ratio_lo, ratio_hi]` and the diffusion matrix built to satisfy the
/// positivity bound with strict margin: the product `D_qq*D_pp` is
/// `slack^2` times the bound and the correlation stays below 0.95.
pub fn sample_params(rng: &mut ChaCha8Rng, ratio_lo: f64, ratio_hi: f64) -> LindbladParams {
    let pc = sample_constants(rng);
    sample_params_for(rng, pc, ratio_lo, ratio_hi)
}

/// Same, with the constants chosen by the caller.
pub fn sample_params_for(
    rng: &mut ChaCha8Rng,
    pc: PhysicalConstants,
    ratio_lo: f64,
    ratio_hi: f64,
) -> LindbladParams {
    let lambda = log_uniform(rng, ratio_lo, ratio_hi) * pc.omega();
    let bound = lambda * pc.hbar() / 2.0;
    let slack = log_uniform(rng, 1.05, 50.0);
    let aspect = log_uniform(rng, 0.01, 100.0);
    let mw = pc.m() * pc.omega();
    let d_qq = slack * bound * aspect.sqrt() / mw;
    let d_pp = slack * bound / aspect.sqrt() * mw;
    let correlation = rng.gen_range(-0.95..=0.95);
    let d_pq = correlation * (d_qq * d_pp - bound * bound).sqrt();
    LindbladParams::new(pc, lambda, d_qq, d_pp, d_pq).expect("constructed to satisfy positivity")
}

/// A random valid covariance matrix: area mostly above 1 (sometimes exactly
/// pure), any orientation, squeezing across four decades.
pub fn sample_sigma(rng: &mut ChaCha8Rng, pc: &PhysicalConstants) -> CovarianceMatrix {
    let area = if rng.gen_bool(0.25) {
        1.0
    } else {
        log_uniform(rng, 1.0, 20.0)
    };
    let theta = rng.gen_range(0.0..PI);
    let aleph = log_uniform(rng, 0.1, 10.0);
    compose(&ShapeDecomposition::new(area, theta, aleph).unwrap(), pc)
}

/// Dimensionless entries `(m w sigma_qq, sigma_pp/(m w), sigma_pq)`.
pub fn scaled_entries(sigma: &CovarianceMatrix, pc: &PhysicalConstants) -> (f64, f64, f64) {
    let mw = pc.m() * pc.omega();
    (
        mw * sigma.sigma_qq(),
        sigma.sigma_pp() / mw,
        sigma.sigma_pq(),
    )
}

/// Frobenius distance of two covariance matrices in the dimensionless frame.
pub fn scaled_distance(a: &CovarianceMatrix, b: &CovarianceMatrix, pc: &PhysicalConstants) -> f64 {
    let (ax, ay, az) = scaled_entries(a, pc);
    let (bx, by, bz) = scaled_entries(b, pc);
    let (dx, dy, dz) = (ax - bx, ay - by, az - bz);
    (dx * dx + dy * dy + 2.0 * dz * dz).sqrt()
}

/// Right-hand side of the moment equations
/// `d/dt (sigma_qq, sigma_pp, sigma_pq)`.
fn moment_derivative(s: [f64; 3], params: &LindbladParams) -> [f64; 3] {
    let pc = params.constants();
    let (m, w, l) = (pc.m(), pc.omega(), params.lambda());
    [
        2.0 * s[2] / m - 2.0 * l * s[0] + 2.0 * params.d_qq(),
        -2.0 * m * w * w * s[2] - 2.0 * l * s[1] + 2.0 * params.d_pp(),
        s[1] / m - m * w * w * s[0] - 2.0 * l * s[2] + 2.0 * params.d_pq(),
    ]
}

/// Classic fixed-step RK4 for the moment equations; the independent oracle
/// for `evolve`. Returns `(sigma_qq, sigma_pp, sigma_pq)` at time `t`.
pub fn rk4_moments(
    sigma0: &CovarianceMatrix,
    t: f64,
    params: &LindbladParams,
    steps: usize,
) -> (f64, f64, f64) {
    let mut y = [sigma0.sigma_qq(), sigma0.sigma_pp(), sigma0.sigma_pq()];
    let h = t / steps as f64;
    for _ in 0..steps {
        let k1 = moment_derivative(y, params);
        let k2 = moment_derivative(step(y, k1, h / 2.0), params);
        let k3 = moment_derivative(step(y, k2, h / 2.0), params);
        let k4 = moment_derivative(step(y, k3, h), params);
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (y[0], y[1], y[2])
}

fn step(y: [f64; 3], k: [f64; 3], h: f64) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Stationary moments from a direct 3x3 linear solve (Cramer's rule) of
/// `moment_derivative = 0`; the independent oracle for
/// `stationary_covariance`.
pub fn stationary_by_linear_solve(params: &LindbladParams) -> (f64, f64, f64) {
    let pc = params.constants();
    let (m, w, l) = (pc.m(), pc.omega(), params.lambda());
    let a = [
        [-2.0 * l, 0.0, 2.0 / m],
        [0.0, -2.0 * l, -2.0 * m * w * w],
        [-m * w * w, 1.0 / m, -2.0 * l],
    ];
    let b = [
        -2.0 * params.d_qq(),
        -2.0 * params.d_pp(),
        -2.0 * params.d_pq(),
    ];
    let d = det3(a);
    let mut cols = [0.0; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        let mut aj = a;
        for i in 0..3 {
            aj[i][j] = b[i];
        }
        *col = det3(aj) / d;
    }
    (cols[0], cols[1], cols[2])
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Assert relative closeness against an explicit scale.
pub fn assert_close(label: &str, actual: f64, expected: f64, tol: f64, scale: f64) {
    let err = (actual - expected).abs();
    assert!(
        err <= tol * scale.abs(),
        "{label}: |{actual} - {expected}| = {err:.3e} > {tol:.1e} * {scale:.3e}"
    );
}
