//! Shared fixtures for the benchmark targets. The interesting code lives
//! in `benches/`.

use lindblad_sieve::{
    compose, CovarianceMatrix, LindbladParams, PhysicalConstants, ShapeDecomposition,
};

/// A generic, well-conditioned scenario: anisotropic diffusion with cross
/// correlations at moderate friction, and a squeezed mixed initial state.
pub fn reference_scenario() -> (PhysicalConstants, LindbladParams, CovarianceMatrix) {
    let pc = PhysicalConstants::new(1.3, 0.7, 1.0).expect("valid constants");
    let params = LindbladParams::new(pc, 0.35, 0.9, 0.8, 0.1).expect("valid parameters");
    let shape = ShapeDecomposition::new(2.5, 0.9, 0.45).expect("valid shape");
    let sigma0 = compose(&shape, &pc);
    (pc, params, sigma0)
}
