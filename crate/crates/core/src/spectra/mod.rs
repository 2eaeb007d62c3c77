//! Spectral bases: rectangular-barrier scattering states, quantum-bouncer Airy states and
//! harmonic-oscillator states.

mod barrier;
mod bouncer;
mod harmonic;

pub use barrier::{
    barrier_eigenfunction, solve_barrier, BarrierSpec, InsideKind, ScatteringBasis, ScatteringState, DEFAULT_K_POINTS,
};
pub use bouncer::{bouncer_position_matrix, build_bouncer_basis, BouncerBasis, PositionMatrix};
pub use harmonic::{build_harmonic_basis, HarmonicBasis};

use num_complex::Complex64;

use crate::error::Result;

/// Discrete set of energy eigenfunctions.
pub trait SpectralBasis: Sync {
    fn label(&self) -> String;
    fn len(&self) -> usize;
    fn energies(&self) -> Vec<f64>;
    fn eigenfunction(&self, n: usize, x: f64) -> Result<Complex64>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
