//! Density-matrix evolution under intrinsic decoherence.
//!
//! The Milburn map damps energy coherences `ρ_EE′` at a rate set by `γ⁻¹`; both the exact
//! map and its first-order expansion are available. Spectral bases cover free particles on
//! a momentum grid, a rectangular barrier, the quantum bouncer and the harmonic oscillator.

pub mod error;
pub mod evolution;
pub mod numerics;
pub mod observables;
pub mod spectra;
pub mod states;
pub mod wigner;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use error::{Error, Result};
pub use evolution::{MapOrder, MilburnParams};
pub use observables::{ArrivalStats, TimeSeries};
pub use spectra::SpectralBasis;
pub use states::{CatStateSpec, DensityMatrix, InitialState, WavePacketSpec};

pub type CMatrix = DMatrix<Complex64>;

/// Reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(error::invalid("hbar", format!("must be positive, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(error::invalid("mass", format!("must be positive, got {mass}")));
        }
        Ok(Self { hbar, mass })
    }
}
