//! Fixtures shared by the benchmarks.

use decoherence_core::spectra::{BarrierSpec, ScatteringBasis, SpectralBasis};
use decoherence_core::states::{default_momentum_grid, initial_density_momentum};
use decoherence_core::{CatStateSpec, DensityMatrix, InitialState, Result, Units, WavePacketSpec};

/// The interference cat on its default 640-point momentum grid.
pub fn cat_density() -> Result<DensityMatrix> {
    let units = Units::default();
    let state = InitialState::Cat(CatStateSpec::symmetric(1.0, 5.0, 1.0, units)?);
    initial_density_momentum(&state, default_momentum_grid(&state, units)?, units)
}

/// The arrival packet on its default momentum grid.
pub fn packet_density() -> Result<DensityMatrix> {
    let units = Units::default();
    let state = InitialState::Packet(WavePacketSpec::new(1.0, -10.0, 2.0)?);
    initial_density_momentum(&state, default_momentum_grid(&state, units)?, units)
}

/// The tunnelling packet expanded in a `points`-state scattering basis.
pub fn tunnel_density(points: usize) -> Result<DensityMatrix> {
    let units = Units::default();
    let spec = WavePacketSpec::new(1.0, -10.0, 2.0)?;
    let grid = ScatteringBasis::default_k_grid(&spec, units, points)?;
    let basis = ScatteringBasis::new(BarrierSpec::new(3.0, 1.0)?, grid, units)?;
    let cv = basis.packet_coefficients(&spec)?;
    DensityMatrix::pure_eigenbasis(&cv, basis.energies(), units)
}
