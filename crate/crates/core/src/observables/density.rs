use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::Grid1D;
use crate::spectra::SpectralBasis;
use crate::states::{momentum_weights, DensityMatrix};
use crate::CMatrix;

/// Position density sampled at `xs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

const NEGATIVE_TOL: f64 = 1e-6;

fn real_profile(xs: &[f64], complex: Vec<Complex64>) -> Result<DensityProfile> {
    let scale = complex.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(z) = complex.iter().find(|z| z.im.abs() > 1e-8 * scale) {
        return Err(Error::NonRealObservable(z.im));
    }
    let values: Vec<f64> = complex.iter().map(|z| z.re).collect();
    let mut warnings = Vec::new();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -NEGATIVE_TOL {
        warnings.push(format!("density reaches {min:.3e}; basis truncation suspected"));
    }
    Ok(DensityProfile {
        xs: xs.to_vec(),
        values,
        warnings,
    })
}

/// `w_i e^{i p_i x/ħ}` for every `(x, p_i)`.
fn plane_waves(grid: &Grid1D, xs: &[f64], hbar: f64) -> CMatrix {
    let p = grid.points();
    let w = momentum_weights(grid);
    DMatrix::from_fn(xs.len(), p.len(), |r, i| {
        Complex64::from_polar(w[i], p[i] * xs[r] / hbar)
    })
}

/// `(1/2πħ) ∬ e^{i(p-p′)x/ħ} K(p,p′) dp dp′` for an arbitrary kernel on `grid`.
pub fn kernel_position_values(kernel: &CMatrix, grid: &Grid1D, xs: &[f64], hbar: f64) -> Result<Vec<Complex64>> {
    if kernel.nrows() != grid.len() || kernel.ncols() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: kernel.nrows(),
        });
    }
    let e = plane_waves(grid, xs, hbar);
    let b = &e * kernel;
    let norm = 1.0 / (2.0 * PI * hbar);
    Ok((0..xs.len())
        .map(|r| {
            b.row(r)
                .iter()
                .zip(e.row(r).iter())
                .map(|(x, y)| x * y.conj())
                .sum::<Complex64>()
                * norm
        })
        .collect())
}

/// Density of a momentum-grid state at each `x`.
pub fn position_profile_momentum(rho: &DensityMatrix, xs: &[f64]) -> Result<DensityProfile> {
    let grid = rho.momentum_grid()?;
    let values = kernel_position_values(rho.entries(), grid, xs, rho.units().hbar)?;
    real_profile(xs, values)
}

pub fn position_density_momentum(rho: &DensityMatrix, x: f64) -> Result<f64> {
    Ok(position_profile_momentum(rho, &[x])?.values[0])
}

/// `Σ ρ_EE′ u_E(x) conj(u_E′(x))` at each `x`.
pub fn position_profile_eigenbasis<B>(rho: &DensityMatrix, basis: &B, xs: &[f64]) -> Result<DensityProfile>
where
    B: SpectralBasis + ?Sized,
{
    rho.eigen_energies()?;
    if rho.dim() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "density has dimension {} but basis `{}` has {} states",
            rho.dim(),
            basis.label(),
            basis.len()
        )));
    }
    let n = basis.len();
    let mut u = CMatrix::zeros(n, xs.len());
    for (j, &x) in xs.iter().enumerate() {
        for k in 0..n {
            u[(k, j)] = basis.eigenfunction(k, x)?;
        }
    }
    // b[(m, j)] = Σ_n ρ_nm u_n(x_j)
    let b = rho.entries().transpose() * &u;
    let values = (0..xs.len())
        .map(|j| (0..n).map(|m| b[(m, j)] * u[(m, j)].conj()).sum::<Complex64>())
        .collect::<Vec<_>>();
    real_profile(xs, values)
}

pub fn position_density_eigenbasis<B>(rho: &DensityMatrix, basis: &B, x: f64) -> Result<f64>
where
    B: SpectralBasis + ?Sized,
{
    Ok(position_profile_eigenbasis(rho, basis, &[x])?.values[0])
}
