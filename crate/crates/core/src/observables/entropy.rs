use nalgebra::{Matrix3, Vector3};

use super::TimeSeries;
use crate::error::{invalid, Error, Result};
use crate::evolution::{MapOrder, MilburnParams};
use crate::states::DensityMatrix;

/// `S_L = 1 - tr ρ²`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

/// `1 - Σ |ρ_EE′(0)|² e^{2 Re g(Δ) t}` at each time, for either map.
pub fn entropy_series(rho0: &DensityMatrix, params: &MilburnParams, times: &[f64]) -> Result<TimeSeries> {
    if let Some(&t) = times.iter().find(|t| **t < 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let terms = decay_terms(rho0, params)?;
    let values = times.iter().map(|&t| entropy_at(&terms, t)).collect();
    let s0 = entropy_at(&terms, 0.0);
    let predicted: f64 = terms.iter().map(|(w, r)| w * r).sum();
    let hbar = params.hbar;
    let energies = rho0.eigen_energies()?;
    let n = energies.len();
    let mut short = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = energies[i] - energies[j];
            short += rho0.entries()[(i, j)].norm_sqr() * d * d;
        }
    }
    short *= params.gamma_inv / (hbar * hbar);
    Ok(TimeSeries::new("linear_entropy", times.to_vec(), values)?
        .with_meta("map_order", params.order)
        .with_meta("gamma_inv", params.gamma_inv)
        .with_meta("s_l0", s0)
        .with_meta("initial_slope", predicted)
        .with_meta("short_time_slope", short)
        .with_meta("fitted_initial_slope", fitted_slope(&terms)))
}

/// Entropy under the exact map, with its initial and short-time slopes in the metadata.
pub fn entropy_series_exact(rho0: &DensityMatrix, params: &MilburnParams, times: &[f64]) -> Result<TimeSeries> {
    if params.order != MapOrder::Exact {
        return Err(invalid("params", "entropy_series_exact needs the exact map"));
    }
    entropy_series(rho0, params, times)
}

/// `(|ρ_EE′|², -2 Re g)` for every nonzero entry.
fn decay_terms(rho0: &DensityMatrix, params: &MilburnParams) -> Result<Vec<(f64, f64)>> {
    let energies = rho0.eigen_energies()?;
    let n = energies.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let w = rho0.entries()[(i, j)].norm_sqr();
            if w > 0.0 {
                out.push((w, -2.0 * params.rate(energies[i] - energies[j]).re));
            }
        }
    }
    Ok(out)
}

fn entropy_at(terms: &[(f64, f64)], t: f64) -> f64 {
    1.0 - terms.iter().map(|(w, r)| w * (-r * t).exp()).sum::<f64>()
}

/// Linear coefficient of a least-squares quadratic through eleven samples on `[0, 1e-3]`.
fn fitted_slope(terms: &[(f64, f64)]) -> f64 {
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for k in 0..=10 {
        let t = k as f64 * 1e-4;
        let row = Vector3::new(1.0, t, t * t);
        ata += row * row.transpose();
        atb += row * entropy_at(terms, t);
    }
    ata.lu().solve(&atb).map_or(f64::NAN, |c| c[1])
}
