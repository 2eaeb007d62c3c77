use num_complex::Complex64;
use rayon::prelude::*;

use super::density::kernel_position_values;
use super::TimeSeries;
use crate::error::{Error, Result};
use crate::evolution::{evolve_free_momentum, MapOrder, MilburnParams};
use crate::states::{momentum_weights, DensityMatrix};
use crate::CMatrix;

fn check_order(params: &MilburnParams) -> Result<()> {
    if params.order == MapOrder::Exact && params.gamma_inv > 0.0 {
        return Err(Error::Unsupported(
            "the probability current is defined for the first-order map only".into(),
        ));
    }
    Ok(())
}

/// `(p + p′)(1 - i(p² - p′²)γ⁻¹/(4ħm)) ρ(p,p′) / 2m`, whose position synthesis is `J(x)`.
fn current_kernel(rho: &DensityMatrix, params: &MilburnParams) -> Result<CMatrix> {
    let grid = rho.momentum_grid()?;
    let p = grid.points();
    let m = rho.units().mass;
    let c = params.gamma_inv / (4.0 * params.hbar * m);
    let n = p.len();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let corr = Complex64::new(1.0, -c * (p[i] * p[i] - p[j] * p[j]));
        rho.entries()[(i, j)] * corr * ((p[i] + p[j]) / (2.0 * m))
    }))
}

fn assert_real(values: &[Complex64]) -> Result<()> {
    let scale = values.iter().map(|z| z.norm()).fold(1e-300, f64::max);
    match values.iter().find(|z| z.im.abs() > 1e-9 * scale.max(1.0)) {
        Some(z) => Err(Error::NonRealObservable(z.im)),
        None => Ok(()),
    }
}

/// `J(x, t)` at each `x` for the free evolution of `rho0`.
pub fn current_profile(rho0: &DensityMatrix, xs: &[f64], t: f64, params: &MilburnParams) -> Result<Vec<f64>> {
    check_order(params)?;
    let rho = evolve_free_momentum(rho0, t, params)?;
    let grid = rho.momentum_grid()?;
    let values = kernel_position_values(&current_kernel(&rho, params)?, grid, xs, params.hbar)?;
    assert_real(&values)?;
    Ok(values.iter().map(|z| z.re).collect())
}

pub fn current_density(rho0: &DensityMatrix, x: f64, t: f64, params: &MilburnParams) -> Result<f64> {
    Ok(current_profile(rho0, &[x], t, params)?[0])
}

const REANCHOR_EVERY: usize = 100;

/// `J(x, t)` over `times`, stepping each coherence by a fixed factor on uniform grids.
pub fn current_series(rho0: &DensityMatrix, x: f64, times: &[f64], params: &MilburnParams) -> Result<TimeSeries> {
    check_order(params)?;
    if let Some(&t) = times.iter().find(|t| **t < 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let grid = rho0.momentum_grid()?;
    let units = rho0.units();
    let p = grid.points();
    let w = momentum_weights(grid);
    let n = p.len();
    let kernel = current_kernel(rho0, params)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * params.hbar);
    // amplitude of each (i, j ≥ i) term at t = 0, doubled off the diagonal
    let amp = |i: usize, j: usize| {
        let phase = Complex64::from_polar(w[i] * w[j], (p[i] - p[j]) * x / params.hbar);
        kernel[(i, j)] * phase * norm * if i == j { 1.0 } else { 2.0 }
    };
    let largest = (0..n).map(|i| amp(i, i).norm()).fold(0.0, f64::max);
    let mask = 1e-18 * largest.max(1e-300);
    let energies: Vec<f64> = p.iter().map(|q| q * q / (2.0 * units.mass)).collect();
    let uniform = times.len() > 2 && {
        let dt = times[1] - times[0];
        times.windows(2).all(|s| ((s[1] - s[0]) - dt).abs() <= 1e-9 * dt.abs())
    };
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![0.0; times.len()];
            for j in i..n {
                let a = amp(i, j);
                if a.norm() <= mask {
                    continue;
                }
                let rate = params.rate(energies[i] - energies[j]);
                if uniform {
                    let step = (rate * (times[1] - times[0])).exp();
                    let mut f = Complex64::new(0.0, 0.0);
                    for (s, t) in times.iter().enumerate() {
                        f = if s % REANCHOR_EVERY == 0 {
                            (rate * *t).exp()
                        } else {
                            f * step
                        };
                        out[s] += (a * f).re;
                    }
                } else {
                    for (s, t) in times.iter().enumerate() {
                        out[s] += (a * (rate * *t).exp()).re;
                    }
                }
            }
            out
        })
        .collect();
    let mut values = vec![0.0; times.len()];
    for row in &rows {
        for (v, r) in values.iter_mut().zip(row) {
            *v += r;
        }
    }
    TimeSeries::new("current", times.to_vec(), values)
        .map(|s| s.with_meta("detector_x", x).with_meta("gamma_inv", params.gamma_inv))
}
