use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::TimeSeries;
use crate::error::{invalid, Error, Result};
use crate::numerics::{Grid1D, QuadratureKind, QuadratureRule};
use crate::spectra::{barrier_eigenfunction, ScatteringBasis};
use crate::states::{CoefficientVector, DensityMatrix, WavePacketSpec};
use crate::{CMatrix, Units};

/// Extra room beyond `x_max` scanned for outgoing mass.
const MONITOR_WIDTH: f64 = 50.0;
const MONITOR_LIMIT: f64 = 1e-4;
const TAIL_WARN_FRACTION: f64 = 0.01;

/// `M_nm = ∫ ũ_n conj(ũ_m) dx` over `[x_lo, x_hi]` by Simpson quadrature on `points` nodes.
pub fn region_overlap_matrix(basis: &ScatteringBasis, x_lo: f64, x_hi: f64, points: usize) -> Result<CMatrix> {
    let rule = QuadratureRule::simpson(x_lo, x_hi, points)?;
    let u = basis.sample(&rule.nodes());
    let w = rule.weights();
    let uw = CMatrix::from_fn(u.nrows(), u.ncols(), |n, j| u[(n, j)] * w[j]);
    Ok(uw * u.adjoint())
}

/// `Re Σ ρ_nm M_nm`.
fn region_probability(rho: &DensityMatrix, m: &CMatrix) -> Result<f64> {
    if rho.dim() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: rho.dim(),
        });
    }
    let e = rho.entries();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += e[(i, j)] * m[(i, j)];
        }
    }
    Ok(acc.re)
}

fn region_series<S>(supplier: &S, m: &CMatrix, times: &[f64], label: &str) -> Result<TimeSeries>
where
    S: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    let values = times
        .par_iter()
        .map(|&t| region_probability(&supplier(t)?, m))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(label, times.to_vec(), values)
}

/// `x_max = L + (p₀/m) t_max + 8σ_t`, with `σ_t` the free width at `t_max`.
pub fn transmission_cutoff(spec: &WavePacketSpec, basis: &ScatteringBasis, t_max: f64, units: Units) -> f64 {
    let spread = units.hbar * t_max / (2.0 * units.mass * spec.sigma0 * spec.sigma0);
    let sigma_t = spec.sigma0 * (1.0 + spread * spread).sqrt();
    basis.barrier.l + spec.p0 / units.mass * t_max + 8.0 * sigma_t
}

/// `P_tr(t) = ∫_L^{x_max} ρ(x, x, t) dx`, using the closed-form transmitted-wave overlap.
pub fn transmission_series<S>(supplier: &S, basis: &ScatteringBasis, times: &[f64], x_max: f64) -> Result<TimeSeries>
where
    S: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    let l = basis.barrier.l;
    let m = basis.transmitted_overlap(l, x_max)?;
    let mut series = region_series(supplier, &m, times, "transmission")?;
    if let Some(&t_last) = times.last() {
        let beyond = basis.transmitted_overlap(x_max, x_max + MONITOR_WIDTH)?;
        let lost = region_probability(&supplier(t_last)?, &beyond)?;
        series = series.with_meta("mass_beyond_x_max", lost);
        if lost > MONITOR_LIMIT {
            series
                .warnings
                .push(format!("{lost:.3e} of the outgoing packet lies beyond x_max = {x_max}"));
        }
    }
    Ok(series.with_meta("x_max", x_max))
}

#[derive(Debug, Clone)]
pub struct DwellStats {
    /// `P_D(t) = ∫_0^L ρ(x, x, t) dx`.
    pub series: TimeSeries,
    pub tau_d: f64,
    /// Exponential closure of `∫_{t_end}^∞ P_D dt`.
    pub tail: f64,
    /// `Σ ρ_nn(0) τ_D(k_n)` from the monochromatic dwell times.
    pub monochromatic: f64,
    pub warnings: Vec<String>,
}

fn time_rule(times: &[f64]) -> Result<QuadratureRule> {
    let n = times.len();
    if n < 3 {
        return Err(invalid("times", "need at least three samples"));
    }
    let grid = Grid1D::new(times[0], times[n - 1], n)?;
    let uniform = times
        .iter()
        .enumerate()
        .all(|(i, &t)| (t - grid.point(i)).abs() <= 1e-9 * grid.spacing());
    if !uniform {
        return Err(invalid("times", "dwell integration needs a uniform time grid"));
    }
    let kind = if n % 2 == 1 {
        QuadratureKind::Simpson
    } else {
        QuadratureKind::Trapezoid
    };
    QuadratureRule::new(kind, grid)
}

/// `τ_D(k) = (2π m / ħk) ∫_0^L |u_k|² dx` for each basis state.
pub fn monochromatic_dwell_times(basis: &ScatteringBasis, points: usize) -> Result<Vec<f64>> {
    let rule = QuadratureRule::simpson(0.0, basis.barrier.l, points)?;
    let nodes = rule.nodes();
    let units = basis.units;
    basis
        .states
        .par_iter()
        .map(|s| {
            let dens: Vec<f64> = nodes.iter().map(|&x| barrier_eigenfunction(s, x).norm_sqr()).collect();
            Ok(2.0 * PI * units.mass / (units.hbar * s.k) * rule.apply_real(&dens)?)
        })
        .collect()
}

/// Dwell probability on `[0, L]` over a uniform `times` grid, and `τ_D = ∫ P_D dt`.
pub fn dwell_statistics<S>(supplier: &S, basis: &ScatteringBasis, times: &[f64]) -> Result<DwellStats>
where
    S: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    let rule = time_rule(times)?;
    let m = region_overlap_matrix(basis, 0.0, basis.barrier.l, 201)?;
    let series = region_series(supplier, &m, times, "dwell_probability")?;
    let inside = rule.apply_real(&series.values)?;

    let n = times.len();
    let (t1, p1) = (times[n - 1], series.values[n - 1]);
    let (t0, p0) = (times[n - 1 - n / 10], series.values[n - 1 - n / 10]);
    let mut warnings = Vec::new();
    let tail = if p1 <= 0.0 {
        0.0
    } else if p0 > p1 {
        p1 * (t1 - t0) / (p0 / p1).ln()
    } else {
        warnings.push(format!(
            "dwell probability not decaying at t = {t1}; tail closure skipped"
        ));
        0.0
    };
    let tau_d = inside + tail;
    if tail.abs() > TAIL_WARN_FRACTION * tau_d.abs() {
        warnings.push(format!("tail closure carries {:.2}% of τ_D", 100.0 * tail / tau_d));
    }

    let rho0 = supplier(times[0])?;
    let mono = monochromatic_dwell_times(basis, 201)?;
    let diag: Vec<f64> = (0..rho0.dim()).map(|i| rho0.entries()[(i, i)].re).collect();
    let total: f64 = diag.iter().sum();
    let monochromatic = diag.iter().zip(&mono).map(|(p, t)| p * t).sum::<f64>() / total;

    let series = series
        .with_meta("tau_d", tau_d)
        .with_meta("tail", tail)
        .with_meta("monochromatic", monochromatic);
    Ok(DwellStats {
        series,
        tau_d,
        tail,
        monochromatic,
        warnings,
    })
}

/// Asymptotic transmission probability of a packet expanded in the scattering basis.
pub fn stationary_transmission(basis: &ScatteringBasis, coefficients: &CoefficientVector) -> f64 {
    basis.stationary_transmission(coefficients)
}
