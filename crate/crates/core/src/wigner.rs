//! Wigner functions of momentum-grid densities and residual checks of their phase-space
//! equations of motion.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::evolution::MilburnParams;
use crate::numerics::{gauss_hermite, Grid1D};
use crate::states::{momentum_weights, Basis, DensityMatrix, InitialState};
use crate::{CMatrix, Units};

/// `W(R, u)` sampled on centre positions `R` (rows) and momenta `u` (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub centre_grid: Grid1D,
    pub u_grid: Grid1D,
    pub values: DMatrix<f64>,
    pub hbar: f64,
    pub warnings: Vec<String>,
}

impl PhaseSpaceField {
    /// `∬ W dR du` by the trapezoid rule.
    pub fn norm(&self) -> f64 {
        self.moment(|_, _| 1.0)
    }

    /// `∬ f(R, u) W dR du` by the trapezoid rule.
    pub fn moment(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let (wr, wu) = (trapezoid(&self.centre_grid), trapezoid(&self.u_grid));
        let mut acc = 0.0;
        for (i, r) in self.centre_grid.iter().enumerate() {
            for (j, u) in self.u_grid.iter().enumerate() {
                acc += wr[i] * wu[j] * f(r, u) * self.values[(i, j)];
            }
        }
        acc
    }

    /// `∫ W du` at each centre position.
    pub fn position_marginal(&self) -> Vec<f64> {
        let wu = trapezoid(&self.u_grid);
        (0..self.centre_grid.len())
            .map(|i| (0..wu.len()).map(|j| wu[j] * self.values[(i, j)]).sum())
            .collect()
    }

    /// `∫ W dR` at each momentum.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let wr = trapezoid(&self.centre_grid);
        (0..self.u_grid.len())
            .map(|j| (0..wr.len()).map(|i| wr[i] * self.values[(i, j)]).sum())
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn trapezoid(grid: &Grid1D) -> Vec<f64> {
    momentum_weights(grid)
}

/// `W(R, u) = (1/2πħ) ∫ e^{-iur/ħ} ρ(R + r/2, R - r/2) dr` over `|r| ≤ r_max`.
///
/// The position kernel is synthesized once on a grid of half the `R` spacing in `r`, so every
/// `R ± r/2` falls on it.
pub fn wigner_transform(
    rho: &DensityMatrix,
    centre_grid: Grid1D,
    u_grid: Grid1D,
    r_max: f64,
) -> Result<PhaseSpaceField> {
    let grid = rho.momentum_grid()?;
    if !(r_max > 0.0) {
        return Err(invalid("r_max", format!("must be positive, got {r_max}")));
    }
    let hbar = rho.units().hbar;
    let h = centre_grid.spacing();
    let s_max = (r_max / (2.0 * h)).ceil() as usize;
    let n_r = centre_grid.len();
    let xs: Vec<f64> = (0..n_r + 2 * s_max)
        .map(|a| centre_grid.lower() + (a as f64 - s_max as f64) * h)
        .collect();
    let kernel = position_kernel(rho.entries(), grid, &xs, hbar);

    let scale = kernel.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = (0..n_r)
        .map(|k| kernel[(k + 2 * s_max, k)].norm().max(kernel[(k, k + 2 * s_max)].norm()))
        .fold(0.0, f64::max);
    let mut warnings = Vec::new();
    if edge > 1e-6 * scale {
        warnings.push(format!(
            "coherence reaches {:.3e} of its peak at |r| = {r_max}; widen the r window",
            edge / scale
        ));
    }

    let us = u_grid.points();
    let norm = 2.0 * h / (2.0 * PI * hbar);
    let rows: Vec<Vec<Complex64>> = (0..n_r)
        .into_par_iter()
        .map(|k| {
            let c = k + s_max;
            us.iter()
                .map(|&u| {
                    let mut acc = kernel[(c, c)];
                    for s in 1..=s_max {
                        let w = if s == s_max { 0.5 } else { 1.0 };
                        let r = 2.0 * s as f64 * h;
                        let ph = Complex64::from_polar(1.0, -u * r / hbar);
                        acc += (ph * kernel[(c + s, c - s)] + ph.conj() * kernel[(c - s, c + s)]) * w;
                    }
                    acc * norm
                })
                .collect()
        })
        .collect();
    let peak = rows.iter().flatten().map(|z| z.re.abs()).fold(1e-300, f64::max);
    if let Some(z) = rows.iter().flatten().find(|z| z.im.abs() > 1e-8 * peak.max(1.0)) {
        return Err(Error::NonRealObservable(z.im));
    }
    Ok(PhaseSpaceField {
        centre_grid,
        u_grid,
        values: DMatrix::from_fn(n_r, us.len(), |i, j| rows[i][j].re),
        hbar,
        warnings,
    })
}

/// `ρ(x_a, x_b) = (1/2πħ) Σ w_i w_j e^{i(p_i x_a - p_j x_b)/ħ} ρ_ij`.
fn position_kernel(entries: &CMatrix, grid: &Grid1D, xs: &[f64], hbar: f64) -> CMatrix {
    let p = grid.points();
    let w = momentum_weights(grid);
    let e = CMatrix::from_fn(xs.len(), p.len(), |a, i| {
        Complex64::from_polar(w[i], p[i] * xs[a] / hbar)
    });
    (&e * entries * e.adjoint()) / Complex64::new(2.0 * PI * hbar, 0.0)
}

/// A uniform force `-c1`, from the potential `c1 x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPotentialSpec {
    pub c1: f64,
}

/// Gauss–Hermite node count for the time smearing of the first-order map.
pub const DEFAULT_SMEARING_NODES: usize = 80;

/// First-order evolution of a pure state under `H = p²/2m + c1 x`, on a momentum grid.
///
/// The first-order map equals unitary evolution averaged over a Gaussian time `τ ~ N(t, tγ⁻¹)`,
/// and unitary evolution is exact in momentum space:
/// `ρ(p, p′, τ) = φ(p + c1τ) conj(φ(p′ + c1τ)) e^{-iτ[(p² - p′²) + c1τ(p - p′)]/2mħ}`.
pub fn linear_potential_density(
    state: &InitialState,
    grid: Grid1D,
    units: Units,
    spec: LinearPotentialSpec,
    t: f64,
    params: &MilburnParams,
    nodes: usize,
) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let gh = gauss_hermite(nodes)?;
    let p = grid.points();
    let n = p.len();
    let (m, hbar, c1) = (units.mass, units.hbar, spec.c1);
    let samples: Vec<(f64, f64)> = if params.gamma_inv > 0.0 && t > 0.0 {
        gh.normal_expectation(t, (t * params.gamma_inv).sqrt()).collect()
    } else {
        vec![(t, 1.0)]
    };
    let shifted: Vec<Vec<Complex64>> = samples
        .iter()
        .map(|&(tau, _)| {
            p.iter()
                .map(|&q| state.momentum_amplitude(q + c1 * tau, units))
                .collect()
        })
        .collect();
    let cols: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for (&(tau, weight), amps) in samples.iter().zip(&shifted) {
                let bj = amps[j].conj();
                for i in 0..n {
                    let ai = amps[i];
                    let phase = -tau * ((p[i] * p[i] - p[j] * p[j]) + c1 * tau * (p[i] - p[j])) / (2.0 * m * hbar);
                    col[i] += ai * bj * Complex64::from_polar(weight, phase);
                }
            }
            col
        })
        .collect();
    let entries = DMatrix::from_vec(n, n, cols.concat());
    DensityMatrix::new(Basis::MomentumGrid(grid), entries, units)
}

/// Which terms of the phase-space generator a residual includes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTerms {
    pub include_decoherence: bool,
    /// Flips the sign of the force term, reproducing the equation as sometimes printed.
    pub flip_force: bool,
}

impl Default for ResidualTerms {
    fn default() -> Self {
        Self {
            include_decoherence: true,
            flip_force: false,
        }
    }
}

/// Fourth-order central first and second derivatives along one axis.
fn d1(f: impl Fn(isize) -> f64, h: f64) -> f64 {
    (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h)
}

fn d2(f: impl Fn(isize) -> f64, h: f64) -> f64 {
    (-f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12.0 * h * h)
}

fn check_compatible(fields: &[PhaseSpaceField; 3]) -> Result<()> {
    let (a, b, c) = (&fields[0], &fields[1], &fields[2]);
    if a.centre_grid != b.centre_grid || b.centre_grid != c.centre_grid || a.u_grid != b.u_grid || b.u_grid != c.u_grid
    {
        return Err(invalid("fields", "snapshots must share their phase-space grid"));
    }
    Ok(())
}

/// Max over the interior of `|∂_t W - 𝓛W - (γ⁻¹/2) 𝓛²W|` divided by `max |∂_t W|`, with
/// `𝓛 = c1 ∂_u - (u/m) ∂_R` and the time derivative from snapshots at `t - δ, t, t + δ`.
pub fn linear_evolution_residual(
    fields: &[PhaseSpaceField; 3],
    delta: f64,
    spec: LinearPotentialSpec,
    params: &MilburnParams,
    mass: f64,
    terms: ResidualTerms,
) -> Result<f64> {
    check_compatible(fields)?;
    if !(delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    let w = &fields[1].values;
    let (hr, hu) = (fields[1].centre_grid.spacing(), fields[1].u_grid.spacing());
    let us = fields[1].u_grid.points();
    let (nr, nu) = w.shape();
    if nr < 5 || nu < 5 {
        return Err(Error::GridTooCoarse("need at least five points along each axis".into()));
    }
    let c1 = spec.c1;
    let force = if terms.flip_force { -c1 } else { c1 };
    let g = if terms.include_decoherence {
        params.gamma_inv
    } else {
        0.0
    };
    let at = |i: usize, j: usize, di: isize, dj: isize| w[((i as isize + di) as usize, (j as isize + dj) as usize)];
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 2..nr - 2 {
        for j in 2..nu - 2 {
            let u = us[j];
            let dt = (fields[2].values[(i, j)] - fields[0].values[(i, j)]) / (2.0 * delta);
            let w_r = d1(|k| at(i, j, k, 0), hr);
            let w_u = d1(|k| at(i, j, 0, k), hu);
            let w_rr = d2(|k| at(i, j, k, 0), hr);
            let w_uu = d2(|k| at(i, j, 0, k), hu);
            let w_ru = d1(|k| d1(|l| at(i, j, k, l), hu), hr);
            let liouville = force * w_u - u / mass * w_r;
            let l2 = c1 * c1 * w_uu - c1 / mass * w_r - 2.0 * c1 * u / mass * w_ru + u * u / (mass * mass) * w_rr;
            worst = worst.max((dt - liouville - 0.5 * g * l2).abs());
            scale = scale.max(dt.abs());
        }
    }
    if scale == 0.0 {
        return Err(invalid("fields", "W does not change over the snapshots"));
    }
    Ok(worst / scale)
}

/// Free-particle residual, `|∂_t W + (u/m) ∂_R W - (γ⁻¹ u²/2m²) ∂²_R W|` normalized.
pub fn free_evolution_residual(
    fields: &[PhaseSpaceField; 3],
    delta: f64,
    params: &MilburnParams,
    mass: f64,
    terms: ResidualTerms,
) -> Result<f64> {
    linear_evolution_residual(fields, delta, LinearPotentialSpec { c1: 0.0 }, params, mass, terms)
}

/// Residual at `δ` and `δ/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedResidual {
    pub coarse: f64,
    pub fine: f64,
}

/// Evaluates `residual` on snapshots from `snapshot` at steps `δ` and `δ/2`.
///
/// A residual above `tolerance` that fails to shrink on halving is dominated by the
/// phase-space discretization rather than the time step, and is reported as `GridTooCoarse`.
pub fn refined_residual<S, R>(snapshot: S, t: f64, delta: f64, tolerance: f64, residual: R) -> Result<RefinedResidual>
where
    S: Fn(f64) -> Result<PhaseSpaceField>,
    R: Fn(&[PhaseSpaceField; 3], f64) -> Result<f64>,
{
    if t - delta < 0.0 {
        return Err(Error::NegativeTime(t - delta));
    }
    let centre = snapshot(t)?;
    let eval = |d: f64| -> Result<f64> { residual(&[snapshot(t - d)?, centre.clone(), snapshot(t + d)?], d) };
    let coarse = eval(delta)?;
    let fine = eval(0.5 * delta)?;
    if fine > tolerance && fine > 0.9 * coarse {
        return Err(Error::GridTooCoarse(format!(
            "residual {fine:.3e} does not converge under δ-halving (was {coarse:.3e})"
        )));
    }
    Ok(RefinedResidual { coarse, fine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::evolve_free_momentum;
    use crate::observables::position_profile_momentum;
    use crate::states::{initial_density_momentum, CatStateSpec, WavePacketSpec};

    const UNITS: Units = Units { hbar: 1.0, mass: 1.0 };

    fn packet() -> InitialState {
        InitialState::Packet(WavePacketSpec::new(1.0, -0.5, 0.8).unwrap())
    }

    /// Covers the packet's momenta and their drift under the force.
    fn small_grid() -> Grid1D {
        Grid1D::new(-6.5, 6.5, 321).unwrap()
    }

    fn phase_grids() -> (Grid1D, Grid1D) {
        (
            Grid1D::new(-8.0, 8.0, 161).unwrap(),
            Grid1D::new(-4.0, 5.6, 97).unwrap(),
        )
    }

    #[test]
    fn gaussian_wigner_is_a_positive_blob_with_correct_marginals() {
        let s = packet();
        let grid = small_grid();
        let rho = initial_density_momentum(&s, grid, UNITS).unwrap();
        let (rg, ug) = phase_grids();
        let w = wigner_transform(&rho, rg, ug, 14.0).unwrap();
        assert!(w.warnings.is_empty(), "{:?}", w.warnings);
        assert!(w.min() >= -1e-8);
        assert!((w.norm() - 1.0).abs() < 1e-4);
        let pos = position_profile_momentum(&rho, &rg.points()).unwrap();
        for (a, b) in w.position_marginal().iter().zip(&pos.values) {
            assert!((a - b).abs() < 1e-5);
        }
        for (j, u) in ug.iter().enumerate() {
            let want = s.momentum_amplitude(u, UNITS).norm_sqr();
            assert!((w.momentum_marginal()[j] - want).abs() < 1e-5, "u={u}");
        }
        // closed form: (1/πħ) exp(-(R-x0)²/2σ² - 2σ²(u-p0)²/ħ²)
        let (i, j) = (75, 48);
        let (r, u) = (rg.point(i), ug.point(j));
        let want = (-(r + 0.5).powi(2) / 2.0 - 2.0 * (u - 0.8).powi(2)).exp() / PI;
        assert!((w.values[(i, j)] - want).abs() < 1e-9);
    }

    #[test]
    fn cat_has_negative_interference_ridge() {
        let cat = CatStateSpec::symmetric(0.7, 2.5, 0.5, UNITS).unwrap();
        let s = InitialState::Cat(cat);
        let grid = Grid1D::new(-8.0, 8.0, 401).unwrap();
        let rho = initial_density_momentum(&s, grid, UNITS).unwrap();
        let ug = Grid1D::new(-3.0, 3.0, 121).unwrap();
        let w = wigner_transform(&rho, Grid1D::new(-1.0, 1.0, 21).unwrap(), ug, 12.0).unwrap();
        assert!(w.min() < -0.1 * w.values.max());
        // doubled resolution in R and r reproduces the shared samples
        let fine = wigner_transform(&rho, Grid1D::new(-1.0, 1.0, 41).unwrap(), ug, 12.0).unwrap();
        for i in 0..21 {
            for j in 0..ug.len() {
                assert!((w.values[(i, j)] - fine.values[(2 * i, j)]).abs() < 1e-8);
            }
        }
        // the ridge at R = 0 oscillates as cos(2 x0 u/ħ + φ): zeros are π/(2 x0) apart
        let row: Vec<f64> = (0..ug.len()).map(|j| w.values[(10, j)]).collect();
        let crossings: Vec<f64> = row
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0].signum() != p[1].signum())
            .map(|(j, p)| ug.point(j) + ug.spacing() * p[0] / (p[0] - p[1]))
            .collect();
        let spacing = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
        assert!((spacing - PI / 5.0).abs() < 0.01, "{spacing}");
    }

    #[test]
    fn window_too_small_warns() {
        let cat = CatStateSpec::symmetric(0.7, 2.5, 0.5, UNITS).unwrap();
        let s = InitialState::Cat(cat);
        let rho = initial_density_momentum(&s, Grid1D::new(-6.0, 6.0, 321).unwrap(), UNITS).unwrap();
        let w = wigner_transform(
            &rho,
            Grid1D::new(-1.0, 1.0, 21).unwrap(),
            Grid1D::new(-1.0, 1.0, 11).unwrap(),
            2.0,
        )
        .unwrap();
        assert_eq!(w.warnings.len(), 1);
    }

    fn linear_snapshot(c1: f64, g: f64) -> impl Fn(f64) -> Result<PhaseSpaceField> {
        let s = packet();
        let grid = small_grid();
        let params = MilburnParams::first_order(g).unwrap();
        let (rg, ug) = phase_grids();
        move |t| {
            let rho = linear_potential_density(&s, grid, UNITS, LinearPotentialSpec { c1 }, t, &params, 60)?;
            wigner_transform(&rho, rg, ug, 14.0)
        }
    }

    #[test]
    fn smeared_propagator_reduces_to_free_map() {
        let s = packet();
        let grid = small_grid();
        let rho0 = initial_density_momentum(&s, grid, UNITS).unwrap();
        let params = MilburnParams::first_order(0.3).unwrap();
        let free = evolve_free_momentum(&rho0, 1.7, &params).unwrap();
        let smeared =
            linear_potential_density(&s, grid, UNITS, LinearPotentialSpec { c1: 0.0 }, 1.7, &params, 60).unwrap();
        let xs: Vec<f64> = (0..25).map(|i| -6.0 + 0.5 * i as f64).collect();
        let a = position_profile_momentum(&free, &xs).unwrap();
        let b = position_profile_momentum(&smeared, &xs).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn free_residuals_converge_and_need_the_decoherence_term() {
        for g in [0.0, 0.2] {
            let params = MilburnParams::first_order(g).unwrap();
            let full = |f: &[PhaseSpaceField; 3], d: f64| {
                free_evolution_residual(f, d, &params, 1.0, ResidualTerms::default())
            };
            let r = refined_residual(linear_snapshot(0.0, g), 1.0, 2e-3, 5e-3, full).unwrap();
            assert!(r.fine < 5e-3, "γ⁻¹={g}: {r:?}");
            if g > 0.0 {
                let bare = ResidualTerms {
                    include_decoherence: false,
                    ..ResidualTerms::default()
                };
                let f = linear_snapshot(0.0, g);
                let fields = [f(1.0 - 1e-3).unwrap(), f(1.0).unwrap(), f(1.0 + 1e-3).unwrap()];
                let ablated = free_evolution_residual(&fields, 1e-3, &params, 1.0, bare).unwrap();
                assert!(ablated > 10.0 * r.fine, "{ablated} vs {}", r.fine);
            }
        }
    }

    #[test]
    fn linear_residuals_converge_and_fix_the_force_sign() {
        for g in [0.0, 0.2] {
            let params = MilburnParams::first_order(g).unwrap();
            let spec = LinearPotentialSpec { c1: 1.0 };
            let full = |f: &[PhaseSpaceField; 3], d: f64| {
                linear_evolution_residual(f, d, spec, &params, 1.0, ResidualTerms::default())
            };
            let r = refined_residual(linear_snapshot(1.0, g), 0.8, 2e-3, 5e-3, full).unwrap();
            assert!(r.fine < 5e-3, "γ⁻¹={g}: {r:?}");
        }
        let params = MilburnParams::first_order(0.2).unwrap();
        let f = linear_snapshot(1.0, 0.2);
        let fields = [f(0.8 - 1e-3).unwrap(), f(0.8).unwrap(), f(0.8 + 1e-3).unwrap()];
        let flipped = ResidualTerms {
            flip_force: true,
            ..ResidualTerms::default()
        };
        let printed =
            linear_evolution_residual(&fields, 1e-3, LinearPotentialSpec { c1: 1.0 }, &params, 1.0, flipped).unwrap();
        assert!(printed > 0.1, "{printed}");
    }

    #[test]
    fn mean_momentum_falls_at_the_force_rate() {
        let f = linear_snapshot(0.6, 0.5);
        let d = 1e-3;
        let mean_u = |t: f64| {
            let w = f(t).unwrap();
            w.moment(|_, u| u) / w.norm()
        };
        let rate = (mean_u(1.0 + d) - mean_u(1.0 - d)) / (2.0 * d);
        assert!(((rate + 0.6) / 0.6).abs() < 0.01, "{rate}");
        let w = f(1.0).unwrap();
        assert!((w.norm() - f(0.0).unwrap().norm()).abs() < 1e-4);
    }

    /// Sinc-DVR position grid for `H = p²/2m + c1 x`, with first-order factors in its eigenbasis.
    fn dvr_density(state: &InitialState, c1: f64, t: f64, g: f64, xs: &[f64]) -> Vec<f64> {
        let (lo, dx, n) = (-25.0, 0.1, 501);
        let x: Vec<f64> = (0..n).map(|j| lo + dx * j as f64).collect();
        let h = DMatrix::<f64>::from_fn(n, n, |j, k| {
            let kinetic = if j == k {
                PI * PI / (6.0 * dx * dx)
            } else {
                let d = j as f64 - k as f64;
                (-1.0f64).powi((j as i32 - k as i32).abs()) / (dx * dx * d * d)
            };
            kinetic + if j == k { c1 * x[j] } else { 0.0 }
        });
        let eig = h.symmetric_eigen();
        let v = eig.eigenvectors.map(|a| Complex64::new(a, 0.0));
        let psi =
            nalgebra::DVector::from_iterator(n, x.iter().map(|&q| state.position_amplitude(q, UNITS) * dx.sqrt()));
        let c = v.adjoint() * psi;
        let params = MilburnParams::first_order(g).unwrap();
        let rho_e = CMatrix::from_fn(n, n, |a, b| {
            c[a] * c[b].conj() * (params.rate(eig.eigenvalues[a] - eig.eigenvalues[b]) * t).exp()
        });
        let rho_x = &v * rho_e * v.adjoint();
        xs.iter()
            .map(|&q| {
                let j = ((q - lo) / dx).round() as usize;
                rho_x[(j, j)].re / dx
            })
            .collect()
    }

    #[test]
    fn smeared_propagator_agrees_with_dvr_eigenbasis() {
        let s = packet();
        let grid = Grid1D::new(-8.0, 8.0, 401).unwrap();
        let (c1, t, g) = (0.7, 1.5, 0.4);
        let params = MilburnParams::first_order(g).unwrap();
        let rho = linear_potential_density(&s, grid, UNITS, LinearPotentialSpec { c1 }, t, &params, 80).unwrap();
        let xs: Vec<f64> = (0..31).map(|i| -6.0 + 0.3 * i as f64).collect();
        let ours = position_profile_momentum(&rho, &xs).unwrap();
        let dvr = dvr_density(&s, c1, t, g, &xs);
        for (a, b) in ours.values.iter().zip(&dvr) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }
}
