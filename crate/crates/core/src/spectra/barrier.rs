use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::SpectralBasis;
use crate::error::{invalid, Error, Result};
use crate::numerics::{Grid1D, QuadratureRule};
use crate::states::{gaussian_momentum_amplitude, CoefficientVector, WavePacketSpec};
use crate::{CMatrix, Units};

/// Potential `V0` on `0 < x < L`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub v0: f64,
    pub l: f64,
}

impl BarrierSpec {
    pub fn new(v0: f64, l: f64) -> Result<Self> {
        if !(v0 >= 0.0 && v0.is_finite()) {
            return Err(invalid("V0", format!("must be non-negative, got {v0}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(invalid("L", format!("must be positive, got {l}")));
        }
        Ok(Self { v0, l })
    }

    pub fn potential(&self, x: f64) -> f64 {
        if x > 0.0 && x < self.l {
            self.v0
        } else {
            0.0
        }
    }
}

/// Pair of independent solutions used inside the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InsideKind {
    /// `e^{κx}`, `e^{-κx}` below the barrier top.
    Evanescent { kappa: f64 },
    /// `cos qx`, `sin qx` above it.
    Oscillatory { q: f64 },
    /// `1`, `x` at the barrier top.
    Threshold,
}

impl InsideKind {
    /// `(f, f′, g, g′)` at `x`.
    fn basis(&self, x: f64) -> (f64, f64, f64, f64) {
        match *self {
            Self::Evanescent { kappa } => {
                let (ep, em) = ((kappa * x).exp(), (-kappa * x).exp());
                (ep, kappa * ep, em, -kappa * em)
            }
            Self::Oscillatory { q } => {
                let (s, c) = (q * x).sin_cos();
                (c, -q * s, s, q * c)
            }
            Self::Threshold => (1.0, 0.0, x, 1.0),
        }
    }
}

/// Stationary state with unit incident wave from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringState {
    pub k: f64,
    pub r: Complex64,
    pub t: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub inside: InsideKind,
    pub barrier: BarrierSpec,
    pub units: Units,
}

impl ScatteringState {
    pub fn energy(&self) -> f64 {
        let h = self.units.hbar;
        h * h * self.k * self.k / (2.0 * self.units.mass)
    }

    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// Derivative of the eigenfunction.
    pub fn derivative(&self, x: f64) -> Complex64 {
        let i = Complex64::i();
        let k = self.k;
        let v = if x < 0.0 {
            i * k * (Complex64::from_polar(1.0, k * x) - self.r * Complex64::from_polar(1.0, -k * x))
        } else if x > self.barrier.l {
            i * k * self.t * Complex64::from_polar(1.0, k * x)
        } else {
            let (_, fp, _, gp) = self.inside.basis(x);
            self.a * fp + self.b * gp
        };
        v / (2.0 * PI).sqrt()
    }
}

/// Matches interior and exterior solutions at `x = L`, then at `x = 0`.
pub fn solve_barrier(k: f64, barrier: BarrierSpec, units: Units) -> Result<ScatteringState> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid("k", format!("must be positive, got {k}")));
    }
    let (h, m) = (units.hbar, units.mass);
    let energy = h * h * k * k / (2.0 * m);
    let gap = barrier.v0 - energy;
    let inside = if gap.abs() <= 1e-12 * barrier.v0 {
        InsideKind::Threshold
    } else if gap > 0.0 {
        InsideKind::Evanescent {
            kappa: (2.0 * m * gap).sqrt() / h,
        }
    } else {
        InsideKind::Oscillatory {
            q: (-2.0 * m * gap).sqrt() / h,
        }
    };
    let i = Complex64::i();
    // With provisional T = 1: A f + B g = e^{ikL} and A f′ + B g′ = ik e^{ikL}.
    let l = barrier.l;
    let (f, fp, g, gp) = inside.basis(l);
    let det = f * gp - g * fp;
    let scale = (f.abs() + g.abs()) * (fp.abs() + gp.abs());
    if det.abs() <= 1e-14 * scale {
        return Err(Error::SingularMatching(k));
    }
    let out = Complex64::from_polar(1.0, k * l);
    let out_p = i * k * out;
    let a = (out * gp - out_p * g) / det;
    let b = (out_p * f - out * fp) / det;
    let (f0, fp0, g0, gp0) = inside.basis(0.0);
    let psi0 = a * f0 + b * g0;
    let dpsi0 = a * fp0 + b * gp0;
    let incident = (psi0 + dpsi0 / (i * k)) / 2.0;
    let reflected = (psi0 - dpsi0 / (i * k)) / 2.0;
    if incident.norm() == 0.0 || !incident.norm().is_finite() {
        return Err(Error::SingularMatching(k));
    }
    Ok(ScatteringState {
        k,
        r: reflected / incident,
        t: Complex64::new(1.0, 0.0) / incident,
        a: a / incident,
        b: b / incident,
        inside,
        barrier,
        units,
    })
}

/// `u_k(x)` including the `1/√(2π)` prefactor.
pub fn barrier_eigenfunction(state: &ScatteringState, x: f64) -> Complex64 {
    let k = state.k;
    let v = if x < 0.0 {
        Complex64::from_polar(1.0, k * x) + state.r * Complex64::from_polar(1.0, -k * x)
    } else if x > state.barrier.l {
        state.t * Complex64::from_polar(1.0, k * x)
    } else {
        let (f, _, g, _) = state.inside.basis(x);
        state.a * f + state.b * g
    };
    v / (2.0 * PI).sqrt()
}

pub const DEFAULT_K_POINTS: usize = 400;

/// Scattering continuum discretized on a wavenumber grid with trapezoid weights.
///
/// State `j` is `√w_j u_{k_j}(x)`, so that `Σ_j` replaces `∫ dk`.
#[derive(Debug, Clone)]
pub struct ScatteringBasis {
    pub barrier: BarrierSpec,
    pub units: Units,
    pub k_grid: Grid1D,
    pub weights: Vec<f64>,
    pub states: Vec<ScatteringState>,
}

impl ScatteringBasis {
    pub fn new(barrier: BarrierSpec, k_grid: Grid1D, units: Units) -> Result<Self> {
        if k_grid.lower() <= 0.0 {
            return Err(invalid("k_grid", "wavenumbers must be positive"));
        }
        let weights = QuadratureRule::trapezoid(k_grid.lower(), k_grid.upper(), k_grid.len())?.weights();
        let states = k_grid
            .points()
            .par_iter()
            .map(|&k| solve_barrier(k, barrier, units))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            barrier,
            units,
            k_grid,
            weights,
            states,
        })
    }

    /// Grid `[max(1e-3, p0/ħ - 4/σ₀), p0/ħ + 4/σ₀]` covering the packet's positive momenta.
    pub fn default_k_grid(spec: &WavePacketSpec, units: Units, points: usize) -> Result<Grid1D> {
        let centre = spec.p0 / units.hbar;
        let half = 4.0 / spec.sigma0;
        Grid1D::new((centre - half).max(1e-3), centre + half, points)
    }

    pub fn for_packet(barrier: BarrierSpec, spec: &WavePacketSpec, units: Units) -> Result<Self> {
        Self::new(barrier, Self::default_k_grid(spec, units, DEFAULT_K_POINTS)?, units)
    }

    /// `C_j = √w_j ⟨u_{k_j}|ψ₀⟩` for a packet lying entirely left of the barrier, where the
    /// overlap is `√ħ [φ(ħk) + conj(R(k)) φ(-ħk)]` exactly.
    pub fn packet_coefficients(&self, spec: &WavePacketSpec) -> Result<CoefficientVector> {
        let edge = spec.x0 + 8.0 * spec.sigma0;
        let mut warnings = Vec::new();
        if edge > 0.0 {
            warnings.push(format!(
                "packet extends to x = {edge:.3} inside the barrier; coefficients assume support on x < 0"
            ));
        }
        let h = self.units.hbar;
        let values = self
            .states
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| {
                let fwd = gaussian_momentum_amplitude(spec, h * s.k, self.units);
                let back = gaussian_momentum_amplitude(spec, -h * s.k, self.units);
                (fwd + s.r.conj() * back) * (h * w).sqrt()
            })
            .collect();
        let mut cv = CoefficientVector::new(self.label(), values);
        let cov = cv.coverage();
        if cov < 0.999 {
            warnings.push(format!("k grid covers only {cov:.6} of the packet norm"));
        }
        cv.warnings = warnings;
        Ok(cv)
    }

    /// `Σ |C_j|² |T_j|² / Σ |C_j|²`.
    pub fn stationary_transmission(&self, coefficients: &CoefficientVector) -> f64 {
        let total = coefficients.coverage();
        coefficients
            .values
            .iter()
            .zip(&self.states)
            .map(|(c, s)| c.norm_sqr() * s.transmission())
            .sum::<f64>()
            / total
    }

    /// Samples `√w_j u_j(x)`, one row per state.
    pub fn sample(&self, xs: &[f64]) -> CMatrix {
        let rows: Vec<Vec<Complex64>> = self
            .states
            .par_iter()
            .zip(&self.weights)
            .map(|(s, w)| xs.iter().map(|&x| barrier_eigenfunction(s, x) * w.sqrt()).collect())
            .collect();
        DMatrix::from_fn(self.states.len(), xs.len(), |n, j| rows[n][j])
    }

    /// `M_nm = ∫_{L}^{x_max} ũ_n conj(ũ_m) dx` in closed form (single outgoing wave).
    pub fn transmitted_overlap(&self, x_lo: f64, x_hi: f64) -> Result<CMatrix> {
        if x_lo < self.barrier.l || x_hi <= x_lo {
            return Err(invalid(
                "x range",
                format!("need L <= x_lo < x_hi, got [{x_lo}, {x_hi}]"),
            ));
        }
        let n = self.states.len();
        let width = x_hi - x_lo;
        let cols: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|m| {
                let sm = &self.states[m];
                (0..n)
                    .map(|i| {
                        let si = &self.states[i];
                        let q = si.k - sm.k;
                        let integral = if (q * width).abs() < 1e-8 {
                            Complex64::from_polar(width, q * 0.5 * (x_lo + x_hi))
                        } else {
                            (Complex64::from_polar(1.0, q * x_hi) - Complex64::from_polar(1.0, q * x_lo))
                                / (Complex64::i() * q)
                        };
                        si.t * sm.t.conj() * integral * (self.weights[i] * self.weights[m]).sqrt() / (2.0 * PI)
                    })
                    .collect()
            })
            .collect();
        Ok(DMatrix::from_vec(n, n, cols.concat()))
    }
}

impl SpectralBasis for ScatteringBasis {
    fn label(&self) -> String {
        format!("barrier(V0={}, L={})", self.barrier.v0, self.barrier.l)
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy()).collect()
    }

    fn eigenfunction(&self, n: usize, x: f64) -> Result<Complex64> {
        Ok(barrier_eigenfunction(&self.states[n], x) * self.weights[n].sqrt())
    }
}
