//! Exact and first-order Milburn maps, the Lindblad comparison propagator and the generator.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::states::DensityMatrix;
use crate::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MapOrder {
    Exact,
    #[default]
    FirstOrder,
}

impl fmt::Display for MapOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::FirstOrder => "first",
        })
    }
}

/// Decoherence strength `γ⁻¹` (a time) with the map order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilburnParams {
    pub gamma_inv: f64,
    pub order: MapOrder,
    pub hbar: f64,
}

impl MilburnParams {
    pub fn new(gamma_inv: f64, order: MapOrder, hbar: f64) -> Result<Self> {
        if !(gamma_inv >= 0.0 && gamma_inv.is_finite()) {
            return Err(invalid(
                "gamma_inv",
                format!("must be finite and >= 0, got {gamma_inv}"),
            ));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid("hbar", format!("must be positive, got {hbar}")));
        }
        Ok(Self { gamma_inv, order, hbar })
    }

    pub fn first_order(gamma_inv: f64) -> Result<Self> {
        Self::new(gamma_inv, MapOrder::FirstOrder, 1.0)
    }

    pub fn exact(gamma_inv: f64) -> Result<Self> {
        Self::new(gamma_inv, MapOrder::Exact, 1.0)
    }

    /// Rate `g(Δ)` such that the coherence factor is `exp(g(Δ) t)`.
    pub fn rate(&self, delta: f64) -> Complex64 {
        let h = self.hbar;
        match self.order {
            MapOrder::FirstOrder => Complex64::new(-delta * delta * self.gamma_inv / (2.0 * h * h), -delta / h),
            MapOrder::Exact => {
                if self.gamma_inv == 0.0 {
                    return Complex64::new(0.0, -delta / h);
                }
                // γ(e^{-iθ} - 1) with θ = Δ/(ħγ), written to avoid cancellation for small θ
                let theta = delta * self.gamma_inv / h;
                let s = (0.5 * theta).sin();
                Complex64::new(-2.0 * s * s, -theta.sin()) / self.gamma_inv
            }
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Multiplier of `ρ_EE′` after time `t`.
pub fn milburn_phase_factor(e: f64, e_prime: f64, t: f64, params: &MilburnParams) -> Result<Complex64> {
    check_time(t)?;
    Ok((params.rate(e - e_prime) * t).exp())
}

fn check_hbar(rho: &DensityMatrix, params: &MilburnParams) -> Result<()> {
    if (rho.units().hbar - params.hbar).abs() > 1e-14 * params.hbar {
        return Err(invalid(
            "hbar",
            format!(
                "map uses ħ = {} but the state uses ħ = {}",
                params.hbar,
                rho.units().hbar
            ),
        ));
    }
    Ok(())
}

/// Entrywise `exp(g(E_i - E_j) t) ρ_ij`.
fn apply_factors(entries: &CMatrix, energies: &[f64], t: f64, params: &MilburnParams) -> CMatrix {
    let n = energies.len();
    let columns: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (0..n)
                .map(|i| entries[(i, j)] * (params.rate(energies[i] - energies[j]) * t).exp())
                .collect()
        })
        .collect();
    DMatrix::from_vec(n, n, columns.concat())
}

/// `ρ_EE′(t) = factor(E, E′, t) ρ_EE′(0)` in a discrete energy basis.
pub fn evolve_eigenbasis(rho0: &DensityMatrix, t: f64, params: &MilburnParams) -> Result<DensityMatrix> {
    check_time(t)?;
    check_hbar(rho0, params)?;
    let energies = rho0.eigen_energies()?;
    Ok(rho0.with_entries(apply_factors(rho0.entries(), energies, t, params)))
}

/// Free-particle evolution of a momentum kernel, with `Δ = (p² - p′²)/2m`.
pub fn evolve_free_momentum(rho0: &DensityMatrix, t: f64, params: &MilburnParams) -> Result<DensityMatrix> {
    check_time(t)?;
    check_hbar(rho0, params)?;
    rho0.momentum_grid()?;
    let energies = rho0.basis().energies(rho0.units());
    Ok(rho0.with_entries(apply_factors(rho0.entries(), &energies, t, params)))
}

/// Applies the free map to an arbitrary (possibly non-Hermitian) momentum kernel, such as a cat
/// cross term.
pub fn evolve_free_kernel(
    kernel: &CMatrix,
    momenta: &[f64],
    mass: f64,
    t: f64,
    params: &MilburnParams,
) -> Result<CMatrix> {
    check_time(t)?;
    if kernel.nrows() != momenta.len() || kernel.ncols() != momenta.len() {
        return Err(Error::DimensionMismatch {
            expected: momenta.len(),
            found: kernel.nrows(),
        });
    }
    let energies: Vec<f64> = momenta.iter().map(|p| p * p / (2.0 * mass)).collect();
    Ok(apply_factors(kernel, &energies, t, params))
}

pub type MomentumFunction = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum LindbladKind {
    /// Hermitian Lindblad operator `L = f(p)`.
    MomentumFunction(MomentumFunction),
}

impl fmt::Debug for LindbladKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MomentumFunction(_) => f.write_str("MomentumFunction(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LindbladSpec {
    pub kappa: f64,
    pub kind: LindbladKind,
}

impl LindbladSpec {
    pub fn momentum_function(kappa: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(invalid("kappa", format!("must be finite and >= 0, got {kappa}")));
        }
        Ok(Self {
            kappa,
            kind: LindbladKind::MomentumFunction(Arc::new(f)),
        })
    }
}

/// `ρ(p,p′,t) = exp[(-i(p²-p′²)/(2mħ) - κ(f(p)-f(p′))²/2) t] ρ(p,p′,0)`.
pub fn lindblad_momentum_propagator(rho0: &DensityMatrix, spec: &LindbladSpec, t: f64) -> Result<DensityMatrix> {
    check_time(t)?;
    let grid = rho0.momentum_grid()?;
    let units = rho0.units();
    let LindbladKind::MomentumFunction(f) = &spec.kind;
    let p = grid.points();
    let fp: Vec<f64> = p.iter().map(|&x| f(x)).collect();
    let n = p.len();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        let phase = -(p[i] * p[i] - p[j] * p[j]) / (2.0 * units.mass * units.hbar);
        let damp = -0.5 * spec.kappa * (fp[i] - fp[j]).powi(2);
        rho0.entries()[(i, j)] * (Complex64::new(damp, phase) * t).exp()
    });
    Ok(rho0.with_entries(entries))
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn check_square_pair(h: &CMatrix, rho: &CMatrix) -> Result<()> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ncols(),
        });
    }
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// `-(i/ħ)[H,ρ] - (γ⁻¹/2ħ²)[H,[H,ρ]]`.
pub fn milburn_generator_apply(h: &CMatrix, rho: &CMatrix, params: &MilburnParams) -> Result<CMatrix> {
    check_square_pair(h, rho)?;
    let hb = params.hbar;
    let c1 = commutator(h, rho);
    let c2 = commutator(h, &c1);
    Ok(c1 * Complex64::new(0.0, -1.0 / hb) - c2 * Complex64::new(params.gamma_inv / (2.0 * hb * hb), 0.0))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `H1 ⊗ 1 + 1 ⊗ H2`.
pub fn kronecker_sum(h1: &CMatrix, h2: &CMatrix) -> CMatrix {
    kron(h1, &CMatrix::identity(h2.nrows(), h2.nrows())) + kron(&CMatrix::identity(h1.nrows(), h1.nrows()), h2)
}

/// Non-factorization residual `D = G_{H1⊕H2}(ρ1⊗ρ2) - G_{H1}(ρ1)⊗ρ2 - ρ1⊗G_{H2}(ρ2)`.
///
/// Fails with [`Error::InvariantViolation`] unless `D = -(γ⁻¹/ħ²)[H1,ρ1]⊗[H2,ρ2]` within `1e-10`.
pub fn two_particle_residual(
    h1: &CMatrix,
    h2: &CMatrix,
    rho1: &CMatrix,
    rho2: &CMatrix,
    params: &MilburnParams,
) -> Result<CMatrix> {
    check_square_pair(h1, rho1)?;
    check_square_pair(h2, rho2)?;
    let joint = milburn_generator_apply(&kronecker_sum(h1, h2), &kron(rho1, rho2), params)?;
    let separate = kron(&milburn_generator_apply(h1, rho1, params)?, rho2)
        + kron(rho1, &milburn_generator_apply(h2, rho2, params)?);
    let d = joint - separate;
    let predicted = kron(&commutator(h1, rho1), &commutator(h2, rho2))
        * Complex64::new(-params.gamma_inv / (params.hbar * params.hbar), 0.0);
    let err = (&d - &predicted).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = predicted.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if err > 1e-10 * scale {
        return Err(Error::InvariantViolation(format!(
            "two-particle residual deviates from -(γ⁻¹/ħ²)[H1,ρ1]⊗[H2,ρ2] by {err:.3e}"
        )));
    }
    Ok(d)
}

/// Evolution along a discrete basis, used where a basis-agnostic supplier of `ρ(t)` is needed.
pub fn eigenbasis_supplier(rho0: DensityMatrix, params: MilburnParams) -> impl Fn(f64) -> Result<DensityMatrix> + Sync {
    move |t| evolve_eigenbasis(&rho0, t, &params)
}
