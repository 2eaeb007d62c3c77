//! Initial wave packets and density-matrix containers.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numerics::{Grid1D, QuadratureRule};
use crate::spectra::SpectralBasis;
use crate::{CMatrix, Units};

/// Gaussian wave packet of position width `sigma0` centred at `x0` with mean momentum `p0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacketSpec {
    pub sigma0: f64,
    pub x0: f64,
    pub p0: f64,
}

impl WavePacketSpec {
    pub fn new(sigma0: f64, x0: f64, p0: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(invalid("sigma0", format!("must be positive, got {sigma0}")));
        }
        if !(x0.is_finite() && p0.is_finite()) {
            return Err(invalid("x0/p0", "must be finite"));
        }
        Ok(Self { sigma0, x0, p0 })
    }

    /// Standard deviation of the momentum distribution, `ħ/(2σ₀)`.
    pub fn momentum_width(&self, units: Units) -> f64 {
        units.hbar / (2.0 * self.sigma0)
    }
}

/// Normalized superposition `𝒩(ψ_a + ψ_b)` of two equal-width Gaussians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatStateSpec {
    pub packet_a: WavePacketSpec,
    pub packet_b: WavePacketSpec,
    pub normalization: f64,
}

impl CatStateSpec {
    pub fn new(packet_a: WavePacketSpec, packet_b: WavePacketSpec, units: Units) -> Result<Self> {
        let normalization = pair_normalization(&packet_a, &packet_b, units)?;
        Ok(Self {
            packet_a,
            packet_b,
            normalization,
        })
    }

    /// Packets at `+x0` moving with `-p0` and at `-x0` moving with `+p0`, so they collide at
    /// `t0 = m x0 / p0`.
    pub fn symmetric(sigma0: f64, x0: f64, p0: f64, units: Units) -> Result<Self> {
        Self::new(
            WavePacketSpec::new(sigma0, x0, -p0)?,
            WavePacketSpec::new(sigma0, -x0, p0)?,
            units,
        )
    }
}

/// `⟨ψ_a|ψ_b⟩` for two Gaussians sharing a width.
fn packet_overlap(a: &WavePacketSpec, b: &WavePacketSpec, units: Units) -> Complex64 {
    let s = a.sigma0;
    let dp = b.p0 - a.p0;
    let dx = b.x0 - a.x0;
    let pbar = 0.5 * (a.p0 + b.p0);
    let modulus = (-s * s * dp * dp / (2.0 * units.hbar * units.hbar) - dx * dx / (8.0 * s * s)).exp();
    Complex64::from_polar(modulus, -pbar * dx / units.hbar)
}

fn pair_normalization(a: &WavePacketSpec, b: &WavePacketSpec, units: Units) -> Result<f64> {
    if (a.sigma0 - b.sigma0).abs() > 1e-12 * a.sigma0 {
        return Err(invalid(
            "packet_b.sigma0",
            format!("cat packets must share a width ({} vs {})", a.sigma0, b.sigma0),
        ));
    }
    Ok((2.0 * (1.0 + packet_overlap(a, b, units).re)).powf(-0.5))
}

/// `𝒩 = {2(1 + Re⟨ψ_a|ψ_b⟩)}^{-1/2}`; for the symmetric configuration the overlap is
/// `exp[-x0²/(2σ₀²) - 2p0²σ₀²/ħ²]`.
pub fn cat_normalization(spec: &CatStateSpec, units: Units) -> Result<f64> {
    pair_normalization(&spec.packet_a, &spec.packet_b, units)
}

/// `φ(p) = (2σ₀²/πħ²)^{1/4} exp[-σ₀²(p-p0)²/ħ² - i p x0/ħ]`.
pub fn gaussian_momentum_amplitude(spec: &WavePacketSpec, p: f64, units: Units) -> Complex64 {
    let h = units.hbar;
    let s2 = spec.sigma0 * spec.sigma0;
    let amp = (2.0 * s2 / (PI * h * h)).powf(0.25) * (-s2 * (p - spec.p0).powi(2) / (h * h)).exp();
    Complex64::from_polar(amp, -p * spec.x0 / h)
}

/// Position amplitude whose Fourier transform is [`gaussian_momentum_amplitude`].
pub fn gaussian_position_amplitude(spec: &WavePacketSpec, x: f64, units: Units) -> Complex64 {
    let s2 = spec.sigma0 * spec.sigma0;
    let d = x - spec.x0;
    let amp = (2.0 * PI * s2).powf(-0.25) * (-d * d / (4.0 * s2)).exp();
    Complex64::from_polar(amp, spec.p0 * d / units.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Packet(WavePacketSpec),
    Cat(CatStateSpec),
}

impl From<WavePacketSpec> for InitialState {
    fn from(spec: WavePacketSpec) -> Self {
        Self::Packet(spec)
    }
}

impl From<CatStateSpec> for InitialState {
    fn from(spec: CatStateSpec) -> Self {
        Self::Cat(spec)
    }
}

impl InitialState {
    pub fn momentum_amplitude(&self, p: f64, units: Units) -> Complex64 {
        match self {
            Self::Packet(s) => gaussian_momentum_amplitude(s, p, units),
            Self::Cat(c) => {
                (gaussian_momentum_amplitude(&c.packet_a, p, units)
                    + gaussian_momentum_amplitude(&c.packet_b, p, units))
                    * c.normalization
            }
        }
    }

    pub fn position_amplitude(&self, x: f64, units: Units) -> Complex64 {
        match self {
            Self::Packet(s) => gaussian_position_amplitude(s, x, units),
            Self::Cat(c) => {
                (gaussian_position_amplitude(&c.packet_a, x, units)
                    + gaussian_position_amplitude(&c.packet_b, x, units))
                    * c.normalization
            }
        }
    }

    fn packets(&self) -> Vec<WavePacketSpec> {
        match self {
            Self::Packet(s) => vec![*s],
            Self::Cat(c) => vec![c.packet_a, c.packet_b],
        }
    }
}

/// Default momentum grid: `p0 ± 10ħ/(2σ₀)` around every packet, 640 points.
///
/// The margin keeps the truncated amplitude (not just the density) near `1e-11`.
pub fn default_momentum_grid(state: &InitialState, units: Units) -> Result<Grid1D> {
    let packets = state.packets();
    let lower = packets
        .iter()
        .map(|s| s.p0 - 10.0 * s.momentum_width(units))
        .fold(f64::INFINITY, f64::min);
    let upper = packets
        .iter()
        .map(|s| s.p0 + 10.0 * s.momentum_width(units))
        .fold(f64::NEG_INFINITY, f64::max);
    Grid1D::new(lower, upper, 640)
}

/// Weights used for traces over a momentum grid.
pub fn momentum_weights(grid: &Grid1D) -> Vec<f64> {
    QuadratureRule::trapezoid(grid.lower(), grid.upper(), grid.len())
        .expect("grid already validated")
        .weights()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// Continuous momentum kernel `ρ(p_i, p_j)` sampled on a grid.
    MomentumGrid(Grid1D),
    /// Discrete energy eigenbasis.
    Eigenbasis { label: String, energies: Vec<f64> },
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Self::MomentumGrid(g) => g.len(),
            Self::Eigenbasis { energies, .. } => energies.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight attached to each index (unity for discrete bases).
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Self::MomentumGrid(g) => momentum_weights(g),
            Self::Eigenbasis { energies, .. } => vec![1.0; energies.len()],
        }
    }

    /// Energy of each basis index for a free particle or a discrete spectrum.
    pub fn energies(&self, units: Units) -> Vec<f64> {
        match self {
            Self::MomentumGrid(g) => g.iter().map(|p| p * p / (2.0 * units.mass)).collect(),
            Self::Eigenbasis { energies, .. } => energies.clone(),
        }
    }
}

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: Basis,
    entries: CMatrix,
    units: Units,
    warnings: Vec<String>,
}

impl DensityMatrix {
    /// Validates dimensions, Hermiticity and unit trace.
    pub fn new(basis: Basis, entries: CMatrix, units: Units) -> Result<Self> {
        let rho = Self {
            basis,
            entries,
            units,
            warnings: Vec::new(),
        };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(basis: Basis, entries: CMatrix, units: Units, warnings: Vec<String>) -> Self {
        Self {
            basis,
            entries,
            units,
            warnings,
        }
    }

    /// Same basis and metadata, new entries.
    pub(crate) fn with_entries(&self, entries: CMatrix) -> Self {
        Self {
            basis: self.basis.clone(),
            entries,
            units: self.units,
            warnings: self.warnings.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.basis.len();
        if self.entries.nrows() != n || self.entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.entries.nrows().max(self.entries.ncols()),
            });
        }
        let herm = self.hermiticity_error();
        if herm > HERMITICITY_TOL * self.scale() {
            return Err(Error::InvariantViolation(format!(
                "density matrix not Hermitian (max deviation {herm:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvariantViolation(format!("trace {tr} differs from 1")));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }

    /// Pure state `|φ⟩⟨φ|` sampled on a momentum grid, renormalized to unit trace.
    pub fn pure_momentum(amplitudes: &[Complex64], grid: Grid1D, units: Units) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: amplitudes.len(),
            });
        }
        let w = momentum_weights(&grid);
        let norm: f64 = amplitudes.iter().zip(&w).map(|(a, wi)| a.norm_sqr() * wi).sum();
        let mut warnings = Vec::new();
        if (1.0 - norm).abs() > 1e-4 {
            warnings.push(format!("momentum grid captures {norm:.6} of the norm"));
        }
        let scale = 1.0 / norm.sqrt();
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a * scale).collect();
        let entries = outer(&v, &v);
        Ok(Self::from_parts(Basis::MomentumGrid(grid), entries, units, warnings))
    }

    /// Pure state `Σ C_E |E⟩` in a discrete basis, renormalized when the coefficients are truncated.
    pub fn pure_eigenbasis(coefficients: &CoefficientVector, energies: Vec<f64>, units: Units) -> Result<Self> {
        if coefficients.values.len() != energies.len() {
            return Err(Error::DimensionMismatch {
                expected: energies.len(),
                found: coefficients.values.len(),
            });
        }
        let cov = coefficients.coverage();
        if cov <= 0.0 {
            return Err(invalid("coefficients", "all coefficients vanish"));
        }
        let scale = 1.0 / cov.sqrt();
        let v: Vec<Complex64> = coefficients.values.iter().map(|c| c * scale).collect();
        let basis = Basis::Eigenbasis {
            label: coefficients.label.clone(),
            energies,
        };
        Ok(Self::from_parts(
            basis,
            outer(&v, &v),
            units,
            coefficients.warnings.clone(),
        ))
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }

    pub fn momentum_grid(&self) -> Result<&Grid1D> {
        match &self.basis {
            Basis::MomentumGrid(g) => Ok(g),
            Basis::Eigenbasis { label, .. } => Err(Error::BasisMismatch(format!(
                "expected a momentum-grid density, got eigenbasis `{label}`"
            ))),
        }
    }

    pub fn eigen_energies(&self) -> Result<&[f64]> {
        match &self.basis {
            Basis::Eigenbasis { energies, .. } => Ok(energies),
            Basis::MomentumGrid(_) => Err(Error::BasisMismatch(
                "expected an eigenbasis density, got a momentum grid".into(),
            )),
        }
    }

    /// Grid-weighted for momentum grids.
    pub fn trace(&self) -> f64 {
        let w = self.basis.weights();
        (0..self.dim()).map(|i| self.entries[(i, i)].re * w[i]).sum()
    }

    /// `tr ρ²` with basis-appropriate weights.
    pub fn purity(&self) -> f64 {
        let w = self.basis.weights();
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += self.entries[(i, j)].norm_sqr() * w[i] * w[j];
            }
        }
        acc
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.entries.nrows().min(self.entries.ncols());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Weighted matrix `W^{1/2} ρ W^{1/2}`, whose spectrum is that of the operator.
    pub fn operator_matrix(&self) -> CMatrix {
        let w: Vec<f64> = self.basis.weights().iter().map(|w| w.sqrt()).collect();
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] * (w[i] * w[j]))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.operator_matrix();
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn outer(a: &[Complex64], b: &[Complex64]) -> CMatrix {
    DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// `ρ(p, p′, 0) = φ(p) conj(φ(p′))` on `grid`.
pub fn initial_density_momentum(state: &InitialState, grid: Grid1D, units: Units) -> Result<DensityMatrix> {
    let amps: Vec<Complex64> = grid.iter().map(|p| state.momentum_amplitude(p, units)).collect();
    let w = momentum_weights(&grid);
    let captured: f64 = amps.iter().zip(&w).map(|(a, wi)| a.norm_sqr() * wi).sum();
    let mut rho = DensityMatrix::pure_momentum(&amps, grid, units)?;
    rho.warnings.clear();
    if captured < 0.9999 {
        rho.push_warning(format!(
            "momentum grid [{}, {}] covers only {captured:.6} of the norm",
            grid.lower(),
            grid.upper()
        ));
    }
    Ok(rho)
}

/// Expansion coefficients of a state in a discrete basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub label: String,
    pub values: Vec<Complex64>,
    pub warnings: Vec<String>,
}

impl CoefficientVector {
    pub fn new(label: impl Into<String>, values: Vec<Complex64>) -> Self {
        Self {
            label: label.into(),
            values,
            warnings: Vec::new(),
        }
    }

    /// `Σ |C_E|²`.
    pub fn coverage(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Norm captured by the first `n` coefficients.
    pub fn partial_coverage(&self, n: usize) -> f64 {
        self.values.iter().take(n).map(|c| c.norm_sqr()).sum()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }
}

pub const DEFAULT_COVERAGE_THRESHOLD: f64 = 0.999;

/// `C_E = ∫ conj(u_E(x)) ψ₀(x) dx` over `rule`.
pub fn project_onto_basis<F, B>(psi0: F, basis: &B, rule: &QuadratureRule) -> Result<CoefficientVector>
where
    F: Fn(f64) -> Complex64,
    B: SpectralBasis + ?Sized,
{
    let nodes = rule.nodes();
    let weights = rule.weights();
    let psi: Vec<Complex64> = nodes.iter().map(|&x| psi0(x)).collect();
    if let Some(i) = psi.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFiniteSample { index: i, x: nodes[i] });
    }
    let values = (0..basis.len())
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((x, w), p) in nodes.iter().zip(&weights).zip(&psi) {
                acc += basis.eigenfunction(n, *x)?.conj() * p * w;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cv = CoefficientVector::new(basis.label(), values);
    let cov = cv.coverage();
    if cov > 1.0 + 1e-6 {
        return Err(Error::InvariantViolation(format!(
            "coefficient norm {cov} exceeds one; basis not orthonormal on the rule"
        )));
    }
    if cov < DEFAULT_COVERAGE_THRESHOLD {
        cv.warnings
            .push(format!("basis `{}` covers only {cov:.6} of the norm", basis.label()));
    }
    Ok(cv)
}
