use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SpectralBasis;
use crate::error::{invalid, Result};
use crate::numerics::{airy_ai, airy_ai_prime, airy_roots, Grid1D, QuadratureKind, QuadratureRule, AIRY_WINDOW};
use crate::Units;

/// Offset past the deepest retained root at which every `u_n` is below `1e-12` in Airy units.
const CUTOFF_OFFSET: f64 = 12.0;

/// Particle above a hard floor at `z = 0` in a uniform field `g`.
#[derive(Debug, Clone)]
pub struct BouncerBasis {
    pub alpha: f64,
    pub roots: Vec<f64>,
    pub energies: Vec<f64>,
    pub n_max: usize,
    pub g: f64,
    pub units: Units,
    derivative_at_root: Vec<f64>,
}

pub fn build_bouncer_basis(n_max: usize, g: f64, units: Units) -> Result<BouncerBasis> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(invalid("g", format!("must be positive, got {g}")));
    }
    let roots = airy_roots(n_max)?;
    let (h, m) = (units.hbar, units.mass);
    let alpha = (2.0 * m * m * g / (h * h)).cbrt();
    let energy_unit = (m * g * g * h * h / 2.0).cbrt();
    let energies = roots.iter().map(|r| -r * energy_unit).collect();
    let derivative_at_root = roots.iter().map(|&r| airy_ai_prime(r)).collect::<Result<_>>()?;
    Ok(BouncerBasis {
        alpha,
        roots,
        energies,
        n_max,
        g,
        units,
        derivative_at_root,
    })
}

impl BouncerBasis {
    /// Units with `ħ = 1`, `m = 1/2`, `g = 2`, for which `α = 1` and the energy and time
    /// units are one.
    pub fn natural(n_max: usize) -> Result<Self> {
        build_bouncer_basis(n_max, 2.0, Units { hbar: 1.0, mass: 0.5 })
    }

    pub fn energy_unit(&self) -> f64 {
        (self.units.mass * self.g * self.g * self.units.hbar * self.units.hbar / 2.0).cbrt()
    }

    pub fn time_unit(&self) -> f64 {
        (2.0 * self.units.hbar / (self.units.mass * self.g * self.g)).cbrt()
    }

    pub fn z_cut(&self) -> f64 {
        (-self.roots[self.n_max - 1] + CUTOFF_OFFSET) / self.alpha
    }

    /// `u_n(z) = √α Ai(αz + R_n)/Ai′(R_n)` for `z > 0`, zero otherwise.
    pub fn value(&self, n: usize, z: f64) -> Result<f64> {
        if z <= 0.0 {
            return Ok(0.0);
        }
        let arg = self.alpha * z + self.roots[n];
        if arg > AIRY_WINDOW {
            return Ok(0.0);
        }
        Ok(self.alpha.sqrt() * airy_ai(arg)? / self.derivative_at_root[n])
    }

    /// Simpson rule over `[0, z_cut]` resolving the fastest oscillation.
    pub fn rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::new(
            QuadratureKind::Simpson,
            Grid1D::with_max_spacing(0.0, self.z_cut(), 0.01 / self.alpha)?,
        )
    }

    /// `⟨u_n|z|u_n⟩` in closed form.
    pub fn mean_position(&self, n: usize) -> f64 {
        -2.0 * self.roots[n] / (3.0 * self.alpha)
    }

    /// Samples of every basis function on the rule's nodes, one row per state.
    pub fn sample(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.n_max, nodes.len());
        for (j, &z) in nodes.iter().enumerate() {
            for n in 0..self.n_max {
                out[(n, j)] = self.value(n, z)?;
            }
        }
        Ok(out)
    }
}

impl SpectralBasis for BouncerBasis {
    fn label(&self) -> String {
        format!("bouncer(n_max={})", self.n_max)
    }

    fn len(&self) -> usize {
        self.n_max
    }

    fn energies(&self) -> Vec<f64> {
        self.energies.clone()
    }

    fn eigenfunction(&self, n: usize, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.value(n, x)?, 0.0))
    }
}

#[derive(Debug, Clone)]
pub struct PositionMatrix {
    pub elements: DMatrix<f64>,
    /// Largest `∫_{z_cut}^∞ u_n² dz` over the basis.
    pub tail_mass: f64,
    pub warnings: Vec<String>,
}

/// `z_nm = ∫ u_n z u_m dz` on `[0, z_cut]`.
pub fn bouncer_position_matrix(basis: &BouncerBasis) -> Result<PositionMatrix> {
    let rule = basis.rule()?;
    let nodes = rule.nodes();
    let w = rule.weights();
    let u = basis.sample(&nodes)?;
    let n = basis.n_max;
    let zw = DMatrix::from_fn(nodes.len(), n, |j, m| u[(m, j)] * nodes[j] * w[j]);
    let elements = &u * zw;

    let cut = basis.z_cut();
    let tail_rule = QuadratureRule::simpson(cut, cut + 10.0 / basis.alpha, 201)?;
    let tail_w = tail_rule.weights();
    let mut tail_mass: f64 = 0.0;
    for k in 0..n {
        let m: f64 = tail_rule
            .nodes()
            .iter()
            .zip(&tail_w)
            .map(|(z, wi)| basis.value(k, *z).map(|v| v * v * wi))
            .sum::<Result<f64>>()?;
        tail_mass = tail_mass.max(m);
    }
    let mut warnings = Vec::new();
    if tail_mass > 1e-8 {
        warnings.push(format!("bouncer tail mass beyond z_cut = {cut} is {tail_mass:.3e}"));
    }
    Ok(PositionMatrix {
        elements,
        tail_mass,
        warnings,
    })
}
