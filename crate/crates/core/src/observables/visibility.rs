use num_complex::Complex64;

use super::density::kernel_position_values;
use crate::error::Result;
use crate::evolution::{evolve_free_kernel, MilburnParams};
use crate::numerics::Grid1D;
use crate::states::{gaussian_momentum_amplitude, outer, CatStateSpec, WavePacketSpec};
use crate::Units;

const UNDEFINED_BELOW: f64 = 1e-14;

/// The three pieces of a freely evolved cat density: `P = N²(P_aa + P_bb + 2 Re P_ab)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatComponents {
    pub xs: Vec<f64>,
    pub p_aa: Vec<f64>,
    pub p_bb: Vec<f64>,
    pub p_ab: Vec<Complex64>,
}

/// Evolves `|a⟩⟨a|`, `|b⟩⟨b|` and `|a⟩⟨b|` separately to time `t` and synthesizes them at `xs`.
pub fn cat_component_densities(
    cat: &CatStateSpec,
    grid: &Grid1D,
    xs: &[f64],
    t: f64,
    params: &MilburnParams,
    units: Units,
) -> Result<CatComponents> {
    let p = grid.points();
    let amps = |s: &WavePacketSpec| -> Vec<Complex64> {
        p.iter().map(|&q| gaussian_momentum_amplitude(s, q, units)).collect()
    };
    let (a, b) = (amps(&cat.packet_a), amps(&cat.packet_b));
    let piece = |u: &[Complex64], v: &[Complex64]| -> Result<Vec<Complex64>> {
        let k = evolve_free_kernel(&outer(u, v), &p, units.mass, t, params)?;
        kernel_position_values(&k, grid, xs, units.hbar)
    };
    Ok(CatComponents {
        xs: xs.to_vec(),
        p_aa: piece(&a, &a)?.iter().map(|z| z.re).collect(),
        p_bb: piece(&b, &b)?.iter().map(|z| z.re).collect(),
        p_ab: piece(&a, &b)?,
    })
}

/// `|P_ab| / √(P_aa P_bb)` at every sample where both densities exceed `1e-14`.
pub fn visibility(parts: &CatComponents) -> Vec<(f64, f64)> {
    (0..parts.xs.len())
        .filter(|&i| parts.p_aa[i] > UNDEFINED_BELOW && parts.p_bb[i] > UNDEFINED_BELOW)
        .map(|i| {
            (
                parts.xs[i],
                parts.p_ab[i].norm() / (parts.p_aa[i] * parts.p_bb[i]).sqrt(),
            )
        })
        .collect()
}

/// Visibility at a single `x` and time `t0`; `None` where it is undefined.
pub fn visibility_at(
    cat: &CatStateSpec,
    grid: &Grid1D,
    x: f64,
    t0: f64,
    params: &MilburnParams,
    units: Units,
) -> Result<Option<f64>> {
    let parts = cat_component_densities(cat, grid, &[x], t0, params, units)?;
    Ok(visibility(&parts).first().map(|(_, v)| *v))
}
