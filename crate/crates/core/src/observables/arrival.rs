use super::{current_series, ArrivalStats};
use crate::error::{invalid, Error, Result};
use crate::evolution::MilburnParams;
use crate::numerics::{Grid1D, QuadratureRule};
use crate::states::{default_momentum_grid, gaussian_momentum_amplitude, initial_density_momentum, WavePacketSpec};
use crate::Units;

/// Above this fraction of negative flux the arrival density falls back to `|J|`.
const SIGN_FALLBACK: f64 = 1e-3;
/// Above this fraction the current cannot be read as an arrival density at all.
const SIGN_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalOptions {
    pub units: Units,
    /// Simpson nodes on `[0, t_max]`; must be odd.
    pub time_points: usize,
    /// Momentum grid override; defaults to the packet's standard grid.
    pub momentum_grid: Option<Grid1D>,
}

impl Default for ArrivalOptions {
    fn default() -> Self {
        Self {
            units: Units::default(),
            time_points: 4001,
            momentum_grid: None,
        }
    }
}

struct Moments {
    mean: f64,
    variance: f64,
    window: f64,
    violation: f64,
    used_modulus: bool,
}

fn window_moments(
    spec: &WavePacketSpec,
    params: &MilburnParams,
    detector_x: f64,
    rule: &QuadratureRule,
    options: &ArrivalOptions,
) -> Result<Moments> {
    let state = (*spec).into();
    let grid = match options.momentum_grid {
        Some(g) => g,
        None => default_momentum_grid(&state, options.units)?,
    };
    let rho0 = initial_density_momentum(&state, grid, options.units)?;
    let times = rule.nodes();
    let j = current_series(&rho0, detector_x, &times, params)?.values;
    let (pi, violation, used_modulus) = arrival_density(j, rule)?;
    let window = rule.apply_real(&pi)?;
    let first: Vec<f64> = pi.iter().zip(&times).map(|(v, t)| v * t).collect();
    let second: Vec<f64> = pi.iter().zip(&times).map(|(v, t)| v * t * t).collect();
    let mean = rule.apply_real(&first)? / window;
    let variance = rule.apply_real(&second)? / window - mean * mean;
    Ok(Moments {
        mean,
        variance,
        window,
        violation,
        used_modulus,
    })
}

/// `Π = J`, or `|J|` once the negative-flux fraction reaches `1e-3`; an error past `0.05`.
fn arrival_density(j: Vec<f64>, rule: &QuadratureRule) -> Result<(Vec<f64>, f64, bool)> {
    let negative: Vec<f64> = j.iter().map(|v| (-v).max(0.0)).collect();
    let modulus: Vec<f64> = j.iter().map(|v| v.abs()).collect();
    let violation = rule.apply_real(&negative)? / rule.apply_real(&modulus)?;
    if violation > SIGN_LIMIT {
        return Err(Error::SignViolation(violation));
    }
    let used_modulus = violation >= SIGN_FALLBACK;
    Ok((if used_modulus { modulus } else { j }, violation, used_modulus))
}

/// Momentum mass on `(0, p_t)`: particles that reach the detector only after `t_max`.
fn late_arrival_mass(spec: &WavePacketSpec, p_t: f64, units: Units) -> Result<f64> {
    if p_t <= 0.0 {
        return Ok(0.0);
    }
    let rule = QuadratureRule::simpson(0.0, p_t, 2001)?;
    rule.apply_real(
        &rule
            .nodes()
            .iter()
            .map(|&p| gaussian_momentum_amplitude(spec, p, units).norm_sqr())
            .collect::<Vec<_>>(),
    )
}

/// Arrival-time moments at `detector_x` from the probability current on `[0, t_max]`.
///
/// Moments are normalized on the window. The normalization adds the mass of momenta too slow
/// to arrive within it. For `γ⁻¹ > 0` the unitary moments and the first-order predictions
/// `⟨t⟩_q + γ⁻¹/2` and `(Δt)²_q + 2⟨t⟩_q γ⁻¹` are attached.
pub fn arrival_statistics(
    spec: &WavePacketSpec,
    params: &MilburnParams,
    detector_x: f64,
    t_max: f64,
    options: &ArrivalOptions,
) -> Result<ArrivalStats> {
    if detector_x <= spec.x0 || spec.p0 <= 0.0 {
        return Err(invalid(
            "detector_x",
            format!(
                "packet at x0 = {} with p0 = {} must move toward a detector on its right, got {detector_x}",
                spec.x0, spec.p0
            ),
        ));
    }
    if !(t_max > 0.0) {
        return Err(invalid("t_max", format!("must be positive, got {t_max}")));
    }
    let rule = QuadratureRule::simpson(0.0, t_max, options.time_points)?;
    let m = window_moments(spec, params, detector_x, &rule, options)?;
    let p_t = options.units.mass * (detector_x - spec.x0) / t_max;
    let tail_mass = late_arrival_mass(spec, p_t, options.units)?;
    let mut warnings = Vec::new();
    if m.used_modulus {
        warnings.push(format!(
            "current changes sign (violation {:.3e}); using |J|",
            m.violation
        ));
    }
    if tail_mass > 1e-3 {
        warnings.push(format!("{tail_mass:.3e} of the norm arrives after t_max = {t_max}"));
    }
    let (quantum_reference, predicted_mean, predicted_variance) = if params.gamma_inv > 0.0 {
        let unitary = MilburnParams {
            gamma_inv: 0.0,
            ..*params
        };
        let q = window_moments(spec, &unitary, detector_x, &rule, options)?;
        (
            Some((q.mean, q.variance)),
            Some(q.mean + 0.5 * params.gamma_inv),
            Some(q.variance + 2.0 * q.mean * params.gamma_inv),
        )
    } else {
        (None, None, None)
    };
    Ok(ArrivalStats {
        mean_t: m.mean,
        variance_t: m.variance.max(0.0),
        normalization: m.window + tail_mass,
        window_normalization: m.window,
        tail_mass,
        detector_x,
        current_sign_violation: m.violation,
        used_modulus: m.used_modulus,
        quantum_reference,
        predicted_mean,
        predicted_variance,
        warnings,
    })
}
