use crate::error::{invalid, Error, Result};
use crate::Units;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EhrenfestKind {
    Free,
    /// Potential `m g x`.
    Gravity {
        g: f64,
    },
    /// Potential `m ω² x² / 2`.
    Harmonic {
        omega: f64,
    },
}

/// `(⟨x⟩(t), ⟨p⟩(t))` under the first-order map.
///
/// Gravity drifts by `-g γ⁻¹ t/2`; harmonic motion is damped by `e^{-ω² γ⁻¹ t/2}`.
pub fn ehrenfest_closed_forms(
    kind: EhrenfestKind,
    x0: f64,
    p0: f64,
    gamma_inv: f64,
    t: f64,
    units: Units,
) -> Result<(f64, f64)> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if !(gamma_inv >= 0.0) {
        return Err(invalid("gamma_inv", format!("must be non-negative, got {gamma_inv}")));
    }
    let m = units.mass;
    Ok(match kind {
        EhrenfestKind::Free => (x0 + p0 * t / m, p0),
        EhrenfestKind::Gravity { g } => (
            x0 + (p0 / m - 0.5 * g * gamma_inv) * t - 0.5 * g * t * t,
            p0 - m * g * t,
        ),
        EhrenfestKind::Harmonic { omega } => {
            let damp = (-0.5 * omega * omega * gamma_inv * t).exp();
            let (s, c) = (omega * t).sin_cos();
            (
                damp * (x0 * c + p0 / (m * omega) * s),
                damp * (-m * omega * x0 * s + p0 * c),
            )
        }
    })
}

/// Rise of `⟨x⟩` above `x0` at the turning point, `(p0²/2m²g)(1 - m g γ⁻¹/p0)`.
pub fn projectile_peak_height(g: f64, p0: f64, gamma_inv: f64, units: Units) -> Result<f64> {
    let m = units.mass;
    if !(g > 0.0) {
        return Err(invalid("g", format!("must be positive, got {g}")));
    }
    if p0 <= m * g * gamma_inv {
        return Err(invalid(
            "p0",
            format!("peak height requires p0 > m g γ⁻¹ = {}, got {p0}", m * g * gamma_inv),
        ));
    }
    Ok(p0 * p0 / (2.0 * m * m * g) * (1.0 - m * g * gamma_inv / p0))
}
