use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Observable sampled on an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
    pub metadata: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("series times must be strictly increasing".into()));
        }
        Ok(Self {
            times,
            values,
            label: label.into(),
            metadata: BTreeMap::new(),
            warnings: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.values.last()?))
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// `(max - min)/2` of the values on `[t_lo, t_hi]`.
    pub fn half_range(&self, t_lo: f64, t_hi: f64) -> Option<f64> {
        let window: Vec<f64> = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= t_lo && **t <= t_hi)
            .map(|(_, v)| *v)
            .collect();
        if window.is_empty() {
            return None;
        }
        let max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = window.iter().copied().fold(f64::INFINITY, f64::min);
        Some(0.5 * (max - min))
    }
}

/// Moments of the arrival-time distribution at a detector.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalStats {
    pub mean_t: f64,
    pub variance_t: f64,
    /// Window integral plus the estimated mass arriving after the window.
    pub normalization: f64,
    pub window_normalization: f64,
    pub tail_mass: f64,
    pub detector_x: f64,
    /// `∫|min(J,0)|dt / ∫|J|dt` on the window.
    pub current_sign_violation: f64,
    pub used_modulus: bool,
    /// Unitary moments `(⟨t⟩_q, (Δt)²_q)` when `γ⁻¹ > 0`.
    pub quantum_reference: Option<(f64, f64)>,
    pub predicted_mean: Option<f64>,
    pub predicted_variance: Option<f64>,
    pub warnings: Vec<String>,
}
