use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SpectralBasis;
use crate::error::{invalid, Result};
use crate::numerics::{hermite_function, HERMITE_MAX_ORDER};
use crate::{CMatrix, Units};

/// Lowest `n_max` oscillator states with ladder-operator matrices.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub omega: f64,
    pub n_max: usize,
    pub units: Units,
    pub energies: Vec<f64>,
    pub x_elements: DMatrix<f64>,
    pub p_elements: CMatrix,
}

pub fn build_harmonic_basis(omega: f64, n_max: usize, units: Units) -> Result<HarmonicBasis> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(invalid("omega", format!("must be positive, got {omega}")));
    }
    if n_max == 0 || n_max > HERMITE_MAX_ORDER + 1 {
        return Err(invalid(
            "n_max",
            format!("must lie in 1..={}, got {n_max}", HERMITE_MAX_ORDER + 1),
        ));
    }
    let (h, m) = (units.hbar, units.mass);
    let energies = (0..n_max).map(|n| h * omega * (n as f64 + 0.5)).collect();
    let xs = (h / (2.0 * m * omega)).sqrt();
    let ps = (m * h * omega / 2.0).sqrt();
    let mut x = DMatrix::zeros(n_max, n_max);
    let mut p = CMatrix::zeros(n_max, n_max);
    for n in 0..n_max.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        x[(n, n + 1)] = s * xs;
        x[(n + 1, n)] = s * xs;
        p[(n, n + 1)] = Complex64::new(0.0, -s * ps);
        p[(n + 1, n)] = Complex64::new(0.0, s * ps);
    }
    Ok(HarmonicBasis {
        omega,
        n_max,
        units,
        energies,
        x_elements: x,
        p_elements: p,
    })
}

impl HarmonicBasis {
    pub fn x_matrix(&self) -> CMatrix {
        self.x_elements.map(|v| Complex64::new(v, 0.0))
    }

    pub fn hamiltonian(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.n_max,
            self.energies.iter().map(|&e| Complex64::new(e, 0.0)),
        ))
    }
}

impl SpectralBasis for HarmonicBasis {
    fn label(&self) -> String {
        format!("harmonic(omega={})", self.omega)
    }

    fn len(&self) -> usize {
        self.n_max
    }

    fn energies(&self) -> Vec<f64> {
        self.energies.clone()
    }

    fn eigenfunction(&self, n: usize, x: f64) -> Result<Complex64> {
        let k = self.units.mass * self.omega / self.units.hbar;
        Ok(Complex64::new(k.powf(0.25) * hermite_function(n, x * k.sqrt())?, 0.0))
    }
}
