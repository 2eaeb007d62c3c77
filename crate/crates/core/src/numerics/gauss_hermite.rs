use nalgebra::DMatrix;

use crate::error::{invalid, Result};

/// Gauss-Hermite nodes and weights for `∫ e^{-x²} f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes and probability weights for `E[f(X)]`, `X ~ N(mean, std²)`.
    pub fn normal_expectation(&self, mean: f64, std: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let norm = std::f64::consts::PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mean + std::f64::consts::SQRT_2 * std * x, w / norm))
    }
}

/// Golub-Welsch construction from the Jacobi matrix of the Hermite recurrence.
pub fn gauss_hermite(n: usize) -> Result<GaussHermite> {
    if n == 0 || n > 200 {
        return Err(invalid("n", format!("node count must lie in 1..=200, got {n}")));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(GaussHermite {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_moments_and_characteristic_function() {
        let gh = gauss_hermite(40).unwrap();
        let total: f64 = gh.weights.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // E[cos(w X)] for X ~ N(0, s²) is exp(-w² s² / 2)
        let (w, s) = (2.5, 0.7);
        let e: f64 = gh.normal_expectation(0.0, s).map(|(x, p)| p * (w * x).cos()).sum();
        assert!((e - (-w * w * s * s / 2.0).exp()).abs() < 1e-13);
        let m2: f64 = gh.normal_expectation(1.0, s).map(|(x, p)| p * x * x).sum();
        assert!((m2 - (1.0 + s * s)).abs() < 1e-13);
    }
}
