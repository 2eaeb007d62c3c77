use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const HERMITE_MAX_ORDER: usize = 64;

/// Normalized oscillator eigenfunction `h_n(xi)` in dimensionless units.
pub fn hermite_function(n: usize, xi: f64) -> Result<f64> {
    hermite_functions(n, xi).map(|v| v[n])
}

/// `h_0(xi) ..= h_n(xi)` by the stable three-term recurrence.
pub fn hermite_functions(n: usize, xi: f64) -> Result<Vec<f64>> {
    if n > HERMITE_MAX_ORDER {
        return Err(crate::error::invalid(
            "n",
            format!("Hermite order must be <= {HERMITE_MAX_ORDER}, got {n}"),
        ));
    }
    let mut out = Vec::with_capacity(n + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    out.push(h0);
    if n >= 1 {
        out.push(2f64.sqrt() * xi * h0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::HermiteOverflow { n, xi });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_1d, QuadratureRule};
    use num_complex::Complex64;

    #[test]
    fn ground_state_and_parity() {
        assert!((hermite_function(0, 0.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0).unwrap(), 0.0);
        assert!((hermite_function(3, 0.7).unwrap() + hermite_function(3, -0.7).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn h2_h3_orthogonal() {
        let rule = QuadratureRule::simpson(-10.0, 10.0, 2001).unwrap();
        let v = integrate_1d(
            |x| Complex64::new(hermite_function(2, x).unwrap() * hermite_function(3, x).unwrap(), 0.0),
            &rule,
        )
        .unwrap();
        assert!(v.norm() < 1e-8);
    }

    #[test]
    fn gram_matrix_is_identity() {
        let rule = QuadratureRule::simpson(-12.0, 12.0, 2401).unwrap();
        let w = rule.weights();
        let samples: Vec<Vec<f64>> = rule
            .nodes()
            .iter()
            .map(|&x| hermite_functions(10, x).unwrap())
            .collect();
        for n in 0..=10 {
            for m in 0..=10 {
                let g: f64 = samples.iter().zip(&w).map(|(s, wi)| s[n] * s[m] * wi).sum();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-7, "G[{n}][{m}] = {g}");
            }
        }
    }

    #[test]
    fn order_bound() {
        assert!(hermite_function(65, 0.0).is_err());
        assert!(hermite_function(64, 3.0).unwrap().is_finite());
    }
}
