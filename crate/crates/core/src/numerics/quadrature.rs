use num_complex::Complex64;

use super::Grid1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    Trapezoid,
    Simpson,
}

/// Composite quadrature rule on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    grid: Grid1D,
}

impl QuadratureRule {
    pub fn new(kind: QuadratureKind, grid: Grid1D) -> Result<Self> {
        if kind == QuadratureKind::Simpson && grid.len() % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "Simpson rule requires an odd point count, got {}",
                grid.len()
            )));
        }
        Ok(Self { kind, grid })
    }

    pub fn simpson(lower: f64, upper: f64, count: usize) -> Result<Self> {
        Self::new(QuadratureKind::Simpson, Grid1D::new(lower, upper, count)?)
    }

    pub fn trapezoid(lower: f64, upper: f64, count: usize) -> Result<Self> {
        Self::new(QuadratureKind::Trapezoid, Grid1D::new(lower, upper, count)?)
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn weights(&self) -> Vec<f64> {
        let n = self.grid.len();
        let h = self.grid.spacing();
        match self.kind {
            QuadratureKind::Trapezoid => {
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                w
            }
            QuadratureKind::Simpson => (0..n)
                .map(|i| {
                    let c = if i == 0 || i == n - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    c * h / 3.0
                })
                .collect(),
        }
    }

    /// Weighted sum of pre-computed samples, one per grid node.
    pub fn apply(&self, samples: &[Complex64]) -> Result<Complex64> {
        if samples.len() != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                found: samples.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (s, w)) in samples.iter().zip(self.weights()).enumerate() {
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::NonFiniteSample {
                    index: i,
                    x: self.grid.point(i),
                });
            }
            acc += s * w;
        }
        Ok(acc)
    }

    pub fn apply_real(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                found: samples.len(),
            });
        }
        let mut acc = 0.0;
        for (i, (s, w)) in samples.iter().zip(self.weights()).enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFiniteSample {
                    index: i,
                    x: self.grid.point(i),
                });
            }
            acc += s * w;
        }
        Ok(acc)
    }
}

/// Integrates `f` with the composite rule; rejects any non-finite sample.
pub fn integrate_1d<F>(f: F, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let samples: Vec<Complex64> = rule.grid().iter().map(&f).collect();
    rule.apply(&samples)
}

/// Tensor-product rule: `rule_a` along the first argument, `rule_b` along the second.
pub fn integrate_2d<F>(f: F, rule_a: &QuadratureRule, rule_b: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    let wa = rule_a.weights();
    let wb = rule_b.weights();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, a) in rule_a.grid().iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, b) in rule_b.grid().iter().enumerate() {
            let v = f(a, b);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFiniteSample { index: i, x: a });
            }
            row += v * wb[j];
        }
        acc += row * wa[i];
    }
    Ok(acc)
}
