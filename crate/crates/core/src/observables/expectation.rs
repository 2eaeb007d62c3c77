use num_complex::Complex64;
use rayon::prelude::*;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::CMatrix;

/// `tr(ρ A)` for an operator given in the same basis as `rho`.
pub fn expectation(rho: &DensityMatrix, operator: &CMatrix) -> Result<Complex64> {
    let n = rho.dim();
    if operator.nrows() != n || operator.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: operator.nrows(),
        });
    }
    let m = rho.operator_matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += m[(i, j)] * operator[(j, i)];
        }
    }
    Ok(acc)
}

/// `⟨A⟩(t) = tr(ρ(t) A)` over `times`; fails when the imaginary part exceeds `1e-9`.
pub fn expectation_series<S>(supplier: &S, operator: &CMatrix, times: &[f64]) -> Result<TimeSeries>
where
    S: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    let values = times
        .par_iter()
        .map(|&t| {
            let z = expectation(&supplier(t)?, operator)?;
            if z.im.abs() > 1e-9 * z.re.abs().max(1.0) {
                return Err(Error::NonRealObservable(z.im));
            }
            Ok(z.re)
        })
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new("expectation", times.to_vec(), values)
}
