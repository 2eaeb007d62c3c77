use crate::error::{Error, Result};

/// Uniform grid of `count` points spanning `[lower, upper]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    lower: f64,
    upper: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(lower: f64, upper: f64, count: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{lower}, {upper}]")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("count must be at least 2, got {count}")));
        }
        if upper <= lower {
            return Err(Error::InvalidGrid(format!(
                "upper bound {upper} must exceed lower bound {lower}"
            )));
        }
        Ok(Self { lower, upper, count })
    }

    /// Grid with the given spacing target, rounded up to an odd point count.
    pub fn with_max_spacing(lower: f64, upper: f64, max_spacing: f64) -> Result<Self> {
        if !(max_spacing > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {max_spacing}"
            )));
        }
        let intervals = ((upper - lower) / max_spacing).ceil().max(2.0) as usize;
        let intervals = intervals + intervals % 2;
        Self::new(lower, upper, intervals + 1)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.upper - self.lower) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.upper
        } else {
            self.lower + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(2.0, 1.0, 10).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn points_are_strictly_increasing_and_hit_both_ends() {
        let g = Grid1D::new(-3.0, 7.0, 11).unwrap();
        assert_eq!(g.spacing(), 1.0);
        let pts = g.points();
        assert_eq!(pts[0], -3.0);
        assert_eq!(*pts.last().unwrap(), 7.0);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn max_spacing_gives_odd_count() {
        let g = Grid1D::with_max_spacing(0.0, 1.0, 0.03).unwrap();
        assert_eq!(g.len() % 2, 1);
        assert!(g.spacing() <= 0.03);
    }
}
