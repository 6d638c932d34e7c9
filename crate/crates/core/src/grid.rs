use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of grid points.
pub const MIN_POINTS: usize = 16;

/// Uniform grid on `[x_min, x_max]` with `0 < x_min < x_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min <= 0.0 || x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "need 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "grid too small: {n} points (minimum {MIN_POINTS})"
            )));
        }
        Ok(Grid { x_min, x_max, n })
    }

    /// Grid starting at `x_min = h` that ends exactly at `x_max`.
    pub fn with_spacing(h: f64, x_max: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {h}"
            )));
        }
        let n = (x_max / h).round() as usize;
        Grid::new(x_max / n as f64, x_max, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Composite trapezoidal rule over the grid samples.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        let inner: f64 = values[1..self.n - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (values[0] + values[self.n - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds_and_sizes() {
        assert!(Grid::new(0.0, 1.0, 32).is_err());
        assert!(Grid::new(2.0, 1.0, 32).is_err());
        assert!(Grid::new(0.1, 1.0, 8).is_err());
        assert!(Grid::new(0.1, 1.0, 16).is_ok());
    }

    #[test]
    fn nodes_are_uniform_and_end_exactly() {
        let g = Grid::new(1e-3, 8.0, 8001).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes[0], 1e-3);
        assert_eq!(*nodes.last().unwrap(), 8.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        assert!((g.spacing() - 7.999 / 8000.0).abs() < 1e-16);
    }

    #[test]
    fn spacing_constructor() {
        let g = Grid::with_spacing(1e-3, 8.0).unwrap();
        assert_eq!(g.len(), 8000);
        assert!((g.spacing() - 1e-3).abs() < 1e-15);
        assert!((g.x_min() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_is_exact_for_linear_functions() {
        let g = Grid::new(1.0, 3.0, 17).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((g.trapezoid(&vals) - 10.0).abs() < 1e-13);
    }
}
