use crate::error::{Error, Result};

/// Uniform 1-D spatial grid.
///
/// Spacing is `dx = (x_max - x_min) / (n_points - 1)`; the outermost points
/// carry the hard-zero boundary condition, so the five-point stencil needs at
/// least 7 points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "bad extent [{x_min}, {x_max}]"
            )));
        }
        if n_points < 7 {
            return Err(Error::InvalidGrid(format!(
                "need at least 7 points, got {n_points}"
            )));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    /// Grid centered at `center` with the given half-width, spacing snapped so
    /// that `dx` divides the span exactly.
    pub fn centered(center: f64, half_width: f64, dx: f64) -> Result<Self> {
        if !(half_width > 0.0 && dx > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "bad half_width {half_width} or dx {dx}"
            )));
        }
        let half_cells = (half_width / dx).ceil() as usize;
        let n = 2 * half_cells + 1;
        Grid::new(center - half_cells as f64 * dx, center + half_cells as f64 * dx, n.max(7))
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    /// Index of the grid point nearest to `x`, clamped to range.
    pub fn nearest_index(&self, x: f64) -> usize {
        let j = ((x - self.x_min) / self.dx()).round();
        (j.max(0.0) as usize).min(self.n_points - 1)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_is_uniform() {
        let g = Grid::new(-10.0, 10.0, 2001).unwrap();
        assert!((g.dx() - 0.01).abs() < 1e-15);
        assert!((g.x(2000) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(Grid::new(0.0, 1.0, 6).is_err());
        assert!(Grid::new(1.0, 0.0, 100).is_err());
    }

    #[test]
    fn centered_snaps_to_spacing() {
        let g = Grid::centered(3.0, 5.0, 0.4).unwrap();
        assert!(g.x_min() <= -2.0 + 1e-12 && g.x_max() >= 8.0 - 1e-12);
        let k = ((g.x_max() - g.x_min()) / 0.4).round();
        assert!(((g.x_max() - g.x_min()) - k * 0.4).abs() < 1e-12);
        assert!((g.dx() - 0.4).abs() < 1e-12);
    }
}
