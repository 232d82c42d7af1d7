use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Gaussian initial-condition descriptor: center, position spread, mean momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub center: f64,
    pub sigma: f64,
    pub momentum: f64,
}

impl GaussianState {
    pub fn new(center: f64, sigma: f64, momentum: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        Ok(GaussianState { center, sigma, momentum })
    }
}

/// Complex amplitudes sampled on a uniform grid.
///
/// The two outermost amplitudes are pinned to zero (square-integrability /
/// hard-wall convention); every constructor and stepper maintains that.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl WaveFunction {
    pub fn new(grid: Grid, mut amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        let n = amplitudes.len();
        amplitudes[0] = Complex64::ZERO;
        amplitudes[n - 1] = Complex64::ZERO;
        Ok(WaveFunction { grid, amplitudes, time })
    }

    pub fn from_fn(grid: Grid, time: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let amps = grid.points().map(f).collect();
        WaveFunction::new(grid, amps, time).expect("length matches by construction")
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    #[inline]
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn advance_time(&mut self, dt: f64) {
        self.time += dt;
    }

    /// L2 norm squared by the trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        let dx = self.grid.dx();
        // boundary amplitudes are zero, so the trapezoid endpoint weights drop out
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n;
            for a in &mut self.amplitudes {
                *a *= s;
            }
        }
    }

    /// Probability carried by grid points with `x > x_cut`.
    pub fn probability_beyond(&self, x_cut: f64) -> f64 {
        let dx = self.grid.dx();
        self.grid
            .points()
            .zip(&self.amplitudes)
            .filter(|(x, _)| *x > x_cut)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            * dx
    }

    /// Probability in the outer `frac` of the box on each side combined.
    pub fn tail_probability(&self, frac: f64) -> f64 {
        let n = self.grid.n_points();
        let k = ((n as f64) * frac).ceil() as usize;
        let k = k.clamp(1, n / 2);
        let dx = self.grid.dx();
        let left: f64 = self.amplitudes[..k].iter().map(|a| a.norm_sqr()).sum();
        let right: f64 = self.amplitudes[n - k..].iter().map(|a| a.norm_sqr()).sum();
        (left + right) * dx
    }

    /// Cubic (4-point Lagrange) interpolation of the amplitude at `x`.
    /// Points outside the grid evaluate to zero.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let g = &self.grid;
        if !g.contains(x) {
            return Complex64::ZERO;
        }
        let dx = g.dx();
        let s = (x - g.x_min()) / dx;
        let n = g.n_points();
        // pick the 4-point window [j0, j0+3] around x
        let j = s.floor() as isize;
        let j0 = (j - 1).clamp(0, n as isize - 4) as usize;
        let t = s - j0 as f64;
        let mut sum = Complex64::ZERO;
        for (k, &a) in self.amplitudes[j0..j0 + 4].iter().enumerate() {
            let mut w = 1.0;
            for m in 0..4 {
                if m != k {
                    w *= (t - m as f64) / (k as f64 - m as f64);
                }
            }
            sum += a * w;
        }
        sum
    }
}

/// Discretize a Gaussian wave packet:
/// `psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2 / 4 sigma^2 + i p0 (x-x0) / hbar)`.
///
/// Requires the +/-7 sigma window to sit inside the grid so the boundary-zero
/// convention costs no norm.
pub fn make_gaussian(grid: &Grid, g: &GaussianState, hbar: f64) -> Result<WaveFunction> {
    let lo = g.center - 7.0 * g.sigma;
    let hi = g.center + 7.0 * g.sigma;
    if lo < grid.x_min() || hi > grid.x_max() {
        return Err(Error::GridTooNarrow {
            x_min: grid.x_min(),
            x_max: grid.x_max(),
            lo,
            hi,
        });
    }
    let norm = (2.0 * std::f64::consts::PI * g.sigma * g.sigma).powf(-0.25);
    let inv_4s2 = 1.0 / (4.0 * g.sigma * g.sigma);
    let k = g.momentum / hbar;
    Ok(WaveFunction::from_fn(grid.clone(), 0.0, |x| {
        let d = x - g.center;
        let envelope = norm * (-d * d * inv_4s2).exp();
        Complex64::from_polar(envelope, k * d)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_normalized() {
        let grid = Grid::new(-16.0, 16.0, 801).unwrap();
        let g = GaussianState::new(0.0, 1.0, 0.0).unwrap();
        let psi = make_gaussian(&grid, &g, 1.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-6, "norm = {}", psi.norm());
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let grid = Grid::new(-5.0, 5.0, 101).unwrap();
        let g = GaussianState::new(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            make_gaussian(&grid, &g, 1.0),
            Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn interpolation_reproduces_smooth_profile() {
        let grid = Grid::new(-16.0, 16.0, 641).unwrap();
        let g = GaussianState::new(0.5, 1.3, 0.7).unwrap();
        let psi = make_gaussian(&grid, &g, 1.0).unwrap();
        // compare at off-lattice points against the closed form
        let norm = (2.0 * std::f64::consts::PI * 1.3f64 * 1.3).powf(-0.25);
        for &x in &[-2.03, -0.311, 0.517, 1.93, 3.007] {
            let d: f64 = x - 0.5;
            let exact = Complex64::from_polar(
                norm * (-d * d / (4.0 * 1.3 * 1.3)).exp(),
                0.7 * d,
            );
            let got = psi.interpolate(x);
            assert!((got - exact).norm() < 5e-6, "at {x}: {got} vs {exact}");
        }
        assert_eq!(psi.interpolate(100.0), Complex64::ZERO);
    }

    #[test]
    fn boundary_amplitudes_are_zeroed() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 11];
        let psi = WaveFunction::new(grid, ones, 0.0).unwrap();
        assert_eq!(psi.amplitudes()[0], Complex64::ZERO);
        assert_eq!(psi.amplitudes()[10], Complex64::ZERO);
    }
}
