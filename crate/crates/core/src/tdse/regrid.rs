//! Dynamic grid reallocation.
//!
//! Long-range collision runs drift across distances that dwarf the packet
//! width. Instead of one gigantic box, the wave packet is re-confined into a
//! fresh window centered on `<x>` whenever its tails approach the boundary.
//! New windows are snapped to the old lattice so the transfer is an exact
//! copy; cubic interpolation (`WaveFunction::interpolate`) remains available
//! for off-lattice resampling needs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::moments::{moments, DerivativeOrder};
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy)]
pub struct RegridPolicy {
    /// Center-to-boundary distance in units of the position spread.
    pub margin_sigmas: f64,
    /// Fraction of the box (each side) probed for tail mass.
    pub outer_frac: f64,
    /// Tail probability that triggers a regrid.
    pub tail_trigger: f64,
    /// Maximum probability that may be discarded by the transfer.
    pub max_discard: f64,
    /// Optional hard clamp on the new window, e.g. a wall the grid must not cross.
    pub max_x: Option<f64>,
    pub min_x: Option<f64>,
}

impl Default for RegridPolicy {
    fn default() -> Self {
        RegridPolicy {
            margin_sigmas: 7.0,
            outer_frac: 0.05,
            tail_trigger: 1e-8,
            max_discard: 1e-6,
            max_x: None,
            min_x: None,
        }
    }
}

pub enum RegridOutcome {
    /// Tails are still comfortably inside; input returned untouched.
    NoChange(WaveFunction),
    Regridded(WaveFunction),
}

impl RegridOutcome {
    pub fn into_wave_function(self) -> WaveFunction {
        match self {
            RegridOutcome::NoChange(psi) | RegridOutcome::Regridded(psi) => psi,
        }
    }

    pub fn regridded(&self) -> bool {
        matches!(self, RegridOutcome::Regridded(_))
    }
}

/// Re-confine `psi` in a window centered at `<x>` with half-width at least
/// `margin_sigmas` times the position spread. No-op while the tail mass in
/// the outer `outer_frac` of the box stays below `tail_trigger`.
pub fn regrid(psi: WaveFunction, hbar: f64, policy: &RegridPolicy) -> Result<RegridOutcome> {
    if psi.tail_probability(policy.outer_frac) <= policy.tail_trigger {
        return Ok(RegridOutcome::NoChange(psi));
    }
    let m = moments(&psi, hbar, DerivativeOrder::FivePoint)?;
    let spread = m.var_x.sqrt();
    let old = psi.grid();
    let dx = old.dx();
    let half = (policy.margin_sigmas * spread).max(8.0 * dx);

    // snap the new center onto the old lattice so the transfer is exact
    let center = old.x(old.nearest_index(m.mean_x));
    let mut lo = center - half;
    let mut hi = center + half;
    if let Some(max_x) = policy.max_x {
        hi = hi.min(max_x);
    }
    if let Some(min_x) = policy.min_x {
        lo = lo.max(min_x);
    }
    if hi - lo < 8.0 * dx {
        return Err(Error::InvalidGrid(format!(
            "regrid window [{lo}, {hi}] collapsed"
        )));
    }
    let lo_cells = ((center - lo) / dx).ceil() as i64;
    let hi_cells = ((hi - center) / dx).ceil() as i64;
    let n_new = (lo_cells + hi_cells + 1) as usize;
    let new_grid = Grid::new(
        center - lo_cells as f64 * dx,
        center + hi_cells as f64 * dx,
        n_new,
    )?;

    // exact lattice-aligned copy
    let offset = ((new_grid.x_min() - old.x_min()) / dx).round() as i64;
    let mut amps = vec![Complex64::ZERO; n_new];
    for (k, amp) in amps.iter_mut().enumerate() {
        let src = offset + k as i64;
        if src >= 0 && (src as usize) < old.n_points() {
            *amp = psi.amplitudes()[src as usize];
        }
    }
    let mut new_psi = WaveFunction::new(new_grid, amps, psi.time())?;

    let old_norm_sq = psi.norm_sq();
    let new_norm_sq = new_psi.norm_sq();
    let discarded = (old_norm_sq - new_norm_sq).max(0.0);
    if discarded > policy.max_discard {
        return Err(Error::TailTruncation { discarded, budget: policy.max_discard });
    }
    new_psi.normalize();
    Ok(RegridOutcome::Regridded(new_psi))
}
