//! Cayley-form time stepping of the 1-D Schroedinger equation.
//!
//! The evolution operator is approximated by the unitary rational form
//! `U = (1 + i H dt/2 hbar)^-1 (1 - i H dt/2 hbar)`, discretized with either
//! the three-point (tridiagonal) or five-point (pentadiagonal) stencil for
//! the kinetic term. Each step is one banded LU solve against an explicit
//! stencil product; the implicit matrix is factorized once and cached.
//!
//! Boundary condition: hard zero at the outermost grid points (and at all
//! points beyond), which doubles as an infinite box when the walls are placed
//! at the domain edges.

pub mod banded;
mod regrid;

pub use regrid::{regrid, RegridOutcome, RegridPolicy};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::moments::DerivativeOrder;
use crate::wavefunction::WaveFunction;

/// Kinetic-term discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Three-point second derivative, O(dx^2).
    Tri,
    /// Five-point second derivative, O(dx^4).
    #[default]
    Penta,
}

impl Stencil {
    pub fn derivative_order(self) -> DerivativeOrder {
        match self {
            Stencil::Tri => DerivativeOrder::ThreePoint,
            Stencil::Penta => DerivativeOrder::FivePoint,
        }
    }
}

/// Time step and stencil choice.
#[derive(Debug, Clone, Copy)]
pub struct StepperConfig {
    pub dt: f64,
    pub stencil: Stencil,
}

/// Potential samples aligned with a grid.
#[derive(Debug, Clone)]
pub struct PotentialGrid {
    values: Vec<f64>,
}

impl PotentialGrid {
    pub fn zero(grid: &Grid) -> Self {
        PotentialGrid { values: vec![0.0; grid.n_points()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        PotentialGrid { values: grid.points().map(f).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Factorized Cayley step for one (grid, potential, mass, dt, stencil) tuple.
///
/// Immutable after construction; safe to share across threads. The interior
/// unknowns are grid indices `1..n-1`.
#[derive(Debug, Clone)]
pub struct BandedSystem {
    grid: Grid,
    stencil: Stencil,
    mass: f64,
    hbar: f64,
    dt: f64,
    /// Implicit diagonal a_j over the interior.
    implicit_diag: Vec<Complex64>,
    /// Off-diagonal coefficients of the implicit matrix.
    b: Complex64,
    c: Complex64,
    lu: BandedFactors,
    /// Potential over the full grid, kept for energy diagnostics.
    potential: Vec<f64>,
}

#[derive(Debug, Clone)]
enum BandedFactors {
    Tri(banded::TriLU),
    Penta(banded::PentaLU),
}

/// Reusable scratch for the explicit stencil product.
pub struct StepWorkspace {
    zeta: Vec<Complex64>,
}

impl StepWorkspace {
    pub fn for_system(system: &BandedSystem) -> Self {
        StepWorkspace { zeta: vec![Complex64::ZERO; system.grid.n_points().saturating_sub(2)] }
    }
}

/// Build and factorize the Cayley system.
///
/// Coefficients (interior row j):
/// tridiagonal  `a_j = 1 + (i dt/2 hbar)(hbar^2 / m dx^2 + V_j)`,
/// `b = -i hbar dt / 4 m dx^2`;
/// pentadiagonal `a_j = 1 + (i dt/2 hbar)(5 hbar^2 / 4 m dx^2 + V_j)`,
/// `b = -i hbar dt / 3 m dx^2`, `c = +i hbar dt / 48 m dx^2`.
pub fn build_system(
    grid: &Grid,
    potential: &PotentialGrid,
    mass: f64,
    hbar: f64,
    dt: f64,
    stencil: Stencil,
) -> Result<BandedSystem> {
    if potential.values.len() != grid.n_points() {
        return Err(Error::GridMismatch);
    }
    if !(mass > 0.0 && hbar > 0.0) || dt == 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mass {mass}, hbar {hbar}, dt {dt}"
        )));
    }
    let dx = grid.dx();
    let n_int = grid.n_points() - 2;
    let i_half_dt = Complex64::new(0.0, 0.5 * dt / hbar);
    let kin = hbar * hbar / (mass * dx * dx);
    let (kin_diag, b, c) = match stencil {
        Stencil::Tri => (
            kin,
            Complex64::new(0.0, -hbar * dt / (4.0 * mass * dx * dx)),
            Complex64::ZERO,
        ),
        Stencil::Penta => (
            1.25 * kin,
            Complex64::new(0.0, -hbar * dt / (3.0 * mass * dx * dx)),
            Complex64::new(0.0, hbar * dt / (48.0 * mass * dx * dx)),
        ),
    };
    let implicit_diag: Vec<Complex64> = potential.values[1..=n_int]
        .iter()
        .map(|&v| Complex64::ONE + i_half_dt * (kin_diag + v))
        .collect();
    let lu = match stencil {
        Stencil::Tri => BandedFactors::Tri(banded::TriLU::factor(&implicit_diag, b)?),
        Stencil::Penta => BandedFactors::Penta(banded::PentaLU::factor(&implicit_diag, b, c)?),
    };
    Ok(BandedSystem {
        grid: grid.clone(),
        stencil,
        mass,
        hbar,
        dt,
        implicit_diag,
        b,
        c,
        lu,
        potential: potential.values.clone(),
    })
}

impl BandedSystem {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Implicit off-diagonal coefficient (offset +/-1).
    pub fn coeff_b(&self) -> Complex64 {
        self.b
    }

    /// Implicit off-diagonal coefficient (offset +/-2); zero for Tri.
    pub fn coeff_c(&self) -> Complex64 {
        self.c
    }

    /// Implicit diagonal over the interior points.
    pub fn implicit_diag(&self) -> &[Complex64] {
        &self.implicit_diag
    }

    /// One Cayley step, in place. `psi` must live on the system's grid.
    pub fn step(&self, psi: &mut WaveFunction, ws: &mut StepWorkspace) -> Result<()> {
        if psi.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.n_points();
        let n_int = n - 2;
        if ws.zeta.len() != n_int {
            ws.zeta.resize(n_int, Complex64::ZERO);
        }
        let amps = psi.amplitudes();
        let b = self.b;
        let c = self.c;
        // explicit half: zeta_j = (2 - a_j) psi_j - b (psi_{j+1} + psi_{j-1})
        //                        - c (psi_{j+2} + psi_{j-2})
        // amps[0] and amps[n-1] are the zero boundary; beyond them is zero too.
        {
            let zeta = &mut ws.zeta;
            match self.stencil {
                Stencil::Tri => {
                    for j in 0..n_int {
                        let g = j + 1;
                        let center = (Complex64::new(2.0, 0.0) - self.implicit_diag[j]) * amps[g];
                        zeta[j] = center - b * (amps[g + 1] + amps[g - 1]);
                    }
                }
                Stencil::Penta => {
                    for j in 0..n_int {
                        let g = j + 1;
                        let mut z = (Complex64::new(2.0, 0.0) - self.implicit_diag[j]) * amps[g]
                            - b * (amps[g + 1] + amps[g - 1]);
                        let mut outer = Complex64::ZERO;
                        if g >= 2 {
                            outer += amps[g - 2];
                        }
                        if g + 2 < n {
                            outer += amps[g + 2];
                        }
                        z -= c * outer;
                        zeta[j] = z;
                    }
                }
            }
        }
        match &self.lu {
            BandedFactors::Tri(lu) => lu.solve(&mut ws.zeta),
            BandedFactors::Penta(lu) => lu.solve(&mut ws.zeta),
        }
        let amps = psi.amplitudes_mut();
        amps[1..=n_int].copy_from_slice(&ws.zeta);
        amps[0] = Complex64::ZERO;
        amps[n - 1] = Complex64::ZERO;
        psi.advance_time(self.dt);
        Ok(())
    }

    /// Convenience step that allocates its own workspace.
    pub fn step_alloc(&self, psi: &mut WaveFunction) -> Result<()> {
        let mut ws = StepWorkspace::for_system(self);
        self.step(psi, &mut ws)
    }

    /// Expectation of the discrete Hamiltonian (stencil-consistent):
    /// `<H> = sum psi* (T_stencil + V) psi dx / |psi|^2`.
    ///
    /// Exactly conserved by the Cayley step up to roundoff, which makes it the
    /// energy-drift diagnostic.
    pub fn energy_expectation(&self, psi: &WaveFunction) -> Result<f64> {
        if psi.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let amps = psi.amplitudes();
        let n = amps.len();
        let dx = self.grid.dx();
        let kin_scale = -self.hbar * self.hbar / (2.0 * self.mass * dx * dx);
        let get = |i: isize| -> Complex64 {
            if i < 0 || i as usize >= n {
                Complex64::ZERO
            } else {
                amps[i as usize]
            }
        };
        let mut acc = Complex64::ZERO;
        let mut norm = 0.0;
        for j in 0..n {
            let a = amps[j];
            norm += a.norm_sqr();
            let ji = j as isize;
            let lap = match self.stencil {
                Stencil::Tri => get(ji + 1) - a * 2.0 + get(ji - 1),
                Stencil::Penta => {
                    (-get(ji + 2) + get(ji + 1) * 16.0 - a * 30.0 + get(ji - 1) * 16.0
                        - get(ji - 2))
                        / 12.0
                }
            };
            let h_psi = lap * kin_scale + a * self.potential[j];
            acc += a.conj() * h_psi;
        }
        Ok(acc.re / norm)
    }
}

/// Repeated stepping with observable sampling.
///
/// The observer fires at `t = 0` and then every `cadence` steps (and at the
/// final step), receiving the step index and the current state.
pub fn evolve(
    system: &BandedSystem,
    mut psi: WaveFunction,
    n_steps: usize,
    cadence: usize,
    mut observer: impl FnMut(usize, &WaveFunction),
) -> Result<WaveFunction> {
    let mut ws = StepWorkspace::for_system(system);
    let cadence = cadence.max(1);
    observer(0, &psi);
    for step in 1..=n_steps {
        system.step(&mut psi, &mut ws)?;
        if step % cadence == 0 || step == n_steps {
            observer(step, &psi);
        }
    }
    Ok(psi)
}
