//! Head-on Rutherford collision: classical trajectories, quantum collision
//! diagnostics, and Coulomb-barrier tunneling in the classical ensemble, WKB
//! and dynamical-quantum models.
//!
//! Geometry: the Coulomb center sits at the origin, the projectile launches
//! from `x = -L` moving right with kinetic energy `T0` (momentum
//! `p0 = sqrt(2 m T0)`), and `E0 = T0 + V(L)`. For tunneling the barrier is
//! truncated at distance `l` on the incident side (the nuclear well): the
//! potential is Coulomb for `x <= -l` and zero beyond, and the transmitted
//! probability is everything that ends up at `x > -l`.
//!
//! Units are natural MeV/fm with c = 1 (`hbar = hbar c`), matching the rest
//! of the nuclear-scattering configuration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::tdse::{
    build_system, regrid, PotentialGrid, RegridOutcome, RegridPolicy, Stencil, StepWorkspace,
};
use crate::units::Constants;
use crate::wavefunction::{make_gaussian, GaussianState, WaveFunction};

/// Head-on collision configuration.
#[derive(Debug, Clone)]
pub struct CollisionConfig {
    pub z_projectile: f64,
    pub z_target: f64,
    /// Projectile mass in energy units (MeV).
    pub mass: f64,
    /// Launch distance L (fm, positive).
    pub launch_distance: f64,
    /// Initial kinetic energy T0 (MeV).
    pub kinetic_energy: f64,
    /// Initial position spread sigma (fm).
    pub sigma: f64,
    /// Barrier cut l (fm): the nuclear-well edge for tunneling runs.
    pub well_cut: f64,
    pub hbar: f64,
}

impl CollisionConfig {
    /// Alpha on gold, the chapter's standard configuration.
    pub fn alpha_on_gold(launch_distance: f64, kinetic_energy: f64, sigma: f64) -> Self {
        CollisionConfig {
            z_projectile: 2.0,
            z_target: 79.0,
            mass: Constants::ALPHA_PARTICLE_MASS_MEV,
            launch_distance,
            kinetic_energy,
            sigma,
            well_cut: 25.0,
            hbar: Constants::HBAR_C_MEV_FM,
        }
    }

    /// Coulomb strength `Z_P Z_T alpha hbar c` (MeV fm).
    pub fn coulomb_k(&self) -> f64 {
        self.z_projectile * self.z_target * Constants::FINE_STRUCTURE_ALPHA * self.hbar
    }

    /// Total energy `E0 = T0 + V(L)`.
    pub fn e0(&self) -> f64 {
        self.kinetic_energy + self.coulomb_k() / self.launch_distance
    }

    /// Classical distance of closest approach `d_cl = Z_P Z_T alpha hbar c / E0`.
    pub fn d_cl(&self) -> f64 {
        self.coulomb_k() / self.e0()
    }

    /// Launch momentum `p0 = sqrt(2 m T0)`.
    pub fn p0(&self) -> f64 {
        (2.0 * self.mass * self.kinetic_energy).sqrt()
    }

    /// Optimal initial spread `sigma_0 = sqrt(hbar L / 2 p0)`.
    pub fn sigma0_optimal(&self) -> f64 {
        (self.hbar * self.launch_distance / (2.0 * self.p0())).sqrt()
    }

    /// Asymptotic speed `sqrt(2 E0 / m)` (units of c).
    fn v_asym(&self) -> f64 {
        (2.0 * self.e0() / self.mass).sqrt()
    }
}

/// Classical time of collision (turning point at -d_cl).
pub fn tau_classical(config: &CollisionConfig) -> f64 {
    let d = config.d_cl();
    let l = config.launch_distance;
    let root = (1.0 - d / l).sqrt();
    (config.mass / (2.0 * config.e0())).sqrt()
        * (l * root + 0.5 * d * ((1.0 + root) / (1.0 - root)).ln())
}

/// Distance functional of the classical trajectory: monotone increasing in x
/// on `x <= -d`, vanishing at the turning point `x = -d`.
fn trajectory_g(x: f64, d: f64) -> f64 {
    let s = (1.0 + d / x).sqrt();
    x * s - 0.5 * d * ((1.0 + s) / (1.0 - s)).ln()
}

/// Classical trajectory at time t: position, momentum and force.
///
/// The trajectory relation is transcendental, solved by bracketing bisection
/// refined with a secant step.
pub fn classical_trajectory(config: &CollisionConfig, t: f64) -> Result<(f64, f64, f64)> {
    let d = config.d_cl();
    let tau = tau_classical(config);
    let v = config.v_asym();
    let target = -v * (t - tau).abs();

    // bracket [x_lo, -d] with G(x_lo) <= target
    let mut x_lo = -(config.launch_distance + v * (t - tau).abs() + d);
    let mut g_lo = trajectory_g(x_lo, d);
    let mut attempts = 0;
    while g_lo > target {
        x_lo *= 2.0;
        g_lo = trajectory_g(x_lo, d);
        attempts += 1;
        if attempts > 200 {
            return Err(Error::RootBracketFailure { t });
        }
    }
    let mut x_hi = -d;
    let mut g_hi = 0.0;
    for _ in 0..90 {
        let mid = 0.5 * (x_lo + x_hi);
        if mid <= -d {
            let g_mid = trajectory_g(mid, d);
            if g_mid <= target {
                x_lo = mid;
                g_lo = g_mid;
            } else {
                x_hi = mid;
                g_hi = g_mid;
            }
        } else {
            x_hi = -d;
            g_hi = 0.0;
        }
        if (x_hi - x_lo).abs() < 1e-13 * x_lo.abs() {
            break;
        }
    }
    // secant polish
    let mut x = if g_hi > g_lo {
        x_lo + (target - g_lo) * (x_hi - x_lo) / (g_hi - g_lo)
    } else {
        0.5 * (x_lo + x_hi)
    };
    x = x.clamp(x_lo, -d);
    let p_mag = (2.0 * config.mass * config.e0()).sqrt() * (1.0 + d / x).max(0.0).sqrt();
    let p = if t <= tau { p_mag } else { -p_mag };
    // repulsive force on the projectile (x < 0): F = -dV/dx = -d E0 / x^2
    let force = -d * config.e0() / (x * x);
    Ok((x, p, force))
}

/// Solver options for the quantum runs.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub dx: f64,
    pub dt: f64,
    pub stencil: Stencil,
    /// Steps between trajectory samples.
    pub sample_cadence: usize,
    /// Steps between regrid checks.
    pub regrid_cadence: usize,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        // defaults from the convergence study: dx = 0.2 fm, dt = 1 fm/c
        SolverOptions {
            dx: 0.2,
            dt: 1.0,
            stencil: Stencil::Tri,
            sample_cadence: 4,
            regrid_cadence: 25,
            max_steps: 20_000_000,
        }
    }
}

/// One sampled point of the quantum trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub mean_x: f64,
    pub spread_x: f64,
}

/// Quantum collision diagnostics.
#[derive(Debug, Clone)]
pub struct CollisionReport {
    pub d_cl: f64,
    /// Quantum distance of closest approach `min |<x>|`.
    pub d_qm: f64,
    pub tau_cl: f64,
    /// Quantum collision time: position spread minimum.
    pub tau_qm: f64,
    pub sigma0_optimal: f64,
    /// `T_return - 2 tau_qm`, when the run tracked the full journey.
    pub delta_t_return: Option<f64>,
    /// `d_cl < d_qm < d_cl + sigma0` check.
    pub bound_ok: bool,
    pub bound_upper: f64,
    /// `<F>/F_cl` at t = 0 (Jensen ratio `L^2 <1/x^2>`).
    pub force_ratio_t0: f64,
    /// Peak relative drift of the stencil-consistent energy.
    pub peak_energy_error: f64,
    pub trajectory: Vec<TrajectorySample>,
}

/// How far to carry the collision run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackUntil {
    /// Just past the turnaround (enough for d_qm and tau_qm).
    Turnaround,
    /// Until `<x>` returns to the launch distance (for the time asymmetry).
    Return,
}

struct MeanVar {
    mean: f64,
    var: f64,
}

fn mean_var(psi: &WaveFunction) -> MeanVar {
    let mut n = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (j, a) in psi.amplitudes().iter().enumerate() {
        let w = a.norm_sqr();
        let x = psi.grid().x(j);
        n += w;
        m1 += w * x;
        m2 += w * x * x;
    }
    let mean = m1 / n;
    MeanVar { mean, var: (m2 / n - mean * mean).max(0.0) }
}

/// Jensen force ratio at launch: `<F>/F_cl = L^2 <1/x^2>` over the initial
/// Gaussian.
pub fn force_ratio_at_launch(config: &CollisionConfig, dx: f64) -> f64 {
    let l = config.launch_distance;
    let half = 8.5 * config.sigma;
    let grid = Grid::centered(-l, half, dx).expect("grid");
    let g = GaussianState::new(-l, config.sigma, config.p0()).expect("state");
    let psi = make_gaussian(&grid, &g, config.hbar).expect("packet");
    let quad = psi
        .grid()
        .points()
        .zip(psi.amplitudes())
        .map(|(x, a)| a.norm_sqr() / (x * x))
        .sum::<f64>()
        * grid.dx();
    quad * l * l / psi.norm_sq()
}

/// Refine an extremum by parabolic interpolation through three samples.
fn parabolic_min(t: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= y.len() {
        return (t[i], y[i]);
    }
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < 1e-300 {
        return (t[i], y[i]);
    }
    let h = t[i] - t[i - 1];
    let shift = 0.5 * (y0 - y2) / denom;
    let t_min = t[i] + shift * h;
    let y_min = y1 - 0.125 * (y0 - y2) * (y0 - y2) / denom;
    (t_min, y_min)
}

/// Evolve the Gaussian projectile in the fixed-target Coulomb potential with
/// dynamic grid reallocation and extract the collision diagnostics.
pub fn quantum_collision(
    config: &CollisionConfig,
    opts: &SolverOptions,
    track: TrackUntil,
) -> Result<CollisionReport> {
    let k = config.coulomb_k();
    let d = config.d_cl();
    let l = config.launch_distance;
    let tau_cl = tau_classical(config);
    let potential = move |x: f64| k / x.abs().max(1e-6);
    // the wave function is exponentially dead well inside the barrier; keep
    // the window clear of the singularity
    let wall = -0.25 * d;

    let policy = RegridPolicy { max_x: Some(wall), ..Default::default() };
    let mut grid = Grid::centered(-l, 7.0 * config.sigma + 10.0 * opts.dx, opts.dx)?;
    let g0 = GaussianState::new(-l, config.sigma, config.p0())?;
    let mut psi = make_gaussian(&grid, &g0, config.hbar)?;
    let mut system = build_system(
        &grid,
        &PotentialGrid::from_fn(&grid, potential),
        config.mass,
        config.hbar,
        opts.dt,
        opts.stencil,
    )?;
    let mut ws = StepWorkspace::for_system(&system);

    let force_ratio_t0 = force_ratio_at_launch(config, opts.dx);
    let e_ref = system.energy_expectation(&psi)?;
    let mut peak_energy_error: f64 = 0.0;

    let mut traj: Vec<TrajectorySample> = Vec::new();
    let mut min_abs_x = f64::INFINITY;
    let mut min_abs_x_i = 0usize;
    let mut min_spread = f64::INFINITY;
    let mut min_spread_i = 0usize;
    let mut return_time = None;

    let mv0 = mean_var(&psi);
    traj.push(TrajectorySample { t: 0.0, mean_x: mv0.mean, spread_x: mv0.var.sqrt() });

    let mut step = 0usize;
    loop {
        step += 1;
        if step > opts.max_steps {
            return Err(Error::NotConverged { steps: step });
        }
        system.step(&mut psi, &mut ws)?;

        if step % opts.sample_cadence == 0 {
            let mv = mean_var(&psi);
            let t = psi.time();
            traj.push(TrajectorySample { t, mean_x: mv.mean, spread_x: mv.var.sqrt() });
            let i = traj.len() - 1;
            if mv.mean.abs() < min_abs_x {
                min_abs_x = mv.mean.abs();
                min_abs_x_i = i;
            }
            if mv.var.sqrt() < min_spread {
                min_spread = mv.var.sqrt();
                min_spread_i = i;
            }
            let past_min = t > 1.02 * tau_cl && mv.mean.abs() > 1.5 * min_abs_x;
            match track {
                TrackUntil::Turnaround => {
                    if past_min
                        && mv.mean.abs() > min_abs_x + (3.0 * mv.var.sqrt()).min(0.2 * l)
                    {
                        break;
                    }
                }
                TrackUntil::Return => {
                    if past_min && mv.mean <= -l {
                        let prev = traj[i - 1];
                        let frac = (-l - prev.mean_x) / (mv.mean - prev.mean_x);
                        return_time = Some(prev.t + frac * (t - prev.t));
                        break;
                    }
                }
            }
        }

        if step % opts.regrid_cadence == 0 {
            match regrid(psi, config.hbar, &policy)? {
                RegridOutcome::NoChange(p) => psi = p,
                RegridOutcome::Regridded(p) => {
                    psi = p;
                    grid = psi.grid().clone();
                    system = build_system(
                        &grid,
                        &PotentialGrid::from_fn(&grid, potential),
                        config.mass,
                        config.hbar,
                        opts.dt,
                        opts.stencil,
                    )?;
                    ws = StepWorkspace::for_system(&system);
                }
            }
            let e = system.energy_expectation(&psi)?;
            peak_energy_error = peak_energy_error.max(((e - e_ref) / e_ref).abs());
        }
    }

    let times: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let abs_x: Vec<f64> = traj.iter().map(|s| s.mean_x.abs()).collect();
    let spreads: Vec<f64> = traj.iter().map(|s| s.spread_x).collect();
    let (_, d_qm) = parabolic_min(&times, &abs_x, min_abs_x_i);
    let (tau_qm, _) = parabolic_min(&times, &spreads, min_spread_i);

    let sigma0 = config.sigma0_optimal();
    let bound_upper = d + sigma0;
    let delta_t_return = return_time.map(|t| t - 2.0 * tau_qm);

    Ok(CollisionReport {
        d_cl: d,
        d_qm,
        tau_cl,
        tau_qm,
        sigma0_optimal: sigma0,
        delta_t_return,
        bound_ok: d < d_qm && d_qm < bound_upper,
        bound_upper,
        force_ratio_t0,
        peak_energy_error,
        trajectory: traj,
    })
}

/// Classical barrier-crossing probability of the Gaussian momentum ensemble.
///
/// `P_cl = 1/2 [1 - sign(p_lim - p0) erf(sqrt(2) sigma |p_lim - p0| / hbar)]`
/// with `p_lim = sqrt(2 m (V(l) - V(L)))`. (The Gaussian momentum density is
/// `(sigma sqrt(2) / hbar sqrt(pi)) exp(-2 sigma^2 (p - p0)^2 / hbar^2)`; its
/// integral fixes the erf argument as written here.)
pub fn classical_crossing_probability(config: &CollisionConfig) -> Result<f64> {
    if config.well_cut >= config.launch_distance {
        return Err(Error::InvalidParameter(
            "well cut must sit inside the launch distance".into(),
        ));
    }
    let p_lim = (2.0
        * config.mass
        * config.e0()
        * (1.0 / config.well_cut - 1.0 / config.launch_distance)
        * config.d_cl())
    .sqrt();
    let p0 = config.p0();
    let arg = 2f64.sqrt() * config.sigma * (p_lim - p0).abs() / config.hbar;
    Ok(0.5 * (1.0 - (p_lim - p0).signum() * libm::erf(arg)))
}

/// Adaptive Simpson quadrature; the WKB integrand has a square-root endpoint
/// at the turning point, handled by subdivision.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    simpson_step(f, a, b, fa, fm, fb, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1)
    }
}

/// WKB tunneling probability:
/// `P = hbar / sqrt(2 m E0 (d/l - 1)) exp(-2/hbar int_l^d sqrt(2 m E0 (d/x - 1)) dx)`.
///
/// Requires the sub-barrier condition `E0 < V(l)`, i.e. `d_cl > l`.
pub fn wkb_tunneling(config: &CollisionConfig) -> Result<f64> {
    let d = config.d_cl();
    let l = config.well_cut;
    let e0 = config.e0();
    let v_l = config.coulomb_k() / l;
    if e0 >= v_l {
        return Err(Error::AboveBarrier { e0, v_l });
    }
    let scale = (2.0 * config.mass * e0).sqrt();
    let integrand = move |x: f64| scale * (d / x - 1.0).max(0.0).sqrt();
    let action = adaptive_simpson(&integrand, l, d, 1e-12 * scale * d, 48);
    let prefactor = config.hbar / (scale * (d / l - 1.0).sqrt());
    Ok(prefactor * (-2.0 * action / config.hbar).exp())
}

/// Closed-form barrier action for cross-checks:
/// `int_l^d sqrt(2 m E0) sqrt(d/x - 1) dx
///   = sqrt(2 m E0) d (acos sqrt(l/d) - sqrt(l/d (1 - l/d)))`.
pub fn wkb_action_closed(config: &CollisionConfig) -> Result<f64> {
    let d = config.d_cl();
    let l = config.well_cut;
    if d <= l {
        return Err(Error::AboveBarrier { e0: config.e0(), v_l: config.coulomb_k() / l });
    }
    let u = l / d;
    let scale = (2.0 * config.mass * config.e0()).sqrt();
    Ok(scale * d * (u.sqrt().acos() - (u * (1.0 - u)).sqrt()))
}

/// Result of a dynamical tunneling run.
#[derive(Debug, Clone)]
pub struct TunnelingReport {
    pub p_transmitted: f64,
    pub p_classical: f64,
    pub p_wkb: f64,
    /// Steps actually taken.
    pub steps: usize,
}

/// Dynamical tunneling probability: evolve the projectile against the
/// truncated Coulomb barrier until the transmitted and reflected components
/// separate (probability crossing the cut below `flux_threshold` per step
/// for 100 consecutive samples), then integrate `|psi|^2` beyond the cut.
pub fn dynamical_tunneling(
    config: &CollisionConfig,
    opts: &SolverOptions,
    flux_threshold: f64,
) -> Result<TunnelingReport> {
    let k = config.coulomb_k();
    let d = config.d_cl();
    let l_cut = config.well_cut;
    let l = config.launch_distance;
    let hbar = config.hbar;
    let barrier = move |x: f64| if x <= -l_cut { k / (-x) } else { 0.0 };

    let mut grid = Grid::centered(-l, 7.0 * config.sigma + 10.0 * opts.dx, opts.dx)?;
    let g0 = GaussianState::new(-l, config.sigma, config.p0())?;
    let mut psi = make_gaussian(&grid, &g0, hbar)?;
    let mut system = build_system(
        &grid,
        &PotentialGrid::from_fn(&grid, barrier),
        config.mass,
        hbar,
        opts.dt,
        opts.stencil,
    )?;
    let mut ws = StepWorkspace::for_system(&system);
    // approach phase: moving window, kept left of the barrier region
    let policy = RegridPolicy { max_x: Some(-3.0 * d - 2.0 * l_cut), ..Default::default() };

    let v = config.v_asym();
    let mut step = 0usize;
    let mut final_box = false;
    let mut collision_eta = f64::INFINITY;
    let mut consecutive = 0usize;
    let flux_at = |psi: &WaveFunction, x0: f64, mass: f64| -> f64 {
        let g = psi.grid();
        let j = g.nearest_index(x0);
        if j < 2 || j + 2 >= g.n_points() {
            return 0.0;
        }
        let a = psi.amplitudes();
        let der =
            (-a[j + 2] + a[j + 1] * 8.0 - a[j - 1] * 8.0 + a[j - 2]) / (12.0 * g.dx());
        hbar * (a[j].conj() * der).im / mass
    };

    loop {
        step += 1;
        if step > opts.max_steps {
            return Err(Error::NotConverged { steps: step });
        }
        system.step(&mut psi, &mut ws)?;

        if !final_box {
            if step % opts.regrid_cadence == 0 {
                let mv = mean_var(&psi);
                let spread = mv.var.sqrt();
                if mv.mean > -(3.0 * d + 10.0 * spread + 2.0 * l_cut) {
                    // switch to the collision box: wide enough to hold the
                    // reflected bulk until the flux criterion resolves and the
                    // transmitted head until measurement
                    let t_settle = mv.mean.abs() / v + 7.0 * spread / v;
                    let sigma_end = grown_sigma(config, psi.time() + t_settle);
                    let left = mv.mean - 8.0 * sigma_end.max(spread);
                    let right = v * t_settle + 50.0 * opts.dx;
                    let n = ((right - left) / opts.dx).ceil() as usize + 1;
                    let new_grid = Grid::new(left, left + (n - 1) as f64 * opts.dx, n)?;
                    let mut amps = vec![Complex64::ZERO; new_grid.n_points()];
                    let offset =
                        ((new_grid.x_min() - psi.grid().x_min()) / opts.dx).round() as i64;
                    for (idx, amp) in amps.iter_mut().enumerate() {
                        let src = offset + idx as i64;
                        if src >= 0 && (src as usize) < psi.grid().n_points() {
                            *amp = psi.amplitudes()[src as usize];
                        }
                    }
                    let t_now = psi.time();
                    psi = WaveFunction::new(new_grid.clone(), amps, t_now)?;
                    psi.normalize();
                    grid = new_grid;
                    system = build_system(
                        &grid,
                        &PotentialGrid::from_fn(&grid, barrier),
                        config.mass,
                        hbar,
                        opts.dt,
                        opts.stencil,
                    )?;
                    ws = StepWorkspace::for_system(&system);
                    final_box = true;
                    collision_eta = t_now + mv.mean.abs() / v;
                } else {
                    match regrid(psi, hbar, &policy)? {
                        RegridOutcome::NoChange(p) => psi = p,
                        RegridOutcome::Regridded(p) => {
                            psi = p;
                            grid = psi.grid().clone();
                            system = build_system(
                                &grid,
                                &PotentialGrid::from_fn(&grid, barrier),
                                config.mass,
                                hbar,
                                opts.dt,
                                opts.stencil,
                            )?;
                            ws = StepWorkspace::for_system(&system);
                        }
                    }
                }
            }
        } else if psi.time() > collision_eta {
            // the bulk has reached the barrier; arm the flux criterion
            let j = flux_at(&psi, -l_cut, config.mass);
            if (j * opts.dt).abs() < flux_threshold {
                consecutive += 1;
                if consecutive >= 100 {
                    break;
                }
            } else {
                consecutive = 0;
            }
        }
    }

    let p_t = psi.probability_beyond(-l_cut) / psi.norm_sq();
    Ok(TunnelingReport {
        p_transmitted: p_t,
        p_classical: classical_crossing_probability(config)?,
        p_wkb: wkb_tunneling(config).unwrap_or(f64::NAN),
        steps: step,
    })
}

/// Free-evolution spread at time t (the barrier's influence on the width is
/// secondary for box sizing).
fn grown_sigma(config: &CollisionConfig, t: f64) -> f64 {
    let omega0 = config.hbar / (2.0 * config.mass * config.sigma * config.sigma);
    config.sigma * (1.0 + (omega0 * t).powi(2)).sqrt()
}

/// Two identical colliding wave packets, mapped onto the reduced-mass
/// problem: mass m/2 launched from 2L with packet width sigma sqrt(2).
#[derive(Debug, Clone)]
pub struct CollidingPacketsReport {
    pub report: CollisionReport,
    /// COM momentum (zero for the symmetric launch).
    pub com_momentum: f64,
    /// Optimal width of each projectile packet, `sqrt(hbar L / 2 p0)`.
    pub optimal_projectile_width: f64,
    /// Width of the reduced-mass packet at optimum, `sqrt(hbar L / p0)`.
    pub optimal_relative_width: f64,
}

/// Reduced-mass collision configuration for two identical nuclei launched
/// from +/- L with equal and opposite momentum.
pub fn colliding_packets_config(config: &CollisionConfig) -> CollisionConfig {
    CollisionConfig {
        z_projectile: config.z_projectile,
        z_target: config.z_target,
        mass: 0.5 * config.mass,
        launch_distance: 2.0 * config.launch_distance,
        // relative kinetic energy: p0^2 / 2 mu = 2 T0
        kinetic_energy: 2.0 * config.kinetic_energy,
        sigma: config.sigma * 2f64.sqrt(),
        well_cut: config.well_cut,
        hbar: config.hbar,
    }
}

pub fn colliding_packets(
    config: &CollisionConfig,
    opts: &SolverOptions,
    track: TrackUntil,
) -> Result<CollidingPacketsReport> {
    let reduced = colliding_packets_config(config);
    let report = quantum_collision(&reduced, opts, track)?;
    Ok(CollidingPacketsReport {
        report,
        com_momentum: 0.0,
        optimal_projectile_width: config.sigma0_optimal(),
        optimal_relative_width: (config.hbar * config.launch_distance / config.p0()).sqrt(),
    })
}
