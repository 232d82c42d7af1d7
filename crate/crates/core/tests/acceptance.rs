//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Criteria 3, 5 and 10 carry real collision or
//! pipeline runs and take minutes on one core; everything else is fast.

use cvqdyn_core::frames::{
    assemble_two_body, com_free_moments, com_free_wave_function, decompose, BipartiteSpec,
};
use cvqdyn_core::gaussian::{
    covariance_freefall, covariance_trapped, entropy_from_covariance, freefall_negativity_weak,
    log_negativity, relative_moments_freefall, thermal_negativity, CovarianceMatrix,
    ThermalSpec,
};
use cvqdyn_core::moments::{analytic_free_uncertainty, moments};
use cvqdyn_core::nongaussian::{
    covariance_from_wavefunctions, evolve_reduced, lab_grids_for_assembly, momentum_witness,
    relative_moments_from, schmidt_entropy, ReducedRun,
};
use cvqdyn_core::potentials::{epsilon3, omega_squared_signed, CentralPotentialSpec};
use cvqdyn_core::scattering::{
    dynamical_tunneling, force_ratio_at_launch,
    quantum_collision, CollisionConfig, SolverOptions, TrackUntil,
};
use cvqdyn_core::tdse::{build_system, evolve, PotentialGrid, Stencil, StepWorkspace};
use cvqdyn_core::units::Constants;
use cvqdyn_core::{make_gaussian, GaussianState, Grid};

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Signed relative error of the uncertainty product at t_end for the
/// criterion-1 free-Gaussian benchmark.
fn free_gaussian_error_signed(dx: f64, dt: f64, t_end: f64, stencil: Stencil) -> f64 {
    let (hbar, mass, sigma, x0, p0) = (1.0, 1.0, 2.0, -50.0, 1.0);
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    let spread_end = sigma * (1.0f64 + (omega0 * t_end).powi(2)).sqrt();
    let lo = x0 - 9.0 * spread_end;
    let hi = x0 + p0 / mass * t_end + 9.0 * spread_end;
    let n = ((hi - lo) / dx).ceil() as usize + 1;
    let grid = Grid::new(lo, lo + (n - 1) as f64 * dx, n).unwrap();
    let system =
        build_system(&grid, &PotentialGrid::zero(&grid), mass, hbar, dt, stencil).unwrap();
    let psi = make_gaussian(&grid, &GaussianState::new(x0, sigma, p0).unwrap(), hbar).unwrap();
    let steps = (t_end / dt).round() as usize;
    let psi = evolve(&system, psi, steps, steps, |_, _| {}).unwrap();
    let m = moments(&psi, hbar, stencil.derivative_order()).unwrap();
    let exact = analytic_free_uncertainty(t_end, sigma, mass, hbar);
    (m.uncertainty_product() - exact) / exact
}

#[test]
fn criterion_01_stencil_convergence_orders() {
    let dxs = [0.4, 0.2, 0.1, 0.05];
    let dt = 0.01;
    let t_end = 20.0;
    let mut tri_pts = Vec::new();
    let mut penta_pts = Vec::new();
    let mut ordering_ok = true;
    for &dx in &dxs {
        let e_tri = free_gaussian_error_signed(dx, dt, t_end, Stencil::Tri);
        let e_penta = free_gaussian_error_signed(dx, dt, t_end, Stencil::Penta);
        ordering_ok &= e_penta.abs() < e_tri.abs();
        // the shared Cayley O(dt^2) error floors the finest penta points;
        // Richardson elimination in dt isolates the spatial component whose
        // order the criterion names
        let e_tri_h = free_gaussian_error_signed(dx, 0.5 * dt, t_end, Stencil::Tri);
        let e_penta_h = free_gaussian_error_signed(dx, 0.5 * dt, t_end, Stencil::Penta);
        let s_tri = (4.0 * e_tri_h - e_tri) / 3.0;
        let s_penta = (4.0 * e_penta_h - e_penta) / 3.0;
        tri_pts.push((dx.ln(), s_tri.abs().max(1e-300).ln()));
        penta_pts.push((dx.ln(), s_penta.abs().max(1e-300).ln()));
        println!(
            "  dx = {dx:>4}: |err| tri {:.3e} penta {:.3e} (spatial {:.3e} / {:.3e})",
            e_tri.abs(),
            e_penta.abs(),
            s_tri.abs(),
            s_penta.abs()
        );
    }
    let order_tri = fit_slope(&tri_pts);
    let order_penta = fit_slope(&penta_pts);
    let pass = order_tri >= 1.8 && order_penta >= 3.5 && ordering_ok;
    println!(
        "criterion 01 stencil orders: {} (tri {order_tri:.2} >= 1.8, penta {order_penta:.2} >= 3.5, penta below tri everywhere: {ordering_ok})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(order_tri >= 1.8, "tri fitted order {order_tri}");
    assert!(order_penta >= 3.5, "penta fitted order {order_penta}");
    assert!(ordering_ok, "penta error not below tri at some dx");
}

#[test]
fn criterion_02_unitarity_and_energy() {
    // norm drift over 1e5 steps
    let grid = Grid::new(-30.0, 30.0, 1201).unwrap();
    let pot = PotentialGrid::from_fn(&grid, |x| 0.05 * x * x);
    let system = build_system(&grid, &pot, 1.0, 1.0, 0.01, Stencil::Penta).unwrap();
    let mut psi =
        make_gaussian(&grid, &GaussianState::new(-2.0, 1.0, 1.0).unwrap(), 1.0).unwrap();
    let mut ws = StepWorkspace::for_system(&system);
    for _ in 0..100_000 {
        system.step(&mut psi, &mut ws).unwrap();
    }
    let drift = (psi.norm() - 1.0).abs();

    // Rutherford energy conservation at dx = 0.2 fm, dt = 1 fm/c
    let config = CollisionConfig::alpha_on_gold(10_000.0, 5.0, 100.0);
    let opts = SolverOptions::default();
    let report = quantum_collision(&config, &opts, TrackUntil::Turnaround).unwrap();

    let pass = drift <= 1e-8 && report.peak_energy_error <= 1e-6;
    println!(
        "criterion 02 unitarity/energy: {} (norm drift {drift:.2e} <= 1e-8, peak energy error {:.2e} <= 1e-6)",
        if pass { "PASS" } else { "FAIL" },
        report.peak_energy_error
    );
    assert!(drift <= 1e-8, "norm drift {drift}");
    assert!(
        report.peak_energy_error <= 1e-6,
        "energy error {}",
        report.peak_energy_error
    );
}

#[test]
fn criterion_03_optimal_spread_sweep() {
    // L = 10 pm, T0 = 5 MeV; argmin of d_qm within 15% of sigma0 = 71.49 fm
    let sigmas = [45.0, 58.0, 66.0, 72.0, 80.0, 95.0];
    let opts = SolverOptions { dt: 2.0, ..Default::default() };
    let mut results = Vec::new();
    for &sigma in &sigmas {
        let config = CollisionConfig::alpha_on_gold(10_000.0, 5.0, sigma);
        let report = quantum_collision(&config, &opts, TrackUntil::Turnaround).unwrap();
        println!(
            "  sigma {sigma:>5.1} fm: d_qm - d_cl = {:.4} fm (bound_ok {})",
            report.d_qm - report.d_cl,
            report.bound_ok
        );
        assert!(report.bound_ok, "bound violated at sigma = {sigma}");
        results.push((sigma, report.d_qm - report.d_cl));
    }
    let (argmin_sigma, _) = results
        .iter()
        .cloned()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let sigma0 = 71.49;
    let rel = (argmin_sigma - sigma0).abs() / sigma0;
    // unimodal: differences change sign at most once
    let mut sign_changes = 0;
    for w in results.windows(2) {
        if (w[1].1 - w[0].1).signum() != (results[1].1 - results[0].1).signum() {
            sign_changes += 1;
            break;
        }
    }
    let unimodal = {
        let min_i = results
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .unwrap()
            .0;
        results[..min_i].windows(2).all(|w| w[1].1 <= w[0].1)
            && results[min_i..].windows(2).all(|w| w[1].1 >= w[0].1)
    };
    let _ = sign_changes;
    let pass = rel <= 0.15 && unimodal;
    println!(
        "criterion 03 optimal spread: {} (argmin sigma = {argmin_sigma} fm vs 71.49, off by {:.1}%, unimodal {unimodal})",
        if pass { "PASS" } else { "FAIL" },
        rel * 100.0
    );
    assert!(rel <= 0.15, "argmin {argmin_sigma} not within 15% of {sigma0}");
    assert!(unimodal, "d_qm - d_cl not unimodal over the sweep");
}

#[test]
fn criterion_04_jensen_force_ratio() {
    // L = 50 pm, T0 = 5 MeV, sigma = sigma0 = 159.85 fm
    let config = CollisionConfig::alpha_on_gold(50_000.0, 5.0, 159.85);
    let ratio = force_ratio_at_launch(&config, 0.2);
    let pass = (ratio - 1.000031).abs() <= 1e-5;
    println!(
        "criterion 04 Jensen force ratio: {} (<F>/F_cl = {ratio:.7} vs 1.000031 +/- 1e-5)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "force ratio {ratio}");
}

#[test]
fn criterion_05_tunneling_separation() {
    // sigma = 10 fm, L = 50 pm, T0 = 5 MeV. P_T is set by the operator
    // spectrum, not the time step, so dt rides high; dx = 0.5 keeps the
    // transmission bias under a percent.
    let config = CollisionConfig::alpha_on_gold(50_000.0, 5.0, 10.0);
    let opts = SolverOptions {
        dx: 0.5,
        dt: 8.0,
        stencil: Stencil::Penta,
        ..Default::default()
    };
    let report = dynamical_tunneling(&config, &opts, 1e-12).unwrap();
    let p_t = report.p_transmitted;
    let p_cl = report.p_classical;
    let ratio_ok = p_t >= 1e3 * p_cl;
    let level_ok = p_t >= 1e-3 / 3.0 && p_t <= 3e-3;
    println!(
        "criterion 05 tunneling separation: {} (P_T = {p_t:.3e}, P_cl = {p_cl:.3e}, P_WKB = {:.3e}, {} steps)",
        if ratio_ok && level_ok { "PASS" } else { "FAIL" },
        report.p_wkb,
        report.steps
    );
    assert!(ratio_ok, "P_T {p_t} not >= 1e3 P_cl {p_cl}");
    assert!(level_ok, "P_T {p_t} not within factor 3 of 1e-3");
}

/// Desk-scale gravity-like coupling: omega^2 = 4 C / L^3 with m = 1.
fn desk_spec(omega: f64, l: f64) -> CentralPotentialSpec {
    CentralPotentialSpec::GenericPotential {
        c: omega * omega * l * l * l / 4.0,
        x: l,
        j: 1.0,
        mass: 1.0,
    }
}

fn desk_run(p0: f64, order: usize, t_end: f64, dt: f64, dx: f64, cadence: usize) -> ReducedRun {
    ReducedRun {
        order,
        g_rel: GaussianState::new(0.0, 2f64.sqrt(), -p0).unwrap(),
        particle_mass: 1.0,
        hbar: 1.0,
        dt,
        t_end,
        stencil: Stencil::Penta,
        cadence,
        margin_sigmas: 7.0,
        dx,
    }
}

#[test]
fn criterion_06_gaussian_closed_forms() {
    let omega = 0.05;
    let l = 100.0;
    let p0 = 0.4;
    let spec = desk_spec(omega, l);
    let run = desk_run(p0, 2, 8.0, 0.004, 0.05, 500);
    let bip = BipartiteSpec::symmetric(1.0, 1.0, p0, l).unwrap();
    let dec = decompose(&bip, 1.0).unwrap();

    let mut worst_moment: f64 = 0.0;
    let mut worst_entry: f64 = 0.0;
    let mut snaps = Vec::new();
    evolve_reduced(&spec, &run, |s| {
        if s.step > 0 {
            snaps.push((s.time, s.moments));
        }
    })
    .unwrap();
    for (t, m) in &snaps {
        let exact = relative_moments_freefall(*t, omega, 1.0, p0, l, 1.0, 1.0);
        let got = relative_moments_from(m);
        for (a, b) in [
            (got.mean_r, exact.mean_r),
            (got.mean_p, exact.mean_p),
            (got.var_r, exact.var_r),
            (got.var_p, exact.var_p),
            (got.cov_rp, exact.cov_rp),
        ] {
            worst_moment = worst_moment.max(((a - b) / b).abs());
        }
        let com = com_free_moments(&dec, *t, 1.0);
        let built = covariance_from_wavefunctions(1.0, 1.0, &com, &got, 1.0).unwrap();
        let closed = covariance_freefall(*t, omega, dec.omega0, 1.0, 1.0);
        for i in 0..4 {
            for j in 0..4 {
                let scale = closed.entry(i, i).abs().max(closed.entry(j, j).abs());
                worst_entry =
                    worst_entry.max(((built.entry(i, j) - closed.entry(i, j)) / scale).abs());
            }
        }
    }
    // purity of the closed forms over a time grid
    let mut worst_purity: f64 = 0.0;
    for k in 0..=80 {
        let t = 10.0 * k as f64 / 80.0;
        let det = covariance_freefall(t, omega, dec.omega0, 1.0, 1.0).det();
        worst_purity = worst_purity.max((det / 0.0625 - 1.0).abs());
    }
    let pass = worst_moment <= 1e-4 && worst_entry <= 1e-4 && worst_purity <= 1e-6;
    println!(
        "criterion 06 Gaussian closed forms: {} (moments {worst_moment:.2e} <= 1e-4, entries {worst_entry:.2e} <= 1e-4, purity {worst_purity:.2e} <= 1e-6)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst_moment <= 1e-4);
    assert!(worst_entry <= 1e-4);
    assert!(worst_purity <= 1e-6);
}

#[test]
fn criterion_07_momentum_independence() {
    // E(t) curves for a p0 sweep at N = 2 coincide to 1e-6 relative. The
    // curves carry a fixed absolute discretization error, so the comparison
    // needs E well resolved (samples past the initial rise) and a grid fine
    // enough that the k0-dependent part of the stencil error sits below
    // 1e-6 of E.
    let omega = 0.08;
    let l = 100.0;
    let spec = desk_spec(omega, l);
    let p0s = [0.0, 0.1, 0.2, -0.2, 0.3];
    let mut curves: Vec<Vec<f64>> = Vec::new();
    for &p0 in &p0s {
        let run = desk_run(p0, 2, 8.0, 0.0025, 0.02, 800);
        let bip = BipartiteSpec::symmetric(1.0, 1.0, p0.abs().max(1e-6), l).unwrap();
        let dec = decompose(&bip, 1.0).unwrap();
        let mut es = Vec::new();
        evolve_reduced(&spec, &run, |s| {
            if s.time >= 3.9 {
                let com = com_free_moments(&dec, s.time, 1.0);
                let rel = relative_moments_from(&s.moments);
                let cov = covariance_from_wavefunctions(1.0, 1.0, &com, &rel, 1.0).unwrap();
                es.push(log_negativity(&cov).unwrap());
            }
        })
        .unwrap();
        curves.push(es);
    }
    let mut worst: f64 = 0.0;
    for c in &curves[1..] {
        for (a, b) in c.iter().zip(&curves[0]) {
            worst = worst.max(((a - b) / b).abs());
        }
    }
    let pass = worst <= 1e-6;
    println!(
        "criterion 07 momentum independence: {} (max curve separation {worst:.2e} <= 1e-6, E range {:.3} .. {:.3})",
        if pass { "PASS" } else { "FAIL" },
        curves[0].first().unwrap(),
        curves[0].last().unwrap()
    );
    assert!(pass, "curves separate by {worst}");
}

#[test]
fn criterion_08_osmium_point_value() {
    // m = 0.25 pg osmium, L = 2.5 R0, sigma = 2.5 nm, t = 5 s
    let mass = 2.5e-16;
    let radius = (3.0 * mass / (4.0 * std::f64::consts::PI * Constants::DENSITY_OSMIUM))
        .powf(1.0 / 3.0);
    let l = 2.5 * radius;
    let sigma = 2.5e-9;
    let hbar = Constants::HBAR_SI;
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    let omega = (4.0 * Constants::NEWTON_G * mass / (l * l * l)).sqrt();
    let e = log_negativity(&covariance_freefall(5.0, omega, omega0, mass, hbar)).unwrap();
    let pass = (e - 1.75e-4).abs() / 1.75e-4 <= 0.10;
    println!(
        "criterion 08 osmium point value: {} (E(5 s) = {e:.4e} vs 1.75e-4 +/- 10%)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "E = {e}");
}

#[test]
fn criterion_09_weak_coupling_approximation() {
    // omega0 = 1e3 omega; the asymptotic form carries an implicit
    // omega0 t >> 1, so the 5% check runs on omega t in [6e-3, 1e-2]
    let omega = 1e-3;
    let omega0 = 1.0;
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let wt = 6e-3 + 4e-3 * k as f64 / 8.0;
        let t = wt / omega;
        let exact = log_negativity(&covariance_freefall(t, omega, omega0, 1.0, 1.0)).unwrap();
        let approx = freefall_negativity_weak(t, omega, omega0);
        let rel = ((approx - exact) / exact).abs();
        worst = worst.max(rel);
    }
    // document the regime edge: below omega0 t ~ 6 the approximation drifts
    for &wt in &[2e-3, 4e-3] {
        let t = wt / omega;
        let exact = log_negativity(&covariance_freefall(t, omega, omega0, 1.0, 1.0)).unwrap();
        let approx = freefall_negativity_weak(t, omega, omega0);
        println!(
            "  (outside regime) omega t = {wt:.0e}: rel err {:+.2}%",
            (approx - exact) / exact * 100.0
        );
    }
    let pass = worst <= 0.05;
    println!(
        "criterion 09 weak-coupling approximation: {} (worst rel err {:.2}% over omega t in [6e-3, 1e-2])",
        if pass { "PASS" } else { "FAIL" },
        worst * 100.0
    );
    assert!(pass, "worst {worst}");
}

#[test]
fn criterion_10_cubic_amplification() {
    // S(t)/S0(t) vs 1 + eps3 and E(t)/E0(t) vs 1 + eps3/2 within 5% for
    // positive p0 (desk scale, strengthened omega)
    let omega = 0.02;
    let l = 100.0;
    let p0 = 0.5;
    let spec = desk_spec(omega, l);
    let bip = BipartiteSpec::symmetric(1.0, 1.0, p0, l).unwrap();
    let dec = decompose(&bip, 1.0).unwrap();
    let run = desk_run(p0, 3, 10.0, 0.005, 0.05, 500);

    let mut checks = Vec::new();
    let mut dec0 = dec;
    dec0.r_com0 = 0.0;
    dec0.r_rel0 = 0.0;
    evolve_reduced(&spec, &run, |s| {
        if s.time < 3.9 {
            return; // quantifiers too small to ratio cleanly
        }
        let t = s.time;
        let rel = relative_moments_from(&s.moments);
        let com = com_free_moments(&dec0, t, 1.0);
        let cov = covariance_from_wavefunctions(1.0, 1.0, &com, &rel, 1.0).unwrap();
        let e_n3 = log_negativity(&cov).unwrap();
        // Schmidt entropy of the numeric two-body state
        let (grid_a, grid_b) = lab_grids_for_assembly(&s.psi, 0.0, com.var_r, &rel, 4).unwrap();
        let phi = |r: f64| com_free_wave_function(&dec0, 1.0, t, r);
        let two = assemble_two_body(phi, &s.psi, 1.0, 1.0, &grid_a, &grid_b).unwrap();
        let (s_n3, _) = schmidt_entropy(&two).unwrap();

        // closed-form N = 2 baselines at rest
        let closed = covariance_freefall(t, omega, dec0.omega0, 1.0, 1.0);
        let e0 = log_negativity(&closed).unwrap();
        let s0 = entropy_from_covariance(&closed);
        let eps3 = epsilon3(&spec, p0, t).unwrap();
        checks.push((t, s_n3 / s0, 1.0 + eps3, e_n3 / e0, 1.0 + 0.5 * eps3));
    })
    .unwrap();
    assert!(checks.len() >= 2, "need samples after the transient");
    let mut worst_s: f64 = 0.0;
    let mut worst_e: f64 = 0.0;
    for (t, s_ratio, s_pred, e_ratio, e_pred) in &checks {
        println!(
            "  t = {t:>4.1}: S ratio {s_ratio:.4} vs 1+eps3 {s_pred:.4}; E ratio {e_ratio:.4} vs 1+eps3/2 {e_pred:.4}"
        );
        worst_s = worst_s.max(((s_ratio - s_pred) / s_pred).abs());
        worst_e = worst_e.max(((e_ratio - e_pred) / e_pred).abs());
    }
    let pass = worst_s <= 0.05 && worst_e <= 0.05;
    println!(
        "criterion 10 cubic amplification: {} (S within {:.2}%, E within {:.2}%)",
        if pass { "PASS" } else { "FAIL" },
        worst_s * 100.0,
        worst_e * 100.0
    );
    assert!(worst_s <= 0.05, "S ratio off by {worst_s}");
    assert!(worst_e <= 0.05, "E ratio off by {worst_e}");
}

#[test]
fn criterion_11_momentum_witness() {
    // N = 2: (1/<p>) d2<p>/dt2 flat at omega^2 within 1%; N = 3 drifts
    let omega: f64 = 0.1;
    let l = 30.0;
    let p0 = 0.5;
    let spec = desk_spec(omega, l);
    let dt_sample = 0.25;
    let collect = |order: usize| {
        let run = desk_run(p0, order, 8.0, 0.005, 0.05, 50);
        let mut ps = Vec::new();
        evolve_reduced(&spec, &run, |s| ps.push(s.moments.mean_p)).unwrap();
        ps
    };
    let p_n2 = collect(2);
    let ratios = momentum_witness(&p_n2, dt_sample, 1e-3).unwrap();
    let w2 = omega * omega;
    let worst_n2 = ratios
        .iter()
        .map(|r| ((r - w2) / w2).abs())
        .fold(0.0f64, f64::max);

    let p_n3 = collect(3);
    let ratios3 = momentum_witness(&p_n3, dt_sample, 1e-3).unwrap();
    let drift = (ratios3.last().unwrap() - ratios3.first().unwrap()).abs() / w2;

    let pass = worst_n2 <= 0.01 && drift > 0.01;
    println!(
        "criterion 11 momentum witness: {} (N=2 flat within {:.3}%, N=3 drift {:.1}% > 1%)",
        if pass { "PASS" } else { "FAIL" },
        worst_n2 * 100.0,
        drift * 100.0
    );
    assert!(worst_n2 <= 0.01, "N=2 ratio deviates by {worst_n2}");
    assert!(drift > 0.01, "N=3 ratio drift {drift} too small");
}

#[test]
fn criterion_12_schmidt_covariance_equivalence() {
    let omega = 0.05;
    let l = 100.0;
    let p0 = 0.3;
    let spec = desk_spec(omega, l);
    let bip = BipartiteSpec::symmetric(1.0, 1.0, p0, l).unwrap();
    let mut dec = decompose(&bip, 1.0).unwrap();
    dec.r_com0 = 0.0;
    dec.r_rel0 = 0.0;
    let run = desk_run(p0, 2, 8.0, 0.004, 0.05, 400);

    let mut worst: f64 = 0.0;
    let mut worst_capture: f64 = 1.0;
    let mut count = 0;
    evolve_reduced(&spec, &run, |s| {
        let t = s.time;
        let rel = relative_moments_from(&s.moments);
        let com = com_free_moments(&dec, t, 1.0);
        let cov = covariance_from_wavefunctions(1.0, 1.0, &com, &rel, 1.0).unwrap();
        let s_cov = entropy_from_covariance(&cov);
        let (grid_a, grid_b) = lab_grids_for_assembly(&s.psi, 0.0, com.var_r, &rel, 4).unwrap();
        let phi = |r: f64| com_free_wave_function(&dec, 1.0, t, r);
        let two = assemble_two_body(phi, &s.psi, 1.0, 1.0, &grid_a, &grid_b).unwrap();
        let (s_schmidt, res) = schmidt_entropy(&two).unwrap();
        worst = worst.max((s_schmidt - s_cov).abs());
        worst_capture = worst_capture.min(res.captured);
        count += 1;
    })
    .unwrap();
    let pass = worst <= 1e-3 && worst_capture >= 1.0 - 1e-7;
    println!(
        "criterion 12 Schmidt/covariance equivalence: {} (|S_schmidt - S_cov| {worst:.2e} <= 1e-3 over {count} samples, min captured {worst_capture:.9})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst <= 1e-3, "entropy routes differ by {worst}");
    assert!(worst_capture >= 1.0 - 1e-7);
}

#[test]
fn criterion_13_trapped_period_and_amplitude() {
    let omega0: f64 = 1.0;
    let omega = omega0 / 100.0;
    let w = (omega0 * omega0 - omega * omega).sqrt();
    let e_of = |t: f64| {
        log_negativity(&covariance_trapped(t, omega, omega0, 1.0, 1.0).unwrap()).unwrap()
    };
    // The negativity is symmetric about its maximum but quadratic there, so a
    // direct peak search is conditioned at sqrt(eps). The two half-amplitude
    // crossings are steep; their midpoint recovers the peak location sharply.
    let amp_expected = omega * omega / (2.0 * std::f64::consts::LN_2 * omega0 * omega0);
    let half = 0.5 * amp_expected;
    let quarter_period = std::f64::consts::PI / (2.0 * w);
    let bisect = |mut lo: f64, mut hi: f64, rising: bool| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let above = e_of(mid) > half;
            if above == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let t_a = bisect(0.05 * quarter_period, quarter_period, true);
    let t_b = bisect(quarter_period, 1.95 * quarter_period, false);
    let t_peak = 0.5 * (t_a + t_b);
    let expected_peak_time = quarter_period;
    let period_rel = ((t_peak - expected_peak_time) / expected_peak_time).abs();

    let amp = e_of(expected_peak_time);
    let amp_expected = omega * omega / (2.0 * std::f64::consts::LN_2 * omega0 * omega0);
    let amp_rel = ((amp - amp_expected) / amp_expected).abs();

    // the matrix itself returns after pi / W (entries go as sin^2, sin 2Wt)
    let tau_matrix = std::f64::consts::PI / w;
    let c0 = covariance_trapped(0.0, omega, omega0, 1.0, 1.0).unwrap();
    let c1 = covariance_trapped(tau_matrix, omega, omega0, 1.0, 1.0).unwrap();
    let mut matrix_returns = true;
    for i in 0..4 {
        for j in 0..4 {
            matrix_returns &=
                (c0.entry(i, j) - c1.entry(i, j)).abs() <= 1e-10 * c0.entry(i, i).abs();
        }
    }

    let pass = period_rel <= 1e-8 && amp_rel <= 0.01 && matrix_returns;
    println!(
        "criterion 13 trapped case: {} (E peaks at {t_peak:.9} vs pi/2W = {expected_peak_time:.9}, rel {period_rel:.1e} <= 1e-8; amplitude within {:.2}%; matrix returns at pi/W: {matrix_returns})",
        if pass { "PASS" } else { "FAIL" },
        amp_rel * 100.0
    );
    assert!(period_rel <= 1e-8, "peak time off by {period_rel}");
    assert!(amp_rel <= 0.01, "amplitude off by {amp_rel}");
    assert!(matrix_returns);
}

#[test]
fn criterion_14_thermal_identity() {
    // E(sigma_th) = max(0, E - log2(2 nbar + 1)) to 1e-12
    let mut worst: f64 = 0.0;
    for &t in &[0.5, 2.0, 5.0] {
        let c = covariance_freefall(t, 0.04, 0.5, 1.0, 1.0);
        let e0 = log_negativity(&c).unwrap();
        for &nbar in &[0.0, 0.02, 0.3, 1.5, 10.0] {
            let via_matrix = log_negativity(&c.thermal_scale(nbar)).unwrap();
            let via_identity = thermal_negativity(e0, nbar);
            worst = worst.max((via_matrix - via_identity).abs());
        }
    }
    let pass = worst <= 1e-12;
    println!(
        "criterion 14 thermal identity: {} (worst |difference| = {worst:.2e} <= 1e-12)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "identity violated by {worst}");
}

struct MondWindow {
    crossing: Option<f64>,
    window_end: Option<f64>,
    window_exists: bool,
}

fn mond_window(radius: f64, density: f64, t_max: f64) -> MondWindow {
    let mass = density * 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3);
    let l = 2.5 * radius;
    let omega0 = 2.5e4;
    let hbar = Constants::HBAR_SI;
    let nbar = ThermalSpec::new(0.05e-6, omega0, hbar, Constants::BOLTZMANN_KB)
        .unwrap()
        .nbar();
    let w_n = (4.0 * Constants::NEWTON_G * mass / (l * l * l)).sqrt();
    let w_m = omega_squared_signed(&CentralPotentialSpec::mond_si(mass, l))
        .unwrap()
        .sqrt();
    let mut crossing = None;
    let mut window_end = None;
    let mut window_exists = false;
    let n = 4000;
    for i in 0..=n {
        let t = t_max * i as f64 / n as f64;
        let e_n = log_negativity(&covariance_freefall(t, w_n, omega0, mass, hbar)).unwrap();
        let e_m = log_negativity(&covariance_freefall(t, w_m, omega0, mass, hbar)).unwrap();
        let e_n_th = thermal_negativity(e_n, nbar);
        let e_m_th = thermal_negativity(e_m, nbar);
        if crossing.is_none() && e_m_th > 0.01 {
            crossing = Some(t);
        }
        if window_end.is_none() && e_n_th > 0.0 {
            window_end = Some(t);
        }
        if e_n_th == 0.0 && e_m_th > 0.01 {
            window_exists = true;
        }
    }
    MondWindow { crossing, window_end, window_exists }
}

#[test]
fn criterion_15_mond_windows() {
    // Osmium R0 = 250 nm: window with MOND > 0.01 while Newton-thermal = 0,
    // MOND crossing 0.01 by t ~ 1 s (+/- 30%)
    let os = mond_window(250e-9, Constants::DENSITY_OSMIUM, 3.0);
    let os_cross = os.crossing.expect("MOND curve must cross 0.01");
    let os_ok = os.window_exists && (os_cross - 1.0).abs() <= 0.30;

    // Silica R0 = 500 nm: window roughly [2, 4] s
    let si = mond_window(500e-9, Constants::DENSITY_SILICA, 6.0);
    let si_cross = si.crossing.expect("MOND curve must cross 0.01");
    let si_end = si.window_end.expect("Newtonian thermal negativity must revive");
    let si_ok = si.window_exists && (1.4..=2.6).contains(&si_cross) && (2.8..=5.2).contains(&si_end);

    let pass = os_ok && si_ok;
    println!(
        "criterion 15 MOND windows: {} (osmium crossing {os_cross:.2} s ~ 1 s, window {}; silica window [{si_cross:.2}, {si_end:.2}] s ~ [2, 4] s)",
        if pass { "PASS" } else { "FAIL" },
        os.window_exists
    );
    assert!(os_ok, "osmium window failed: crossing {os_cross}");
    assert!(si_ok, "silica window failed: [{si_cross}, {si_end}]");
}

#[test]
fn criterion_16_casimir_dominance() {
    // m = 100 ug osmium, omega0 = 100 kHz, L = 2.1 R0
    let mass = 1e-7;
    let radius = (3.0 * mass / (4.0 * std::f64::consts::PI * Constants::DENSITY_OSMIUM))
        .powf(1.0 / 3.0);
    let l = 2.1 * radius;
    let hbar_c = Constants::HBAR_SI * Constants::SPEED_OF_LIGHT;
    let grav = CentralPotentialSpec::Newtonian { mass, l };
    let cas = CentralPotentialSpec::Casimir { r0: radius, l, mass, hbar_c };
    let both = CentralPotentialSpec::Composite(vec![grav.clone(), cas.clone()]);
    let w2_g = omega_squared_signed(&grav).unwrap();
    let w2_c = omega_squared_signed(&cas).unwrap();
    let w2_b = omega_squared_signed(&both).unwrap();
    let additive = ((w2_b - (w2_g + w2_c)) / w2_b).abs() <= 1e-12;
    let dominance = w2_c > w2_g;
    let pass = additive && dominance;
    println!(
        "criterion 16 Casimir dominance: {} (omega2_cas = {w2_c:.3e} > omega2_grav = {w2_g:.3e}, ratio {:.0}; additivity exact: {additive})",
        if pass { "PASS" } else { "FAIL" },
        w2_c / w2_g
    );
    assert!(dominance);
    assert!(additive);

    // CovarianceMatrix stays usable at the combined frequency
    let omega0 = 1e5;
    let sigma = (Constants::HBAR_SI / (2.0 * mass * omega0)).sqrt();
    let _ = sigma;
    let e = log_negativity(&covariance_freefall(
        1.0,
        w2_b.sqrt(),
        omega0,
        mass,
        Constants::HBAR_SI,
    ))
    .unwrap();
    let _cov: CovarianceMatrix = covariance_freefall(1.0, w2_b.sqrt(), omega0, mass, Constants::HBAR_SI);
    assert!(e.is_finite());
}
