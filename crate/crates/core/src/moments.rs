//! Statistical moments of a wave function.
//!
//! Position moments come from trapezoid quadrature of |psi|^2. Momentum
//! moments use first-derivative quadrature only: `<p^2> = hbar^2 int |psi'|^2`
//! holds for square-integrable states, which avoids second derivatives
//! entirely. The derivative stencil order is chosen to match the active
//! propagator so truncation errors stay consistent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wavefunction::WaveFunction;

/// Central-difference order for momentum-moment quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeOrder {
    ThreePoint,
    #[default]
    FivePoint,
}

/// First and second moments plus skewness, with both momentum-variance routes.
#[derive(Debug, Clone, Copy)]
pub struct MomentSet {
    pub norm: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
    pub skewness: f64,
    /// `<p^2> - <p>^2` from the energy-conservation shortcut, when a hint was given.
    pub var_p_conserved: Option<f64>,
    /// Set when the two `<p^2>` routes disagree by more than 1e-4 relative.
    pub p2_routes_disagree: bool,
}

impl MomentSet {
    pub fn uncertainty_product(&self) -> f64 {
        (self.var_x * self.var_p).sqrt()
    }
}

/// Conserved-energy data for the `<p^2>` shortcut:
/// `<p^2> = initial_p2 + 2 m (<V(0)> - <V>)`.
pub struct EnergyHint<'a> {
    pub initial_p2: f64,
    pub initial_potential: f64,
    pub mass: f64,
    pub potential: &'a dyn Fn(f64) -> f64,
}

fn derivative(amps: &[Complex64], j: usize, inv_dx: f64, order: DerivativeOrder) -> Complex64 {
    let n = amps.len();
    let get = |i: isize| -> Complex64 {
        if i < 0 || i as usize >= n {
            Complex64::ZERO
        } else {
            amps[i as usize]
        }
    };
    let j = j as isize;
    match order {
        DerivativeOrder::ThreePoint => (get(j + 1) - get(j - 1)) * (0.5 * inv_dx),
        DerivativeOrder::FivePoint => {
            (-get(j + 2) + get(j + 1) * 8.0 - get(j - 1) * 8.0 + get(j - 2))
                * (inv_dx / 12.0)
        }
    }
}

/// Full moment extraction. Fails with `NotNormalized` when the trapezoid norm
/// deviates from 1 by more than 1e-3.
pub fn moments(psi: &WaveFunction, hbar: f64, order: DerivativeOrder) -> Result<MomentSet> {
    moments_inner(psi, hbar, order, None)
}

/// Moment extraction with the energy-conservation `<p^2>` cross-check.
pub fn moments_with_energy(
    psi: &WaveFunction,
    hbar: f64,
    order: DerivativeOrder,
    hint: &EnergyHint,
) -> Result<MomentSet> {
    moments_inner(psi, hbar, order, Some(hint))
}

fn moments_inner(
    psi: &WaveFunction,
    hbar: f64,
    order: DerivativeOrder,
    hint: Option<&EnergyHint>,
) -> Result<MomentSet> {
    let dx = psi.grid().dx();
    let inv_dx = 1.0 / dx;
    let amps = psi.amplitudes();
    let n = amps.len();

    let mut norm_sq = 0.0;
    let mut mean_x = 0.0;
    let mut mean_x2 = 0.0;
    let mut p_acc = 0.0; // Im(psi* psi')
    let mut p2_acc = 0.0; // |psi'|^2
    let mut xp_acc = 0.0; // Im(psi* x psi')
    for j in 0..n {
        let a = amps[j];
        let w = a.norm_sqr();
        let x = psi.grid().x(j);
        norm_sq += w;
        mean_x += w * x;
        mean_x2 += w * x * x;
        let d = derivative(amps, j, inv_dx, order);
        let cross = (a.conj() * d).im;
        p_acc += cross;
        xp_acc += cross * x;
        p2_acc += d.norm_sqr();
    }
    norm_sq *= dx;
    let norm = norm_sq.sqrt();
    if (norm - 1.0).abs() > 1e-3 {
        return Err(Error::NotNormalized { norm });
    }
    // normalize quadratures by the actual norm to keep moments exact
    let s = dx / norm_sq;
    mean_x *= s;
    mean_x2 *= s;
    let mean_p = hbar * p_acc * s;
    let mean_p2 = hbar * hbar * p2_acc * s;
    let cov_xp = hbar * xp_acc * s - mean_x * mean_p;
    let var_x = (mean_x2 - mean_x * mean_x).max(0.0);
    let var_p = (mean_p2 - mean_p * mean_p).max(0.0);

    // third central moment of |psi|^2
    let mut m3 = 0.0;
    for j in 0..n {
        let d = psi.grid().x(j) - mean_x;
        m3 += amps[j].norm_sqr() * d * d * d;
    }
    m3 *= s;
    let skewness = if var_x > 0.0 { m3 / var_x.powf(1.5) } else { 0.0 };

    let mut var_p_conserved = None;
    let mut disagree = false;
    if let Some(h) = hint {
        let mut v_acc = 0.0;
        for j in 0..n {
            v_acc += amps[j].norm_sqr() * (h.potential)(psi.grid().x(j));
        }
        let mean_v = v_acc * s;
        let p2 = h.initial_p2 + 2.0 * h.mass * (h.initial_potential - mean_v);
        let vpc = p2 - mean_p * mean_p;
        var_p_conserved = Some(vpc);
        let scale = var_p.abs().max(vpc.abs());
        if scale > 0.0 && (vpc - var_p).abs() / scale > 1e-4 {
            disagree = true;
        }
    }

    Ok(MomentSet {
        norm,
        mean_x,
        mean_p,
        var_x,
        var_p,
        cov_xp,
        skewness,
        var_p_conserved,
        p2_routes_disagree: disagree,
    })
}

/// Free-space uncertainty product `(hbar/2) sqrt(1 + omega0^2 t^2)` with
/// `omega0 = hbar / 2 m sigma^2`.
pub fn analytic_free_uncertainty(t: f64, sigma: f64, mass: f64, hbar: f64) -> f64 {
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    0.5 * hbar * (1.0 + omega0 * omega0 * t * t).sqrt()
}

/// Harmonic-oscillator uncertainty product for an initial minimum-uncertainty
/// Gaussian of width sigma evolving under trap frequency omega.
pub fn analytic_ho_uncertainty(t: f64, sigma: f64, mass: f64, omega: f64, hbar: f64) -> f64 {
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    let (s, c) = (omega * t).sin_cos();
    let ratio = omega0 * omega0 / (omega * omega) + omega * omega / (omega0 * omega0);
    let s2 = (2.0 * omega * t).sin();
    0.5 * hbar * (c.powi(4) + s.powi(4) + 0.25 * ratio * s2 * s2).sqrt()
}
