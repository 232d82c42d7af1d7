//! Exact Gaussian-regime machinery: Ehrenfest closed forms for the relative
//! mode, 4x4 covariance assembly over `(x_A, p_A, x_B, p_B)`, two-mode
//! symplectic spectra, logarithmic negativity, entanglement entropy, thermal
//! scaling and Wigner evaluation.
//!
//! All closed forms below are for two identical particles of mass `m`
//! prepared in ground-state Gaussians of width `sigma` (trap frequency
//! `omega0 = hbar / 2 m sigma^2`), interacting through a central potential
//! truncated at its quadratic term with strength `omega^2`. Attractive
//! couplings evolve hyperbolically; a kept trap or a repulsive coupling
//! turns the same solutions trigonometric.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::frames::ComMoments;

const LN2: f64 = std::f64::consts::LN_2;

/// Centered moments of the relative mode at time t.
#[derive(Debug, Clone, Copy)]
pub struct RelativeMoments {
    pub mean_r: f64,
    pub mean_p: f64,
    pub var_r: f64,
    pub var_p: f64,
    pub cov_rp: f64,
}

/// Free-fall (traps opened) relative-mode moments under the N = 2 truncation.
///
/// Means carry the full p0- and L-dependence; the centered moments collapse
/// to forms independent of both:
/// `var_r = 2 sigma^2 (cosh^2 + (omega0/omega)^2 sinh^2)`,
/// `var_p = (hbar^2 / 8 sigma^2)(cosh^2 + (omega/omega0)^2 sinh^2)`,
/// `cov_rp = (hbar/4)(omega0/omega + omega/omega0) sinh(2 omega t)`.
pub fn relative_moments_freefall(
    t: f64,
    omega: f64,
    sigma: f64,
    p0: f64,
    l: f64,
    mass: f64,
    hbar: f64,
) -> RelativeMoments {
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    let ch = (omega * t).cosh();
    let sh = (omega * t).sinh();
    let ch2 = (2.0 * omega * t).cosh();
    let sh2 = (2.0 * omega * t).sinh();
    let p2_0 = p0 * p0 + hbar * hbar / (8.0 * sigma * sigma);

    let mean_r = 0.5 * l * (1.0 - ch) - 2.0 * p0 / (mass * omega) * sh;
    let mean_p = -p0 * ch - 0.25 * mass * omega * l * sh;

    let r2 = 2.0 * sigma * sigma * (1.0 + sh * sh)
        + l * l / 8.0 * (3.0 + ch2 - 4.0 * ch)
        + l * p0 / (mass * omega) * (sh2 - 2.0 * sh)
        + 4.0 / (mass * mass * omega * omega) * p2_0 * sh * sh;
    let p2 = p2_0 * (1.0 + sh * sh)
        + 0.25 * mass * omega * l * p0 * sh2
        + 0.25 * mass * mass * omega * omega * (2.0 * sigma * sigma + l * l / 4.0) * sh * sh;
    let rp = l * p0 * (ch2 - ch)
        + mass * omega * l * l / 8.0 * (sh2 - 2.0 * sh)
        + 2.0 / (mass * omega)
            * (p2_0 + 0.5 * mass * mass * omega * omega * sigma * sigma)
            * sh2;

    let _ = omega0;
    RelativeMoments {
        mean_r,
        mean_p,
        var_r: r2 - mean_r * mean_r,
        var_p: p2 - mean_p * mean_p,
        cov_rp: 0.5 * rp - mean_r * mean_p,
    }
}

/// Simplified free-fall centered moments (p0- and L-independent forms).
pub fn relative_variances_freefall_simplified(
    t: f64,
    omega: f64,
    sigma: f64,
    mass: f64,
    hbar: f64,
) -> (f64, f64, f64) {
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    let ch = (omega * t).cosh();
    let sh = (omega * t).sinh();
    let var_r = 2.0 * sigma * sigma
        * (ch * ch + (omega0 / omega).powi(2) * sh * sh);
    let var_p = hbar * hbar / (8.0 * sigma * sigma)
        * (ch * ch + (omega / omega0).powi(2) * sh * sh);
    let cov = hbar / 4.0 * (omega0 / omega + omega / omega0) * (2.0 * omega * t).sinh();
    (var_r, var_p, cov)
}

/// Relative-mode moments with traps kept on (requires omega < omega0).
pub fn relative_moments_trapped(
    t: f64,
    omega: f64,
    sigma: f64,
    mass: f64,
    hbar: f64,
) -> Result<RelativeMoments> {
    let omega0 = hbar / (2.0 * mass * sigma * sigma);
    if omega >= omega0 {
        return Err(Error::TrapUnstable { omega, omega0 });
    }
    let w = (omega0 * omega0 - omega * omega).sqrt();
    let s = (w * t).sin();
    let c = (w * t).cos();
    Ok(RelativeMoments {
        mean_r: 0.0,
        mean_p: 0.0,
        var_r: 2.0 * sigma * sigma / (w * w) * (omega0 * omega0 - omega * omega * c * c),
        var_p: hbar * hbar / (8.0 * sigma * sigma * omega0 * omega0)
            * (omega0 * omega0 - omega * omega * s * s),
        cov_rp: hbar * omega * omega / (4.0 * omega0 * w) * (2.0 * w * t).sin(),
    })
}

/// 4x4 covariance matrix over `u = (x_A, p_A, x_B, p_B)` carrying its hbar.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    mat: Matrix4<f64>,
    hbar: f64,
}

impl CovarianceMatrix {
    pub fn from_matrix(mat: Matrix4<f64>, hbar: f64) -> Self {
        CovarianceMatrix { mat, hbar }
    }

    /// Assemble from COM and relative centered moments (identical masses):
    /// `s00(s02) = dR^2 +(-) dr^2/4`, `s11(s13) = dP^2/4 +(-) dp^2`,
    /// `s01(s03) = Cov(R,P)/2 +(-) Cov(r,p)/2`.
    pub fn from_com_relative(com: &ComMoments, rel: &RelativeMoments, hbar: f64) -> Self {
        let s00 = com.var_r + 0.25 * rel.var_r;
        let s02 = com.var_r - 0.25 * rel.var_r;
        let s11 = 0.25 * com.var_p + rel.var_p;
        let s13 = 0.25 * com.var_p - rel.var_p;
        let s01 = 0.5 * com.cov_rp + 0.5 * rel.cov_rp;
        let s03 = 0.5 * com.cov_rp - 0.5 * rel.cov_rp;
        let mat = Matrix4::new(
            s00, s01, s02, s03, //
            s01, s11, s03, s13, //
            s02, s03, s00, s01, //
            s03, s13, s01, s11,
        );
        CovarianceMatrix { mat, hbar }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.mat
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    fn det2(&self, r0: usize, c0: usize) -> f64 {
        self.mat[(r0, c0)] * self.mat[(r0 + 1, c0 + 1)]
            - self.mat[(r0, c0 + 1)] * self.mat[(r0 + 1, c0)]
    }

    pub fn det_alpha(&self) -> f64 {
        self.det2(0, 0)
    }

    pub fn det_beta(&self) -> f64 {
        self.det2(2, 2)
    }

    pub fn det_gamma(&self) -> f64 {
        self.mat[(0, 2)] * self.mat[(1, 3)] - self.mat[(0, 3)] * self.mat[(1, 2)]
    }

    pub fn det(&self) -> f64 {
        self.mat.determinant()
    }

    /// Symplectic eigenvalues via the two-mode invariant formula
    /// `nu_-+ = sqrt((S -+ sqrt(S^2 - 4 det sigma)) / 2)` with
    /// `S = det alpha + det beta + 2 det gamma`; the partial transpose flips
    /// the sign of `det gamma`.
    pub fn symplectic_eigs(&self, partial_transpose: bool) -> Result<(f64, f64)> {
        let g = if partial_transpose { -self.det_gamma() } else { self.det_gamma() };
        let s = self.det_alpha() + self.det_beta() + 2.0 * g;
        let d = self.det();
        let disc = s * s - 4.0 * d;
        // near-degenerate spectra cancel S^2 against 4 det; rounding in the
        // inputs shows up here at the 1e-7..1e-6 relative level, which means
        // "degenerate", not "unphysical"
        let tol = 1e-6 * s * s;
        if disc < -tol {
            return Err(Error::NonPhysical(format!(
                "invariant discriminant negative: S^2 = {:e}, 4 det = {:e}",
                s * s,
                4.0 * d
            )));
        }
        let root = disc.max(0.0).sqrt();
        let nu_plus = ((s + root) / 2.0).max(0.0).sqrt();
        // nu_minus through the product invariant nu- nu+ = sqrt(det sigma):
        // near-degenerate spectra (pure states) lose half the digits in the
        // subtractive root, the product form does not.
        let nu_minus = if nu_plus > 0.0 && d > 0.0 {
            (d.sqrt() / nu_plus).min(nu_plus)
        } else {
            ((s - root) / 2.0).max(0.0).sqrt()
        };
        Ok((nu_minus, nu_plus))
    }

    /// Physicality: both symplectic eigenvalues of sigma itself at or above
    /// hbar/2. The slack (1e-7 relative) covers the f64 noise floor of the
    /// invariant formula at the pure-state boundary.
    pub fn is_physical(&self) -> bool {
        match self.symplectic_eigs(false) {
            Ok((nu_minus, _)) => nu_minus >= 0.5 * self.hbar * (1.0 - 1e-7),
            Err(_) => false,
        }
    }

    /// Thermal initial state: the whole matrix scales by `2 nbar + 1`.
    pub fn thermal_scale(&self, nbar: f64) -> CovarianceMatrix {
        CovarianceMatrix { mat: self.mat * (2.0 * nbar + 1.0), hbar: self.hbar }
    }
}

/// `sinh(u) - u`, stable for small arguments.
fn sinh_minus_arg(u: f64) -> f64 {
    if u.abs() < 0.2 {
        let u2 = u * u;
        u * u2 / 6.0
            * (1.0 + u2 / 20.0 * (1.0 + u2 / 42.0 * (1.0 + u2 / 72.0)))
    } else {
        u.sinh() - u
    }
}

/// Free-fall covariance matrix in closed form (identical masses, N = 2,
/// attractive coupling omega).
///
/// The `s02`/`s03` entries subtract `omega0^2 t^2`-scale terms that cancel to
/// `(omega t)^2`-relative residuals; they are evaluated through
/// `sinh(u) - u` so the weak-coupling regime (omega << omega0) keeps full
/// precision.
pub fn covariance_freefall(t: f64, omega: f64, omega0: f64, mass: f64, hbar: f64) -> CovarianceMatrix {
    let u = omega * t;
    let sh = u.sinh();
    let sh2 = (2.0 * u).sinh();
    let pref_x = hbar / (4.0 * mass * omega0);
    let pref_p = mass * hbar * omega0 / 4.0;
    let w0t = omega0 * t;
    let ratio = omega0 / omega;
    let s00 = pref_x * (2.0 + w0t * w0t + (1.0 + ratio * ratio) * sh * sh);
    // w0t^2 - ratio^2 sinh^2(u) = -ratio^2 (sinh u - u)(sinh u + u)
    let s02 = -pref_x * (ratio * ratio * sinh_minus_arg(u) * (sh + u) + sh * sh);
    let s11 = pref_p * (2.0 + (1.0 + (omega / omega0).powi(2)) * sh * sh);
    let s13 = -pref_p * (1.0 + (omega / omega0).powi(2)) * sh * sh;
    let s01 = hbar / 8.0 * (2.0 * w0t + (ratio + omega / omega0) * sh2);
    // 2 w0t - ratio sinh(2u) = -ratio (sinh(2u) - 2u)
    let s03 = -hbar / 8.0 * (ratio * sinh_minus_arg(2.0 * u) + omega / omega0 * sh2);
    CovarianceMatrix::from_matrix(
        Matrix4::new(
            s00, s01, s02, s03, //
            s01, s11, s03, s13, //
            s02, s03, s00, s01, //
            s03, s13, s01, s11,
        ),
        hbar,
    )
}

/// Trapped covariance matrix (traps kept on; omega < omega0 required).
/// Every entry oscillates with period `pi / 2 sqrt(omega0^2 - omega^2)`.
pub fn covariance_trapped(
    t: f64,
    omega: f64,
    omega0: f64,
    mass: f64,
    hbar: f64,
) -> Result<CovarianceMatrix> {
    if omega >= omega0 {
        return Err(Error::TrapUnstable { omega, omega0 });
    }
    let w2 = omega0 * omega0 - omega * omega;
    let w = w2.sqrt();
    let s = (w * t).sin();
    let s2t = (2.0 * w * t).sin();
    let o2 = omega * omega;
    let s00 = hbar / (4.0 * mass * omega0) * (2.0 + o2 / w2 * s * s);
    let s02 = -hbar * o2 / (4.0 * mass * omega0 * w2) * s * s;
    let s11 = mass * hbar * omega0 / 4.0 * (2.0 - o2 / (omega0 * omega0) * s * s);
    let s13 = mass * hbar * o2 / (4.0 * omega0) * s * s;
    let s01 = hbar * o2 / (8.0 * omega0 * w) * s2t;
    let s03 = -hbar * o2 / (8.0 * omega0 * w) * s2t;
    Ok(CovarianceMatrix::from_matrix(
        Matrix4::new(
            s00, s01, s02, s03, //
            s01, s11, s03, s13, //
            s02, s03, s00, s01, //
            s03, s13, s01, s11,
        ),
        hbar,
    ))
}

/// Repulsive-coupling covariance (omega -> i omega substitution, trigonometric
/// entries). With `time_averaged`, the fast oscillation is averaged out:
/// `sin^2 -> 1/2`, `sin(2 omega t) -> 0`.
pub fn covariance_repulsive(
    t: f64,
    omega: f64,
    omega0: f64,
    mass: f64,
    hbar: f64,
    time_averaged: bool,
) -> CovarianceMatrix {
    let (s_sq, s2t) = if time_averaged {
        (0.5, 0.0)
    } else {
        let s = (omega * t).sin();
        (s * s, (2.0 * omega * t).sin())
    };
    let pref_x = hbar / (4.0 * mass * omega0);
    let pref_p = mass * hbar * omega0 / 4.0;
    let w0t = omega0 * t;
    let ratio_minus = 1.0 - (omega0 / omega).powi(2);
    let ratio_minus_p = 1.0 - (omega / omega0).powi(2);
    let s00 = pref_x * (2.0 + w0t * w0t - ratio_minus * s_sq);
    let s02 = pref_x * (w0t * w0t + ratio_minus * s_sq);
    let s11 = pref_p * (2.0 - ratio_minus_p * s_sq);
    let s13 = pref_p * ratio_minus_p * s_sq;
    let s01 = hbar / 8.0 * (2.0 * w0t + (omega0 / omega - omega / omega0) * s2t);
    let s03 = hbar / 8.0 * (2.0 * w0t - (omega0 / omega - omega / omega0) * s2t);
    CovarianceMatrix::from_matrix(
        Matrix4::new(
            s00, s01, s02, s03, //
            s01, s11, s03, s13, //
            s02, s03, s00, s01, //
            s03, s13, s01, s11,
        ),
        hbar,
    )
}

/// Logarithmic negativity `E = max(0, -log2(nu_tilde_minus / (hbar/2)))`.
pub fn log_negativity(sigma: &CovarianceMatrix) -> Result<f64> {
    let (nu_minus, _) = sigma.symplectic_eigs(true)?;
    let floor = 1e-30 * sigma.hbar;
    let e = -(nu_minus.max(floor) / (0.5 * sigma.hbar)).log2();
    Ok(e.max(0.0))
}

/// Bosonic entropy function
/// `f(x) = (x + 1/2) log2(x + 1/2) - (x - 1/2) log2(x - 1/2)`, with the
/// `0 log 0` convention as x -> 1/2.
pub fn entropy_f(x: f64) -> f64 {
    let x = x.max(0.5);
    let plus = (x + 0.5) * (x + 0.5).log2();
    let minus = if x - 0.5 > 0.0 { (x - 0.5) * (x - 0.5).log2() } else { 0.0 };
    plus - minus
}

/// Entanglement entropy of a pure two-mode Gaussian state from its reduced
/// single-mode block: `S = f(sqrt(det alpha) / hbar)`.
pub fn entropy_from_covariance(sigma: &CovarianceMatrix) -> f64 {
    entropy_f(sigma.det_alpha().max(0.0).sqrt() / sigma.hbar)
}

/// Exact trapped-case negativity, `E = -1/2 log2(1 + 2 E - 2 sqrt(E^2 + E))`
/// with `E = omega^4 sin^2(W t) / 4 omega0^2 W^2`, `W = sqrt(omega0^2 - omega^2)`.
pub fn trapped_negativity_closed(t: f64, omega: f64, omega0: f64) -> Result<f64> {
    let cal_e = trapped_cal_e(t, omega, omega0)?;
    let arg = 1.0 + 2.0 * cal_e - 2.0 * (cal_e * cal_e + cal_e).sqrt();
    Ok((-0.5 * arg.log2()).max(0.0))
}

/// Exact trapped-case entropy through `S = f(S_cal)` with
/// `S_cal = 1/2 sqrt(1 + omega^4 sin^2(W t) / 4 omega0^2 W^2)`.
pub fn trapped_entropy_closed(t: f64, omega: f64, omega0: f64) -> Result<f64> {
    let cal_e = trapped_cal_e(t, omega, omega0)?;
    Ok(entropy_f(0.5 * (1.0 + cal_e).sqrt()))
}

fn trapped_cal_e(t: f64, omega: f64, omega0: f64) -> Result<f64> {
    if omega >= omega0 {
        return Err(Error::TrapUnstable { omega, omega0 });
    }
    let w2 = omega0 * omega0 - omega * omega;
    let s = (w2.sqrt() * t).sin();
    Ok(omega.powi(4) * s * s / (4.0 * omega0 * omega0 * w2))
}

/// Weak-coupling short-time approximation of the free-fall negativity
/// (valid for omega << omega0 and omega t << 1):
/// `E = -log2 sqrt(1 + 2 W^6 t^6 - 2 W^3 t^3 sqrt(1 + W^6 t^6))` with
/// `W^3 = omega0 omega^2 / 6`.
pub fn freefall_negativity_weak(t: f64, omega: f64, omega0: f64) -> f64 {
    let u = omega0 * omega * omega / 6.0 * t * t * t;
    let arg = 1.0 + 2.0 * u * u - 2.0 * u * (1.0 + u * u).sqrt();
    (-arg.sqrt().log2()).max(0.0)
}

/// Thermal occupation of a trap mode.
#[derive(Debug, Clone, Copy)]
pub struct ThermalSpec {
    pub temperature: f64,
    pub omega0: f64,
    nbar: f64,
}

impl ThermalSpec {
    /// From temperature (SI or any consistent unit set via hbar and kb).
    pub fn new(temperature: f64, omega0: f64, hbar: f64, kb: f64) -> Result<Self> {
        if temperature < 0.0 || !(omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature {temperature}, omega0 {omega0}"
            )));
        }
        let nbar = if temperature == 0.0 {
            0.0
        } else {
            1.0 / ((hbar * omega0 / (kb * temperature)).exp_m1())
        };
        Ok(ThermalSpec { temperature, omega0, nbar })
    }

    pub fn from_nbar(nbar: f64, omega0: f64) -> Result<Self> {
        if nbar < 0.0 {
            return Err(Error::InvalidParameter(format!("nbar {nbar}")));
        }
        Ok(ThermalSpec { temperature: f64::NAN, omega0, nbar })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }
}

/// `E(sigma_th) = max(0, E(sigma) - log2(2 nbar + 1))`.
pub fn thermal_negativity(e0: f64, nbar: f64) -> f64 {
    (e0 - (2.0 * nbar + 1.0).log2()).max(0.0)
}

/// Trapped-case oscillation amplitude at finite temperature:
/// `E0(T) = max(0, omega^2 / 2 ln2 omega0^2 - log2(2 nbar + 1))`.
pub fn trapped_amplitude_thermal(omega: f64, omega0: f64, nbar: f64) -> f64 {
    (omega * omega / (2.0 * LN2 * omega0 * omega0) - (2.0 * nbar + 1.0).log2()).max(0.0)
}

/// MOND thermal-witness parameters for the trapped configuration.
#[derive(Debug, Clone, Copy)]
pub struct MondWitness {
    /// Critical temperature at which the Newtonian amplitude vanishes:
    /// `T0 = hbar omega0 / k_B ln(omega0^2 L / a_N)`.
    pub t0: f64,
    /// Residual MOND amplitude at T0.
    pub residual_amplitude: f64,
}

pub fn mond_witness_params(
    l: f64,
    omega0: f64,
    a_newton: f64,
    a0: f64,
    hbar: f64,
    kb: f64,
) -> Result<MondWitness> {
    let log_arg = omega0 * omega0 * l / a_newton;
    if log_arg <= 1.0 {
        return Err(Error::DomainError(format!(
            "omega0^2 L / a_N = {log_arg} must exceed 1"
        )));
    }
    let t0 = hbar * omega0 / (kb * log_arg.ln());
    let residual = 2.0 * (a_newton * a0).sqrt() / (omega0 * omega0 * l * LN2)
        * ((2.0 / 3.0) * (2f64.sqrt() - 1.0) - (a_newton / a0).sqrt());
    Ok(MondWitness { t0, residual_amplitude: residual })
}

/// Thermal single-mode position density: normal with variance `(2n+1) sigma^2`.
pub fn thermal_position_density(x: f64, sigma_trap: f64, nbar: f64) -> f64 {
    let var = (2.0 * nbar + 1.0) * sigma_trap * sigma_trap;
    (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Thermal single-mode momentum density: normal with variance
/// `(2n+1) hbar^2 / 4 sigma^2`.
pub fn thermal_momentum_density(p: f64, sigma_trap: f64, nbar: f64, hbar: f64) -> f64 {
    let var = (2.0 * nbar + 1.0) * hbar * hbar / (4.0 * sigma_trap * sigma_trap);
    (-p * p / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Two-mode thermal Wigner function at phase-space point `u`:
/// `W = exp(-(u - mean)^T sigma^-1 (u - mean) / 2(2n+1))
///      / (2 pi)^2 (2n+1)^2 sqrt(det sigma)`.
pub fn wigner_thermal(
    u: &[f64; 4],
    mean: &[f64; 4],
    sigma: &CovarianceMatrix,
    nbar: f64,
) -> Result<f64> {
    let inv = sigma.mat.try_inverse().ok_or(Error::SingularCovariance)?;
    let det = sigma.det();
    if det <= 0.0 {
        return Err(Error::SingularCovariance);
    }
    let d = nalgebra::Vector4::new(
        u[0] - mean[0],
        u[1] - mean[1],
        u[2] - mean[2],
        u[3] - mean[3],
    );
    let quad = (inv * d).dot(&d);
    let scale = 2.0 * nbar + 1.0;
    let norm = (2.0 * std::f64::consts::PI).powi(2) * scale * scale * det.sqrt();
    Ok((-0.5 * quad / scale).exp() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::ComMoments;

    fn com_freefall(t: f64, sigma: f64, mass: f64, hbar: f64) -> ComMoments {
        let omega0 = hbar / (2.0 * mass * sigma * sigma);
        ComMoments {
            mean_r: 0.0,
            mean_p: 0.0,
            var_r: 0.5 * sigma * sigma * (1.0 + omega0 * omega0 * t * t),
            var_p: hbar * hbar / (2.0 * sigma * sigma),
            cov_rp: 0.5 * hbar * omega0 * t,
        }
    }

    #[test]
    fn freefall_initial_moments() {
        let m = relative_moments_freefall(0.0, 0.1, 1.3, 0.7, 50.0, 1.0, 1.0);
        assert!((m.var_r - 2.0 * 1.3 * 1.3).abs() < 1e-12);
        assert!((m.var_p - 1.0 / (8.0 * 1.3 * 1.3)).abs() < 1e-13);
        assert!(m.cov_rp.abs() < 1e-13);
        assert!(m.mean_r.abs() < 1e-13);
        assert!((m.mean_p + 0.7).abs() < 1e-13);
    }

    #[test]
    fn centered_moments_insensitive_to_p0_and_l() {
        let base = relative_moments_freefall(2.0, 0.07, 1.0, 0.0, 40.0, 1.0, 1.0);
        for &p0 in &[-3.0, -1.0, 0.5, 1.7, 3.0] {
            for &l in &[20.0, 75.0, 300.0] {
                let m = relative_moments_freefall(2.0, 0.07, 1.0, p0, l, 1.0, 1.0);
                assert!(
                    ((m.var_r - base.var_r) / base.var_r).abs() < 1e-10,
                    "var_r moved for p0={p0}, L={l}"
                );
                assert!(((m.var_p - base.var_p) / base.var_p).abs() < 1e-10);
                assert!(((m.cov_rp - base.cov_rp) / base.cov_rp).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn long_forms_match_simplified() {
        for &t in &[0.3, 1.0, 4.2] {
            let m = relative_moments_freefall(t, 0.11, 0.9, 1.3, 60.0, 1.0, 1.0);
            let (vr, vp, cov) = relative_variances_freefall_simplified(t, 0.11, 0.9, 1.0, 1.0);
            assert!(((m.var_r - vr) / vr).abs() < 1e-10);
            assert!(((m.var_p - vp) / vp).abs() < 1e-10);
            assert!(((m.cov_rp - cov) / cov).abs() < 1e-10);
        }
    }

    #[test]
    fn hyperbolic_identity_at_omega_equals_omega0() {
        // omega = omega0: var_r = 2 sigma^2 (cosh^2 + sinh^2) = 2 sigma^2 cosh(2wt)
        let sigma = 1.0f64;
        let omega0 = 0.5;
        let t = 0.1 / omega0; // omega t = 0.1
        let (vr, _, _) = relative_variances_freefall_simplified(t, omega0, sigma, 1.0, 1.0);
        let expect = 2.0 * sigma * sigma * (2.0f64 * 0.1).cosh();
        assert!(((vr - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn covariance_freefall_t0_is_product_state() {
        let c = covariance_freefall(0.0, 0.1, 0.5, 1.0, 1.0);
        assert!(c.entry(0, 1).abs() < 1e-14);
        assert!(c.entry(0, 2).abs() < 1e-14);
        assert!(c.entry(0, 3).abs() < 1e-14);
        assert!(c.entry(1, 3).abs() < 1e-14);
        assert_eq!(log_negativity(&c).unwrap(), 0.0);
        assert_eq!(entropy_from_covariance(&c), 0.0);
    }

    #[test]
    fn covariance_assembly_matches_closed_form() {
        let (sigma, mass, hbar): (f64, f64, f64) = (1.0, 1.0, 1.0);
        let omega = 0.05;
        let omega0 = hbar / (2.0 * mass * sigma * sigma);
        for &t in &[0.5, 2.0, 6.0] {
            let rel = relative_moments_freefall(t, omega, sigma, 0.3, 80.0, mass, hbar);
            let com = com_freefall(t, sigma, mass, hbar);
            let built = CovarianceMatrix::from_com_relative(&com, &rel, hbar);
            let closed = covariance_freefall(t, omega, omega0, mass, hbar);
            for i in 0..4 {
                for j in 0..4 {
                    let a = built.entry(i, j);
                    let b = closed.entry(i, j);
                    let scale = b.abs().max(1e-12);
                    assert!(
                        ((a - b) / scale).abs() < 1e-9,
                        "entry ({i},{j}) at t={t}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn purity_and_symplectic_product() {
        let hbar = 1.0;
        for &t in &[0.1, 1.0, 3.0, 10.0] {
            let c = covariance_freefall(t, 0.04, 0.5, 1.0, hbar);
            let det = c.det();
            let expect = (0.5f64 * hbar).powi(4);
            assert!(((det - expect) / expect).abs() < 1e-6, "det at t={t}: {det}");
            let (nm, np) = c.symplectic_eigs(false).unwrap();
            assert!(nm <= np);
            assert!(((nm * np - 0.25 * hbar * hbar) / (0.25 * hbar * hbar)).abs() < 1e-6);
            assert!(c.is_physical());
        }
    }

    #[test]
    fn vacuum_has_no_negativity() {
        let c = CovarianceMatrix::from_matrix(Matrix4::identity() * 0.5, 1.0);
        let (nm, np) = c.symplectic_eigs(true).unwrap();
        assert!((nm - 0.5).abs() < 1e-14 && (np - 0.5).abs() < 1e-14);
        assert_eq!(log_negativity(&c).unwrap(), 0.0);
    }

    #[test]
    fn thermal_scaling_of_symplectic_eigs() {
        let c = covariance_freefall(2.0, 0.04, 0.5, 1.0, 1.0);
        let nbar = 0.7;
        let ct = c.thermal_scale(nbar);
        let (nm, np) = c.symplectic_eigs(true).unwrap();
        let (tm, tp) = ct.symplectic_eigs(true).unwrap();
        let k = 2.0 * nbar + 1.0;
        assert!(((tm - k * nm) / (k * nm)).abs() < 1e-12);
        assert!(((tp - k * np) / (k * np)).abs() < 1e-12);
    }

    #[test]
    fn thermal_negativity_identity_exact() {
        // E(sigma_th) = max(0, E - log2(2n+1)) to 1e-12
        let c = covariance_freefall(3.0, 0.04, 0.5, 1.0, 1.0);
        let e0 = log_negativity(&c).unwrap();
        assert!(e0 > 0.01, "need entanglement for the test, E = {e0}");
        for &nbar in &[0.0, 0.05, 0.3, 2.0] {
            let et = log_negativity(&c.thermal_scale(nbar)).unwrap();
            let expect = thermal_negativity(e0, nbar);
            assert!(
                (et - expect).abs() < 1e-12,
                "nbar={nbar}: {et} vs {expect}"
            );
        }
    }

    #[test]
    fn trapped_periodicity_and_amplitude() {
        let omega0: f64 = 1.0;
        let omega = omega0 / 100.0;
        let mass = 1.0;
        let hbar = 1.0;
        let w = (omega0 * omega0 - omega * omega).sqrt();
        // entries carry sin^2(W t) and sin(2 W t): the matrix itself returns
        // after pi / W, with the entanglement peaking at pi / 2W
        let tau_matrix = std::f64::consts::PI / w;
        let c0 = covariance_trapped(0.0, omega, omega0, mass, hbar).unwrap();
        let c1 = covariance_trapped(tau_matrix, omega, omega0, mass, hbar).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (c0.entry(i, j) - c1.entry(i, j)).abs() < 1e-10 * c0.entry(i, i).abs(),
                    "entry ({i},{j}) did not return"
                );
            }
        }
        // negativity at the half-period point pi / 2W equals the amplitude
        // omega^2 / (2 ln2 omega0^2) within 1%
        let t_peak = std::f64::consts::PI / (2.0 * w);
        let peak =
            log_negativity(&covariance_trapped(t_peak, omega, omega0, mass, hbar).unwrap())
                .unwrap();
        let expect = omega * omega / (2.0 * LN2 * omega0 * omega0);
        assert!(
            ((peak - expect) / expect).abs() < 0.01,
            "amplitude {peak} vs {expect}"
        );
        // and it is the maximum over a scan
        let mut scan_peak: f64 = 0.0;
        for k in 0..400 {
            let t = k as f64 * tau_matrix / 200.0;
            let e = log_negativity(&covariance_trapped(t, omega, omega0, mass, hbar).unwrap())
                .unwrap();
            scan_peak = scan_peak.max(e);
        }
        assert!(scan_peak <= peak * (1.0 + 1e-9), "scan {scan_peak} vs peak {peak}");
    }

    #[test]
    fn trapped_closed_forms_match_matrix_route() {
        let omega0: f64 = 1.0;
        let omega = 0.3;
        for k in 1..40 {
            let t = k as f64 * 0.17;
            let c = covariance_trapped(t, omega, omega0, 1.0, 1.0).unwrap();
            let e_mat = log_negativity(&c).unwrap();
            let s_mat = entropy_from_covariance(&c);
            let e_cl = trapped_negativity_closed(t, omega, omega0).unwrap();
            let s_cl = trapped_entropy_closed(t, omega, omega0).unwrap();
            assert!((e_mat - e_cl).abs() < 1e-10, "E at t={t}: {e_mat} vs {e_cl}");
            assert!((s_mat - s_cl).abs() < 1e-10, "S at t={t}: {s_mat} vs {s_cl}");
        }
    }

    #[test]
    fn trapped_equals_freefall_under_substitution() {
        // trapped(t; omega) == freefall forms continued with omega -> i W,
        // W = sqrt(omega0^2 - omega^2): cosh(i W t) = cos(W t),
        // sinh(i W t) = i sin(W t)
        let (sigma, mass, hbar): (f64, f64, f64) = (1.0, 1.0, 1.0);
        let omega0 = hbar / (2.0 * mass * sigma * sigma);
        let omega = 0.31 * omega0;
        let w = (omega0 * omega0 - omega * omega).sqrt();
        for &t in &[0.4, 1.9, 7.3] {
            let trapped = relative_moments_trapped(t, omega, sigma, mass, hbar).unwrap();
            let c = (w * t).cos();
            let s = (w * t).sin();
            let var_r = 2.0 * sigma * sigma * (c * c + (omega0 / w).powi(2) * s * s);
            let var_p =
                hbar * hbar / (8.0 * sigma * sigma) * (c * c + (w / omega0).powi(2) * s * s);
            let cov = hbar / 4.0 * (omega0 / w - w / omega0) * (2.0 * w * t).sin();
            assert!(((trapped.var_r - var_r) / var_r).abs() < 1e-10, "var_r at t={t}");
            assert!(((trapped.var_p - var_p) / var_p).abs() < 1e-10, "var_p at t={t}");
            assert!(((trapped.cov_rp - cov) / cov).abs() < 1e-10, "cov at t={t}");

            // and the assembled matrix with the frozen COM reproduces the
            // closed-form trapped covariance
            let com = ComMoments {
                mean_r: 0.0,
                mean_p: 0.0,
                var_r: 0.5 * sigma * sigma,
                var_p: hbar * hbar / (2.0 * sigma * sigma),
                cov_rp: 0.0,
            };
            let built = CovarianceMatrix::from_com_relative(&com, &trapped, hbar);
            let closed = covariance_trapped(t, omega, omega0, mass, hbar).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let scale = closed.entry(i, i).abs().max(1e-12);
                    assert!(
                        ((built.entry(i, j) - closed.entry(i, j)) / scale).abs() < 1e-10,
                        "entry ({i},{j}) at t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn repulsive_t0_and_averaged_entries() {
        let (mass, hbar) = (1.0, 1.0);
        let omega0 = 0.5;
        let omega = 40.0;
        let c0 = covariance_repulsive(0.0, omega, omega0, mass, hbar, false);
        assert_eq!(log_negativity(&c0).unwrap(), 0.0);
        // averaged s01 = hbar omega0 t / 4
        for &t in &[0.1, 0.9, 3.0] {
            let c = covariance_repulsive(t, omega, omega0, mass, hbar, true);
            let expect = 0.25 * hbar * omega0 * t;
            assert!(((c.entry(0, 1) - expect) / expect).abs() < 1e-12);
            assert!(((c.entry(0, 3) - expect) / expect).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_negativity_consistency_for_pure_states() {
        for &t in &[0.0, 0.5, 2.0, 8.0] {
            let c = covariance_freefall(t, 0.03, 0.5, 1.0, 1.0);
            let e = log_negativity(&c).unwrap();
            let s = entropy_from_covariance(&c);
            assert_eq!(e > 1e-12, s > 1e-12, "E = {e}, S = {s} at t = {t}");
        }
    }

    #[test]
    fn weak_coupling_negativity_approximation() {
        // omega0 = 1e3 omega: the asymptotic form needs omega0 t >> 1 on top
        // of omega << omega0 and omega t << 1; within 5% once omega0 t >= 6
        let omega = 1e-3;
        let omega0: f64 = 1.0;
        for &wt in &[6e-3, 8e-3, 1e-2] {
            let t = wt / omega;
            let exact =
                log_negativity(&covariance_freefall(t, omega, omega0, 1.0, 1.0)).unwrap();
            let approx = freefall_negativity_weak(t, omega, omega0);
            assert!(
                ((approx - exact) / exact).abs() < 0.05,
                "omega t = {wt}: approx {approx} vs exact {exact}"
            );
        }
    }

    #[test]
    fn mond_witness_values() {
        use crate::units::Constants as K;
        // residual vanishes when a_N = a0 (2/3)^2 (sqrt2 - 1)^2
        let a0 = K::MOND_A0;
        let a_n = a0 * (2.0 / 3.0f64).powi(2) * (2f64.sqrt() - 1.0).powi(2);
        let w = mond_witness_params(1e-6, 2.5e4, a_n, a0, K::HBAR_SI, K::BOLTZMANN_KB).unwrap();
        assert!(w.residual_amplitude.abs() < 1e-25);
        // Newtonian amplitude vanishes at T0 by construction
        let l = 1.25e-6;
        let omega0 = 2.5e4;
        let r0: f64 = 500e-9;
        let m = K::DENSITY_SILICA * 4.0 / 3.0 * std::f64::consts::PI * r0.powi(3);
        let a_n = K::NEWTON_G * m / (l * l);
        let w = mond_witness_params(l, omega0, a_n, a0, K::HBAR_SI, K::BOLTZMANN_KB).unwrap();
        assert!(w.t0.is_finite() && w.t0 > 0.0);
        let th = ThermalSpec::new(w.t0, omega0, K::HBAR_SI, K::BOLTZMANN_KB).unwrap();
        let omega_n = (4.0 * K::NEWTON_G * m / (l * l * l)).sqrt();
        let amp = trapped_amplitude_thermal(omega_n, omega0, th.nbar());
        assert_eq!(amp, 0.0, "Newtonian amplitude must clamp to zero at T0");
    }

    #[test]
    fn thermal_density_variances() {
        let sigma = 2.0;
        // n = 0: variance sigma^2; n = 1: variance 3 sigma^2
        let d0 = thermal_position_density(0.0, sigma, 0.0);
        assert!((d0 - 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt())).abs() < 1e-15);
        let quad = |nbar: f64| {
            let mut acc = 0.0;
            let h = 0.01;
            let mut x = -40.0;
            while x <= 40.0 {
                acc += x * x * thermal_position_density(x, sigma, nbar) * h;
                x += h;
            }
            acc
        };
        assert!((quad(0.0) - sigma * sigma).abs() / (sigma * sigma) < 1e-6);
        assert!((quad(1.0) - 3.0 * sigma * sigma).abs() / (3.0 * sigma * sigma) < 1e-6);
    }

    #[test]
    fn wigner_peak_and_normalization() {
        let hbar = 1.0;
        let c = covariance_freefall(1.0, 0.05, 0.5, 1.0, hbar);
        let mean = [0.0; 4];
        // pure state peak: 1 / (pi^2 hbar^2 (2n+1)^2)
        for &nbar in &[0.0, 0.5] {
            let peak = wigner_thermal(&[0.0; 4], &mean, &c, nbar).unwrap();
            let expect = 1.0
                / (std::f64::consts::PI.powi(2) * hbar * hbar * (2.0 * nbar + 1.0).powi(2));
            assert!(((peak - expect) / expect).abs() < 1e-6, "{peak} vs {expect}");
        }
        // 4-D quadrature over +/- 6 sigma per axis = 1 +/- 1e-3
        let nbar = 0.0;
        let widths = [c.entry(0, 0).sqrt(), c.entry(1, 1).sqrt(), c.entry(2, 2).sqrt(), c.entry(3, 3).sqrt()];
        let n = 25usize;
        let mut total = 0.0;
        let steps: Vec<Vec<f64>> = widths
            .iter()
            .map(|w| {
                (0..n)
                    .map(|i| -6.0 * w + 12.0 * w * i as f64 / (n - 1) as f64)
                    .collect()
            })
            .collect();
        let vol: f64 = widths.iter().map(|w| 12.0 * w / (n - 1) as f64).product();
        for a in &steps[0] {
            for b in &steps[1] {
                for cx in &steps[2] {
                    for d in &steps[3] {
                        total += wigner_thermal(&[*a, *b, *cx, *d], &mean, &c, nbar).unwrap();
                    }
                }
            }
        }
        total *= vol;
        assert!((total - 1.0).abs() < 1e-3, "Wigner norm = {total}");
    }
}
