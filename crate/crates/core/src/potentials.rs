//! Central-interaction catalog: series expansions in r/L, the quadratic-term
//! frequency omega^2, and the force-gradient correction factors epsilon_n(t).
//!
//! Conventions (identical masses m): expanding any central potential V(r)
//! about the initial separation, the r^2 coefficient is matched against
//! `-m omega^2 / 4`, so `omega^2 = -2 V''(0) / m`. Attractive interactions
//! give omega^2 > 0 (hyperbolic covariance dynamics); repulsive ones give
//! omega^2 < 0 and downstream code uses the trigonometric closed forms (the
//! omega -> i omega substitution). A kept harmonic trap enters as
//! omega^2 = -omega0^2, which reproduces the trapped covariance via the same
//! substitution.

use crate::error::{Error, Result};
use crate::units::Constants;

/// One central interaction between two identical particles of mass `mass`
/// held at baseline separation `l`.
#[derive(Debug, Clone)]
pub enum CentralPotentialSpec {
    /// Newtonian gravity, `V = -G m^2 / (L + r)`.
    Newtonian { mass: f64, l: f64 },
    /// Coulomb between charges `z1 e`, `z2 e` embedded in the masses:
    /// `V = z1 z2 alpha hbar c / (L + r)`. Positive product = repulsive.
    Coulomb { z1: f64, z2: f64, mass: f64, l: f64, hbar_c: f64 },
    /// `V = -C / (X + r)^j`.
    GenericPotential { c: f64, x: f64, j: f64, mass: f64 },
    /// `F = -C / (X + r)^j` (force known, potential integrated when needed).
    GenericForce { c: f64, x: f64, j: f64, mass: f64 },
    /// Casimir energy between sphere surfaces under the proximity-force
    /// approximation: `V = -pi^3 hbar c R0 / 1440 (L - 2 R0 + r)^2`.
    Casimir { r0: f64, l: f64, mass: f64, hbar_c: f64 },
    /// Deep-MOND two-body potential for identical masses:
    /// `V = (4/3)(sqrt 2 - 1) m sqrt(G m a0) ln(L + r)`.
    Mond { mass: f64, l: f64, g: f64, a0: f64 },
    /// Harmonic trap kept on, contributing `+ (1/4) m omega0^2 r^2` to the
    /// relative Hamiltonian.
    HarmonicTrap { omega0: f64, mass: f64 },
    /// Several central interactions acting side by side.
    Composite(Vec<CentralPotentialSpec>),
}

/// Attraction/repulsion tag derived from the sign of omega^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionSign {
    /// omega^2 > 0, hyperbolic Gaussian dynamics.
    Attractive,
    /// omega^2 < 0, trigonometric dynamics via omega -> i omega.
    Repulsive,
}

impl CentralPotentialSpec {
    pub fn mass(&self) -> f64 {
        match self {
            CentralPotentialSpec::Newtonian { mass, .. }
            | CentralPotentialSpec::Coulomb { mass, .. }
            | CentralPotentialSpec::GenericPotential { mass, .. }
            | CentralPotentialSpec::GenericForce { mass, .. }
            | CentralPotentialSpec::Casimir { mass, .. }
            | CentralPotentialSpec::Mond { mass, .. }
            | CentralPotentialSpec::HarmonicTrap { mass, .. } => *mass,
            CentralPotentialSpec::Composite(list) => {
                list.first().map(|s| s.mass()).unwrap_or(0.0)
            }
        }
    }

    /// Convenience constructors with library constants.
    pub fn newtonian_si(mass: f64, l: f64) -> Self {
        CentralPotentialSpec::Newtonian { mass, l }
    }

    pub fn mond_si(mass: f64, l: f64) -> Self {
        CentralPotentialSpec::Mond { mass, l, g: Constants::NEWTON_G, a0: Constants::MOND_A0 }
    }
}

/// Signed omega^2 (see module docs for the sign convention).
pub fn omega_squared_signed(spec: &CentralPotentialSpec) -> Result<f64> {
    Ok(match spec {
        CentralPotentialSpec::Newtonian { mass, l } => {
            require_positive(&[("mass", *mass), ("l", *l)])?;
            4.0 * Constants::NEWTON_G * mass / (l * l * l)
        }
        CentralPotentialSpec::Coulomb { z1, z2, mass, l, hbar_c } => {
            require_positive(&[("mass", *mass), ("l", *l), ("hbar_c", *hbar_c)])?;
            // repulsive for like charges: negative signed omega^2
            -4.0 * z1 * z2 * Constants::FINE_STRUCTURE_ALPHA * hbar_c / (mass * l * l * l)
        }
        CentralPotentialSpec::GenericPotential { c, x, j, mass } => {
            require_positive(&[("x", *x), ("j", *j), ("mass", *mass)])?;
            2.0 * j * (j + 1.0) * c / (mass * x.powf(j + 2.0))
        }
        CentralPotentialSpec::GenericForce { c, x, j, mass } => {
            require_positive(&[("x", *x), ("j", *j), ("mass", *mass)])?;
            2.0 * j * c / (mass * x.powf(j + 1.0))
        }
        CentralPotentialSpec::Casimir { r0, l, mass, hbar_c } => {
            require_positive(&[("r0", *r0), ("mass", *mass), ("hbar_c", *hbar_c)])?;
            if *l <= 2.0 * r0 {
                return Err(Error::ProximityViolated { l: *l, r0: *r0 });
            }
            let gap = l - 2.0 * r0;
            std::f64::consts::PI.powi(3) * hbar_c * r0 / (120.0 * mass * gap.powi(4))
        }
        CentralPotentialSpec::Mond { mass, l, g, a0 } => {
            require_positive(&[("mass", *mass), ("l", *l), ("g", *g), ("a0", *a0)])?;
            (8.0 / 3.0) * (2f64.sqrt() - 1.0) * (g * mass * a0).sqrt() / (l * l)
        }
        CentralPotentialSpec::HarmonicTrap { omega0, mass } => {
            require_positive(&[("omega0", *omega0), ("mass", *mass)])?;
            -omega0 * omega0
        }
        CentralPotentialSpec::Composite(list) => {
            let mut sum = 0.0;
            for s in list {
                sum += omega_squared_signed(s)?;
            }
            sum
        }
    })
}

/// |omega^2| together with the attraction/repulsion tag.
pub fn omega_squared(spec: &CentralPotentialSpec) -> Result<(f64, InteractionSign)> {
    let signed = omega_squared_signed(spec)?;
    if signed >= 0.0 {
        Ok((signed, InteractionSign::Attractive))
    } else {
        Ok((-signed, InteractionSign::Repulsive))
    }
}

/// Cubic-order force-gradient amplification factor in the free-drift
/// approximation `<r> ~ -2 p0 t / m`.
pub fn epsilon3(spec: &CentralPotentialSpec, p0: f64, t: f64) -> Result<f64> {
    Ok(match spec {
        CentralPotentialSpec::Newtonian { mass, l } => 6.0 * p0 * t / (mass * l),
        CentralPotentialSpec::Coulomb { mass, l, .. } => 6.0 * p0 * t / (mass * l),
        CentralPotentialSpec::GenericPotential { x, j, mass, .. } => {
            2.0 * (j + 2.0) * p0 * t / (mass * x)
        }
        CentralPotentialSpec::GenericForce { x, j, mass, .. } => {
            2.0 * (j + 1.0) * p0 * t / (mass * x)
        }
        CentralPotentialSpec::Casimir { r0, l, mass, .. } => {
            8.0 * p0 * t / (mass * (l - 2.0 * r0))
        }
        // V = K ln(L+r) gives F = -K/(L+r): the generic-force rule with j = 1
        CentralPotentialSpec::Mond { mass, l, .. } => 4.0 * p0 * t / (mass * l),
        CentralPotentialSpec::HarmonicTrap { .. } => 0.0,
        CentralPotentialSpec::Composite(list) => {
            let mut num = 0.0;
            let mut den = 0.0;
            for s in list {
                let w2 = omega_squared_signed(s)?;
                num += w2 * epsilon3(s, p0, t)?;
                den += w2;
            }
            if den == 0.0 {
                return Err(Error::DomainError("composite omega^2 sums to zero".into()));
            }
            num / den
        }
    })
}

/// Strong-coupling fallback: `epsilon_3 = -3 <r> / L` from a supplied mean
/// relative displacement.
pub fn epsilon3_from_mean_r(mean_r: f64, l: f64) -> f64 {
    -3.0 * mean_r / l
}

/// Gamma((m + 1) / 2) for integer m >= 0, via half-integer closed forms.
fn gamma_half_integer(m: usize) -> f64 {
    if m % 2 == 1 {
        // Gamma of a positive integer (m+1)/2
        let k = (m + 1) / 2;
        (1..k).map(|i| i as f64).product()
    } else {
        // Gamma(k + 1/2) = (2k-1)!! sqrt(pi) / 2^k with k = m/2
        let k = m / 2;
        let mut v = std::f64::consts::PI.sqrt();
        for i in 0..k {
            v *= (2 * i + 1) as f64 / 2.0;
        }
        v
    }
}

/// n-th order force-gradient correction for inverse-square-force (gravity-like)
/// interactions, with the reduced-mass packet approximated as a drifting
/// Gaussian: `r_cl = -2 p0 t / m`, `dr0^2 = 2 sigma^2 (1 + omega0^2 t^2)`.
///
/// `epsilon_n = ((-1)^n / 2 sqrt(pi) L^(n-2)) n (n-1)
///   sum_{m even} C(n-2, m) r_cl^(n-m-2) (sqrt(2) dr0)^m Gamma((m+1)/2)`.
pub fn epsilon_n(
    n: usize,
    l: f64,
    p0: f64,
    sigma: f64,
    omega0: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "correction series starts at n = 3, got {n}"
        )));
    }
    let r_cl = -2.0 * p0 * t / mass;
    let dr0 = (2.0 * sigma * sigma * (1.0 + omega0 * omega0 * t * t)).sqrt();
    let sqrt2_dr0 = 2f64.sqrt() * dr0;
    let k = n - 2;
    let mut sum = 0.0;
    let mut m = 0usize;
    while m <= k {
        sum += binomial(k, m)
            * r_cl.powi((k - m) as i32)
            * sqrt2_dr0.powi(m as i32)
            * gamma_half_integer(m);
        m += 2;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / (2.0 * std::f64::consts::PI.sqrt() * l.powi((n - 2) as i32))
        * (n * (n - 1)) as f64
        * sum)
}

/// Closed-form fourth-order correction:
/// `epsilon_4 = 24 p0^2 t^2 / m^2 L^2 + 12 sigma^2 / L^2 (1 + omega0^2 t^2)`.
pub fn epsilon4(l: f64, p0: f64, sigma: f64, omega0: f64, mass: f64, t: f64) -> f64 {
    24.0 * p0 * p0 * t * t / (mass * mass * l * l)
        + 12.0 * sigma * sigma / (l * l) * (1.0 + omega0 * omega0 * t * t)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v *= (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Taylor coefficients of V(r) about r = 0: `V(r) = sum c_n r^n + O(r^(N+1))`.
#[derive(Debug, Clone)]
pub struct ExpansionCoeffs {
    /// c_0 .. c_N, units energy / length^n.
    pub coeffs: Vec<f64>,
    /// The n = 0 term is a constant offset; numeric propagation drops it.
    pub constant_droppable: bool,
}

impl ExpansionCoeffs {
    /// Evaluate the truncated series at displacement r.
    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    /// Evaluate with the constant term removed.
    pub fn eval_without_constant(&self, r: f64) -> f64 {
        self.eval(r) - self.coeffs[0]
    }
}

/// Binomial/Taylor expansion of the interaction to order `n_max`.
pub fn expand(spec: &CentralPotentialSpec, n_max: usize) -> Result<ExpansionCoeffs> {
    let mut coeffs = vec![0.0; n_max + 1];
    accumulate_expansion(spec, n_max, &mut coeffs)?;
    Ok(ExpansionCoeffs { coeffs, constant_droppable: true })
}

fn accumulate_expansion(
    spec: &CentralPotentialSpec,
    n_max: usize,
    coeffs: &mut [f64],
) -> Result<()> {
    match spec {
        CentralPotentialSpec::Newtonian { mass, l } => {
            // -G m^2 / (L + r): c_n = -G m^2 (-1)^n / L^(n+1)
            let k = Constants::NEWTON_G * mass * mass;
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c += -k * neg_pow(n) / l.powi(n as i32 + 1);
            }
        }
        CentralPotentialSpec::Coulomb { z1, z2, l, hbar_c, .. } => {
            let k = z1 * z2 * Constants::FINE_STRUCTURE_ALPHA * hbar_c;
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c += k * neg_pow(n) / l.powi(n as i32 + 1);
            }
        }
        CentralPotentialSpec::GenericPotential { c: amp, x, j, .. } => {
            // -C/(X+r)^j: c_n = -C (-1)^n binom(j+n-1, n) / X^(j+n)
            let mut binom = 1.0;
            for (n, c) in coeffs.iter_mut().enumerate() {
                if n > 0 {
                    binom *= (j + n as f64 - 1.0) / n as f64;
                }
                *c += -amp * neg_pow(n) * binom / x.powf(j + n as f64);
            }
        }
        CentralPotentialSpec::GenericForce { c: amp, x, j, .. } => {
            // F = -C/(X+r)^j; V' = -F = C/(X+r)^j
            if (*j - 1.0).abs() < 1e-12 {
                // V = C ln(X + r)
                coeffs[0] += amp * x.ln();
                for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
                    *c += amp * -neg_pow(n) / (n as f64 * x.powi(n as i32));
                }
            } else {
                // V = -C / ((j-1)(X+r)^(j-1))
                let scale = -amp / (j - 1.0);
                let jeff = j - 1.0;
                let mut binom = 1.0;
                for (n, c) in coeffs.iter_mut().enumerate() {
                    if n > 0 {
                        binom *= (jeff + n as f64 - 1.0) / n as f64;
                    }
                    *c += scale * neg_pow(n) * binom / x.powf(jeff + n as f64);
                }
            }
        }
        CentralPotentialSpec::Casimir { r0, l, hbar_c, mass } => {
            if *l <= 2.0 * r0 {
                return Err(Error::ProximityViolated { l: *l, r0: *r0 });
            }
            let inner = CentralPotentialSpec::GenericPotential {
                c: std::f64::consts::PI.powi(3) * hbar_c * r0 / 1440.0,
                x: l - 2.0 * r0,
                j: 2.0,
                mass: *mass,
            };
            accumulate_expansion(&inner, n_max, coeffs)?;
        }
        CentralPotentialSpec::Mond { mass, l, g, a0 } => {
            // K ln(L + r) with K = (4/3)(sqrt2 - 1) m sqrt(G m a0)
            let k = (4.0 / 3.0) * (2f64.sqrt() - 1.0) * mass * (g * mass * a0).sqrt();
            coeffs[0] += k * l.ln();
            for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
                *c += k * -neg_pow(n) / (n as f64 * l.powi(n as i32));
            }
        }
        CentralPotentialSpec::HarmonicTrap { omega0, mass } => {
            if coeffs.len() > 2 {
                coeffs[2] += 0.25 * mass * omega0 * omega0;
            }
        }
        CentralPotentialSpec::Composite(list) => {
            for s in list {
                accumulate_expansion(s, n_max, coeffs)?;
            }
        }
    }
    Ok(())
}

fn neg_pow(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Exact potential value V(r) (displacement r from baseline separation),
/// for expansion-residual checks.
pub fn exact_potential(spec: &CentralPotentialSpec, r: f64) -> Result<f64> {
    Ok(match spec {
        CentralPotentialSpec::Newtonian { mass, l } => {
            -Constants::NEWTON_G * mass * mass / (l + r)
        }
        CentralPotentialSpec::Coulomb { z1, z2, l, hbar_c, .. } => {
            z1 * z2 * Constants::FINE_STRUCTURE_ALPHA * hbar_c / (l + r)
        }
        CentralPotentialSpec::GenericPotential { c, x, j, .. } => -c / (x + r).powf(*j),
        CentralPotentialSpec::GenericForce { c, x, j, .. } => {
            if (*j - 1.0).abs() < 1e-12 {
                c * (x + r).ln()
            } else {
                -c / ((j - 1.0) * (x + r).powf(j - 1.0))
            }
        }
        CentralPotentialSpec::Casimir { r0, l, hbar_c, .. } => {
            -std::f64::consts::PI.powi(3) * hbar_c * r0
                / (1440.0 * (l - 2.0 * r0 + r).powi(2))
        }
        CentralPotentialSpec::Mond { mass, l, g, a0 } => {
            (4.0 / 3.0) * (2f64.sqrt() - 1.0) * mass * (g * mass * a0).sqrt() * (l + r).ln()
        }
        CentralPotentialSpec::HarmonicTrap { omega0, mass } => {
            0.25 * mass * omega0 * omega0 * r * r
        }
        CentralPotentialSpec::Composite(list) => {
            let mut v = 0.0;
            for s in list {
                v += exact_potential(s, r)?;
            }
            v
        }
    })
}

/// Deep-MOND regime test for two spheres of density rho0 and radius r0 at
/// separation l.
#[derive(Debug, Clone, Copy)]
pub struct MondRegime {
    /// True when the internal Newtonian acceleration is at least an order of
    /// magnitude below the MOND scale a0.
    pub deep_mond: bool,
    /// (L/R0) divided by the threshold value; > 1 means MONDian entanglement
    /// considerably exceeds Newtonian.
    pub ratio: f64,
    /// Newtonian acceleration G m / L^2.
    pub a_newton: f64,
    /// Threshold for L/R0.
    pub threshold: f64,
}

pub fn mond_regime_check(rho0: f64, r0: f64, l: f64) -> Result<MondRegime> {
    require_positive(&[("rho0", rho0), ("r0", r0), ("l", l)])?;
    let mass = rho0 * 4.0 / 3.0 * std::f64::consts::PI * r0.powi(3);
    let a_newton = Constants::NEWTON_G * mass / (l * l);
    let threshold = 3f64.sqrt() / (2f64.sqrt() - 1.0)
        * (std::f64::consts::PI * Constants::NEWTON_G * rho0 * r0 / Constants::MOND_A0).sqrt();
    Ok(MondRegime {
        deep_mond: a_newton <= 0.1 * Constants::MOND_A0,
        ratio: (l / r0) / threshold,
        a_newton,
        threshold,
    })
}

fn require_positive(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !(*v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}
