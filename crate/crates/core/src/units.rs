//! Physical constants and unit-system plumbing.
//!
//! Three working unit systems are supported: natural units with c = 1 where
//! lengths are in fm, energies/masses/momenta in MeV and times in fm/c
//! (nuclear scattering); straight SI (optomechanical entanglement); and
//! dimensionless hbar = m = 1 (desk-scale demonstrations).

/// CODATA / literature constants used throughout.
pub struct Constants;

impl Constants {
    /// hbar*c in MeV*fm.
    pub const HBAR_C_MEV_FM: f64 = 197.326_980_4;
    /// Fine-structure constant.
    pub const FINE_STRUCTURE_ALPHA: f64 = 1.0 / 137.035_999_084;
    /// Alpha-particle rest mass in MeV.
    pub const ALPHA_PARTICLE_MASS_MEV: f64 = 3_727.379_406_6;
    /// Newtonian gravitational constant, m^3 kg^-1 s^-2.
    pub const NEWTON_G: f64 = 6.674_30e-11;
    /// MOND critical acceleration, m/s^2.
    pub const MOND_A0: f64 = 1.2e-10;
    /// Boltzmann constant, J/K.
    pub const BOLTZMANN_KB: f64 = 1.380_649e-23;
    /// Reduced Planck constant, J*s.
    pub const HBAR_SI: f64 = 1.054_571_817e-34;
    /// Speed of light, m/s.
    pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
    /// Density of osmium, kg/m^3 (22.5872 g/cm^3).
    pub const DENSITY_OSMIUM: f64 = 22_587.2;
    /// Density of silica, kg/m^3 (2.65 g/cm^3).
    pub const DENSITY_SILICA: f64 = 2_650.0;
    /// Elementary charge, C.
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
}

/// Kind tag for scalar unit conversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Length,
    Time,
    Energy,
    Mass,
    Momentum,
}

/// Active unit system for a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// c = 1; length fm, energy/mass MeV, time fm/c, momentum MeV.
    NaturalMeVfm,
    /// Straight SI.
    Si,
    /// hbar = m = 1 demonstration units. No SI mapping is defined.
    #[default]
    Dimensionless,
}

impl UnitSystem {
    /// hbar in this system's numeric convention.
    ///
    /// In natural MeV*fm units times are measured in fm/c, so hbar carries
    /// the numeric value of hbar*c.
    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::NaturalMeVfm => Constants::HBAR_C_MEV_FM,
            UnitSystem::Si => Constants::HBAR_SI,
            UnitSystem::Dimensionless => 1.0,
        }
    }

    /// Multiplier taking a value of `q` in this system to SI.
    ///
    /// Dimensionless mode has no SI anchor and maps with factor 1.
    pub fn to_si_factor(self, q: Quantity) -> f64 {
        const MEV_J: f64 = 1.602_176_634e-13;
        const FM_M: f64 = 1e-15;
        match self {
            UnitSystem::Si | UnitSystem::Dimensionless => 1.0,
            UnitSystem::NaturalMeVfm => match q {
                Quantity::Length => FM_M,
                Quantity::Time => FM_M / Constants::SPEED_OF_LIGHT,
                Quantity::Energy => MEV_J,
                // mass in MeV is E/c^2, momentum in MeV is E/c
                Quantity::Mass => {
                    MEV_J / (Constants::SPEED_OF_LIGHT * Constants::SPEED_OF_LIGHT)
                }
                Quantity::Momentum => MEV_J / Constants::SPEED_OF_LIGHT,
            },
        }
    }

    pub fn to_si(self, q: Quantity, value: f64) -> f64 {
        value * self.to_si_factor(q)
    }

    pub fn from_si(self, q: Quantity, value: f64) -> f64 {
        value / self.to_si_factor(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_constants() {
        assert_eq!(Constants::HBAR_C_MEV_FM, 197.3269804);
        assert!((Constants::FINE_STRUCTURE_ALPHA * 137.035999084 - 1.0).abs() < 1e-15);
        assert_eq!(Constants::ALPHA_PARTICLE_MASS_MEV, 3727.3794066);
        assert_eq!(Constants::MOND_A0, 1.2e-10);
        assert_eq!(Constants::DENSITY_OSMIUM, 22587.2);
        assert_eq!(Constants::DENSITY_SILICA, 2650.0);
    }

    #[test]
    fn si_round_trip_identity() {
        let sys = UnitSystem::NaturalMeVfm;
        for q in [
            Quantity::Length,
            Quantity::Time,
            Quantity::Energy,
            Quantity::Mass,
            Quantity::Momentum,
        ] {
            for &v in &[1.0, 197.3269804, 3.2e-7, 4.5e11] {
                let back = sys.from_si(q, sys.to_si(q, v));
                assert!(
                    (back - v).abs() <= 1e-12 * v.abs(),
                    "round trip failed for {q:?}: {v} -> {back}"
                );
            }
        }
    }

    #[test]
    fn natural_hbar_is_hbar_c() {
        assert_eq!(UnitSystem::NaturalMeVfm.hbar(), Constants::HBAR_C_MEV_FM);
        assert_eq!(UnitSystem::Dimensionless.hbar(), 1.0);
    }

    #[test]
    fn mass_conversion_alpha_particle() {
        // 3727.379 MeV/c^2 is about 6.64 x 10^-27 kg
        let kg = UnitSystem::NaturalMeVfm.to_si(Quantity::Mass, Constants::ALPHA_PARTICLE_MASS_MEV);
        assert!((kg - 6.6446573450e-27).abs() / 6.64e-27 < 1e-4, "{kg}");
    }
}
