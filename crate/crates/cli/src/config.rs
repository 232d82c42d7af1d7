//! TOML scenario configuration.

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub units: UnitsSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub evolve: Option<EvolveParams>,
    #[serde(rename = "box")]
    pub box_: Option<BoxParams>,
    pub rutherford: Option<RutherfordParams>,
    pub tunneling: Option<TunnelingParams>,
    #[serde(rename = "entangle-gaussian")]
    pub entangle_gaussian: Option<EntangleGaussianParams>,
    #[serde(rename = "entangle-numeric")]
    pub entangle_numeric: Option<EntangleNumericParams>,
    #[serde(rename = "mond-compare")]
    pub mond_compare: Option<MondCompareParams>,
    #[serde(rename = "casimir-compare")]
    pub casimir_compare: Option<CasimirCompareParams>,
    pub convergence: Option<ConvergenceParams>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub kind: String,
    /// Output basename; defaults to the kind.
    pub name: Option<String>,
    /// "fast" (default) or "slow"; slow configs refuse to run without
    /// --tier slow.
    #[serde(default)]
    pub tier: Tier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Fast,
    Slow,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct UnitsSection {
    /// Optional declaration; validated against the scenario's convention.
    pub system: Option<UnitSystemName>,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
pub enum UnitSystemName {
    #[serde(rename = "dimensionless")]
    #[default]
    Dimensionless,
    #[serde(rename = "natural-mev-fm")]
    NaturalMevFm,
    #[serde(rename = "si")]
    Si,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dx: Option<f64>,
    pub dt: Option<f64>,
    pub stencil: Option<StencilName>,
    /// Steps between output samples.
    pub cadence: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StencilName {
    Tri,
    Penta,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpecToml {
    /// "free", "harmonic" or "coulomb"
    pub kind: String,
    pub omega: Option<f64>,
    pub z_projectile: Option<f64>,
    pub z_target: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub x_min: f64,
    pub x_max: f64,
    pub sigma: f64,
    pub x0: f64,
    pub p0: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub t_end: f64,
    pub potential: PotentialSpecToml,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxParams {
    #[serde(default = "ten")]
    pub half_width: f64,
    pub sigma: f64,
    #[serde(default)]
    pub x0: f64,
    pub p0: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RutherfordParams {
    #[serde(default = "two")]
    pub z_projectile: f64,
    #[serde(default = "seventy_nine")]
    pub z_target: f64,
    /// Launch distance in pm.
    pub launch_pm: f64,
    /// Kinetic energy in MeV.
    pub kinetic_mev: f64,
    /// Initial spread in fm.
    pub sigma_fm: f64,
    /// "turnaround" (default) or "return".
    #[serde(default)]
    pub track: TrackName,
    /// Thin the trajectory to at most this many CSV rows.
    #[serde(default = "max_rows")]
    pub max_rows: usize,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum TrackName {
    #[default]
    Turnaround,
    Return,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelingParams {
    #[serde(default = "two")]
    pub z_projectile: f64,
    #[serde(default = "seventy_nine")]
    pub z_target: f64,
    pub launch_pm: f64,
    pub kinetic_mev: f64,
    /// Sweep of initial spreads in fm.
    pub sigmas_fm: Vec<f64>,
    #[serde(default = "well_cut_default")]
    pub well_fm: f64,
    #[serde(default = "flux_default")]
    pub flux_threshold: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangleGaussianParams {
    /// "osmium" or "silica".
    pub material: String,
    /// Sphere mass in kg (radius follows from the density), or radius.
    pub mass_kg: Option<f64>,
    pub radius_nm: Option<f64>,
    #[serde(default = "l_over_r0_default")]
    pub l_over_r0: f64,
    /// Initial spread in nm; alternatively omega0 (rad/s) fixes it.
    pub sigma_nm: Option<f64>,
    pub omega0: Option<f64>,
    /// "freefall" (default), "trapped" or "repulsive".
    #[serde(default)]
    pub mode: GaussianMode,
    /// "newtonian" (default), "mond", "casimir" or "newtonian+casimir".
    #[serde(default = "newtonian")]
    pub interaction: String,
    pub t_max_s: f64,
    pub samples: usize,
    /// Optional bath temperature in microkelvin for thermal columns.
    pub temperature_uk: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum GaussianMode {
    #[default]
    Freefall,
    Trapped,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangleNumericParams {
    /// Quadratic-coupling frequency (desk-scale units, hbar = m = 1).
    pub omega: f64,
    /// Baseline separation.
    pub l: f64,
    #[serde(default = "one")]
    pub sigma: f64,
    pub p0: f64,
    /// Expansion order N >= 2.
    pub order: usize,
    pub t_end: f64,
    pub samples: usize,
    /// Compute Schmidt entropy alongside the covariance route.
    #[serde(default = "truthy")]
    pub schmidt: bool,
    /// LAB-grid coarsening factor for the SVD.
    #[serde(default = "coarsen_default")]
    pub coarsen: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MondCompareParams {
    pub material: String,
    pub radius_nm: f64,
    #[serde(default = "l_over_r0_default")]
    pub l_over_r0: f64,
    /// Trap frequency in rad/s.
    pub omega0: f64,
    pub temperature_uk: f64,
    pub t_max_s: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasimirCompareParams {
    pub material: String,
    pub mass_kg: f64,
    /// Trap frequency in rad/s (sets sigma).
    pub omega0: f64,
    #[serde(default = "casimir_l_default")]
    pub l_over_r0: f64,
    pub t_max_s: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceParams {
    /// "free-gaussian" or "rutherford".
    pub mode: String,
    pub dxs: Vec<f64>,
    pub dts: Vec<f64>,
    /// free-gaussian: evolve to this time (defaults 20).
    pub t_end: Option<f64>,
    /// rutherford: launch distance in pm (defaults 10).
    pub launch_pm: Option<f64>,
    pub kinetic_mev: Option<f64>,
    pub sigma_fm: Option<f64>,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn ten() -> f64 {
    10.0
}
fn seventy_nine() -> f64 {
    79.0
}
fn well_cut_default() -> f64 {
    25.0
}
fn flux_default() -> f64 {
    1e-12
}
fn l_over_r0_default() -> f64 {
    2.5
}
fn casimir_l_default() -> f64 {
    2.1
}
fn newtonian() -> String {
    "newtonian".into()
}
fn truthy() -> bool {
    true
}
fn coarsen_default() -> usize {
    4
}
fn max_rows() -> usize {
    4000
}

pub const SCENARIO_KINDS: [&str; 9] = [
    "evolve",
    "box",
    "rutherford",
    "tunneling",
    "entangle-gaussian",
    "entangle-numeric",
    "mond-compare",
    "casimir-compare",
    "convergence",
];

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let config: Config =
            toml::from_str(text).map_err(|e| CliError::Config(format!("{e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Structural validation beyond serde: the kind must be known and its
    /// parameter section present.
    pub fn validate(&self) -> Result<(), CliError> {
        let kind = self.scenario.kind.as_str();
        if !SCENARIO_KINDS.contains(&kind) {
            return Err(CliError::Config(format!(
                "unknown scenario kind '{kind}' (expected one of {})",
                SCENARIO_KINDS.join(", ")
            )));
        }
        let present = match kind {
            "evolve" => self.evolve.is_some(),
            "box" => self.box_.is_some(),
            "rutherford" => self.rutherford.is_some(),
            "tunneling" => self.tunneling.is_some(),
            "entangle-gaussian" => self.entangle_gaussian.is_some(),
            "entangle-numeric" => self.entangle_numeric.is_some(),
            "mond-compare" => self.mond_compare.is_some(),
            "casimir-compare" => self.casimir_compare.is_some(),
            "convergence" => self.convergence.is_some(),
            _ => unreachable!(),
        };
        if !present {
            return Err(CliError::Config(format!(
                "missing [{kind}] parameter section for scenario kind '{kind}'"
            )));
        }
        // convergence mixes conventions per mode; skip the declaration check there
        if kind != "convergence" {
            if let Some(declared) = self.units.system {
                let expected = expected_units(kind);
                if declared != expected {
                    return Err(CliError::Config(format!(
                        "scenario '{kind}' runs in {expected:?} units, config declares {declared:?}"
                    )));
                }
            }
        }
        self.check_positive()?;
        Ok(())
    }

    fn check_positive(&self) -> Result<(), CliError> {
        let mut bad: Vec<String> = Vec::new();
        fn req(bad: &mut Vec<String>, name: &str, v: f64) {
            if !(v > 0.0) || !v.is_finite() {
                bad.push(format!("{name} = {v}"));
            }
        }
        if let Some(p) = &self.evolve {
            req(&mut bad, "evolve.sigma", p.sigma);
            req(&mut bad, "evolve.t_end", p.t_end);
            req(&mut bad, "evolve.mass", p.mass);
        }
        if let Some(p) = &self.box_ {
            req(&mut bad, "box.sigma", p.sigma);
            req(&mut bad, "box.half_width", p.half_width);
            req(&mut bad, "box.t_end", p.t_end);
        }
        if let Some(p) = &self.rutherford {
            req(&mut bad, "rutherford.launch_pm", p.launch_pm);
            req(&mut bad, "rutherford.kinetic_mev", p.kinetic_mev);
            req(&mut bad, "rutherford.sigma_fm", p.sigma_fm);
        }
        if let Some(p) = &self.tunneling {
            req(&mut bad, "tunneling.launch_pm", p.launch_pm);
            req(&mut bad, "tunneling.kinetic_mev", p.kinetic_mev);
            req(&mut bad, "tunneling.well_fm", p.well_fm);
            for (i, s) in p.sigmas_fm.iter().enumerate() {
                req(&mut bad, &format!("tunneling.sigmas_fm[{i}]"), *s);
            }
        }
        if let Some(p) = &self.entangle_gaussian {
            req(&mut bad, "entangle-gaussian.t_max_s", p.t_max_s);
            req(&mut bad, "entangle-gaussian.l_over_r0", p.l_over_r0);
        }
        if let Some(p) = &self.entangle_numeric {
            req(&mut bad, "entangle-numeric.omega", p.omega);
            req(&mut bad, "entangle-numeric.l", p.l);
            req(&mut bad, "entangle-numeric.sigma", p.sigma);
            req(&mut bad, "entangle-numeric.t_end", p.t_end);
            if p.order < 2 {
                bad.push(format!("entangle-numeric.order = {} (must be >= 2)", p.order));
            }
        }
        if let Some(p) = &self.mond_compare {
            req(&mut bad, "mond-compare.radius_nm", p.radius_nm);
            req(&mut bad, "mond-compare.omega0", p.omega0);
            req(&mut bad, "mond-compare.temperature_uk", p.temperature_uk);
            req(&mut bad, "mond-compare.t_max_s", p.t_max_s);
        }
        if let Some(p) = &self.casimir_compare {
            req(&mut bad, "casimir-compare.mass_kg", p.mass_kg);
            req(&mut bad, "casimir-compare.omega0", p.omega0);
            req(&mut bad, "casimir-compare.t_max_s", p.t_max_s);
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!("invalid parameters: {}", bad.join("; "))))
        }
    }
}

/// The unit convention each scenario runs in.
pub fn expected_units(kind: &str) -> UnitSystemName {
    match kind {
        "rutherford" | "tunneling" => UnitSystemName::NaturalMevFm,
        "entangle-gaussian" | "mond-compare" | "casimir-compare" => UnitSystemName::Si,
        // convergence picks per mode; the dimensionless default covers the
        // free-gaussian study and the rutherford mode ignores the field
        _ => UnitSystemName::Dimensionless,
    }
}

/// Parameter schema text for `describe`.
pub fn describe(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "evolve" => {
            "single-particle Cayley evolution\n\
             [evolve] x_min, x_max: length; sigma, x0: length; p0: momentum;\n\
             mass (default 1); t_end: time; potential.kind = free|harmonic|coulomb\n\
             (harmonic: omega in 1/time; coulomb: z_projectile, z_target)\n\
             [solver] dx, dt, stencil = tri|penta, cadence\n\
             columns: t, norm, mean_x, mean_p, var_x, var_p, uncertainty, energy"
        }
        "box" => {
            "Gaussian bouncing in a hard-wall box (walls at +/- half_width)\n\
             [box] half_width (default 10), sigma, x0 (default 0), p0, mass, t_end\n\
             columns: t, mean_x, mean_p, var_x, norm"
        }
        "rutherford" => {
            "head-on alpha-gold collision: quantum vs classical trajectory\n\
             [rutherford] launch_pm: launch distance (pm); kinetic_mev: T0 (MeV);\n\
             sigma_fm: initial spread (fm); z_projectile (2), z_target (79);\n\
             track = turnaround|return\n\
             columns: t_fmc, x_cl_fm, p_cl_mev, mean_x_fm, spread_x_fm\n\
             summary in manifest: d_cl, d_qm, tau_cl, tau_qm, delta_t_return"
        }
        "tunneling" => {
            "Coulomb-barrier tunneling probability sweep over sigma\n\
             [tunneling] launch_pm, kinetic_mev, sigmas_fm = [..], well_fm (25),\n\
             flux_threshold (1e-12)\n\
             columns: sigma_fm, p_dynamical, p_wkb, p_classical"
        }
        "entangle-gaussian" => {
            "closed-form Gaussian entanglement for two identical spheres\n\
             [entangle-gaussian] material = osmium|silica; mass_kg or radius_nm;\n\
             l_over_r0 (2.5); sigma_nm or omega0 (rad/s); mode = freefall|trapped;\n\
             interaction = newtonian|mond|casimir|newtonian+casimir;\n\
             t_max_s, samples, temperature_uk (optional thermal columns)\n\
             columns: t_s, E, S [, E_thermal]"
        }
        "entangle-numeric" => {
            "numeric reduced-mass pipeline at expansion order N (hbar = m = 1)\n\
             [entangle-numeric] omega, l, sigma (1), p0, order >= 2, t_end,\n\
             samples, schmidt = true|false, coarsen (4)\n\
             columns: t, E_cov, S_cov [, S_schmidt], skewness, epsilon3"
        }
        "mond-compare" => {
            "Newtonian vs deep-MOND entanglement with thermal initial states\n\
             [mond-compare] material, radius_nm, l_over_r0 (2.5), omega0 (rad/s),\n\
             temperature_uk, t_max_s, samples\n\
             columns: t_s, E_newton, E_mond, E_newton_thermal, E_mond_thermal\n\
             (detectability threshold 0.01 recorded in the header)"
        }
        "casimir-compare" => {
            "gravity vs Casimir vs combined coupling (closed forms)\n\
             [casimir-compare] material, mass_kg, omega0 (rad/s), l_over_r0 (2.1),\n\
             t_max_s, samples\n\
             columns: t_s, E_gravity, E_casimir, E_combined"
        }
        "convergence" => {
            "discretization study\n\
             [convergence] mode = free-gaussian|rutherford; dxs = [..]; dts = [..];\n\
             free-gaussian: t_end (20); rutherford: launch_pm (10), kinetic_mev (5),\n\
             sigma_fm (100)\n\
             columns: dx, dt, err_tri, err_penta (free) or dx, dt, d_qm_fm,\n\
             peak_energy_error (rutherford)"
        }
        _ => return None,
    })
}
