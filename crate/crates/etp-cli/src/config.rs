//! Scenario configuration: one JSON document per run, one scenario kind per
//! document.

use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Evolution route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Closed-form coefficient series (split-form product).
    Analytic,
    /// Combined-exponential matrix oracle.
    Oracle,
    /// Run both; the oracle values are written, the gap is reported.
    Both,
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "oracle" => Ok(Engine::Oracle),
            "both" => Ok(Engine::Both),
            other => Err(format!("unknown engine {other:?} (analytic|oracle|both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexParam {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexParam> for num_complex::Complex64 {
    fn from(c: ComplexParam) -> Self {
        num_complex::Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationParams {
    pub k_min: i32,
    pub k_max: i32,
    pub n_max: u32,
    #[serde(default = "default_leak_tol")]
    pub leak_tol: f64,
}

fn default_leak_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileRef {
    pub path: PathBuf,
    /// Mode angular frequency in rad/s.
    pub omega: f64,
}

/// Magnitude/phase pair for the single-mode coupling constants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CouplingParams {
    pub g_qu_abs: f64,
    #[serde(default)]
    pub phi_g1: f64,
    pub g_qu2_abs: f64,
    #[serde(default)]
    pub phi_g2: f64,
    /// Modified pair constant; defaults to `g_qu2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_qu2_prime: Option<ComplexParam>,
    /// Defaults to the phase-matched `i |g_qu2|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_p: Option<ComplexParam>,
    /// Defaults to `g_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_p_prime: Option<ComplexParam>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum Scenario {
    /// Couplings from field-profile CSVs (one or two modes).
    Coupling {
        electron_kev: f64,
        profiles: Vec<ProfileRef>,
    },
    /// Vacuum-seeded single-mode evolution.
    EvolveVacuum {
        #[serde(flatten)]
        coupling: CouplingParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<TruncationParams>,
    },
    /// Coherent-seeded single-mode evolution.
    EvolveCoherent {
        #[serde(flatten)]
        coupling: CouplingParams,
        alpha_abs: f64,
        #[serde(default)]
        alpha_arg: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<TruncationParams>,
    },
    /// Interference sweep over `delta_phi` at fixed magnitudes.
    PhaseSweep {
        g_qu_abs: f64,
        g_qu2_abs: f64,
        delta_phi_start: f64,
        delta_phi_stop: f64,
        steps: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<TruncationParams>,
    },
    /// Kapitza-Dirac transverse momentum distribution.
    Kd {
        electron_kev: f64,
        omega0: f64,
        length: f64,
        /// Per-beam field amplitude in V/m.
        e0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_half_width: Option<u32>,
    },
    /// Two-mode travelling-wave scattering on two coherent states.
    Compton {
        alpha1_abs: f64,
        #[serde(default)]
        alpha1_arg: f64,
        alpha2_abs: f64,
        #[serde(default)]
        alpha2_arg: f64,
        g_p12_abs: f64,
        #[serde(default)]
        g_p12_arg: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<TruncationParams>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
}

const MAX_COUPLING: f64 = 5.0;
const MAX_N: u32 = 512;

fn check_coupling_magnitude(name: &str, value: f64) -> Result<(), CliError> {
    if !value.is_finite() || !(0.0..=MAX_COUPLING).contains(&value) {
        return Err(CliError::Config(format!(
            "{name} = {value} outside the validated range [0, {MAX_COUPLING}]"
        )));
    }
    Ok(())
}

fn check_trunc(t: &TruncationParams) -> Result<(), CliError> {
    if t.n_max > MAX_N {
        return Err(CliError::Config(format!(
            "n_max = {} exceeds the cap {MAX_N}",
            t.n_max
        )));
    }
    if t.k_min > 0 || t.k_max < 0 {
        return Err(CliError::Config(format!(
            "k window [{}, {}] must contain 0",
            t.k_min, t.k_max
        )));
    }
    if !(t.leak_tol > 0.0 && t.leak_tol < 1.0) {
        return Err(CliError::Config(format!(
            "leak_tol = {} must lie in (0, 1)",
            t.leak_tol
        )));
    }
    Ok(())
}

fn check_coupling_params(c: &CouplingParams) -> Result<(), CliError> {
    check_coupling_magnitude("g_qu_abs", c.g_qu_abs)?;
    check_coupling_magnitude("g_qu2_abs", c.g_qu2_abs)?;
    if let Some(p) = &c.g_qu2_prime {
        check_coupling_magnitude("|g_qu2_prime|", (p.re * p.re + p.im * p.im).sqrt())?;
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.validate(path.parent().unwrap_or(Path::new(".")))?;
        Ok(config)
    }

    /// Structural validation; `base` resolves relative profile paths.
    pub fn validate(&self, base: &Path) -> Result<(), CliError> {
        match &self.scenario {
            Scenario::Coupling { electron_kev, profiles } => {
                if *electron_kev <= 0.0 {
                    return Err(CliError::Config("electron_kev must be positive".into()));
                }
                if profiles.is_empty() || profiles.len() > 2 {
                    return Err(CliError::Config(format!(
                        "need 1 or 2 profiles, got {}",
                        profiles.len()
                    )));
                }
                for p in profiles {
                    let path = self.resolve(base, &p.path);
                    if !path.exists() {
                        return Err(CliError::Config(format!(
                            "profile file {} does not exist",
                            path.display()
                        )));
                    }
                    if p.omega.is_nan() || p.omega <= 0.0 {
                        return Err(CliError::Config("omega must be positive".into()));
                    }
                }
            }
            Scenario::EvolveVacuum { coupling, truncation } => {
                check_coupling_params(coupling)?;
                if let Some(t) = truncation {
                    check_trunc(t)?;
                }
            }
            Scenario::EvolveCoherent { coupling, alpha_abs, truncation, .. } => {
                check_coupling_params(coupling)?;
                if !alpha_abs.is_finite() || *alpha_abs < 0.0 {
                    return Err(CliError::Config("alpha_abs must be non-negative".into()));
                }
                if let Some(t) = truncation {
                    check_trunc(t)?;
                }
            }
            Scenario::PhaseSweep {
                g_qu_abs,
                g_qu2_abs,
                steps,
                delta_phi_start,
                delta_phi_stop,
                truncation,
            } => {
                check_coupling_magnitude("g_qu_abs", *g_qu_abs)?;
                check_coupling_magnitude("g_qu2_abs", *g_qu2_abs)?;
                if *steps == 0 || *steps > 100_000 {
                    return Err(CliError::Config(format!("steps = {steps} outside [1, 100000]")));
                }
                if delta_phi_stop.is_nan() || delta_phi_start.is_nan() || delta_phi_stop < delta_phi_start {
                    return Err(CliError::Config("delta_phi_stop < delta_phi_start".into()));
                }
                if let Some(t) = truncation {
                    check_trunc(t)?;
                }
            }
            Scenario::Kd { electron_kev, omega0, length, e0, .. } => {
                if *electron_kev <= 0.0 || *omega0 <= 0.0 || *length <= 0.0 {
                    return Err(CliError::Config(
                        "electron_kev, omega0 and length must be positive".into(),
                    ));
                }
                if e0.is_nan() || *e0 < 0.0 {
                    return Err(CliError::Config("e0 must be non-negative".into()));
                }
            }
            Scenario::Compton {
                alpha1_abs,
                alpha2_abs,
                g_p12_abs,
                truncation,
                ..
            } => {
                check_coupling_magnitude("g_p12_abs", *g_p12_abs)?;
                if *alpha1_abs < 0.0 || *alpha2_abs < 0.0 {
                    return Err(CliError::Config("alpha magnitudes must be non-negative".into()));
                }
                if let Some(t) = truncation {
                    check_trunc(t)?;
                }
            }
        }
        Ok(())
    }

    pub fn resolve(&self, base: &Path, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }

    pub fn scenario_name(&self) -> &'static str {
        match &self.scenario {
            Scenario::Coupling { .. } => "coupling",
            Scenario::EvolveVacuum { .. } => "evolve-vacuum",
            Scenario::EvolveCoherent { .. } => "evolve-coherent",
            Scenario::PhaseSweep { .. } => "phase-sweep",
            Scenario::Kd { .. } => "kd",
            Scenario::Compton { .. } => "compton",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_vacuum_config() {
        let json = r#"{"scenario":"evolve-vacuum","g_qu_abs":0.8,"g_qu2_abs":0.8}"#;
        let c: ScenarioConfig = serde_json::from_str(json).unwrap();
        c.validate(Path::new(".")).unwrap();
        assert_eq!(c.scenario_name(), "evolve-vacuum");
    }

    #[test]
    fn rejects_unknown_scenario_and_bad_ranges() {
        let json = r#"{"scenario":"evolve-nothing","g_qu_abs":0.8}"#;
        assert!(serde_json::from_str::<ScenarioConfig>(json).is_err());

        let json = r#"{"scenario":"evolve-vacuum","g_qu_abs":9.0,"g_qu2_abs":0.1}"#;
        let c: ScenarioConfig = serde_json::from_str(json).unwrap();
        assert!(c.validate(Path::new(".")).is_err());

        let json = r#"{"scenario":"evolve-vacuum","g_qu_abs":0.5,"g_qu2_abs":0.1,
                       "truncation":{"k_min":-600,"k_max":600,"n_max":600}}"#;
        let c: ScenarioConfig = serde_json::from_str(json).unwrap();
        assert!(c.validate(Path::new(".")).is_err());
    }

    #[test]
    fn missing_profile_file_is_a_config_error() {
        let json = r#"{"scenario":"coupling","electron_kev":200.0,
                       "profiles":[{"path":"/nonexistent/file.csv","omega":1.2e15}]}"#;
        let c: ScenarioConfig = serde_json::from_str(json).unwrap();
        let err = c.validate(Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
