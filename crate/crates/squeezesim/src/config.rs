//! JSON experiment configuration and its validation.
//!
//! Frequencies are given in Hz under `_hz` keys and converted to angular
//! frequency on validation. Every validation failure names the offending field
//! with its dotted path.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use squeezesim_core::detection::db_to_r;
use squeezesim_core::{CavityParams, DetectionChain, MechanicalMode, OptomechCoupling};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Free-form descriptive fields (probe power, LO power, provenance notes).
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
    pub squeezing: SqueezingSpec,
    pub carrier_alpha: f64,
    pub cavity: CavitySpec,
    #[serde(default)]
    pub mechanical_modes: Vec<ModeSpec>,
    pub coupling: CouplingSpec,
    pub chain: ChainSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub characterize: CharacterizeSpec,
    #[serde(default)]
    pub sql: SqlSpec,
    #[serde(default)]
    pub budget: BudgetSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezingSpec {
    pub r: Option<f64>,
    pub db: Option<f64>,
    #[serde(default)]
    pub reference: SqueezingReference,
}

/// Where the configured squeezing level is referenced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SqueezingReference {
    /// Level as recorded by the homodyne detector: visibility, quantum
    /// efficiency and dark noise are already folded in and are not re-applied.
    #[default]
    Detector,
    /// Level of the state at its source: the detector stages are applied.
    Source,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    pub kappa_hz: f64,
    pub kappa_ex_hz: f64,
    #[serde(default)]
    pub detuning_hz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    #[serde(default)]
    pub label: Option<String>,
    pub omega_m_hz: f64,
    pub gamma_m_hz: f64,
    pub s_x_peak: Option<f64>,
    pub mass_kg: Option<f64>,
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub g0_hz: f64,
    pub x_zpf_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub label: String,
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(default)]
    pub stages: Vec<StageSpec>,
    #[serde(default = "one")]
    pub visibility: f64,
    #[serde(default = "one")]
    pub quantum_efficiency: f64,
    /// Electronic dark noise relative to shot noise; absent means none.
    #[serde(default)]
    pub dark_noise_db: Option<f64>,
    #[serde(default = "one")]
    pub lo_amplitude: f64,
    #[serde(default = "phase_quadrature")]
    pub lo_phase: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub omega_min_hz: f64,
    pub omega_max_hz: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterizeSpec {
    #[serde(default = "default_arc_points")]
    pub points: usize,
    #[serde(default = "default_detection_hz")]
    pub detection_hz: f64,
}

impl Default for CharacterizeSpec {
    fn default() -> Self {
        Self {
            points: default_arc_points(),
            detection_hz: default_detection_hz(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqlSpec {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default = "default_n_min")]
    pub n_min: f64,
    #[serde(default = "default_n_max")]
    pub n_max: f64,
    #[serde(default = "default_sql_points")]
    pub points: usize,
}

impl Default for SqlSpec {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            n_min: default_n_min(),
            n_max: default_n_max(),
            points: default_sql_points(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    /// Floor the chain should reach, dB relative to shot noise.
    #[serde(default)]
    pub target_floor_db: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn phase_quadrature() -> f64 {
    FRAC_PI_2
}

fn default_arc_points() -> usize {
    73
}

fn default_detection_hz() -> f64 {
    4.9e6
}

fn default_n_min() -> f64 {
    1e-2
}

fn default_n_max() -> f64 {
    1e2
}

fn default_sql_points() -> usize {
    41
}

/// A validated experiment, in angular frequencies and core types.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub r: f64,
    pub reference: SqueezingReference,
    pub carrier_alpha: f64,
    pub cavity: CavityParams,
    pub modes: Vec<LabeledMode>,
    pub coupling: OptomechCoupling,
    pub stages: Vec<(String, f64)>,
    pub visibility: f64,
    pub quantum_efficiency: f64,
    pub dark_noise_db: Option<f64>,
    pub lo_amplitude: f64,
    pub lo_phase: f64,
    pub grid: Vec<f64>,
    pub arc_points: usize,
    pub detection_omega: f64,
    pub sql: SqlSpec,
    pub target_floor_db: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LabeledMode {
    pub label: String,
    pub mode: MechanicalMode,
}

/// Options that come from the command line rather than the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub no_dark: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            let field = unknown_field_name(&e.to_string()).unwrap_or_else(|| "<document>".into());
            ConfigError::new(field, e)
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<Experiment, ConfigError> {
        let r = match (self.squeezing.r, self.squeezing.db) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new(
                    "squeezing",
                    "give exactly one of `r` or `db`, not both",
                ))
            }
            (None, None) => {
                return Err(ConfigError::new(
                    "squeezing",
                    "one of `r` or `db` is required",
                ))
            }
            (Some(r), None) => non_negative("squeezing.r", r)?,
            (None, Some(db)) => {
                finite("squeezing.db", db)?;
                if db > 0.0 {
                    return Err(ConfigError::new(
                        "squeezing.db",
                        format!("squeezing level must be <= 0 dB, got {db}"),
                    ));
                }
                db_to_r(db)
            }
        };

        let carrier_alpha = non_negative("carrier_alpha", self.carrier_alpha)?;

        let c = &self.cavity;
        positive("cavity.kappa_hz", c.kappa_hz)?;
        non_negative("cavity.kappa_ex_hz", c.kappa_ex_hz)?;
        finite("cavity.detuning_hz", c.detuning_hz)?;
        if c.kappa_ex_hz > c.kappa_hz {
            return Err(ConfigError::new(
                "cavity.kappa_ex_hz",
                format!(
                    "external coupling {} exceeds kappa_hz {}",
                    c.kappa_ex_hz, c.kappa_hz
                ),
            ));
        }
        if c.detuning_hz != 0.0 {
            return Err(ConfigError::new(
                "cavity.detuning_hz",
                "only resonant probing (detuning 0) is supported",
            ));
        }
        let cavity = CavityParams::new(TAU * c.kappa_hz, TAU * c.kappa_ex_hz, 0.0)
            .map_err(|e| ConfigError::new("cavity", e))?;

        let modes = self
            .mechanical_modes
            .iter()
            .enumerate()
            .map(|(i, m)| m.validate(i))
            .collect::<Result<Vec<_>, _>>()?;

        non_negative("coupling.g0_hz", self.coupling.g0_hz)?;
        positive("coupling.x_zpf_m", self.coupling.x_zpf_m)?;
        let coupling = OptomechCoupling::new(TAU * self.coupling.g0_hz, self.coupling.x_zpf_m)
            .map_err(|e| ConfigError::new("coupling", e))?;

        let ch = &self.chain;
        let stages = ch
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let field = format!("chain.stages[{i}].eta");
                unit(&field, s.eta).map(|eta| (s.label.clone(), eta))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let visibility = unit("chain.visibility", ch.visibility)?;
        let quantum_efficiency = unit("chain.quantum_efficiency", ch.quantum_efficiency)?;
        if let Some(d) = ch.dark_noise_db {
            finite("chain.dark_noise_db", d)?;
        }
        let lo_amplitude = positive("chain.lo_amplitude", ch.lo_amplitude)?;
        let lo_phase = finite("chain.lo_phase", ch.lo_phase)?;

        let g = &self.grid;
        positive("grid.omega_min_hz", g.omega_min_hz)?;
        finite("grid.omega_max_hz", g.omega_max_hz)?;
        if g.omega_max_hz <= g.omega_min_hz {
            return Err(ConfigError::new(
                "grid.omega_max_hz",
                format!(
                    "must exceed omega_min_hz ({}), got {}",
                    g.omega_min_hz, g.omega_max_hz
                ),
            ));
        }
        if g.points < 2 {
            return Err(ConfigError::new(
                "grid.points",
                format!("need at least 2 points, got {}", g.points),
            ));
        }
        let grid = linspace(TAU * g.omega_min_hz, TAU * g.omega_max_hz, g.points);

        if self.characterize.points < 1 {
            return Err(ConfigError::new(
                "characterize.points",
                "need at least 1 point",
            ));
        }
        let detection_omega =
            TAU * positive("characterize.detection_hz", self.characterize.detection_hz)?;

        let s = &self.sql;
        positive("sql.a", s.a)?;
        positive("sql.b", s.b)?;
        positive("sql.n_min", s.n_min)?;
        finite("sql.n_max", s.n_max)?;
        if s.n_max <= s.n_min {
            return Err(ConfigError::new("sql.n_max", "must exceed sql.n_min"));
        }
        if s.points < 2 {
            return Err(ConfigError::new("sql.points", "need at least 2 points"));
        }

        if let Some(t) = self.budget.target_floor_db {
            finite("budget.target_floor_db", t)?;
        }

        Ok(Experiment {
            r,
            reference: self.squeezing.reference,
            carrier_alpha,
            cavity,
            modes,
            coupling,
            stages,
            visibility,
            quantum_efficiency,
            dark_noise_db: ch.dark_noise_db,
            lo_amplitude,
            lo_phase,
            grid,
            arc_points: self.characterize.points,
            detection_omega,
            sql: s.clone(),
            target_floor_db: self.budget.target_floor_db,
        })
    }
}

impl ModeSpec {
    fn validate(&self, index: usize) -> Result<LabeledMode, ConfigError> {
        let field = |name: &str| format!("mechanical_modes[{index}].{name}");
        let omega_m = TAU * positive(&field("omega_m_hz"), self.omega_m_hz)?;
        let gamma_m = TAU * positive(&field("gamma_m_hz"), self.gamma_m_hz)?;
        let mode = match (self.s_x_peak, self.mass_kg, self.temperature_k) {
            (Some(peak), None, None) => {
                non_negative(&field("s_x_peak"), peak)?;
                MechanicalMode::new(omega_m, gamma_m, peak)
            }
            (None, Some(mass), Some(temp)) => {
                positive(&field("mass_kg"), mass)?;
                non_negative(&field("temperature_k"), temp)?;
                MechanicalMode::thermal(omega_m, gamma_m, mass, temp)
            }
            _ => {
                return Err(ConfigError::new(
                    field("s_x_peak"),
                    "give either `s_x_peak` or both `mass_kg` and `temperature_k`",
                ))
            }
        }
        .map_err(|e| ConfigError::new(format!("mechanical_modes[{index}]"), e))?;
        Ok(LabeledMode {
            label: self
                .label
                .clone()
                .unwrap_or_else(|| format!("mode {index}")),
            mode,
        })
    }
}

impl Experiment {
    /// Dark noise in SNU as applied to measured spectra.
    pub fn applied_dark_snu(&self, opts: RunOptions) -> f64 {
        if opts.no_dark || self.reference == SqueezingReference::Detector {
            return 0.0;
        }
        self.dark_noise_db
            .map(squeezesim_core::db_to_v)
            .unwrap_or(0.0)
    }

    /// Ordered optical stages between the configured squeezing level and the
    /// detector output, as `(label, efficiency)`.
    pub fn optical_stages(&self) -> Vec<(String, f64)> {
        let mut stages = self.stages.clone();
        if self.reference == SqueezingReference::Source {
            stages.extend(self.detector_stages());
        }
        stages
    }

    /// The detector's own stages: `visibility²` and quantum efficiency.
    pub fn detector_stages(&self) -> Vec<(String, f64)> {
        vec![
            (
                "visibility^2".to_string(),
                self.visibility * self.visibility,
            ),
            ("quantum efficiency".to_string(), self.quantum_efficiency),
        ]
    }

    /// Chain used for spectra: every optical stage plus applied dark noise.
    pub fn measurement_chain(&self, opts: RunOptions) -> squeezesim_core::Result<DetectionChain> {
        self.chain_from(self.optical_stages(), opts)
    }

    /// Chain used to characterize the squeezed state with the resonator
    /// decoupled: only the detector's stages, and only when the level is
    /// referenced at the source.
    pub fn characterization_chain(
        &self,
        opts: RunOptions,
    ) -> squeezesim_core::Result<DetectionChain> {
        let stages = match self.reference {
            SqueezingReference::Detector => Vec::new(),
            SqueezingReference::Source => self.detector_stages(),
        };
        self.chain_from(stages, opts)
    }

    fn chain_from(
        &self,
        stages: Vec<(String, f64)>,
        opts: RunOptions,
    ) -> squeezesim_core::Result<DetectionChain> {
        let mut chain = DetectionChain::new(
            self.lo_amplitude,
            self.lo_phase,
            self.applied_dark_snu(opts),
        )?;
        for (label, eta) in stages {
            chain = chain.with_stage(label, eta)?;
        }
        Ok(chain)
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    let step = (end - start) / (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k == n - 1 {
                end
            } else {
                start + step * k as f64
            }
        })
        .collect()
}

fn unknown_field_name(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let end = start + msg[start..].find('`')?;
    Some(msg[start..end].to_string())
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::new(
            field,
            format!("must be positive, got {v}"),
        ))
    }
}

fn non_negative(field: &str, v: f64) -> Result<f64, ConfigError> {
    finite(field, v)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::new(
            field,
            format!("must be non-negative, got {v}"),
        ))
    }
}

fn unit(field: &str, v: f64) -> Result<f64, ConfigError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ConfigError::new(
            field,
            format!("must lie in [0, 1], got {v}"),
        ))
    }
}
