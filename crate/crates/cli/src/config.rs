//! JSON experiment and scan configurations.

use serde::{Deserialize, Serialize};

use becsim_core::lattice::LatticeParams;
use becsim_core::propagation::DEFAULT_TOL;
use becsim_core::twowell::{Modulation, TwoWellParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulationKind {
    None,
    Energy,
    Coupling,
}

/// Two-well parameters in units of the interaction strength (`κ` may differ from 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoWellConfig {
    pub particles: u32,
    pub kappa: f64,
    pub modulation: ModulationKind,
    #[serde(default)]
    pub eps0: f64,
    #[serde(default)]
    pub eps1: f64,
    #[serde(default)]
    pub delta0: f64,
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub omega: f64,
}

impl TwoWellConfig {
    pub fn params(&self) -> TwoWellParams {
        TwoWellParams {
            particles: self.particles,
            kappa: self.kappa,
            eps0: self.eps0,
            eps1: self.eps1,
            delta0: self.delta0,
            delta1: self.delta1,
            omega: self.omega,
            modulation: match self.modulation {
                ModulationKind::None => Modulation::None,
                ModulationKind::Energy => Modulation::EnergyDifference,
                ModulationKind::Coupling => Modulation::Coupling,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub sites: usize,
    pub particles: u32,
    pub kappa: f64,
    pub delta: f64,
    #[serde(default)]
    pub eps0: f64,
    #[serde(default)]
    pub eps1: f64,
    #[serde(default)]
    pub omega: f64,
}

impl LatticeConfig {
    pub fn params(&self) -> LatticeParams {
        LatticeParams {
            sites: self.sites,
            particles: self.particles,
            kappa: self.kappa,
            delta: self.delta,
            eps0: self.eps0,
            eps1: self.eps1,
            omega: self.omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum System {
    TwoWell(TwoWellConfig),
    Lattice(LatticeConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// `|μ⟩`.
    Number { mu: f64 },
    Scs { theta: f64, phi: f64 },
    Ps { phi: f64 },
    /// `R(θ, φ)|μ⟩`.
    Dscs { theta: f64, phi: f64, mu: f64 },
    /// `Ĵx` eigenstate `|μ⟩ₓ`.
    Xbasis { mu: f64 },
    /// Lattice only: `n` atoms on every site.
    Mott,
    /// Lattice only.
    Fock { occupations: Vec<u32> },
}

/// Hamiltonian the state is propagated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameChoice {
    #[default]
    Lab,
    /// Interaction picture; exact phases, or Bessel sidebands up to `n_max` when given.
    Transformed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Output file stem.
    pub name: String,
    pub system: System,
    pub initial_state: InitialState,
    pub t_max: f64,
    pub output_step: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub frame: FrameChoice,
    #[serde(default)]
    pub n_max: Option<u32>,
    /// Also record `Ĵx`-basis populations (two-well only).
    #[serde(default)]
    pub x_basis: bool,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOL
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return bad(format!("name {:?} must be non-empty ASCII letters, digits, '-', '_' or '.'", self.name));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be positive and finite, got {}", self.t_max));
        }
        if !(self.output_step > 0.0 && self.output_step.is_finite()) {
            return bad(format!("output_step must be positive and finite, got {}", self.output_step));
        }
        if self.t_max / self.output_step > 1e7 {
            return bad("more than 1e7 output rows requested".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad(format!("tolerance must lie in (0, 1), got {}", self.tolerance));
        }
        match &self.system {
            System::TwoWell(tw) => {
                tw.params().validate().map_err(|e| CliError::Config(e.to_string()))?;
                if matches!(self.initial_state, InitialState::Mott | InitialState::Fock { .. }) {
                    return bad("mott and fock initial states need a lattice system".into());
                }
            }
            System::Lattice(l) => {
                l.params().validate().map_err(|e| CliError::Config(e.to_string()))?;
                if !matches!(self.initial_state, InitialState::Mott | InitialState::Fock { .. }) {
                    return bad("lattice systems start from a mott or fock state".into());
                }
                if self.x_basis {
                    return bad("x_basis populations are defined for the two-well system only".into());
                }
            }
        }
        Ok(())
    }
}

/// A list of values, or `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Sweep::Values(v) => v.clone(),
            Sweep::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                _ => (0..*count).map(|i| start + (stop - start) * i as f64 / (*count - 1) as f64).collect(),
            },
        }
    }
}

/// Resonance-table sweep over `ω` and the drive amplitude.
///
/// The drive axis is `ε1` (energy modulation, lattice tilt) or `δ1` (coupling modulation),
/// given either directly or as a ratio to `ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub name: String,
    pub system: System,
    #[serde(default)]
    pub omega: Option<Sweep>,
    #[serde(default)]
    pub drive: Option<Sweep>,
    #[serde(default)]
    pub drive_ratio: Option<Sweep>,
    #[serde(default = "default_scan_n_max")]
    pub n_max: u32,
    /// Smallest `|U|` reported; exact resonances are always reported.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_scan_n_max() -> u32 {
    10
}

fn default_threshold() -> f64 {
    1e-3
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return bad("name must be non-empty ASCII letters, digits, '-', '_' or '.'");
        }
        if self.drive.is_some() && self.drive_ratio.is_some() {
            return bad("give drive or drive_ratio, not both");
        }
        let axes = [&self.omega, &self.drive, &self.drive_ratio];
        if axes.iter().all(|a| a.is_none()) {
            return bad("scan needs at least one sweep axis (omega, drive or drive_ratio)");
        }
        for axis in axes.into_iter().flatten() {
            let pts = axis.points();
            if pts.is_empty() {
                return bad("sweep axes must not be empty");
            }
            if pts.len() > 100_000 || pts.iter().any(|v| !v.is_finite()) {
                return bad("sweep points must be finite and at most 100000 per axis");
            }
        }
        if !(self.threshold > 0.0) {
            return bad("threshold must be positive");
        }
        if self.n_max > 200 {
            return bad("n_max must not exceed 200");
        }
        match &self.system {
            System::TwoWell(tw) if tw.modulation == ModulationKind::None => bad("scans need a modulated system"),
            System::TwoWell(tw) => tw.params().validate().map_err(|e| CliError::Config(e.to_string())),
            System::Lattice(l) => l.params().validate().map_err(|e| CliError::Config(e.to_string())),
        }
    }
}

pub fn parse_experiment(text: &str) -> Result<ExperimentConfig, CliError> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_scan(text: &str) -> Result<ScanConfig, CliError> {
    let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn to_json(cfg: &impl Serialize) -> String {
    serde_json::to_string_pretty(cfg).expect("configs serialize")
}
