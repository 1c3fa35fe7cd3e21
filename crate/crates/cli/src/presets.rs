//! Figure presets. Times are in units of `1/κ` with `κ = 1`.

use crate::config::{ExperimentConfig, FrameChoice, InitialState, ModulationKind, System, TwoWellConfig};
use crate::CliError;

pub const PRESETS: [&str; 7] = ["fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig4"];

/// `ε1/ω` of the three localization presets: zeros of `J15`, `J11` and `J7`.
pub const FIG3_RATIOS: [f64; 3] = [24.26918, 23.2759, 24.93493];

/// Half-width of the fig4 frequency scan, relative to the preset `ω`.
pub const FIG4_SCAN_SPAN: f64 = 0.2;
pub const FIG4_SCAN_POINTS: usize = 801;

fn energy_driven(name: &str, omega: f64, eps1: f64, t_max: f64, output_step: f64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        system: System::TwoWell(TwoWellConfig {
            particles: 16,
            kappa: 1.0,
            modulation: ModulationKind::Energy,
            eps0: 0.0,
            eps1,
            delta0: 0.25,
            delta1: 0.0,
            omega,
        }),
        initial_state: InitialState::Number { mu: -8.0 },
        t_max,
        output_step,
        tolerance: becsim_core::propagation::DEFAULT_TOL,
        frame: FrameChoice::Lab,
        n_max: None,
        x_basis: false,
    }
}

pub fn is_preset(name: &str) -> bool {
    PRESETS.contains(&name)
}

pub fn preset(name: &str) -> Result<ExperimentConfig, CliError> {
    let cfg = match name {
        "fig1" => energy_driven(name, 3.0, 14.0, 100.0, 0.1),
        "fig2a" => energy_driven(name, 1.0, 14.0, 300.0, 0.25),
        "fig2b" => energy_driven(name, 6.0, 14.0, 300.0, 0.25),
        "fig3a" => energy_driven(name, 1.0, FIG3_RATIOS[0], 300.0, 0.25),
        "fig3b" => energy_driven(name, 1.0, FIG3_RATIOS[1], 300.0, 0.25),
        "fig3c" => energy_driven(name, 1.0, FIG3_RATIOS[2], 300.0, 0.25),
        "fig4" => ExperimentConfig {
            name: name.into(),
            system: System::TwoWell(TwoWellConfig {
                particles: 14,
                kappa: 1.0,
                modulation: ModulationKind::Coupling,
                eps0: 0.0,
                eps1: 0.0,
                delta0: 16.0,
                delta1: 14.0,
                omega: 20.0,
            }),
            initial_state: InitialState::Xbasis { mu: 7.0 },
            t_max: 100.0,
            output_step: 0.05,
            tolerance: becsim_core::propagation::DEFAULT_TOL,
            frame: FrameChoice::Lab,
            n_max: None,
            x_basis: true,
        },
        _ => return Err(CliError::Config(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")))),
    };
    Ok(cfg)
}
