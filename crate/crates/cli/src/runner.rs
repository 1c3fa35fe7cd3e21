//! Runs an [`ExperimentConfig`] and renders its outputs.

use std::path::{Path, PathBuf};

use serde_json::json;

use becsim_core::lattice::{build_basis, site_observables, BoseHubbardHamiltonian, BoseHubbardTransformed, LatticeState};
use becsim_core::observables::{measure_number_basis, XBasisMeter};
use becsim_core::propagation::{evolve, uniform_grid, Hamiltonian, IntegratorStats, QuantumState, Trajectory};
use becsim_core::states::{coherent_family, number_state, CoherentKind};
use becsim_core::twowell::{SidebandHamiltonian, TwoWellHamiltonian};
use becsim_core::StateVector;

use crate::config::{ExperimentConfig, FrameChoice, InitialState, LatticeConfig, System, TwoWellConfig};
use crate::output::{mu_label, write_file, Table, CODE_VERSION};
use crate::presets::{FIG4_SCAN_POINTS, FIG4_SCAN_SPAN};
use crate::scan::nearest_link_resonance;
use crate::CliError;

/// Everything a run writes, kept in memory so callers can compare or persist it.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub name: String,
    pub table: Table,
    pub meta: serde_json::Value,
    /// Additional `(file name, contents)` pairs, e.g. the fig4 frequency scan.
    pub extra: Vec<(String, String)>,
}

impl RunOutput {
    pub fn csv(&self) -> String {
        self.table.to_csv()
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let mut paths = vec![
            write_file(dir, &format!("{}.csv", self.name), &self.csv())?,
            write_file(dir, &format!("{}.meta.json", self.name), &(serde_json::to_string_pretty(&self.meta).unwrap() + "\n"))?,
        ];
        for (file, contents) in &self.extra {
            paths.push(write_file(dir, file, contents)?);
        }
        Ok(paths)
    }
}

fn two_well_state(tw: &TwoWellConfig, init: &InitialState) -> Result<StateVector, CliError> {
    let spin = tw.params().spin();
    let kind = match *init {
        InitialState::Number { mu } => return Ok(number_state(spin, mu)?),
        InitialState::Scs { theta, phi } => CoherentKind::Scs { theta, phi },
        InitialState::Ps { phi } => CoherentKind::Phase { phi },
        InitialState::Dscs { theta, phi, mu } => CoherentKind::Displaced { theta, phi, mu },
        InitialState::Xbasis { mu } => CoherentKind::XBasis { mu },
        InitialState::Mott | InitialState::Fock { .. } => {
            return Err(CliError::Config("mott and fock initial states need a lattice system".into()))
        }
    };
    Ok(coherent_family(spin, kind)?)
}

fn propagate<H: Hamiltonian, S: QuantumState>(h: &H, psi: &S, cfg: &ExperimentConfig) -> Result<Trajectory<S>, CliError> {
    Ok(evolve(h, psi, &uniform_grid(cfg.t_max, cfg.output_step), cfg.tolerance)?)
}

fn run_two_well(cfg: &ExperimentConfig, tw: &TwoWellConfig) -> Result<(Table, IntegratorStats), CliError> {
    let p = tw.params();
    let psi = two_well_state(tw, &cfg.initial_state)?;
    let traj = match (cfg.frame, cfg.n_max) {
        (FrameChoice::Lab, _) => propagate(&TwoWellHamiltonian::new(p)?, &psi, cfg)?,
        (FrameChoice::Transformed, None) => propagate(&SidebandHamiltonian::exact(p)?, &psi, cfg)?,
        (FrameChoice::Transformed, Some(n)) => propagate(&SidebandHamiltonian::truncated(p, n)?, &psi, cfg)?,
    };
    let spin = p.spin();
    let mut header = vec!["t".to_string()];
    header.extend(spin.mus().map(|mu| format!("P_mu[{}]", mu_label(mu))));
    header.extend(["jz_mean", "jz_var", "jz_mean_sq", "jz2_mean"].map(String::from));
    let meter = if cfg.x_basis {
        header.extend(spin.mus().map(|mu| format!("Px_mu[{}]", mu_label(mu))));
        Some(XBasisMeter::new(spin)?)
    } else {
        None
    };
    let mut table = Table::new(header);
    for (t, s) in traj.iter() {
        let m = measure_number_basis(s);
        let mut row = Vec::with_capacity(table.header.len());
        row.push(t);
        row.extend(&m.populations);
        row.extend([m.jz_mean, m.jz_var, m.jz_mean * m.jz_mean, m.jz2_mean()]);
        if let Some(meter) = &meter {
            row.extend(meter.populations(s));
        }
        table.push(row);
    }
    Ok((table, traj.stats))
}

fn run_lattice(cfg: &ExperimentConfig, lc: &LatticeConfig) -> Result<(Table, IntegratorStats), CliError> {
    let p = lc.params();
    let basis = build_basis(p.sites, p.particles)?;
    let psi = match &cfg.initial_state {
        InitialState::Mott => LatticeState::mott(&basis)?,
        InitialState::Fock { occupations } => LatticeState::fock(&basis, occupations)?,
        _ => return Err(CliError::Config("lattice systems start from a mott or fock state".into())),
    };
    let traj = match (cfg.frame, cfg.n_max) {
        (FrameChoice::Lab, _) => propagate(&BoseHubbardHamiltonian::new(p, &basis)?, &psi, cfg)?,
        (FrameChoice::Transformed, None) => propagate(&BoseHubbardTransformed::exact(p, &basis)?, &psi, cfg)?,
        (FrameChoice::Transformed, Some(n)) => propagate(&BoseHubbardTransformed::truncated(p, &basis, n)?, &psi, cfg)?,
    };
    let mut header = vec!["t".to_string()];
    header.extend((0..p.sites).map(|l| format!("n_mean[{l}]")));
    header.extend((0..p.sites).map(|l| format!("n_var[{l}]")));
    header.push("total_var".into());
    let mut table = Table::new(header);
    for (t, s) in traj.iter() {
        let obs = site_observables(s, &basis);
        let mut row = vec![t];
        row.extend(&obs.mean);
        row.extend(&obs.variance);
        row.push(obs.variance.iter().sum());
        table.push(row);
    }
    Ok((table, traj.stats))
}

/// Runs one experiment. `preset` names the figure preset the config came from, if any.
pub fn run_experiment(cfg: &ExperimentConfig, preset: Option<&str>) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let (table, stats) = match &cfg.system {
        System::TwoWell(tw) => run_two_well(cfg, tw)?,
        System::Lattice(lc) => run_lattice(cfg, lc)?,
    };
    let mut meta = json!({
        "preset": preset,
        "code_version": CODE_VERSION,
        "tolerance": cfg.tolerance,
        "time_unit": "1/kappa",
        "rows": table.rows.len(),
        "integrator": {"accepted": stats.accepted, "rejected": stats.rejected, "evaluations": stats.evaluations},
        "config": serde_json::to_value(cfg).expect("configs serialize"),
    });
    let mut extra = Vec::new();
    if preset == Some("fig4") {
        if let System::TwoWell(tw) = &cfg.system {
            let p = tw.params();
            let lo = p.omega * (1.0 - FIG4_SCAN_SPAN);
            let hi = p.omega * (1.0 + FIG4_SCAN_SPAN);
            let omegas: Vec<f64> =
                (0..FIG4_SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / (FIG4_SCAN_POINTS - 1) as f64).collect();
            // The initial state |J⟩ₓ couples to |J-2⟩ₓ through the link with lower state J-2.
            let link = p.spin().j() - 2.0;
            let (scan, best) = nearest_link_resonance(&p, link, &omegas, 10)?;
            meta["nearest_resonance"] =
                json!({"link_mu": link, "omega": best.omega, "n": best.n, "detuning": best.detuning});
            extra.push((format!("{}.scan.csv", cfg.name), scan.to_csv()));
        }
    }
    Ok(RunOutput { name: cfg.name.clone(), table, meta, extra })
}
