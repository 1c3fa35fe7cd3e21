//! Resonance tables over `(ω, drive)` grids.

use rayon::prelude::*;

use becsim_core::resonance::{
    bessel_j, coupling_detuning, energy_detuning, find_resonances, lattice_detuning, EXACT_RESONANCE_TOL,
};
use becsim_core::twowell::{Modulation, TwoWellParams};

use crate::config::{LatticeConfig, ScanConfig, System, TwoWellConfig};
use crate::output::Table;
use crate::CliError;

pub const TWO_WELL_COLUMNS: [&str; 8] =
    ["omega", "drive", "mu", "n", "detuning", "bare_coupling", "bessel_weight", "effective_coupling"];
pub const LATTICE_COLUMNS: [&str; 9] =
    ["omega", "drive", "p", "q", "n", "detuning", "bare_coupling", "bessel_weight", "effective_coupling"];

/// `(ω, drive)` grid of a scan, sorted ascending with duplicates removed.
pub fn grid(cfg: &ScanConfig) -> Vec<(f64, f64)> {
    let (omega0, drive0) = match &cfg.system {
        System::TwoWell(tw) if tw.modulation == crate::config::ModulationKind::Coupling => (tw.omega, tw.delta1),
        System::TwoWell(tw) => (tw.omega, tw.eps1),
        System::Lattice(l) => (l.omega, l.eps1),
    };
    let omegas = cfg.omega.as_ref().map_or(vec![omega0], |s| s.points());
    let mut pts = Vec::new();
    for &w in &omegas {
        match (&cfg.drive, &cfg.drive_ratio) {
            (Some(d), _) => pts.extend(d.points().into_iter().map(|d| (w, d))),
            (None, Some(r)) => pts.extend(r.points().into_iter().map(|r| (w, r * w))),
            (None, None) => pts.push((w, drive0)),
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    pts
}

fn two_well_rows(tw: &TwoWellConfig, omega: f64, drive: f64, n_max: u32, threshold: f64) -> Result<Vec<Vec<f64>>, CliError> {
    let mut p = tw.params();
    p.omega = omega;
    match p.modulation {
        Modulation::Coupling => p.delta1 = drive,
        _ => p.eps1 = drive,
    }
    let hits = find_resonances(&p, n_max, threshold)
        .map_err(|e| CliError::Config(format!("scan point ω={omega}, drive={drive}: {e}")))?;
    Ok(hits
        .iter()
        .map(|h| {
            vec![omega, drive, h.mu, h.n as f64, h.detuning, h.bare_coupling, h.bessel_weight, h.effective_coupling]
        })
        .collect())
}

fn lattice_rows(lc: &LatticeConfig, omega: f64, drive: f64, n_max: u32, threshold: f64) -> Result<Vec<Vec<f64>>, CliError> {
    let mut p = lc.params();
    p.omega = omega;
    p.eps1 = drive;
    p.validate().map_err(|e| CliError::Config(format!("scan point ω={omega}, drive={drive}: {e}")))?;
    let arg = p.bessel_argument();
    let weights = (-(n_max as i32)..=n_max as i32)
        .map(|n| bessel_j(n, arg).map(|w| (n, w)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("scan point ω={omega}, drive={drive}: {e}")))?;
    let scale = omega.abs().max(p.kappa.abs()).max(p.eps0.abs());
    let mut rows = Vec::new();
    for pp in 1..=p.particles {
        for q in 0..=p.particles - pp {
            let bare = 0.5 * p.delta * (pp as f64 * (q as f64 + 1.0)).sqrt();
            for &(n, w) in &weights {
                let detuning = lattice_detuning(n, omega, p.eps0, p.kappa, pp, q);
                let exact = detuning.abs() <= EXACT_RESONANCE_TOL * scale;
                let u = if exact { f64::INFINITY } else { bare * w / detuning };
                if (exact && w != 0.0) || u.abs() >= threshold {
                    rows.push(vec![omega, drive, pp as f64, q as f64, n as f64, detuning, bare, w, u]);
                }
            }
        }
    }
    rows.sort_by(|a, b| a[5].abs().total_cmp(&b[5].abs()).then(a[2].total_cmp(&b[2])).then(a[3].total_cmp(&b[3])).then(a[4].total_cmp(&b[4])));
    Ok(rows)
}

/// Resonance table: one block of rows per grid point, grid points ascending,
/// rows within a block by `|detuning|`.
pub fn run_scan(cfg: &ScanConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let pts = grid(cfg);
    let blocks: Vec<Vec<Vec<f64>>> = pts
        .par_iter()
        .map(|&(w, d)| match &cfg.system {
            System::TwoWell(tw) => two_well_rows(tw, w, d, cfg.n_max, cfg.threshold),
            System::Lattice(lc) => lattice_rows(lc, w, d, cfg.n_max, cfg.threshold),
        })
        .collect::<Result<_, _>>()?;
    let columns: &[&str] = match cfg.system {
        System::TwoWell(_) => &TWO_WELL_COLUMNS,
        System::Lattice(_) => &LATTICE_COLUMNS,
    };
    let mut table = Table::new(columns.iter().map(|s| s.to_string()).collect());
    blocks.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResonance {
    pub omega: f64,
    pub n: i32,
    pub detuning: f64,
}

/// For each `ω`, the harmonic `|n| ≤ n_max` closest to resonance on the link with lower
/// state `link_mu`; also returns the overall closest (first in `omegas` order on ties).
pub fn nearest_link_resonance(
    p: &TwoWellParams,
    link_mu: f64,
    omegas: &[f64],
    n_max: u32,
) -> Result<(Table, LinkResonance), CliError> {
    if omegas.is_empty() {
        return Err(CliError::Config("empty frequency list".into()));
    }
    let detuning = |n: i32, w: f64| match p.modulation {
        Modulation::Coupling => Ok(coupling_detuning(n, w, p.delta0, p.kappa, link_mu)),
        Modulation::EnergyDifference => Ok(energy_detuning(n, w, p.eps0, p.kappa, link_mu)),
        Modulation::None => Err(CliError::Config("no modulation, no sidebands".into())),
    };
    let mut table = Table::new(vec!["omega".into(), "n".into(), "detuning".into()]);
    let mut best: Option<LinkResonance> = None;
    for &w in omegas {
        let mut local = LinkResonance { omega: w, n: 0, detuning: detuning(0, w)? };
        for n in -(n_max as i32)..=n_max as i32 {
            let d = detuning(n, w)?;
            if d.abs() < local.detuning.abs() {
                local = LinkResonance { omega: w, n, detuning: d };
            }
        }
        table.push(vec![w, local.n as f64, local.detuning]);
        if best.map_or(true, |b| local.detuning.abs() < b.detuning.abs()) {
            best = Some(local);
        }
    }
    Ok((table, best.expect("omegas is non-empty")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ModulationKind, Sweep};

    fn fig1_system() -> TwoWellConfig {
        TwoWellConfig {
            particles: 16,
            kappa: 1.0,
            modulation: ModulationKind::Energy,
            eps0: 0.0,
            eps1: 14.0,
            delta0: 0.25,
            delta1: 0.0,
            omega: 3.0,
        }
    }

    fn scan_config() -> ScanConfig {
        ScanConfig {
            name: "s".into(),
            system: System::TwoWell(fig1_system()),
            omega: None,
            drive: None,
            drive_ratio: None,
            n_max: 10,
            threshold: 1e-3,
        }
    }

    #[test]
    fn grid_is_sorted_and_ratio_scales_with_omega() {
        let mut cfg = scan_config();
        cfg.omega = Some(Sweep::Values(vec![3.0, 1.0, 3.0]));
        cfg.drive_ratio = Some(Sweep::Values(vec![2.0]));
        assert_eq!(grid(&cfg), vec![(1.0, 2.0), (3.0, 6.0)]);
        cfg.drive_ratio = None;
        assert_eq!(grid(&cfg), vec![(1.0, 14.0), (3.0, 14.0)]);
    }

    #[test]
    fn nearest_link_on_fig1() {
        let p = fig1_system().params();
        let (table, best) = nearest_link_resonance(&p, -8.0, &[2.9, 3.0, 3.1], 10).unwrap();
        assert_eq!(best, LinkResonance { omega: 3.0, n: 5, detuning: 0.0 });
        assert_eq!(table.rows.len(), 3);
        assert!(nearest_link_resonance(&p, -8.0, &[], 10).is_err());
    }

    #[test]
    fn invalid_scan_points_are_config_errors() {
        let mut cfg = scan_config();
        cfg.omega = Some(Sweep::Values(vec![0.0]));
        assert!(matches!(run_scan(&cfg), Err(CliError::Config(_))));
    }
}
