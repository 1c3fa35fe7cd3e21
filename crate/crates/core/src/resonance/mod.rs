//! Resonance bookkeeping for the modulated systems: sideband resonance
//! conditions, effective couplings, and Bessel-zero localisation plans.

pub mod bessel;

use crate::error::{Error, Result};
use crate::twowell::{Modulation, TwoWellParams};

pub use bessel::{bessel_j, bessel_zero};

/// Relative tolerance (in units of `ω`) below which a detuning counts as zero.
pub const EXACT_RESONANCE_TOL: f64 = 1e-12;

/// Number of Bessel zeros proposed by [`plan_localization`].
pub const CANDIDATE_ZEROS: u32 = 5;

/// Phase rate of harmonic `n` on the energy-modulation link `μ → μ+1`: `nω + ε0 + κ(2μ+1)`.
pub fn energy_detuning(n: i32, omega: f64, eps0: f64, kappa: f64, mu: f64) -> f64 {
    n as f64 * omega + eps0 + kappa * (2.0 * mu + 1.0)
}

/// Phase rate of harmonic `n` on the coupling-modulation link `|μ⟩ₓ → |μ+2⟩ₓ`: `nω + 2δ0 + 2κ(μ+1)`.
pub fn coupling_detuning(n: i32, omega: f64, delta0: f64, kappa: f64, mu: f64) -> f64 {
    n as f64 * omega + 2.0 * delta0 + 2.0 * kappa * (mu + 1.0)
}

/// Phase rate of harmonic `n` for the lattice hop `(p, q) → (p-1, q+1)`: `nω + ε0 + κ(q-p+1)`.
pub fn lattice_detuning(n: i32, omega: f64, eps0: f64, kappa: f64, p: u32, q: u32) -> f64 {
    n as f64 * omega + eps0 + kappa * (q as f64 - p as f64 + 1.0)
}

/// `Ω_μ = δ√((J-μ)(J+μ+1))`.
pub fn energy_bare_coupling(j: f64, delta: f64, mu: f64) -> f64 {
    delta * ((j - mu) * (j + mu + 1.0)).max(0.0).sqrt()
}

/// `Ωˣ_μ = (κ/4)√((J+μ+1)(J+μ+2)(J-μ-1)(J-μ))`.
pub fn coupling_bare_coupling(j: f64, kappa: f64, mu: f64) -> f64 {
    0.25 * kappa * ((j + mu + 1.0) * (j + mu + 2.0) * (j - mu - 1.0) * (j - mu)).max(0.0).sqrt()
}

/// One (link, harmonic) pair of a modulated two-well system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceHit {
    /// Lower state of the coupled pair (`μ ↔ μ+1`, or `μ ↔ μ+2` in the `Ĵx` basis).
    pub mu: f64,
    pub n: i32,
    pub detuning: f64,
    pub bare_coupling: f64,
    pub bessel_weight: f64,
    /// `Ω·Jₙ/detuning`; `+∞` at exact resonance.
    pub effective_coupling: f64,
    pub exact: bool,
}

/// All (μ, n), `|n| ≤ n_max`, that are exactly resonant or have `|U| ≥ threshold`,
/// sorted by `|detuning|` (ties by μ, then n).
pub fn find_resonances(p: &TwoWellParams, n_max: u32, threshold: f64) -> Result<Vec<ResonanceHit>> {
    p.validate()?;
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("threshold must be positive, got {threshold}")));
    }
    let spin = p.spin();
    let j = spin.j();
    let (arg, step) = match p.modulation {
        Modulation::None => return Err(Error::Domain("no modulation, no sideband resonances".into())),
        Modulation::EnergyDifference => (p.eps1 / p.omega, 1),
        Modulation::Coupling => (2.0 * p.delta1 / p.omega, 2),
    };
    if n_max as i32 > bessel::MAX_ORDER || arg.abs() > bessel::MAX_ARGUMENT {
        return Err(Error::Domain(format!("Bessel table J_n({arg}), |n| <= {n_max} out of range")));
    }
    let weights = bessel::bessel_j_symmetric(n_max, arg);
    let mut hits = Vec::new();
    for k in 0..spin.dim().saturating_sub(step) {
        let mu = spin.mu(k);
        let bare = match p.modulation {
            Modulation::EnergyDifference => energy_bare_coupling(j, p.delta0, mu),
            _ => coupling_bare_coupling(j, p.kappa, mu),
        };
        for (i, &w) in weights.iter().enumerate() {
            let n = i as i32 - n_max as i32;
            let detuning = match p.modulation {
                Modulation::EnergyDifference => energy_detuning(n, p.omega, p.eps0, p.kappa, mu),
                _ => coupling_detuning(n, p.omega, p.delta0, p.kappa, mu),
            };
            let exact = detuning.abs() <= EXACT_RESONANCE_TOL * p.omega;
            let effective = if exact { f64::INFINITY } else { bare * w / detuning };
            if exact || effective.abs() >= threshold {
                hits.push(ResonanceHit {
                    mu,
                    n,
                    detuning,
                    bare_coupling: bare,
                    bessel_weight: w,
                    effective_coupling: effective,
                    exact,
                });
            }
        }
    }
    hits.sort_by(|a, b| {
        a.detuning
            .abs()
            .total_cmp(&b.detuning.abs())
            .then(a.mu.total_cmp(&b.mu))
            .then(a.n.cmp(&b.n))
    });
    Ok(hits)
}

/// Detuning of every harmonic `|n| ≤ n_max` for the lattice hop `(p, q) → (p-1, q+1)`,
/// sorted by `|detuning|` (ties by n).
pub fn lattice_resonance(p: u32, q: u32, eps0: f64, omega: f64, kappa: f64, n_max: u32) -> Vec<(i32, f64)> {
    let n_max = n_max as i32;
    let mut out: Vec<(i32, f64)> =
        (-n_max..=n_max).map(|n| (n, lattice_detuning(n, omega, eps0, kappa, p, q))).collect();
    out.sort_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(a.0.cmp(&b.0)));
    out
}

/// Recipe for stopping transport at the link `μ_b ↔ μ_b+1` with `ω = κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationPlan {
    /// Lower state `μ_b` of the link to block.
    pub blocked_link: f64,
    /// Order of the harmonic resonant on the blocked link, `|2μ_b + 1|`.
    pub bessel_order: u32,
    /// First zeros of `J_order`: values of `ε1/ω` that kill the link.
    pub candidate_ratios: Vec<f64>,
    /// `μ_b + N/2`: atoms in well 1 once the population is confined below the link.
    pub max_left_well_atoms: u32,
    /// `-μ_b - 1`. At `ω = κ` this link is resonant on harmonic `+(2μ_b+1)`,
    /// whose Bessel weight vanishes at the same zeros.
    pub mirror_link: f64,
}

impl LocalizationPlan {
    /// Lowest dead link met by population spreading up from `|-J⟩`.
    pub fn first_dead_link(&self) -> f64 {
        self.blocked_link.min(self.mirror_link)
    }
}

pub fn plan_localization(particles: u32, blocked_link: f64) -> Result<LocalizationPlan> {
    let j = particles as f64 / 2.0;
    let k = blocked_link + j;
    if !k.is_finite() || k.fract() != 0.0 || !(blocked_link > -j && blocked_link < j) {
        return Err(Error::Domain(format!(
            "blocked link lower state {blocked_link} must lie strictly between -J and J = {j} on the μ lattice"
        )));
    }
    let bessel_order = (2.0 * blocked_link + 1.0).abs() as u32;
    let candidate_ratios = (1..=CANDIDATE_ZEROS).map(|z| bessel_zero(bessel_order, z)).collect::<Result<_>>()?;
    Ok(LocalizationPlan {
        blocked_link,
        bessel_order,
        candidate_ratios,
        max_left_well_atoms: k as u32,
        mirror_link: -blocked_link - 1.0,
    })
}
