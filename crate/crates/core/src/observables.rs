//! Populations and `Ĵz` moments of two-well states and trajectories.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::propagation::Trajectory;
use crate::states::StateVector;
use crate::su2::{rotation_operator, Spin};
use crate::C64;

/// Number-basis populations and `Ĵz` moments of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberBasisStats {
    /// `P_μ = |c_μ|²`, ascending μ.
    pub populations: Vec<f64>,
    /// `⟨Ĵz⟩`.
    pub jz_mean: f64,
    /// `ΔJz² = ⟨Ĵz²⟩ - ⟨Ĵz⟩²`.
    pub jz_var: f64,
}

impl NumberBasisStats {
    /// `⟨Ĵz²⟩`.
    pub fn jz2_mean(&self) -> f64 {
        self.jz_var + self.jz_mean * self.jz_mean
    }

    /// Mean number of atoms in well 1, `⟨Ĵz⟩ + N/2`.
    pub fn well1_atoms(&self) -> f64 {
        self.jz_mean + (self.populations.len() - 1) as f64 / 2.0
    }
}

pub fn measure_number_basis(psi: &StateVector) -> NumberBasisStats {
    let spin = psi.spin();
    let populations: Vec<f64> = psi.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let jz_mean: f64 = spin.mus().zip(&populations).map(|(mu, p)| mu * p).sum();
    let jz2: f64 = spin.mus().zip(&populations).map(|(mu, p)| mu * mu * p).sum();
    NumberBasisStats { populations, jz_mean, jz_var: jz2 - jz_mean * jz_mean }
}

/// Projector onto the `Ĵx` eigenbasis; reusable across many states of one spin.
#[derive(Debug, Clone)]
pub struct XBasisMeter {
    spin: Spin,
    /// Row `k` is `⟨μ_k|ₓ`.
    bras: DMatrix<C64>,
}

impl XBasisMeter {
    pub fn new(spin: Spin) -> Result<Self> {
        let v = rotation_operator(spin, std::f64::consts::FRAC_PI_2, 0.0)?;
        Ok(XBasisMeter { spin, bras: v.into_matrix().adjoint() })
    }

    /// `P^x_μ = |⟨μ|ₓψ⟩|²`, ascending μ.
    pub fn populations(&self, psi: &StateVector) -> Vec<f64> {
        assert_eq!(psi.spin(), self.spin, "state and meter spins differ");
        (&self.bras * psi.amplitudes()).iter().map(|c| c.norm_sqr()).collect()
    }
}

pub fn measure_x_basis(psi: &StateVector) -> Result<Vec<f64>> {
    Ok(XBasisMeter::new(psi.spin())?.populations(psi))
}

/// Per-time observables of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    /// `populations[i][k]` = `P_μ` of basis index `k` at `times[i]`.
    pub populations: Vec<Vec<f64>>,
    pub jz_mean: Vec<f64>,
    pub jz_var: Vec<f64>,
    /// `P^x_μ` per time, when requested.
    pub x_populations: Option<Vec<Vec<f64>>>,
}

impl TimeSeries {
    pub fn from_trajectory(traj: &Trajectory<StateVector>, with_x_basis: bool) -> Result<Self> {
        let stats: Vec<NumberBasisStats> = traj.states.iter().map(measure_number_basis).collect();
        let x_populations = match (with_x_basis, traj.states.first()) {
            (true, Some(first)) => {
                let meter = XBasisMeter::new(first.spin())?;
                Some(traj.states.iter().map(|s| meter.populations(s)).collect())
            }
            _ => None,
        };
        Ok(TimeSeries {
            times: traj.times.clone(),
            jz_mean: stats.iter().map(|s| s.jz_mean).collect(),
            jz_var: stats.iter().map(|s| s.jz_var).collect(),
            populations: stats.into_iter().map(|s| s.populations).collect(),
            x_populations,
        })
    }

    /// `P_μ(t)` for basis index `k`.
    pub fn population_channel(&self, k: usize) -> Vec<f64> {
        self.populations.iter().map(|p| p[k]).collect()
    }

    pub fn max_jz_var(&self) -> f64 {
        self.jz_var.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}
