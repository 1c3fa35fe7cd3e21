//! Number states, spin coherent states and their relatives.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::su2::{rotation_operator, Spin};
use crate::C64;

/// Normalisation tolerance enforced on construction.
pub const NORM_TOL: f64 = 1e-12;

/// Pure state of `N` atoms in two wells, amplitudes indexed by ascending μ.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    spin: Spin,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps amplitudes without checking normalisation.
    pub fn from_amplitudes(spin: Spin, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::Domain(format!(
                "{} amplitudes given for dimension {}",
                amplitudes.len(),
                spin.dim()
            )));
        }
        Ok(StateVector { spin, amplitudes })
    }

    /// Wraps amplitudes and checks `Σ|c_μ|² = 1` within [`NORM_TOL`].
    pub fn normalized(spin: Spin, amplitudes: DVector<C64>) -> Result<Self> {
        let s = StateVector::from_amplitudes(spin, amplitudes)?;
        let dev = (s.norm() - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::Domain(format!("state norm deviates from 1 by {dev:e}")));
        }
        Ok(s)
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    /// Amplitude `c_μ`.
    pub fn amplitude(&self, mu: f64) -> Result<C64> {
        Ok(self.amplitudes[self.spin.index_of(mu)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_space(other)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Multiplies every amplitude by `e^{iα}`.
    pub fn with_global_phase(&self, alpha: f64) -> StateVector {
        StateVector { spin: self.spin, amplitudes: &self.amplitudes * C64::from_polar(1.0, alpha) }
    }

    fn check_same_space(&self, other: &StateVector) -> Result<()> {
        if self.spin != other.spin {
            return Err(Error::Domain(format!("states live in different spaces ({} vs {})", self.spin, other.spin)));
        }
        Ok(())
    }
}

/// `|μ⟩`: `J+μ` atoms in well 1 and `J-μ` in well 2.
pub fn number_state(spin: Spin, mu: f64) -> Result<StateVector> {
    let k = spin.index_of(mu)?;
    let mut amps = DVector::zeros(spin.dim());
    amps[k] = C64::from(1.0);
    Ok(StateVector { spin, amplitudes: amps })
}

/// The rotated families built from number states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoherentKind {
    /// Spin coherent state `R(θ,φ)|J⟩`.
    Scs { theta: f64, phi: f64 },
    /// Phase state, the SCS at `θ = π/2`.
    Phase { phi: f64 },
    /// Displaced SCS `R(θ,φ)|μ⟩`.
    Displaced { theta: f64, phi: f64, mu: f64 },
    /// `|μ⟩_x`, eigenstate of `Ĵx`.
    XBasis { mu: f64 },
    /// `|μ⟩_y`, eigenstate of `Ĵy`.
    YBasis { mu: f64 },
}

pub fn coherent_family(spin: Spin, kind: CoherentKind) -> Result<StateVector> {
    use std::f64::consts::FRAC_PI_2;
    let (theta, phi, mu) = match kind {
        CoherentKind::Scs { theta, phi } => (theta, phi, spin.j()),
        CoherentKind::Phase { phi } => (FRAC_PI_2, phi, spin.j()),
        CoherentKind::Displaced { theta, phi, mu } => (theta, phi, mu),
        CoherentKind::XBasis { mu } => (FRAC_PI_2, 0.0, mu),
        CoherentKind::YBasis { mu } => (FRAC_PI_2, FRAC_PI_2, mu),
    };
    let seed = number_state(spin, mu)?;
    let r = rotation_operator(spin, theta, phi)?;
    Ok(StateVector { spin, amplitudes: r.apply(&seed.amplitudes) })
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Binomial coefficient in floating point.
///
/// Uses the running product `Π (n-k+i)/i`, which stays finite and accurate
/// well past the range where `n!` overflows.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}
