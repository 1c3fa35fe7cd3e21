//! The N-particle two-well Hamiltonian `H = ε(t)Ĵz - δ(t)Ĵx + κĴz²`, its
//! `Ĵx`-basis form, and the interaction-picture Hamiltonians obtained by
//! removing the diagonal part, either exactly or as Bessel sideband sums.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::propagation::{dense_apply, Hamiltonian};
use crate::resonance::bessel::{bessel_j_symmetric, bessel_weight_mass};
use crate::su2::{
    build_operator, conjugate_diagonal, rotation_operator, unitary_exponential, OperatorKind, OperatorMatrix, Spin,
};
use crate::C64;

/// Which parameter is modulated harmonically at frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    None,
    /// `ε(t) = ε0 + ε1 cos ωt`.
    EnergyDifference,
    /// `δ(t) = δ0 + δ1 cos ωt`.
    Coupling,
}

/// Physical parameters, all rates in the same frequency unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWellParams {
    pub particles: u32,
    pub kappa: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub omega: f64,
    pub modulation: Modulation,
}

impl TwoWellParams {
    /// Static wells: `ε`, `δ`, `κ` constant.
    pub fn unmodulated(particles: u32, kappa: f64, eps: f64, delta: f64) -> Self {
        TwoWellParams {
            particles,
            kappa,
            eps0: eps,
            eps1: 0.0,
            delta0: delta,
            delta1: 0.0,
            omega: 0.0,
            modulation: Modulation::None,
        }
    }

    pub fn energy_modulated(particles: u32, kappa: f64, delta: f64, eps0: f64, eps1: f64, omega: f64) -> Self {
        TwoWellParams {
            particles,
            kappa,
            eps0,
            eps1,
            delta0: delta,
            delta1: 0.0,
            omega,
            modulation: Modulation::EnergyDifference,
        }
    }

    pub fn coupling_modulated(particles: u32, kappa: f64, delta0: f64, delta1: f64, omega: f64) -> Self {
        TwoWellParams {
            particles,
            kappa,
            eps0: 0.0,
            eps1: 0.0,
            delta0,
            delta1,
            omega,
            modulation: Modulation::Coupling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.kappa, self.eps0, self.eps1, self.delta0, self.delta1, self.omega];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if self.particles == 0 {
            return Err(Error::Domain("need at least one particle".into()));
        }
        if self.modulation != Modulation::None && !(self.omega > 0.0) {
            return Err(Error::Domain(format!("modulation frequency must be positive, got {}", self.omega)));
        }
        match self.modulation {
            Modulation::None if self.eps1 != 0.0 || self.delta1 != 0.0 => {
                Err(Error::Domain("unmodulated wells cannot carry ε1 or δ1".into()))
            }
            Modulation::EnergyDifference if self.delta1 != 0.0 => {
                Err(Error::Domain("energy-difference modulation cannot also modulate δ".into()))
            }
            Modulation::Coupling if self.eps1 != 0.0 => {
                Err(Error::Domain("coupling modulation cannot also modulate ε".into()))
            }
            Modulation::Coupling if !(self.delta0 >= self.delta1 && self.delta1 >= 0.0) => Err(Error::Domain(
                format!("coupling modulation needs δ0 >= δ1 >= 0 (δ0={}, δ1={})", self.delta0, self.delta1),
            )),
            _ => Ok(()),
        }
    }

    pub fn spin(&self) -> Spin {
        Spin::from_particles(self.particles)
    }

    /// `ε(t)`.
    pub fn epsilon(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::EnergyDifference => self.eps0 + self.eps1 * (self.omega * t).cos(),
            _ => self.eps0,
        }
    }

    /// `δ(t)`.
    pub fn delta(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::Coupling => self.delta0 + self.delta1 * (self.omega * t).cos(),
            _ => self.delta0,
        }
    }

    /// `θ(t) = ∫₀ᵗ ε = ε0·t + ε1 sin(ωt)/ω`.
    pub fn theta(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::EnergyDifference => self.eps0 * t + self.eps1 * (self.omega * t).sin() / self.omega,
            _ => self.eps0 * t,
        }
    }

    /// `η(t) = ∫₀ᵗ δ = δ0·t + δ1 sin(ωt)/ω`.
    pub fn eta(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::Coupling => self.delta0 * t + self.delta1 * (self.omega * t).sin() / self.omega,
            _ => self.delta0 * t,
        }
    }

    /// Argument of the Bessel sideband weights: `ε1/ω` or `2δ1/ω`.
    pub fn bessel_argument(&self) -> Option<f64> {
        match self.modulation {
            Modulation::None => None,
            Modulation::EnergyDifference => Some(self.eps1 / self.omega),
            Modulation::Coupling => Some(2.0 * self.delta1 / self.omega),
        }
    }

    /// `ceil(arg) + 8`, the default sideband cut-off.
    pub fn default_n_max(&self) -> u32 {
        default_n_max(self.bessel_argument().unwrap_or(0.0))
    }
}

pub(crate) fn default_n_max(argument: f64) -> u32 {
    argument.abs().ceil() as u32 + 8
}

/// Lab-frame `H(t)` as a dense matrix.
pub fn hamiltonian_at(p: &TwoWellParams, t: f64) -> Result<OperatorMatrix> {
    p.validate()?;
    TwoWellHamiltonian::new(*p)?.matrix_at(t)
}

/// `-δ(t)Ĵx + (κ/2)(J(J+1) - Ĵx²) + (κ/4)(Ĵx⁺² + Ĵx⁻²)`, valid for symmetric wells only.
pub fn x_form_hamiltonian(p: &TwoWellParams, t: f64) -> Result<OperatorMatrix> {
    p.validate()?;
    if p.eps0 != 0.0 || p.eps1 != 0.0 {
        return Err(Error::Contract("the Ĵx form assumes ε = 0".into()));
    }
    let spin = p.spin();
    let j = spin.j();
    let jx = build_operator(spin, OperatorKind::Jx);
    let xp = build_operator(spin, OperatorKind::JxPlus);
    let xm = build_operator(spin, OperatorKind::JxMinus);
    let dim = spin.dim();
    let casimir = OperatorMatrix::identity(dim).scale_real(j * (j + 1.0));
    let m = jx.scale_real(-p.delta(t)).matrix()
        + (casimir.matrix() - jx.matrix() * jx.matrix()) * C64::from(p.kappa / 2.0)
        + (xp.matrix() * xp.matrix() + xm.matrix() * xm.matrix()) * C64::from(p.kappa / 4.0);
    OperatorMatrix::new(m).checked_hermitian()
}

/// Interaction pictures removing the diagonal part of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `T(t) = exp[-iθ(t)Ĵz - iκtĴz²]`, for energy-difference modulation.
    Energy,
    /// `S(t) = exp[iη(t)Ĵx - (i/2)κt(J(J+1) - Ĵx²)]`, for coupling modulation.
    Coupling,
}

impl Frame {
    pub fn for_modulation(m: Modulation) -> Option<Frame> {
        match m {
            Modulation::EnergyDifference => Some(Frame::Energy),
            Modulation::Coupling => Some(Frame::Coupling),
            Modulation::None => None,
        }
    }
}

fn check_frame(p: &TwoWellParams, frame: Frame) -> Result<()> {
    if Frame::for_modulation(p.modulation) != Some(frame) {
        return Err(Error::Contract(format!("{frame:?} frame does not match {:?} modulation", p.modulation)));
    }
    if frame == Frame::Coupling && p.eps0 != 0.0 {
        return Err(Error::Contract("the coupling frame assumes ε = 0".into()));
    }
    Ok(())
}

/// The frame operator `T(t)` or `S(t)`; the lab state is `ψ = T ψ'`.
pub fn frame_transform(p: &TwoWellParams, t: f64, frame: Frame) -> Result<OperatorMatrix> {
    p.validate()?;
    check_frame(p, frame)?;
    let spin = p.spin();
    match frame {
        Frame::Energy => {
            let theta = p.theta(t);
            let d: Vec<C64> =
                spin.mus().map(|mu| C64::from_polar(1.0, -theta * mu - p.kappa * t * mu * mu)).collect();
            OperatorMatrix::from_diagonal(&d).checked_unitary()
        }
        Frame::Coupling => {
            // S = exp(-iG) with G = -ηĴx + (κt/2)(J(J+1) - Ĵx²).
            let j = spin.j();
            let jx = build_operator(spin, OperatorKind::Jx);
            let casimir = OperatorMatrix::identity(spin.dim()).scale_real(j * (j + 1.0));
            let g = &jx.scale_real(-p.eta(t)) + &(&casimir - &(&jx * &jx)).scale_real(p.kappa * t / 2.0);
            unitary_exponential(&g.checked_hermitian()?, 1.0)
        }
    }
}

/// Lab-frame evaluator. `H(t)` is tridiagonal in the number basis.
#[derive(Debug, Clone)]
pub struct TwoWellHamiltonian {
    params: TwoWellParams,
    mus: Vec<f64>,
    raising: Vec<f64>,
}

impl TwoWellHamiltonian {
    pub fn new(params: TwoWellParams) -> Result<Self> {
        params.validate()?;
        let spin = params.spin();
        let mus: Vec<f64> = spin.mus().collect();
        let raising = mus[..mus.len() - 1].iter().map(|&mu| spin.raising_amplitude(mu)).collect();
        Ok(TwoWellHamiltonian { params, mus, raising })
    }

    pub fn params(&self) -> &TwoWellParams {
        &self.params
    }
}

impl Hamiltonian for TwoWellHamiltonian {
    fn dim(&self) -> usize {
        self.mus.len()
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let eps = self.params.epsilon(t);
        let half_delta = -0.5 * self.params.delta(t);
        let kappa = self.params.kappa;
        for (k, o) in out.iter_mut().enumerate() {
            let mu = self.mus[k];
            let mut acc = psi[k] * (eps * mu + kappa * mu * mu);
            if k > 0 {
                acc += psi[k - 1] * (half_delta * self.raising[k - 1]);
            }
            if k + 1 < psi.len() {
                acc += psi[k + 1] * (half_delta * self.raising[k]);
            }
            *o = acc;
        }
    }

    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix> {
        let n = self.dim();
        let eps = self.params.epsilon(t);
        let half_delta = -0.5 * self.params.delta(t);
        let kappa = self.params.kappa;
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n {
            let mu = self.mus[k];
            m[(k, k)] = C64::from(eps * mu + kappa * mu * mu);
            if k + 1 < n {
                m[(k + 1, k)] = C64::from(half_delta * self.raising[k]);
                m[(k, k + 1)] = C64::from(half_delta * self.raising[k]);
            }
        }
        OperatorMatrix::hermitian(m)
    }

    fn describe(&self) -> String {
        format!("{:?}", self.params)
    }
}

/// How the time-dependent carrier phase of the transformed Hamiltonian is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Phases {
    /// Closed form `e^{iθ(t)}` (energy frame) or `e^{-2iη(t)}` (coupling frame).
    Exact,
    /// Truncated Bessel expansion; `weights[i]` is `J_n(arg)` for `n = i - n_max`.
    Sideband { n_max: u32, weights: Vec<f64> },
}

/// Interaction-picture Hamiltonian, evaluable at any time.
///
/// Energy frame, link `μ → μ+1`:
/// `-(δ0/2)√((J-μ)(J+μ+1)) Σₙ Jₙ(ε1/ω) e^{it(κ(2μ+1) + nω + ε0)}`.
///
/// Coupling frame, link `|μ⟩ₓ → |μ+2⟩ₓ`:
/// `(κ/4)⟨μ+2|Ĵx⁺²|μ⟩ₓ Σₙ Jₙ(2δ1/ω) e^{-it(2δ0 + 2κ(μ+1) + nω)}`.
/// The coupling-frame operator is stored in the `Ĵx` eigenbasis and rotated
/// back to the number basis on evaluation.
#[derive(Debug, Clone)]
pub struct SidebandHamiltonian {
    params: TwoWellParams,
    frame: Frame,
    phases: Phases,
    mus: Vec<f64>,
    /// Bare link amplitudes; entry `k` couples index `k` to `k+1` (energy) or `k+2` (coupling).
    links: Vec<f64>,
    /// Columns are `|μ⟩ₓ` (coupling frame only).
    x_basis: Option<DMatrix<C64>>,
}

impl SidebandHamiltonian {
    /// Truncated sideband sum over `|n| ≤ n_max`.
    ///
    /// Fails with [`Error::Truncation`] when `Σ_{|n|≤n_max} Jₙ² < 0.999`.
    pub fn truncated(params: TwoWellParams, n_max: u32) -> Result<Self> {
        let mut h = SidebandHamiltonian::exact(params)?;
        let arg = params.bessel_argument().expect("validated modulation");
        let mass = bessel_weight_mass(n_max, arg);
        if mass < 0.999 {
            return Err(Error::Truncation { n_max, argument: arg, mass });
        }
        h.phases = Phases::Sideband { n_max, weights: bessel_j_symmetric(n_max, arg) };
        Ok(h)
    }

    /// Truncated at the default cut-off `ceil(arg) + 8`.
    pub fn with_default_cutoff(params: TwoWellParams) -> Result<Self> {
        SidebandHamiltonian::truncated(params, params.default_n_max())
    }

    /// Untruncated: the carrier phase is evaluated in closed form.
    pub fn exact(params: TwoWellParams) -> Result<Self> {
        params.validate()?;
        let frame = Frame::for_modulation(params.modulation)
            .ok_or_else(|| Error::Domain("transformed Hamiltonian needs a modulation".into()))?;
        check_frame(&params, frame)?;
        let spin = params.spin();
        let j = spin.j();
        let mus: Vec<f64> = spin.mus().collect();
        let (links, x_basis) = match frame {
            Frame::Energy => (mus[..mus.len() - 1].iter().map(|&mu| spin.raising_amplitude(mu)).collect(), None),
            Frame::Coupling => {
                let links = mus
                    .iter()
                    .take(mus.len().saturating_sub(2))
                    .map(|&mu| ((j - mu) * (j + mu + 1.0) * (j - mu - 1.0) * (j + mu + 2.0)).max(0.0).sqrt())
                    .collect();
                let v = rotation_operator(spin, std::f64::consts::FRAC_PI_2, 0.0)?.into_matrix();
                (links, Some(v))
            }
        };
        Ok(SidebandHamiltonian { params, frame, phases: Phases::Exact, mus, links, x_basis })
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn phases(&self) -> &Phases {
        &self.phases
    }

    /// Harmonic range `(-n_max, n_max)` of a truncated sum.
    pub fn harmonics(&self) -> Option<(i32, i32)> {
        match &self.phases {
            Phases::Exact => None,
            Phases::Sideband { n_max, .. } => Some((-(*n_max as i32), *n_max as i32)),
        }
    }

    /// `Σₙ Jₙ e^{±inωt}` (or its closed form), the modulation factor common to all links.
    fn carrier(&self, t: f64) -> C64 {
        let p = &self.params;
        let sign = match self.frame {
            Frame::Energy => 1.0,
            Frame::Coupling => -1.0,
        };
        match &self.phases {
            Phases::Exact => {
                let osc = p.bessel_argument().unwrap() * (p.omega * t).sin();
                C64::from_polar(1.0, sign * osc)
            }
            Phases::Sideband { n_max, weights } => {
                let base = C64::from_polar(1.0, sign * p.omega * t);
                // Horner-like accumulation from n = -n_max upward.
                let start = C64::from_polar(1.0, -sign * p.omega * t * *n_max as f64);
                let mut z = start;
                let mut acc = C64::new(0.0, 0.0);
                for w in weights {
                    acc += z * *w;
                    z *= base;
                }
                acc
            }
        }
    }

    /// Link coefficients at time `t` (lower index `k` → upper index).
    fn link_values(&self, t: f64) -> Vec<C64> {
        let p = &self.params;
        let carrier = self.carrier(t);
        match self.frame {
            Frame::Energy => self
                .links
                .iter()
                .zip(&self.mus)
                .map(|(&amp, &mu)| {
                    let phase = C64::from_polar(1.0, t * (p.kappa * (2.0 * mu + 1.0) + p.eps0));
                    carrier * phase * (-0.5 * p.delta0 * amp)
                })
                .collect(),
            Frame::Coupling => self
                .links
                .iter()
                .zip(&self.mus)
                .map(|(&amp, &mu)| {
                    let phase = C64::from_polar(1.0, -t * (2.0 * p.delta0 + 2.0 * p.kappa * (mu + 1.0)));
                    carrier * phase * (0.25 * p.kappa * amp)
                })
                .collect(),
        }
    }

    fn offset(&self) -> usize {
        match self.frame {
            Frame::Energy => 1,
            Frame::Coupling => 2,
        }
    }

    /// Banded operator in the frame's natural basis.
    fn banded(&self, t: f64) -> DMatrix<C64> {
        let n = self.mus.len();
        let off = self.offset();
        let mut m = DMatrix::zeros(n, n);
        for (k, c) in self.link_values(t).into_iter().enumerate() {
            m[(k + off, k)] = c;
            m[(k, k + off)] = c.conj();
        }
        m
    }
}

impl Hamiltonian for SidebandHamiltonian {
    fn dim(&self) -> usize {
        self.mus.len()
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let off = self.offset();
        let links = self.link_values(t);
        let band = |src: &[C64], dst: &mut [C64]| {
            dst.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for (k, c) in links.iter().enumerate() {
                dst[k + off] += c * src[k];
                dst[k] += c.conj() * src[k + off];
            }
        };
        match &self.x_basis {
            None => band(psi, out),
            Some(v) => {
                let n = psi.len();
                let mut w = vec![C64::new(0.0, 0.0); n];
                dense_apply(&v.adjoint(), psi, &mut w);
                let mut bw = vec![C64::new(0.0, 0.0); n];
                band(&w, &mut bw);
                dense_apply(v, &bw, out);
            }
        }
    }

    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix> {
        let b = self.banded(t);
        let m = match &self.x_basis {
            None => b,
            Some(v) => v * b * v.adjoint(),
        };
        let op = OperatorMatrix::new(m);
        // Rotating back to the number basis leaves rounding-level asymmetry; symmetrise.
        let sym = (op.matrix() + op.matrix().adjoint()) * C64::from(0.5);
        OperatorMatrix::hermitian(sym)
    }

    fn describe(&self) -> String {
        format!("{:?} frame, {:?}, {:?}", self.frame, self.harmonics(), self.params)
    }
}

/// Truncated transformed Hamiltonian at time `t`.
pub fn transformed_hamiltonian(p: &TwoWellParams, t: f64, n_max: u32) -> Result<OperatorMatrix> {
    SidebandHamiltonian::truncated(*p, n_max)?.matrix_at(t)
}

/// `V diag(f(μ)) V†` with `V` the `Ĵx` eigenbasis: `g(Ĵx)` without a fresh eigensolve.
pub fn function_of_jx(spin: Spin, f: impl Fn(f64) -> C64) -> Result<OperatorMatrix> {
    let v = rotation_operator(spin, std::f64::consts::FRAC_PI_2, 0.0)?.into_matrix();
    Ok(OperatorMatrix::new(conjugate_diagonal(&v, spin.mus().map(f))))
}
