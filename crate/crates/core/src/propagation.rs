//! Time evolution: an adaptive Runge–Kutta propagator for arbitrary
//! time-dependent Hamiltonians, an exponential-midpoint reference propagator,
//! and the closed-form propagators of the interaction-only and coupling-only limits.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::states::StateVector;
use crate::su2::{build_operator, unitary_exponential, OperatorKind, OperatorMatrix, Spin};
use crate::C64;

/// Default integrator tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Norm drift beyond which an output state is rejected instead of renormalised.
pub const MAX_NORM_DRIFT: f64 = 1e-7;

/// A (possibly time-dependent) Hamiltonian `H(t)`, in units where ħ = 1.
pub trait Hamiltonian: Sync {
    fn dim(&self) -> usize;

    /// Writes `H(t)·psi` into `out`.
    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]);

    /// Dense Hermitian-tagged matrix of `H(t)`.
    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix>;

    /// Human-readable parameter snapshot, stored with trajectories.
    fn describe(&self) -> String {
        String::new()
    }
}

/// Time-independent dense Hamiltonian.
#[derive(Debug, Clone)]
pub struct ConstantHamiltonian(pub OperatorMatrix);

impl Hamiltonian for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, _t: f64, psi: &[C64], out: &mut [C64]) {
        dense_apply(self.0.matrix(), psi, out);
    }

    fn matrix_at(&self, _t: f64) -> Result<OperatorMatrix> {
        Ok(self.0.clone())
    }
}

/// Dense Hamiltonian given by a closure `t ↦ H(t)`.
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F> FnHamiltonian<F>
where
    F: Fn(f64) -> Result<OperatorMatrix> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnHamiltonian { dim, f }
    }
}

impl<F> Hamiltonian for FnHamiltonian<F>
where
    F: Fn(f64) -> Result<OperatorMatrix> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let m = (self.f)(t).expect("Hamiltonian evaluation failed");
        dense_apply(m.matrix(), psi, out);
    }

    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix> {
        (self.f)(t)
    }
}

pub(crate) fn dense_apply(m: &nalgebra::DMatrix<C64>, psi: &[C64], out: &mut [C64]) {
    let n = psi.len();
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (c, p) in psi.iter().enumerate().take(n) {
            acc += m[(r, c)] * p;
        }
        *o = acc;
    }
}

/// Anything that can be propagated: a wrapper around a complex amplitude vector.
pub trait QuantumState: Clone {
    fn amplitudes(&self) -> &[C64];

    /// Same kind of state (same space) with new amplitudes.
    fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self;
}

impl QuantumState for StateVector {
    fn amplitudes(&self) -> &[C64] {
        self.amplitudes().as_slice()
    }

    fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self {
        StateVector::from_amplitudes(self.spin(), DVector::from_vec(amplitudes))
            .expect("dimension preserved by propagation")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegratorStats {
    pub accepted: u64,
    pub rejected: u64,
    pub evaluations: u64,
}

/// States sampled on an output grid.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub tolerance: f64,
    /// Parameter snapshot of the Hamiltonian that produced the run.
    pub params: String,
    pub stats: IntegratorStats,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }
}

/// Uniform grid `0, step, 2·step, …` up to and including `t_max`
/// (the last point is `t_max` itself when it is not a multiple of `step`).
pub fn uniform_grid(t_max: f64, step: f64) -> Vec<f64> {
    assert!(t_max > 0.0 && step > 0.0);
    let n = (t_max / step - 1e-9).ceil() as usize;
    let mut grid: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    grid.push(t_max);
    grid
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: u64 = 2_000_000_000;

struct Rk<'a, H: ?Sized> {
    h: &'a H,
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
    stats: IntegratorStats,
}

impl<H: Hamiltonian + ?Sized> Rk<'_, H> {
    /// `dψ/dt = -i H(t) ψ`.
    fn rhs(&mut self, t: f64, stage: usize, y_is_tmp: bool, y: &[C64]) {
        let src: &[C64] = if y_is_tmp { &self.tmp } else { y };
        self.h.apply(t, src, &mut self.k[stage]);
        for v in self.k[stage].iter_mut() {
            *v = C64::new(v.im, -v.re);
        }
        self.stats.evaluations += 1;
    }

    /// One trial step from `(t, y)` of size `dt`; `k[0]` must hold `f(t, y)`.
    /// Returns the error estimate (max-abs) and writes the 5th-order solution to `y_new`.
    fn step(&mut self, t: f64, dt: f64, y: &[C64], y_new: &mut [C64]) -> f64 {
        for s in 1..7 {
            for i in 0..y.len() {
                let mut acc = y[i];
                for (j, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += self.k[j][i] * (dt * a);
                    }
                }
                self.tmp[i] = acc;
            }
            self.rhs(t + C[s] * dt, s, true, &[]);
        }
        // Stage 7 was evaluated at the 5th-order solution (FSAL).
        y_new.copy_from_slice(&self.tmp);
        let mut err_sq: f64 = 0.0;
        for i in 0..y.len() {
            let mut e = C64::new(0.0, 0.0);
            for (j, w) in E.iter().enumerate() {
                if *w != 0.0 {
                    e += self.k[j][i] * w;
                }
            }
            err_sq = err_sq.max(e.norm_sqr());
        }
        err_sq.sqrt() * dt.abs()
    }
}

/// Solves `i dψ/dt = H(t)ψ` from `grid[0] = 0`, returning the state at every grid time.
///
/// Dormand–Prince 5(4) with local extrapolation. A step of size `h` is accepted
/// when the embedded error estimate is at most `tol·h` (error per unit time),
/// so the global error stays of order `tol·t`. Steps are clipped to land on the
/// output times exactly. Stored states are rescaled to unit norm (a real factor,
/// so phases are untouched) unless the drift exceeds [`MAX_NORM_DRIFT`].
pub fn evolve<H, S>(h: &H, psi0: &S, grid: &[f64], tol: f64) -> Result<Trajectory<S>>
where
    H: Hamiltonian + ?Sized,
    S: QuantumState,
{
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let dim = h.dim();
    if psi0.amplitudes().len() != dim {
        return Err(Error::Domain(format!(
            "state of dimension {} given to a Hamiltonian of dimension {dim}",
            psi0.amplitudes().len()
        )));
    }
    let norm0 = amp_norm(psi0.amplitudes());
    if (norm0 - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("initial state is not normalised (norm {norm0})")));
    }
    match grid.first() {
        Some(&t0) if t0 == 0.0 => {}
        _ => return Err(Error::Domain("output grid must start at t = 0".into())),
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("output grid must be finite and strictly increasing".into()));
    }

    let mut rk = Rk {
        h,
        k: std::array::from_fn(|_| vec![C64::new(0.0, 0.0); dim]),
        tmp: vec![C64::new(0.0, 0.0); dim],
        stats: IntegratorStats::default(),
    };
    let mut y: Vec<C64> = psi0.amplitudes().to_vec();
    let mut y_new = y.clone();
    let mut t = 0.0;
    rk.rhs(t, 0, false, &y);

    let rate = amp_norm(&rk.k[0]).max(1e-3);
    let mut dt = (0.01 / rate).min(grid.last().copied().unwrap_or(1.0).max(1e-3));

    let mut times = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    times.push(0.0);
    states.push(psi0.clone());

    for &t_out in &grid[1..] {
        while t < t_out {
            let remaining = t_out - t;
            let clipped = dt >= remaining;
            let trial = if clipped { remaining } else { dt };
            let err = rk.step(t, trial, &y, &mut y_new);
            if !err.is_finite() {
                return Err(Error::Integration { t, reason: "non-finite error estimate".into() });
            }
            let ratio = err / (tol * trial);
            if ratio <= 1.0 {
                t = if clipped { t_out } else { t + trial };
                std::mem::swap(&mut y, &mut y_new);
                rk.k.swap(0, 6);
                rk.stats.accepted += 1;
                if !clipped {
                    dt = trial * step_factor(ratio);
                }
            } else {
                rk.stats.rejected += 1;
                dt = trial * step_factor(ratio).min(1.0);
                if dt < 1e-14 * t_out.max(1.0) {
                    return Err(Error::Integration { t, reason: format!("step size underflow ({dt:e})") });
                }
            }
            if rk.stats.accepted + rk.stats.rejected > MAX_STEPS {
                return Err(Error::Integration { t, reason: "step budget exhausted".into() });
            }
        }
        let norm = amp_norm(&y);
        if (norm - 1.0).abs() > MAX_NORM_DRIFT {
            return Err(Error::Integration {
                t,
                reason: format!("norm drifted to {norm} (tolerance too loose or H not Hermitian)"),
            });
        }
        let out: Vec<C64> = y.iter().map(|c| c / norm).collect();
        times.push(t_out);
        states.push(psi0.with_amplitudes(out));
    }

    Ok(Trajectory { times, states, tolerance: tol, params: h.describe(), stats: rk.stats })
}

fn step_factor(ratio: f64) -> f64 {
    if ratio == 0.0 {
        return 5.0;
    }
    (0.9 * ratio.powf(-0.25)).clamp(0.2, 5.0)
}

fn amp_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Reference propagator: products of `exp(-i H(t_k + Δ/2) Δ)` over uniform
/// steps `Δ = t_end / ceil(t_end/dt)`.
///
/// Exactly unitary for any step and exact for constant `H`; second order in `Δ`
/// otherwise. Shares no code with [`evolve`].
pub fn piecewise_exponential_oracle<H, S>(h: &H, psi0: &S, t_end: f64, dt: f64) -> Result<S>
where
    H: Hamiltonian + ?Sized,
    S: QuantumState,
{
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Domain(format!("need dt > 0 and t_end >= 0 (dt={dt}, t_end={t_end})")));
    }
    let mut psi = DVector::from_column_slice(psi0.amplitudes());
    if t_end > 0.0 {
        let steps = (t_end / dt - 1e-12).ceil().max(1.0) as usize;
        let delta = t_end / steps as f64;
        for k in 0..steps {
            let mid = (k as f64 + 0.5) * delta;
            let u = unitary_exponential(&h.matrix_at(mid)?, delta)?;
            psi = u.apply(&psi);
        }
    }
    Ok(psi0.with_amplitudes(psi.as_slice().to_vec()))
}

/// Limiting regimes with closed-form propagators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitCase {
    /// No interaction, symmetric wells: `U = exp(iηĴx)` with `η` the coupling pulse area.
    CouplingOnly { eta: f64 },
    /// No tunnelling: `U(t) = exp(-iκtĴz²)`.
    InteractionOnly { kappa: f64, t: f64 },
}

pub fn analytic_limit_propagator(spin: Spin, limit: LimitCase) -> Result<OperatorMatrix> {
    match limit {
        LimitCase::CouplingOnly { eta } => unitary_exponential(&build_operator(spin, OperatorKind::Jx), -eta),
        LimitCase::InteractionOnly { kappa, t } => {
            let phase = kappa * t;
            if !phase.is_finite() {
                return Err(Error::Domain("non-finite κt".into()));
            }
            let d: Vec<C64> = spin.mus().map(|mu| C64::from_polar(1.0, -phase * mu * mu)).collect();
            OperatorMatrix::from_diagonal(&d).checked_unitary()
        }
    }
}

/// Fractions of the interaction revival period `T = 2π/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevivalFraction {
    Full,
    Half,
    Quarter,
}

impl RevivalFraction {
    /// Evolution time `T`, `T/2` or `T/4` for interaction strength `kappa`.
    pub fn time(self, kappa: f64) -> f64 {
        let period = 2.0 * PI / kappa;
        match self {
            RevivalFraction::Full => period,
            RevivalFraction::Half => period / 2.0,
            RevivalFraction::Quarter => period / 4.0,
        }
    }
}

/// Closed-form interaction-only propagator at `T`, `T/2` or `T/4`.
///
/// The operator does not depend on `kappa`; `kappa` only fixes the time scale
/// and must be finite and non-zero.
pub fn revival_operator(spin: Spin, kappa: f64, fraction: RevivalFraction) -> Result<OperatorMatrix> {
    if !kappa.is_finite() || kappa == 0.0 {
        return Err(Error::Domain(format!("revival period undefined for κ = {kappa}")));
    }
    let dim = spin.dim();
    let phase = |a: f64| C64::from_polar(1.0, a);
    let rot_z = |angle: f64| -> Vec<C64> { spin.mus().map(|mu| phase(-angle * mu)).collect() };
    let scalar = |z: C64| -> Vec<C64> { vec![z; dim] };

    let diag: Vec<C64> = if spin.particles() % 2 == 0 {
        match fraction {
            RevivalFraction::Full => scalar(C64::from(1.0)),
            RevivalFraction::Half => rot_z(PI),
            RevivalFraction::Quarter => rot_z(PI)
                .into_iter()
                .map(|z| (phase(-PI / 4.0) + phase(PI / 4.0) * z) * FRAC_1_SQRT_2)
                .collect(),
        }
    } else {
        match fraction {
            RevivalFraction::Full => scalar(phase(-PI / 2.0)),
            RevivalFraction::Half => scalar(phase(-PI / 4.0)),
            RevivalFraction::Quarter => rot_z(-PI / 2.0)
                .into_iter()
                .zip(rot_z(PI / 2.0))
                .map(|(a, b)| phase(-PI / 8.0) * (a + b) * FRAC_1_SQRT_2)
                .collect(),
        }
    };
    OperatorMatrix::from_diagonal(&diag).checked_unitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_family, fidelity, number_state, CoherentKind};

    #[test]
    fn zero_hamiltonian_leaves_state_alone() {
        let spin = Spin::from_particles(4);
        let psi0 = coherent_family(spin, CoherentKind::Scs { theta: 0.7, phi: 0.2 }).unwrap();
        let h = ConstantHamiltonian(OperatorMatrix::zeros(5));
        let traj = evolve(&h, &psi0, &uniform_grid(3.0, 0.5), 1e-10).unwrap();
        for (_, s) in traj.iter() {
            assert!((s.amplitudes() - psi0.amplitudes()).norm() < 1e-15);
        }
    }

    #[test]
    fn grid_validation() {
        let spin = Spin::from_particles(2);
        let psi0 = number_state(spin, 0.0).unwrap();
        let h = ConstantHamiltonian(build_operator(spin, OperatorKind::Jx));
        assert!(evolve(&h, &psi0, &[0.1, 0.2], 1e-8).is_err());
        assert!(evolve(&h, &psi0, &[0.0, 0.2, 0.2], 1e-8).is_err());
        assert!(evolve(&h, &psi0, &[0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn non_hermitian_generator_trips_norm_check() {
        let spin = Spin::from_particles(2);
        let psi0 = number_state(spin, -1.0).unwrap();
        // J+ alone is not Hermitian: norm is not conserved.
        let jp = build_operator(spin, OperatorKind::Jplus);
        let h = ConstantHamiltonian(jp);
        let r = evolve(&h, &psi0, &[0.0, 1.0], 1e-10);
        assert!(matches!(r, Err(Error::Integration { .. })), "{r:?}");
    }

    #[test]
    fn uniform_grid_ends_on_t_max() {
        let g = uniform_grid(1.0, 0.3);
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(uniform_grid(1.0, 0.25).len(), 5);
    }

    #[test]
    fn coupling_only_at_zero_area_is_identity() {
        let u = analytic_limit_propagator(Spin::from_particles(6), LimitCase::CouplingOnly { eta: 0.0 }).unwrap();
        assert!(u.max_abs_diff(&OperatorMatrix::identity(7)) < 1e-14);
    }

    #[test]
    fn even_full_revival_is_identity() {
        let u = revival_operator(Spin::from_particles(16), 1.0, RevivalFraction::Full).unwrap();
        assert!(u.max_abs_diff(&OperatorMatrix::identity(17)) < 1e-15);
        assert!(revival_operator(Spin::from_particles(16), 0.0, RevivalFraction::Full).is_err());
    }

    #[test]
    fn oracle_matches_exponential_for_constant_h() {
        let spin = Spin::from_particles(5);
        let psi0 = number_state(spin, -2.5).unwrap();
        let hm = (&build_operator(spin, OperatorKind::Jx) + &build_operator(spin, OperatorKind::Jz2))
            .checked_hermitian()
            .unwrap();
        let exact = unitary_exponential(&hm, 1.3).unwrap().apply(psi0.amplitudes());
        let h = ConstantHamiltonian(hm);
        for dt in [1.3, 0.1, 0.013] {
            let out = piecewise_exponential_oracle(&h, &psi0, 1.3, dt).unwrap();
            assert!((out.amplitudes() - &exact).norm() < 1e-12);
        }
        let f = fidelity(&psi0, &piecewise_exponential_oracle(&h, &psi0, 0.0, 0.1).unwrap()).unwrap();
        assert_eq!(f, 1.0);
    }
}
