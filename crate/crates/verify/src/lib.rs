//! Acceptance criteria for the simulator, one function per criterion.
//!
//! Each check returns a [`Verdict`] with the measured quantity, so a failing
//! criterion reports how far off it is instead of just "false".

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::sync::Mutex;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use becsim::config::FrameChoice;
use becsim::output::Table;
use becsim::presets::{preset, PRESETS};
use becsim::runner::{run_experiment, RunOutput};
use becsim_core::lattice::{bh_hamiltonian_at, build_basis, site_observables, BoseHubbardHamiltonian, LatticeParams, LatticeState};
use becsim_core::propagation::{evolve, piecewise_exponential_oracle, uniform_grid, ConstantHamiltonian, RevivalFraction};
use becsim_core::resonance::{bessel_j, bessel_zero, energy_bare_coupling};
use becsim_core::states::{coherent_family, fidelity, CoherentKind, StateVector};
use becsim_core::su2::{build_operator, rotation_operator, OperatorKind, OperatorMatrix, Spin};
use becsim_core::twowell::{hamiltonian_at, Modulation, TwoWellHamiltonian, TwoWellParams};
use becsim_core::C64;

/// Frozen after calibration: resonant/detuned ratio of `max_t ΔJz²` for fig2.
pub const FIG2_FACTOR: f64 = 5.0;
/// Frozen after calibration: resonant/detuned ratio of the peak lattice site variance.
pub const MOTT_FACTOR: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub check: fn(&Runs) -> Verdict,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "SU(2) algebra", check: algebra },
        Criterion { id: 2, title: "interaction revivals", check: revivals },
        Criterion { id: 3, title: "lab/transformed frame equivalence", check: frame_equivalence },
        Criterion { id: 4, title: "fig1 effective two-level system", check: fig1_two_level },
        Criterion { id: 5, title: "fig2 resonant fluctuation growth", check: fig2_fluctuations },
        Criterion { id: 6, title: "fig3c dynamical localization", check: fig3_localization },
        Criterion { id: 7, title: "Bessel layer", check: bessel_layer },
        Criterion { id: 8, title: "integrator vs exponential oracle", check: oracle_equivalence },
        Criterion { id: 9, title: "lattice reduction and Mott resonance", check: lattice },
        Criterion { id: 10, title: "preset determinism", check: determinism },
    ]
}

/// First runs of each preset, shared between criteria.
#[derive(Default)]
pub struct Runs {
    cache: Mutex<HashMap<&'static str, RunOutput>>,
}

impl Runs {
    pub fn get(&self, name: &'static str) -> RunOutput {
        if let Some(r) = self.cache.lock().unwrap().get(name) {
            return r.clone();
        }
        let out = run_experiment(&preset(name).unwrap(), Some(name)).unwrap();
        self.cache.lock().unwrap().insert(name, out.clone());
        out
    }
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn max(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn op(spin: Spin, kind: OperatorKind) -> OperatorMatrix {
    build_operator(spin, kind)
}

fn algebra(_: &Runs) -> Verdict {
    let mut worst: f64 = 0.0;
    for spin in [1u32, 2, 16, 15].map(Spin::from_particles) {
        let j = spin.j();
        let [jz, jp, jm, jx, jy] =
            [OperatorKind::Jz, OperatorKind::Jplus, OperatorKind::Jminus, OperatorKind::Jx, OperatorKind::Jy].map(|k| op(spin, k));
        worst = worst
            .max(jz.commutator(&jp).max_abs_diff(&jp))
            .max(jz.commutator(&jm).max_abs_diff(&jm.scale_real(-1.0)))
            .max(jp.commutator(&jm).max_abs_diff(&jz.scale_real(2.0)))
            .max(jx.commutator(&jy).max_abs_diff(&jz.scale(C64::i())));
        let casimir = &(&(&jx * &jx) + &(&jy * &jy)) + &(&jz * &jz);
        worst = worst.max(casimir.max_abs_diff(&OperatorMatrix::identity(spin.dim()).scale_real(j * (j + 1.0))));
        for k in 0..spin.dim() {
            for l in 0..spin.dim() {
                let mu = spin.mu(l);
                let up = if k == l + 1 { ((j - mu) * (j + mu + 1.0)).sqrt() } else { 0.0 };
                let down = if k + 1 == l { ((j + mu) * (j - mu + 1.0)).sqrt() } else { 0.0 };
                worst = worst.max((jp.entry(k, l) - up).norm()).max((jm.entry(k, l) - down).norm());
            }
        }
        // Ĵx ladder operators shift the Ĵx eigenbasis (columns of R(π/2, 0)).
        let v = rotation_operator(spin, FRAC_PI_2, 0.0).unwrap();
        let (xp, xm) = (op(spin, OperatorKind::JxPlus), op(spin, OperatorKind::JxMinus));
        for k in 0..spin.dim() {
            let mu = spin.mu(k);
            let column = |i: usize| v.matrix().column(i).into_owned();
            let up_target = if k + 1 < spin.dim() {
                column(k + 1) * C64::from(((j - mu) * (j + mu + 1.0)).sqrt())
            } else {
                DVector::zeros(spin.dim())
            };
            let down_target = if k > 0 {
                column(k - 1) * C64::from(((j + mu) * (j - mu + 1.0)).sqrt())
            } else {
                DVector::zeros(spin.dim())
            };
            worst = worst.max((xp.apply(&column(k)) - up_target).camax()).max((xm.apply(&column(k)) - down_target).camax());
        }
    }
    Verdict::new(worst < 1e-10, format!("max entrywise error {worst:.2e} (limit 1e-10)"))
}

fn ps(spin: Spin, phi: f64) -> StateVector {
    coherent_family(spin, CoherentKind::Phase { phi }).unwrap()
}

fn evolve_interaction(spin: Spin, kappa: f64, psi: &StateVector, t: f64) -> StateVector {
    let h = ConstantHamiltonian(op(spin, OperatorKind::Jz2).scale_real(kappa));
    evolve(&h, psi, &[0.0, t], 1e-10).unwrap().last().unwrap().clone()
}

fn revivals(_: &Runs) -> Verdict {
    let kappa = 1.0;
    let even = Spin::from_particles(16);
    let mut notes = Vec::new();
    let mut pass = true;

    let full = (0..3)
        .map(|i| {
            let psi = ps(even, 0.7 * i as f64);
            1.0 - fidelity(&evolve_interaction(even, kappa, &psi, RevivalFraction::Full.time(kappa)), &psi).unwrap()
        })
        .fold(0.0, f64::max);
    pass &= full <= 1e-8;
    notes.push(format!("full 1-F {full:.1e}"));

    // Half period: |φ⟩ → e^{-iπJ}|φ+π⟩, phase included.
    let mut half: f64 = 0.0;
    for phi in [0.0, 0.9] {
        let out = evolve_interaction(even, kappa, &ps(even, phi), RevivalFraction::Half.time(kappa));
        let target = ps(even, phi + PI).with_global_phase(-PI * even.j());
        half = half.max((target.inner(&out).unwrap() - C64::from(1.0)).norm());
    }
    pass &= half < 1e-6;
    notes.push(format!("half |<target|psi>-1| {half:.1e}"));

    // Quarter period: (e^{-iπ/4}|φ⟩ + e^{iπ/4}e^{-iπJ}|φ+π⟩)/√2.
    let mut quarter: f64 = 0.0;
    for phi in [0.0, 0.4] {
        let a = ps(even, phi).with_global_phase(-PI / 4.0);
        let b = ps(even, phi + PI).with_global_phase(PI / 4.0 - PI * even.j());
        let cat = StateVector::from_amplitudes(even, (a.amplitudes() + b.amplitudes()) * C64::from(FRAC_1_SQRT_2)).unwrap();
        let out = evolve_interaction(even, kappa, &ps(even, phi), RevivalFraction::Quarter.time(kappa));
        quarter = quarter.max(1.0 - fidelity(&out, &cat).unwrap());
    }
    pass &= quarter <= 1e-10;
    notes.push(format!("quarter 1-F {quarter:.1e}"));

    let odd = Spin::from_particles(15);
    let psi = ps(odd, 0.2);
    let out = evolve_interaction(odd, kappa, &psi, RevivalFraction::Half.time(kappa));
    let phase_err = (psi.inner(&out).unwrap() - C64::from_polar(1.0, -PI / 4.0)).norm();
    pass &= phase_err < 1e-6;
    notes.push(format!("odd N=15 T/2 phase error {phase_err:.1e}"));
    Verdict::new(pass, notes.join(", "))
}

fn max_column_diff(a: &Table, b: &Table, prefix: &str) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, h) in a.header.iter().enumerate().filter(|(_, h)| h.starts_with(prefix)) {
        let j = b.header.iter().position(|g| g == h).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            worst = worst.max((ra[i] - rb[j]).abs());
        }
    }
    worst
}

fn frame_equivalence(runs: &Runs) -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    // fig1: the energy frame is diagonal in the number basis; fig4: the coupling frame in the Ĵx basis.
    for (name, prefix) in [("fig1", "P_mu["), ("fig4", "Px_mu[")] {
        let lab = runs.get(name);
        let mut cfg = preset(name).unwrap();
        cfg.frame = FrameChoice::Transformed;
        let rot = run_experiment(&cfg, None).unwrap();
        let d = max_column_diff(&lab.table, &rot.table, prefix);
        pass &= d < 1e-6;
        details.push(format!("{name} max |dP| {d:.1e}"));
    }
    Verdict::new(pass, details.join(", ") + " (limit 1e-6)")
}

fn fig1_two_level(runs: &Runs) -> Verdict {
    let t = runs.get("fig1").table;
    let times = col(&t, "t");
    let (p0, p1) = (col(&t, "P_mu[-8]"), col(&t, "P_mu[-7]"));
    let (min_pair, at) = p0.iter().zip(&p1).zip(&times).map(|((a, b), t)| (a + b, *t)).fold((f64::INFINITY, 0.0), |m, x| if x.0 < m.0 { x } else { m });
    let worst_leak = max(col(&t, "P_mu[-6]"));
    // First Rabi maximum of P_{-J+1}: half a Rabi period.
    let (t_peak, _) = times.iter().zip(&p1).filter(|(t, _)| **t <= 30.0).fold((0.0, f64::NEG_INFINITY), |m, (t, p)| if *p > m.1 { (*t, *p) } else { m });
    let rabi = PI / t_peak;
    let expected = (energy_bare_coupling(8.0, 0.25, -8.0) * bessel_j(5, 14.0 / 3.0).unwrap()).abs();
    let rel = (rabi - expected).abs() / expected;
    Verdict::new(
        min_pair >= 0.9 && rel <= 0.1,
        format!(
            "min P-8+P-7 {min_pair:.4} at t={at} (need >= 0.9; max P-6 {worst_leak:.4}), Rabi {rabi:.4} vs |Omega J5(14/3)| {expected:.4} (rel {rel:.3}, need <= 0.1)"
        ),
    )
}

fn fig2_fluctuations(runs: &Runs) -> Verdict {
    let a = max(col(&runs.get("fig2a").table, "jz_var"));
    let b = max(col(&runs.get("fig2b").table, "jz_var"));
    Verdict::new(a >= FIG2_FACTOR * b, format!("max jz_var {a:.4} at omega=kappa vs {b:.4} at 6 kappa, ratio {:.1} (need >= {FIG2_FACTOR})", a / b))
}

fn fig3_localization(runs: &Runs) -> Verdict {
    let t = runs.get("fig3c").table;
    let beyond: Vec<Vec<f64>> = (4..=8).map(|mu| col(&t, &format!("P_mu[{mu}]"))).collect();
    let worst = max((0..t.rows.len()).map(|i| beyond.iter().map(|c| c[i]).sum::<f64>()));
    let t_max = max(col(&t, "t"));
    Verdict::new(worst < 0.02 && t_max >= 300.0, format!("max population beyond mu=3 over [0, {t_max}] is {worst:.2e} (limit 0.02)"))
}

/// `J_0` by its power series, independent of the recurrence used in the library.
fn j0_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= -(x * x / 4.0) / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

fn bessel_layer(_: &Runs) -> Verdict {
    let j7 = bessel_j(7, 24.93493).unwrap().abs();
    let (mut a, mut b) = (2.0, 3.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if j0_series(a).signum() == j0_series(m).signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let oracle_zero = 0.5 * (a + b);
    let zero = bessel_zero(0, 1).unwrap();
    let zero_err = (zero - 2.404825557695773).abs().max((zero - oracle_zero).abs());
    let mut recurrence: f64 = 0.0;
    let mut normalization: f64 = 0.0;
    for x in [0.1, 1.0, 4.6667, 14.0, 24.93493, 60.0, 120.0] {
        let j: Vec<f64> = (0..=60).map(|n| bessel_j(n, x).unwrap()).collect();
        for n in 1..60 {
            recurrence = recurrence.max((j[n - 1] + j[n + 1] - 2.0 * n as f64 / x * j[n]).abs());
        }
        // Orders up to 200 carry all the weight for x well below 200.
        let big: Vec<f64> = (0..=200).step_by(2).map(|n| bessel_j(n, x).unwrap()).collect();
        normalization = normalization.max((big[0] + 2.0 * big[1..].iter().sum::<f64>() - 1.0).abs());
    }
    Verdict::new(
        j7 < 2e-6 && zero_err < 1e-9 && recurrence < 1e-9 && normalization < 1e-9,
        format!("|J7(24.93493)| {j7:.1e}, zero(0,1) error {zero_err:.1e}, recurrence {recurrence:.1e}, normalization {normalization:.1e}"),
    )
}

fn random_params(rng: &mut ChaCha8Rng) -> TwoWellParams {
    let n = rng.gen_range(1..=16);
    let mut r = || rng.gen_range(0.0f64..20.0);
    let (eps0, eps1, d0, d1, omega) = (r(), r(), r(), r(), r().max(0.5));
    match n % 3 {
        0 => TwoWellParams::unmodulated(n, 1.0, eps0, d0),
        1 => TwoWellParams::energy_modulated(n, 1.0, d0, eps0, eps1, omega),
        _ => TwoWellParams::coupling_modulated(n, 1.0, d0.max(d1), d0.min(d1), omega),
    }
}

fn oracle_equivalence(_: &Runs) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut kinds = [0usize; 3];
    for _ in 0..20 {
        let p = random_params(&mut rng);
        kinds[match p.modulation {
            Modulation::None => 0,
            Modulation::EnergyDifference => 1,
            Modulation::Coupling => 2,
        }] += 1;
        let spin = p.spin();
        let v = DVector::from_fn(spin.dim(), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = v.norm();
        let psi = StateVector::from_amplitudes(spin, v / C64::from(n)).unwrap();
        let h = TwoWellHamiltonian::new(p).unwrap();
        let t_end = 1.0;
        let oracle = piecewise_exponential_oracle(&h, &psi, t_end, 2e-4).unwrap();
        let rk = evolve(&h, &psi, &[0.0, t_end], 1e-10).unwrap();
        worst = worst.max(1.0 - fidelity(rk.last().unwrap(), &oracle).unwrap());
    }
    Verdict::new(
        worst <= 1e-6,
        format!("20 draws (static/energy/coupling {kinds:?}), worst 1-F {worst:.1e} (limit 1e-6)"),
    )
}

fn max_total_variance(p: LatticeParams) -> f64 {
    let basis = build_basis(p.sites, p.particles).unwrap();
    let h = BoseHubbardHamiltonian::new(p, &basis).unwrap();
    let traj = evolve(&h, &LatticeState::mott(&basis).unwrap(), &uniform_grid(100.0, 0.1), 1e-10).unwrap();
    max(traj.states.iter().map(|s| site_observables(s, &basis).variance.iter().sum::<f64>()))
}

fn lattice(_: &Runs) -> Verdict {
    let mut spectral: f64 = 0.0;
    for n in [2u32, 7, 16] {
        let p = LatticeParams { sites: 2, particles: n, kappa: 1.0, delta: 0.25, eps0: 0.4, eps1: 14.0, omega: 3.0 };
        let basis = build_basis(2, n).unwrap();
        let tw = p.two_well_image().unwrap();
        for t in [0.0, 0.37, 5.0, 42.1] {
            let lattice = OperatorMatrix::hermitian(bh_hamiltonian_at(&p, &basis, t).unwrap().to_dense()).unwrap();
            let (a, _) = lattice.eigh().unwrap();
            let (b, _) = hamiltonian_at(&tw, t).unwrap().eigh().unwrap();
            let offset = p.two_well_offset(t);
            spectral = a.iter().zip(&b).map(|(x, y)| (x - y - offset).abs()).fold(spectral, f64::max);
        }
    }
    let driven = |omega: f64| LatticeParams { sites: 3, particles: 3, kappa: 1.0, delta: 0.25, eps0: 0.0, eps1: 1.8 * omega, omega };
    let resonant = max_total_variance(driven(1.0));
    let detuned = max_total_variance(driven(6.0));
    Verdict::new(
        spectral < 1e-9 && resonant >= MOTT_FACTOR * detuned,
        format!(
            "L=2 spectral error {spectral:.1e} (limit 1e-9); peak site variance {resonant:.4} at omega=kappa vs {detuned:.4} at 6 kappa, ratio {:.1} (need >= {MOTT_FACTOR})",
            resonant / detuned
        ),
    )
}

fn determinism(runs: &Runs) -> Verdict {
    let mut differing = Vec::new();
    for name in PRESETS {
        let first = runs.get(name);
        let second = run_experiment(&preset(name).unwrap(), Some(name)).unwrap();
        let same = first.csv() == second.csv() && first.meta == second.meta && first.extra == second.extra;
        if !same {
            differing.push(name);
        }
    }
    Verdict::new(differing.is_empty(), format!("{} presets run twice, differing: {differing:?}", PRESETS.len()))
}
