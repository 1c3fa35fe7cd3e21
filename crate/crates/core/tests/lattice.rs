use becsim_core::lattice::{
    bh_frame_diagonal, bh_hamiltonian_at, bh_transformed, build_basis, build_basis_with_cap, number_operator,
    site_observables, BoseHubbardHamiltonian, BoseHubbardTransformed, LatticeBasis, LatticeParams, LatticeState,
    SparseOperator,
};
use becsim_core::observables::measure_number_basis;
use becsim_core::propagation::{evolve, uniform_grid};
use becsim_core::resonance::lattice_resonance;
use becsim_core::states::number_state;
use becsim_core::su2::OperatorMatrix;
use becsim_core::twowell::{hamiltonian_at, TwoWellHamiltonian};
use becsim_core::{Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn driven(sites: usize, particles: u32, omega: f64) -> LatticeParams {
    LatticeParams { sites, particles, kappa: 1.0, delta: 0.25, eps0: 0.0, eps1: 1.8 * omega, omega }
}

fn max_total_variance(p: LatticeParams, basis: &LatticeBasis, t_max: f64) -> f64 {
    let h = BoseHubbardHamiltonian::new(p, basis).unwrap();
    let traj = evolve(&h, &LatticeState::mott(basis).unwrap(), &uniform_grid(t_max, 0.1), 1e-10).unwrap();
    traj.states.iter().map(|s| site_observables(s, basis).variance.iter().sum::<f64>()).fold(0.0, f64::max)
}

#[test]
fn basis_enumeration() {
    assert_eq!(build_basis(3, 2).unwrap().len(), 6);
    assert_eq!(build_basis(2, 16).unwrap().len(), 17);
    for (l, n) in [(2, 5), (3, 3), (4, 4), (5, 2)] {
        let b = build_basis(l, n).unwrap();
        for (i, occ) in b.iter().enumerate() {
            assert_eq!(occ.iter().sum::<u32>(), n);
            assert_eq!(b.index_of(occ), Some(i));
        }
        let all: Vec<_> = b.iter().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
    assert_eq!(build_basis(3, 3).unwrap().index_of(&[3, 0, 1]), None);
    assert!(matches!(build_basis_with_cap(3, 3, 9), Err(Error::CapExceeded { dim: 10, cap: 9 })));
}

#[test]
fn hamiltonian_structure() {
    let p = driven(3, 3, 1.0);
    let basis = build_basis(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let h = bh_hamiltonian_at(&p, &basis, rng.gen_range(0.0..50.0)).unwrap();
        assert!(h.hermiticity_defect() < 1e-12);
        let comm = h.commutator(&number_operator(&basis));
        assert!(comm.triplets().all(|(_, _, v)| v.norm() < 1e-12));
    }
    let h = bh_hamiltonian_at(&p, &basis, 0.0).unwrap();
    // a†_1 a_0 |1,1,1⟩ = √(1·2) |0,2,1⟩
    let from = basis.index_of(&[1, 1, 1]).unwrap();
    let to = basis.index_of(&[0, 2, 1]).unwrap();
    assert!((h.get(to, from) - C64::from(-0.125 * 2f64.sqrt())).norm() < 1e-15);
    assert!(BoseHubbardHamiltonian::new(driven(4, 3, 1.0), &basis).is_err());
}

#[test]
fn two_sites_reproduce_the_double_well() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in [3u32, 8, 16] {
        let p = LatticeParams { sites: 2, particles: n, kappa: 0.9, delta: 0.4, eps0: 0.3, eps1: 2.0, omega: 1.7 };
        let basis = build_basis(2, n).unwrap();
        let tw = p.two_well_image().unwrap();
        for _ in 0..5 {
            let t = rng.gen_range(0.0..20.0);
            let lattice = OperatorMatrix::hermitian(bh_hamiltonian_at(&p, &basis, t).unwrap().to_dense()).unwrap();
            let shifted = (&hamiltonian_at(&tw, t).unwrap()
                + &OperatorMatrix::identity(basis.len()).scale_real(p.two_well_offset(t)));
            let (a, _) = lattice.eigh().unwrap();
            let (b, _) = shifted.clone().checked_hermitian().unwrap().eigh().unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9), "N={n} t={t}");
            // Entrywise under the index map k ↔ (k, N-k).
            for k in 0..=n as usize {
                for l in 0..=n as usize {
                    let i = basis.index_of(&[k as u32, n - k as u32]).unwrap();
                    let j = basis.index_of(&[l as u32, n - l as u32]).unwrap();
                    assert!((lattice.entry(i, j) - shifted.entry(k, l)).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn two_sites_track_the_double_well_dynamics() {
    let n = 8u32;
    let p = LatticeParams { sites: 2, particles: n, kappa: 1.0, delta: 0.5, eps0: 0.2, eps1: 3.0, omega: 2.0 };
    let basis = build_basis(2, n).unwrap();
    let tw = p.two_well_image().unwrap();
    let grid = uniform_grid(30.0, 0.5);
    // All atoms on site 1 = all atoms in well 2 = |-J⟩.
    let lat = evolve(&BoseHubbardHamiltonian::new(p, &basis).unwrap(), &LatticeState::fock(&basis, &[0, n]).unwrap(), &grid, 1e-12)
        .unwrap();
    let two = evolve(&TwoWellHamiltonian::new(tw).unwrap(), &number_state(tw.spin(), -4.0).unwrap(), &grid, 1e-12).unwrap();
    for (a, b) in lat.states.iter().zip(&two.states) {
        let obs = site_observables(a, &basis);
        let jz = (obs.mean[0] - obs.mean[1]) / 2.0;
        assert!((jz - measure_number_basis(b).jz_mean).abs() < 1e-8);
    }
}

#[test]
fn transformed_hamiltonian_is_the_interaction_picture() {
    let basis = build_basis(3, 3).unwrap();
    let p = LatticeParams { sites: 3, particles: 3, kappa: 0.8, delta: 0.3, eps0: 0.4, eps1: 2.2, omega: 1.3 };
    let exact = BoseHubbardTransformed::exact(p, &basis).unwrap();
    let mut hop_only = p;
    hop_only.kappa = 0.0;
    hop_only.eps0 = 0.0;
    hop_only.eps1 = 0.0;
    let hops = bh_hamiltonian_at(&hop_only, &basis, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let t = rng.gen_range(0.0..20.0);
        // The diagonal of H cancels against -iT†Ṫ, leaving T† H_hop T.
        let d = bh_frame_diagonal(&p, &basis, t);
        let oracle = SparseOperator::from_triplets(
            basis.len(),
            hops.triplets().map(|(r, c, v)| (r, c, d[r].conj() * v * d[c])).collect(),
        );
        let h = exact.sparse_at(t);
        assert!(h.max_abs_diff(&oracle) < 1e-12);
        assert!(h.hermiticity_defect() < 1e-12);
        let trunc = bh_transformed(&p, &basis, t, 30).unwrap();
        assert!(trunc.max_abs_diff(&oracle) < 1e-10);
    }
}

#[test]
fn static_tilt_phases() {
    let basis = build_basis(3, 2).unwrap();
    let p = LatticeParams { sites: 3, particles: 2, kappa: 0.7, delta: 0.5, eps0: 0.3, eps1: 0.0, omega: 0.0 };
    let t = 2.3;
    let h = bh_transformed(&p, &basis, t, 0).unwrap();
    for (from, to, pq) in [([2, 0, 0], [1, 1, 0], (2u32, 0u32)), ([0, 1, 1], [0, 0, 2], (1, 1))] {
        let (i, j) = (basis.index_of(&from).unwrap(), basis.index_of(&to).unwrap());
        let amp = (pq.0 as f64 * (pq.1 as f64 + 1.0)).sqrt();
        let phase = t * (p.eps0 + p.kappa * (pq.1 as f64 - pq.0 as f64 + 1.0));
        let expected = C64::from_polar(-0.5 * p.delta * amp, phase);
        assert!((h.get(j, i) - expected).norm() < 1e-14);
    }
}

#[test]
fn truncation_is_flagged() {
    let basis = build_basis(3, 3).unwrap();
    assert!(matches!(bh_transformed(&driven(3, 3, 1.0), &basis, 0.0, 1), Err(Error::Truncation { .. })));
    assert!(BoseHubbardTransformed::with_default_cutoff(driven(3, 3, 1.0), &basis).is_ok());
}

#[test]
fn frames_agree_on_site_populations() {
    let basis = build_basis(3, 3).unwrap();
    let p = driven(3, 3, 1.0);
    let grid = uniform_grid(30.0, 0.5);
    let psi = LatticeState::mott(&basis).unwrap();
    let lab = evolve(&BoseHubbardHamiltonian::new(p, &basis).unwrap(), &psi, &grid, 1e-10).unwrap();
    let rot = evolve(&BoseHubbardTransformed::exact(p, &basis).unwrap(), &psi, &grid, 1e-10).unwrap();
    for (a, b) in lab.states.iter().zip(&rot.states) {
        let pa: Vec<f64> = a.amplitudes().iter().map(|c| c.norm_sqr()).collect();
        let pb: Vec<f64> = b.amplitudes().iter().map(|c| c.norm_sqr()).collect();
        assert!(pa.iter().zip(&pb).all(|(x, y)| (x - y).abs() < 1e-6));
        let (ma, mb) = (site_observables(a, &basis).mean, site_observables(b, &basis).mean);
        assert!(ma.iter().zip(&mb).all(|(x, y)| (x - y).abs() < 1e-6));
    }
}

#[test]
fn site_observable_examples() {
    let basis = build_basis(3, 3).unwrap();
    let obs = site_observables(&LatticeState::mott(&basis).unwrap(), &basis);
    assert_eq!(obs.variance, vec![0.0; 3]);
    assert_eq!(obs.mean.iter().sum::<f64>(), 3.0);

    let basis = build_basis(2, 2).unwrap();
    let amp = C64::from(1.0 / 3f64.sqrt());
    let uniform = LatticeState::from_amplitudes(&basis, vec![amp; 3]).unwrap();
    let obs = site_observables(&uniform, &basis);
    assert!((obs.mean[0] - 1.0).abs() < 1e-15);
    // n_0 ∈ {0, 1, 2} uniformly: variance 2/3.
    assert!((obs.variance[0] - 2.0 / 3.0).abs() < 1e-15);
    assert!(LatticeState::from_amplitudes(&basis, vec![amp; 2]).is_err());
}

#[test]
fn mott_resonance_enhances_fluctuations() {
    assert_eq!(lattice_resonance(1, 1, 0.0, 1.0, 1.0, 4)[0], (-1, 0.0));
    let basis = build_basis(3, 3).unwrap();
    let resonant = max_total_variance(driven(3, 3, 1.0), &basis, 100.0);
    let detuned = max_total_variance(driven(3, 3, 6.0), &basis, 100.0);
    assert!(resonant > 3.0 * detuned, "resonant {resonant}, detuned {detuned}");
}
