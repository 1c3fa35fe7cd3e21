//! Bose–Hubbard chain with a time-dependent tilt:
//!
//! `H = -(δ/2) Σ_l (a†_{l+1}a_l + h.c.) + (κ/2) Σ_l n_l(n_l-1) + ε(t) Σ_l l·n_l`
//!
//! on `L` sites with open boundaries, sites indexed `l = 0..L` from the left
//! edge, and `ε(t) = ε0 + ε1 cos ωt`.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::propagation::{Hamiltonian, QuantumState};
use crate::resonance::bessel::{bessel_j_symmetric, bessel_weight_mass};
use crate::su2::OperatorMatrix;
use crate::twowell::{default_n_max, TwoWellParams};
use crate::C64;

/// Default cap on the Fock-space dimension.
pub const DEFAULT_DIM_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub sites: usize,
    pub particles: u32,
    pub kappa: f64,
    pub delta: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub omega: f64,
}

impl LatticeParams {
    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Domain(format!("need at least two sites, got {}", self.sites)));
        }
        if self.particles == 0 {
            return Err(Error::Domain("need at least one particle".into()));
        }
        if [self.kappa, self.delta, self.eps0, self.eps1, self.omega].iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if self.eps1 != 0.0 && !(self.omega > 0.0) {
            return Err(Error::Domain(format!("modulated tilt needs ω > 0, got {}", self.omega)));
        }
        Ok(())
    }

    pub fn epsilon(&self, t: f64) -> f64 {
        if self.eps1 == 0.0 {
            self.eps0
        } else {
            self.eps0 + self.eps1 * (self.omega * t).cos()
        }
    }

    /// `θ(t) = ∫₀ᵗ ε`.
    pub fn theta(&self, t: f64) -> f64 {
        if self.eps1 == 0.0 {
            self.eps0 * t
        } else {
            self.eps0 * t + self.eps1 * (self.omega * t).sin() / self.omega
        }
    }

    /// `ε1/ω`, zero for a static tilt.
    pub fn bessel_argument(&self) -> f64 {
        if self.eps1 == 0.0 {
            0.0
        } else {
            self.eps1 / self.omega
        }
    }

    /// The equivalent two-well model for `L = 2`.
    ///
    /// Site 0 plays well 1 and site 1 plays well 2, so `Ĵz = (n_0 - n_1)/2` and
    /// `ε(t)·n_1 = ε(t)(N/2 - Ĵz)`: the two-well asymmetry is `-ε(t)`. The two
    /// Hamiltonians then differ by the c-number [`Self::two_well_offset`].
    /// Two-well basis index `k` (atoms in well 1) is the Fock state `(k, N-k)`.
    pub fn two_well_image(&self) -> Result<TwoWellParams> {
        self.validate()?;
        if self.sites != 2 {
            return Err(Error::Domain("two-well image needs exactly two sites".into()));
        }
        let p = if self.eps1 == 0.0 {
            TwoWellParams::unmodulated(self.particles, self.kappa, -self.eps0, self.delta)
        } else {
            TwoWellParams::energy_modulated(self.particles, self.kappa, self.delta, -self.eps0, -self.eps1, self.omega)
        };
        p.validate()?;
        Ok(p)
    }

    /// `H_BH(t) - H_N(t) = ε(t)N/2 + (κ/4)(N² - 2N)` for `L = 2`.
    pub fn two_well_offset(&self, t: f64) -> f64 {
        let n = self.particles as f64;
        self.epsilon(t) * n / 2.0 + self.kappa / 4.0 * (n * n - 2.0 * n)
    }
}

/// Fock states of `N` bosons on `L` sites in lexicographic order.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    sites: usize,
    particles: u32,
    states: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

/// `C(N+L-1, L-1)`, saturating.
pub fn basis_dimension(sites: usize, particles: u32) -> u128 {
    let n = particles as u128;
    let k = (sites as u128).saturating_sub(1);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = match c.checked_mul(n + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c
}

pub fn build_basis(sites: usize, particles: u32) -> Result<LatticeBasis> {
    build_basis_with_cap(sites, particles, DEFAULT_DIM_CAP)
}

pub fn build_basis_with_cap(sites: usize, particles: u32, cap: usize) -> Result<LatticeBasis> {
    if sites == 0 {
        return Err(Error::Domain("a lattice needs at least one site".into()));
    }
    let dim = basis_dimension(sites, particles);
    if dim > cap as u128 {
        return Err(Error::CapExceeded { dim, cap });
    }
    let mut states = Vec::with_capacity(dim as usize);
    let mut current = vec![0u32; sites];
    enumerate(&mut current, 0, particles, &mut states);
    let lookup = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(LatticeBasis { sites, particles, states, lookup })
}

fn enumerate(current: &mut Vec<u32>, site: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if site + 1 == current.len() {
        current[site] = remaining;
        out.push(current.clone());
        return;
    }
    for n in 0..=remaining {
        current[site] = n;
        enumerate(current, site + 1, remaining - n, out);
    }
}

impl LatticeBasis {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn occupations(&self, index: usize) -> &[u32] {
        &self.states[index]
    }

    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        self.lookup.get(occupations).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.states.iter().map(|s| s.as_slice())
    }
}

/// Compressed-row sparse complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseOperator { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(i) => self.vals[range.start + i],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |i| (r, self.cols[i], self.vals[i])))
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for i in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[i] * x[self.cols[i]];
            }
            *out = acc;
        }
    }

    pub fn adjoint(&self) -> SparseOperator {
        SparseOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect())
    }

    /// `max |A - B|` over the union of stored entries.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        let neg: Vec<_> = other.triplets().map(|(r, c, v)| (r, c, -v)).collect();
        let diff = SparseOperator::from_triplets(self.dim, self.triplets().chain(neg).collect());
        diff.vals.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn mul(&self, other: &SparseOperator) -> SparseOperator {
        let mut trip = Vec::new();
        for (r, k, a) in self.triplets() {
            for i in other.row_ptr[k]..other.row_ptr[k + 1] {
                trip.push((r, other.cols[i], a * other.vals[i]));
            }
        }
        SparseOperator::from_triplets(self.dim, trip)
    }

    pub fn commutator(&self, other: &SparseOperator) -> SparseOperator {
        let ab = self.mul(other);
        let ba: Vec<_> = other.mul(self).triplets().map(|(r, c, v)| (r, c, -v)).collect();
        SparseOperator::from_triplets(self.dim, ab.triplets().chain(ba).collect())
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }
}

/// Total number operator `Σ_l n_l` (which is `N·I` on a fixed-N basis).
pub fn number_operator(basis: &LatticeBasis) -> SparseOperator {
    SparseOperator::from_triplets(
        basis.len(),
        basis.iter().enumerate().map(|(i, occ)| (i, i, C64::from(occ.iter().sum::<u32>() as f64))).collect(),
    )
}

/// One forward hop `a†_{l+1}a_l` from basis state `from` (with `N_l = p`, `N_{l+1} = q`) to `to`.
#[derive(Debug, Clone, Copy)]
struct Hop {
    from: usize,
    to: usize,
    /// `√(p(q+1))`.
    amplitude: f64,
    /// `q - p + 1`.
    interaction_shift: f64,
}

fn hops(basis: &LatticeBasis) -> Vec<Hop> {
    let mut out = Vec::new();
    let mut scratch = vec![0u32; basis.sites()];
    for (i, occ) in basis.iter().enumerate() {
        for l in 0..basis.sites() - 1 {
            let (p, q) = (occ[l], occ[l + 1]);
            if p == 0 {
                continue;
            }
            scratch.copy_from_slice(occ);
            scratch[l] -= 1;
            scratch[l + 1] += 1;
            let to = basis.index_of(&scratch).expect("hop stays in the fixed-N basis");
            out.push(Hop {
                from: i,
                to,
                amplitude: (p as f64 * (q as f64 + 1.0)).sqrt(),
                interaction_shift: q as f64 - p as f64 + 1.0,
            });
        }
    }
    out
}

/// Lab-frame evaluator for the tilted Bose–Hubbard chain.
#[derive(Debug, Clone)]
pub struct BoseHubbardHamiltonian {
    params: LatticeParams,
    hops: Vec<Hop>,
    /// `(κ/2) Σ n_l(n_l-1)` per basis state.
    interaction: Vec<f64>,
    /// `Σ l·n_l` per basis state.
    tilt: Vec<f64>,
}

impl BoseHubbardHamiltonian {
    pub fn new(params: LatticeParams, basis: &LatticeBasis) -> Result<Self> {
        params.validate()?;
        check_basis(&params, basis)?;
        let interaction = basis
            .iter()
            .map(|occ| 0.5 * params.kappa * occ.iter().map(|&n| n as f64 * (n as f64 - 1.0)).sum::<f64>())
            .collect();
        let tilt = basis.iter().map(|occ| occ.iter().enumerate().map(|(l, &n)| (l as u32 * n) as f64).sum()).collect();
        Ok(BoseHubbardHamiltonian { params, hops: hops(basis), interaction, tilt })
    }

    pub fn sparse_at(&self, t: f64) -> SparseOperator {
        let eps = self.params.epsilon(t);
        let c = -0.5 * self.params.delta;
        let mut trip: Vec<(usize, usize, C64)> = self
            .interaction
            .iter()
            .zip(&self.tilt)
            .enumerate()
            .map(|(i, (u, l))| (i, i, C64::from(u + eps * l)))
            .collect();
        for h in self.hops.iter().filter(|_| c != 0.0) {
            trip.push((h.to, h.from, C64::from(c * h.amplitude)));
            trip.push((h.from, h.to, C64::from(c * h.amplitude)));
        }
        SparseOperator::from_triplets(self.interaction.len(), trip)
    }
}

fn check_basis(params: &LatticeParams, basis: &LatticeBasis) -> Result<()> {
    if basis.sites() != params.sites || basis.particles() != params.particles {
        return Err(Error::Domain(format!(
            "basis is for L={}, N={} but parameters say L={}, N={}",
            basis.sites(),
            basis.particles(),
            params.sites,
            params.particles
        )));
    }
    Ok(())
}

impl Hamiltonian for BoseHubbardHamiltonian {
    fn dim(&self) -> usize {
        self.interaction.len()
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let eps = self.params.epsilon(t);
        for (i, o) in out.iter_mut().enumerate() {
            *o = psi[i] * (self.interaction[i] + eps * self.tilt[i]);
        }
        let c = -0.5 * self.params.delta;
        for h in &self.hops {
            let a = c * h.amplitude;
            out[h.to] += psi[h.from] * a;
            out[h.from] += psi[h.to] * a;
        }
    }

    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix> {
        OperatorMatrix::hermitian(self.sparse_at(t).to_dense())
    }

    fn describe(&self) -> String {
        format!("{:?}", self.params)
    }
}

/// Sparse lab-frame Hamiltonian at time `t`.
pub fn bh_hamiltonian_at(p: &LatticeParams, basis: &LatticeBasis, t: f64) -> Result<SparseOperator> {
    Ok(BoseHubbardHamiltonian::new(*p, basis)?.sparse_at(t))
}

/// Carrier phase of the transformed lattice Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
enum LatticePhases {
    Exact,
    Sideband { n_max: u32, weights: Vec<f64> },
}

/// Interaction-picture lattice Hamiltonian with the tilt and on-site
/// interaction removed. Hop `(p, q) → (p-1, q+1)` carries
/// `-(δ/2)√(p(q+1)) Σₙ Jₙ(ε1/ω) e^{i(nω + ε0 + κ(q-p+1))t}`.
#[derive(Debug, Clone)]
pub struct BoseHubbardTransformed {
    params: LatticeParams,
    hops: Vec<Hop>,
    dim: usize,
    phases: LatticePhases,
}

impl BoseHubbardTransformed {
    pub fn exact(params: LatticeParams, basis: &LatticeBasis) -> Result<Self> {
        params.validate()?;
        check_basis(&params, basis)?;
        Ok(BoseHubbardTransformed { params, hops: hops(basis), dim: basis.len(), phases: LatticePhases::Exact })
    }

    /// Fails with [`Error::Truncation`] when `Σ_{|n|≤n_max} Jₙ² < 0.999`.
    pub fn truncated(params: LatticeParams, basis: &LatticeBasis, n_max: u32) -> Result<Self> {
        let mut h = BoseHubbardTransformed::exact(params, basis)?;
        let arg = params.bessel_argument();
        let mass = bessel_weight_mass(n_max, arg);
        if mass < 0.999 {
            return Err(Error::Truncation { n_max, argument: arg, mass });
        }
        h.phases = LatticePhases::Sideband { n_max, weights: bessel_j_symmetric(n_max, arg) };
        Ok(h)
    }

    pub fn with_default_cutoff(params: LatticeParams, basis: &LatticeBasis) -> Result<Self> {
        BoseHubbardTransformed::truncated(params, basis, default_n_max(params.bessel_argument()))
    }

    fn carrier(&self, t: f64) -> C64 {
        let p = &self.params;
        match &self.phases {
            LatticePhases::Exact => C64::from_polar(1.0, p.bessel_argument() * (p.omega * t).sin()),
            LatticePhases::Sideband { n_max, weights } => {
                let base = C64::from_polar(1.0, p.omega * t);
                let mut z = C64::from_polar(1.0, -p.omega * t * *n_max as f64);
                let mut acc = C64::new(0.0, 0.0);
                for w in weights {
                    acc += z * *w;
                    z *= base;
                }
                acc
            }
        }
    }

    fn hop_values(&self, t: f64) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let p = self.params;
        let prefactor = self.carrier(t) * (-0.5 * p.delta);
        self.hops.iter().map(move |h| {
            let phase = C64::from_polar(1.0, t * (p.eps0 + p.kappa * h.interaction_shift));
            (h.to, h.from, prefactor * phase * h.amplitude)
        })
    }

    pub fn sparse_at(&self, t: f64) -> SparseOperator {
        let mut trip = Vec::with_capacity(2 * self.hops.len());
        for (to, from, v) in self.hop_values(t) {
            trip.push((to, from, v));
            trip.push((from, to, v.conj()));
        }
        SparseOperator::from_triplets(self.dim, trip)
    }
}

impl Hamiltonian for BoseHubbardTransformed {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (to, from, v) in self.hop_values(t) {
            out[to] += v * psi[from];
            out[from] += v.conj() * psi[to];
        }
    }

    fn matrix_at(&self, t: f64) -> Result<OperatorMatrix> {
        OperatorMatrix::hermitian(self.sparse_at(t).to_dense())
    }

    fn describe(&self) -> String {
        format!("transformed {:?}", self.params)
    }
}

/// Truncated transformed Hamiltonian at time `t`.
pub fn bh_transformed(p: &LatticeParams, basis: &LatticeBasis, t: f64, n_max: u32) -> Result<SparseOperator> {
    Ok(BoseHubbardTransformed::truncated(*p, basis, n_max)?.sparse_at(t))
}

/// Diagonal of the frame operator `T_BH(t) = exp(-iθ(t)Σ l·n_l - (iκt/2)Σ n_l(n_l-1))`.
pub fn bh_frame_diagonal(p: &LatticeParams, basis: &LatticeBasis, t: f64) -> Vec<C64> {
    let theta = p.theta(t);
    basis
        .iter()
        .map(|occ| {
            let tilt: f64 = occ.iter().enumerate().map(|(l, &n)| (l as u32 * n) as f64).sum();
            let int: f64 = occ.iter().map(|&n| n as f64 * (n as f64 - 1.0)).sum();
            C64::from_polar(1.0, -theta * tilt - 0.5 * p.kappa * t * int)
        })
        .collect()
}

/// Amplitudes over a [`LatticeBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    amplitudes: Vec<C64>,
}

impl LatticeState {
    pub fn from_amplitudes(basis: &LatticeBasis, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::Domain(format!("{} amplitudes for basis of size {}", amplitudes.len(), basis.len())));
        }
        Ok(LatticeState { amplitudes })
    }

    /// Single Fock state.
    pub fn fock(basis: &LatticeBasis, occupations: &[u32]) -> Result<Self> {
        let i = basis
            .index_of(occupations)
            .ok_or_else(|| Error::Domain(format!("{occupations:?} is not in the basis")))?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.len()];
        amplitudes[i] = C64::from(1.0);
        Ok(LatticeState { amplitudes })
    }

    /// Uniform filling `N/L` per site; `N` must be a multiple of `L`.
    pub fn mott(basis: &LatticeBasis) -> Result<Self> {
        let l = basis.sites() as u32;
        if basis.particles() % l != 0 {
            return Err(Error::Domain(format!("{} particles cannot fill {l} sites uniformly", basis.particles())));
        }
        LatticeState::fock(basis, &vec![basis.particles() / l; basis.sites()])
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl QuantumState for LatticeState {
    fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self {
        LatticeState { amplitudes }
    }
}

/// Per-site occupation mean `⟨n_l⟩` and variance `⟨n_l²⟩ - ⟨n_l⟩²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteObservables {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

pub fn site_observables(psi: &LatticeState, basis: &LatticeBasis) -> SiteObservables {
    let mut mean = vec![0.0; basis.sites()];
    let mut second = vec![0.0; basis.sites()];
    for (c, occ) in psi.amplitudes.iter().zip(basis.iter()) {
        let w = c.norm_sqr();
        for (l, &n) in occ.iter().enumerate() {
            mean[l] += w * n as f64;
            second[l] += w * (n as f64) * (n as f64);
        }
    }
    let variance = mean.iter().zip(&second).map(|(m, s)| s - m * m).collect();
    SiteObservables { mean, variance }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(sites: usize, particles: u32) -> LatticeParams {
        LatticeParams { sites, particles, kappa: 1.0, delta: 0.3, eps0: 0.2, eps1: 1.5, omega: 2.0 }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(build_basis(3, 2).unwrap().len(), 6);
        assert_eq!(build_basis(2, 16).unwrap().len(), 17);
        assert_eq!(basis_dimension(10, 10), 92378);
        assert!(matches!(build_basis(12, 12), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn basis_is_lexicographic() {
        let b = build_basis(3, 3).unwrap();
        let v: Vec<&[u32]> = b.iter().collect();
        for w in v.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(b.occupations(0), &[0, 0, 3]);
    }

    #[test]
    fn static_diagonal_without_hopping() {
        let mut p = params(3, 3);
        p.delta = 0.0;
        let b = build_basis(3, 3).unwrap();
        let h = bh_hamiltonian_at(&p, &b, 0.4).unwrap();
        for (i, occ) in b.iter().enumerate() {
            let u: f64 = occ.iter().map(|&n| 0.5 * (n * n.saturating_sub(1)) as f64).sum();
            let l: f64 = occ.iter().enumerate().map(|(l, &n)| (l as u32 * n) as f64).sum();
            assert!((h.get(i, i) - C64::from(u + p.epsilon(0.4) * l)).norm() < 1e-14);
        }
        assert_eq!(h.nnz(), b.len());
    }

    #[test]
    fn hop_matrix_element() {
        let p = params(3, 3);
        let b = build_basis(3, 3).unwrap();
        let h = bh_hamiltonian_at(&p, &b, 0.0).unwrap();
        let from = b.index_of(&[2, 1, 0]).unwrap();
        let to = b.index_of(&[1, 2, 0]).unwrap();
        // a†_1 a_0 on (2,1,0): √(N_1+1)·√N_0 = √(2·2)
        assert!((h.get(to, from) - C64::from(-0.5 * 0.3 * 2.0)).norm() < 1e-14);
    }

    #[test]
    fn sparse_helpers() {
        let a = SparseOperator::from_triplets(2, vec![(0, 1, C64::new(1.0, 2.0)), (0, 1, C64::new(1.0, 0.0))]);
        assert_eq!(a.get(0, 1), C64::new(2.0, 2.0));
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.adjoint().get(1, 0), C64::new(2.0, -2.0));
        assert!((a.hermiticity_defect() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mott_needs_commensurate_filling() {
        let b = build_basis(3, 4).unwrap();
        assert!(LatticeState::mott(&b).is_err());
        let b = build_basis(3, 3).unwrap();
        let m = LatticeState::mott(&b).unwrap();
        let obs = site_observables(&m, &b);
        assert_eq!(obs.mean, vec![1.0; 3]);
        assert_eq!(obs.variance, vec![0.0; 3]);
    }

    #[test]
    fn two_well_image_flips_tilt() {
        let p = params(2, 4);
        let tw = p.two_well_image().unwrap();
        assert_eq!(tw.eps0, -0.2);
        assert_eq!(tw.eps1, -1.5);
        assert!(params(3, 3).two_well_image().is_err());
    }
}
