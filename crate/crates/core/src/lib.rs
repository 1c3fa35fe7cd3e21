//! Many-body dynamics of a Bose–Einstein condensate in a driven double well,
//! plus a tilted Bose–Hubbard chain.
//!
//! The two-well model lives in the `N+1`-dimensional symmetric subspace of
//! `N` bosons, represented as spin `J = N/2`.

pub mod error;
pub mod lattice;
pub mod observables;
pub mod propagation;
pub mod resonance;
pub mod states;
pub mod su2;
pub mod twowell;

pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};
pub use propagation::{evolve, Hamiltonian, QuantumState, Trajectory};
pub use states::StateVector;
pub use su2::{OperatorMatrix, Spin};
pub use twowell::{Modulation, TwoWellParams};
