//! SU(2) operator algebra in the Schwinger representation of two bosonic modes.
//!
//! For `N` particles the state space is spanned by the number states `|μ⟩`,
//! `μ = -J..=J` with `J = N/2`. Basis index `k` holds `μ = k - J`, so index 0
//! is the state with every atom in well 2 and index `N` has every atom in well 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::C64;

/// Entrywise tolerance used when tagging an operator as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Entrywise tolerance used when tagging an operator as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Angular-momentum quantum numbers of an `N`-particle two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    particles: u32,
}

impl Spin {
    pub fn from_particles(particles: u32) -> Self {
        Spin { particles }
    }

    /// Builds the representation for total angular momentum `j`; `2j` must be a
    /// non-negative integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::Domain(format!("J = {j} is not a non-negative half-integer")));
        }
        Ok(Spin { particles: twice as u32 })
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn j(&self) -> f64 {
        self.particles as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.particles as usize + 1
    }

    /// Magnetic number held by basis index `index`.
    pub fn mu(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }

    /// Basis index of magnetic number `mu`.
    pub fn index_of(&self, mu: f64) -> Result<usize> {
        let k = mu + self.j();
        if !k.is_finite() || k.fract() != 0.0 || k < 0.0 || k > self.particles as f64 {
            return Err(Error::Domain(format!(
                "mu = {mu} is not in {{-J..J}} for J = {}",
                self.j()
            )));
        }
        Ok(k as usize)
    }

    pub fn mus(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |k| self.mu(k))
    }

    /// `√((J-μ)(J+μ+1))`, the matrix element `⟨μ+1|J₊|μ⟩`.
    pub fn raising_amplitude(&self, mu: f64) -> f64 {
        let j = self.j();
        ((j - mu) * (j + mu + 1.0)).max(0.0).sqrt()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.particles % 2 == 0 {
            write!(f, "J={}", self.particles / 2)
        } else {
            write!(f, "J={}/2", self.particles)
        }
    }
}

/// Dense complex square matrix with advisory Hermitian/unitary tags.
///
/// Tags are only ever set after the corresponding defect has been checked
/// against [`HERMITIAN_TOL`] or [`UNITARY_TOL`]. Arithmetic drops the tags.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    hermitian: bool,
    unitary: bool,
}

impl OperatorMatrix {
    /// Wraps a square matrix without tagging it.
    pub fn new(matrix: DMatrix<C64>) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        OperatorMatrix { matrix, hermitian: false, unitary: false }
    }

    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix { matrix: DMatrix::zeros(dim, dim), hermitian: true, unitary: false }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { matrix: DMatrix::identity(dim, dim), hermitian: true, unitary: true }
    }

    pub fn from_diagonal(entries: &[C64]) -> Self {
        OperatorMatrix::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    /// Real diagonal matrix, tagged Hermitian.
    pub fn real_diagonal(entries: impl IntoIterator<Item = f64>) -> Self {
        let d: Vec<C64> = entries.into_iter().map(C64::from).collect();
        let mut op = OperatorMatrix::from_diagonal(&d);
        op.hermitian = true;
        op
    }

    /// Wraps `matrix` and tags it Hermitian, failing if `max |A - A†| ≥ 1e-12`.
    pub fn hermitian(matrix: DMatrix<C64>) -> Result<Self> {
        OperatorMatrix::new(matrix).checked_hermitian()
    }

    /// Wraps `matrix` and tags it unitary, failing if `max |A†A - I| ≥ 1e-10`.
    pub fn unitary(matrix: DMatrix<C64>) -> Result<Self> {
        OperatorMatrix::new(matrix).checked_unitary()
    }

    pub fn checked_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect >= HERMITIAN_TOL {
            return Err(Error::Contract(format!("operator is not Hermitian (defect {defect:e})")));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn checked_unitary(mut self) -> Result<Self> {
        let defect = self.unitarity_defect();
        if defect >= UNITARY_TOL {
            return Err(Error::Contract(format!("operator is not unitary (defect {defect:e})")));
        }
        self.unitary = true;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// `max |A - A†|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// `max |A†A - I|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(n, n)))
    }

    /// `max |A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix { matrix: self.matrix.adjoint(), hermitian: self.hermitian, unitary: self.unitary }
    }

    pub fn scale(&self, factor: C64) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix * factor)
    }

    pub fn scale_real(&self, factor: f64) -> OperatorMatrix {
        OperatorMatrix { matrix: &self.matrix * C64::from(factor), hermitian: self.hermitian, unitary: false }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }

    /// Eigen-decomposition of a Hermitian operator; eigenvalues ascending,
    /// eigenvectors as the columns of the returned matrix.
    pub fn eigh(&self) -> Result<(Vec<f64>, DMatrix<C64>)> {
        if !self.hermitian {
            return Err(Error::Contract("eigendecomposition requires a Hermitian-tagged operator".into()));
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }

    /// `f(A)` for Hermitian `A`, computed through its eigenbasis.
    pub fn functional_calculus(&self, f: impl Fn(f64) -> C64) -> Result<OperatorMatrix> {
        let (values, vectors) = self.eigh()?;
        Ok(OperatorMatrix::new(conjugate_diagonal(&vectors, values.iter().map(|&x| f(x)))))
    }
}

/// `V diag(d) V†`.
pub(crate) fn conjugate_diagonal(vectors: &DMatrix<C64>, diag: impl Iterator<Item = C64>) -> DMatrix<C64> {
    let mut scaled = vectors.clone();
    for (mut col, d) in scaled.column_iter_mut().zip(diag) {
        col *= d;
    }
    scaled * vectors.adjoint()
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix + &rhs.matrix)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix - &rhs.matrix)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix * &rhs.matrix)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix { matrix: -&self.matrix, hermitian: self.hermitian, unitary: false }
    }
}

/// The operators exposed by [`build_operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Jz,
    Jplus,
    Jminus,
    Jx,
    Jy,
    /// `Ĵx⁺ = -Ĵz + iĴy`, raising operator of the `Ĵx` eigenbasis.
    JxPlus,
    /// `Ĵx⁻ = -Ĵz - iĴy`.
    JxMinus,
    /// `Ĵy⁺ = Ĵx - iĴz`, raising operator of the `Ĵy` eigenbasis.
    JyPlus,
    /// `Ĵy⁻ = Ĵx + iĴz`.
    JyMinus,
    Jz2,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 10] = [
        OperatorKind::Jz,
        OperatorKind::Jplus,
        OperatorKind::Jminus,
        OperatorKind::Jx,
        OperatorKind::Jy,
        OperatorKind::JxPlus,
        OperatorKind::JxMinus,
        OperatorKind::JyPlus,
        OperatorKind::JyMinus,
        OperatorKind::Jz2,
    ];
}

/// Matrix of an SU(2) operator in the ascending-μ number basis.
pub fn build_operator(spin: Spin, kind: OperatorKind) -> OperatorMatrix {
    let dim = spin.dim();
    let i = C64::i();
    let raising = || {
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for k in 0..dim.saturating_sub(1) {
            m[(k + 1, k)] = C64::from(spin.raising_amplitude(spin.mu(k)));
        }
        m
    };
    let jz = || DMatrix::from_diagonal(&DVector::from_iterator(dim, spin.mus().map(C64::from)));
    let jx = || {
        let p = raising();
        (&p + p.adjoint()) * C64::from(0.5)
    };
    let jy = || {
        let p = raising();
        (&p - p.adjoint()) * (-0.5 * i)
    };

    let (matrix, hermitian) = match kind {
        OperatorKind::Jz => (jz(), true),
        OperatorKind::Jplus => (raising(), false),
        OperatorKind::Jminus => (raising().adjoint(), false),
        OperatorKind::Jx => (jx(), true),
        OperatorKind::Jy => (jy(), true),
        OperatorKind::JxPlus => (-jz() + jy() * i, false),
        OperatorKind::JxMinus => (-jz() - jy() * i, false),
        OperatorKind::JyPlus => (jx() - jz() * i, false),
        OperatorKind::JyMinus => (jx() + jz() * i, false),
        OperatorKind::Jz2 => {
            let z = jz();
            (&z * &z, true)
        }
    };
    OperatorMatrix { matrix, hermitian, unitary: false }
}

/// `exp(-iHτ)` for Hermitian `H`, via its eigendecomposition.
pub fn unitary_exponential(h: &OperatorMatrix, tau: f64) -> Result<OperatorMatrix> {
    if !h.is_hermitian() {
        return Err(Error::Contract("unitary_exponential requires a Hermitian generator".into()));
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!("non-finite time {tau}")));
    }
    let (values, vectors) = h.eigh()?;
    let phases = values.iter().map(|&e| C64::from_polar(1.0, -e * tau));
    OperatorMatrix::new(conjugate_diagonal(&vectors, phases)).checked_unitary()
}

/// Rotation `R(θ,φ) = exp[-iθ(Ĵy cos φ - Ĵx sin φ)]`: a rotation by `θ` about
/// the axis in the xy-plane at angle `φ` from the y-axis.
pub fn rotation_operator(spin: Spin, theta: f64, phi: f64) -> Result<OperatorMatrix> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::Domain(format!("rotation angles must be finite (θ={theta}, φ={phi})")));
    }
    let jx = build_operator(spin, OperatorKind::Jx);
    let jy = build_operator(spin, OperatorKind::Jy);
    let axis = (&jy.scale_real(phi.cos()) - &jx.scale_real(phi.sin())).checked_hermitian()?;
    unitary_exponential(&axis, theta)
}
