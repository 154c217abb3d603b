//! Matrix representations of the model operators and the generalized Rabi
//! Hamiltonian
//!
//! ```text
//! H = Δ σz + ε σx + ω a†a + g σx (a + a†)
//! ```
//!
//! in the truncated qubit-major product basis.  All four terms are real in
//! this basis, so operators are stored as dense real matrices and `H` is
//! exactly real symmetric.

use nalgebra::DMatrix;

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::Mat;

/// Absolute symmetry tolerance enforced on matrices flagged hermitian.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default symmetry-breaking bias as a fraction of the field frequency,
/// ε = 0.005 ω.  Keeps the spectrum free of exact crossings so that a plain
/// ascending sort orders the levels consistently.
pub const DEFAULT_EPSILON_COEFF: f64 = 0.005;

/// The four model energies, in units of the base frequency (ħ = k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    /// Field frequency ω.
    pub omega: f64,
    /// Qubit half-splitting Δ (bare qubit gap is 2Δ).
    pub delta: f64,
    /// Symmetry-breaking bias ε.
    pub epsilon: f64,
    /// Qubit–field coupling g.
    pub g: f64,
}

impl HamiltonianParams {
    pub fn new(omega: f64, delta: f64, epsilon: f64, g: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
        }
        for (name, v) in [("delta", delta), ("epsilon", epsilon), ("g", g)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(Self { omega, delta, epsilon, g })
    }

    /// Standard parametrization from the field frequency alone:
    /// Δ = ω/2 (qubit resonant with the field) and ε = 0.005 ω.
    pub fn from_omega(omega: f64, g: f64) -> Result<Self> {
        Self::new(omega, omega / 2.0, DEFAULT_EPSILON_COEFF * omega, g)
    }
}

/// A dense real operator on the composite space, tagged with whether it is
/// symmetric (hermitian in the real representation).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: Mat,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wrap a matrix, checking the symmetry claim when `hermitian` is set.
    pub fn new(entries: Mat, hermitian: bool) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if hermitian {
            let max_asym = max_asymmetry(&entries);
            if max_asym > SYMMETRY_TOL {
                return Err(Error::NotSymmetric { max_asym, tol: SYMMETRY_TOL });
            }
        }
        Ok(Self { entries, hermitian })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn into_entries(self) -> Mat {
        self.entries
    }
}

pub(crate) fn max_asymmetry(m: &Mat) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    max
}

/// Field annihilation operator embedded on the composite space:
/// ⟨s, n−1| a |s, n⟩ = √n.  Not hermitian.
pub fn annihilation(basis: BasisSpec) -> OperatorMatrix {
    let nf = basis.fock_dim();
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..2 {
        for n in 1..nf {
            m[(basis.index(s, n - 1), basis.index(s, n))] = (n as f64).sqrt();
        }
    }
    OperatorMatrix { entries: m, hermitian: false }
}

/// Field quadrature x = a + a† on the composite space. Symmetric.
pub fn quadrature(basis: BasisSpec) -> OperatorMatrix {
    let a = annihilation(basis).into_entries();
    let x = &a + a.transpose();
    OperatorMatrix { entries: x, hermitian: true }
}

/// Number operator a†a on the composite space. Symmetric (diagonal).
pub fn number(basis: BasisSpec) -> OperatorMatrix {
    let nf = basis.fock_dim();
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..2 {
        for n in 0..nf {
            m[(basis.index(s, n), basis.index(s, n))] = n as f64;
        }
    }
    OperatorMatrix { entries: m, hermitian: true }
}

/// Pauli axis selector for [`pauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Z,
}

/// Qubit Pauli operator embedded on the composite space.
///
/// σz is diagonal with −1 on the `s = 0` block and +1 on the `s = 1` block;
/// σx swaps the two qubit blocks identically on Fock indices.
pub fn pauli(which: PauliAxis, basis: BasisSpec) -> OperatorMatrix {
    let nf = basis.fock_dim();
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    match which {
        PauliAxis::Z => {
            for n in 0..nf {
                m[(basis.index(0, n), basis.index(0, n))] = -1.0;
                m[(basis.index(1, n), basis.index(1, n))] = 1.0;
            }
        }
        PauliAxis::X => {
            for n in 0..nf {
                m[(basis.index(0, n), basis.index(1, n))] = 1.0;
                m[(basis.index(1, n), basis.index(0, n))] = 1.0;
            }
        }
    }
    OperatorMatrix { entries: m, hermitian: true }
}

/// Assemble H = Δ σz + ε σx + ω a†a + g σx (a + a†).
pub fn build_hamiltonian(p: &HamiltonianParams, basis: BasisSpec) -> OperatorMatrix {
    let nf = basis.fock_dim();
    let dim = basis.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for n in 0..nf {
        // qubit-diagonal terms: Δ σz + ω a†a
        h[(basis.index(0, n), basis.index(0, n))] = -p.delta + p.omega * n as f64;
        h[(basis.index(1, n), basis.index(1, n))] = p.delta + p.omega * n as f64;
        // ε σx couples the qubit blocks at equal Fock index
        h[(basis.index(0, n), basis.index(1, n))] = p.epsilon;
        h[(basis.index(1, n), basis.index(0, n))] = p.epsilon;
    }
    // g σx (a + a†): qubit flip together with a Fock shift by one
    for n in 1..nf {
        let amp = p.g * (n as f64).sqrt();
        for (s, t) in [(0, 1), (1, 0)] {
            h[(basis.index(s, n - 1), basis.index(t, n))] += amp;
            h[(basis.index(t, n), basis.index(s, n - 1))] += amp;
        }
    }
    OperatorMatrix { entries: h, hermitian: true }
}
