//! Numerical toolkit for a quantum Otto heat engine whose working medium is
//! the generalized Rabi model
//!
//! ```text
//! H = Δ σz + ε σx + ω a†a + g σx (a + a†)
//! ```
//!
//! a single qubit coupled (up to ultrastrongly) to one bosonic mode, with a
//! small symmetry-breaking bias ε.  Everything is computed by exact
//! diagonalization in a truncated Fock basis using dense real-symmetric
//! matrices: in the bare product basis every term of `H` is real, so complex
//! arithmetic is never needed.
//!
//! Units: ħ = k_B = 1 and energies are measured in the base frequency
//! ω₀ = 1; temperatures are in ħω₀/k_B.
//!
//! The crate is organized around the cycle pipeline:
//!
//! * [`basis`]: truncated qubit ⊗ Fock basis bookkeeping,
//! * [`operators`]: ladder/Pauli operators and the Rabi Hamiltonian,
//! * [`spectral`]: symmetric eigensolves, Gibbs states, cutoff convergence,
//! * [`cycle`]: the four-stroke Otto cycle, regimes and T–S diagrams,
//! * [`measures`]: reduced states, coherences, g²(0), entropies, mutual
//!   information, logarithmic negativity,
//! * [`thermalization`]: detailed-balance rate equations in the dressed
//!   basis, verifying that the cycle's equilibration assumption holds for
//!   any admissible rate choice.
//!
//! All operations are pure functions of immutable inputs and can be called
//! concurrently without restriction.

pub mod basis;
pub mod cycle;
pub mod error;
pub mod measures;
pub mod operators;
pub mod spectral;
pub mod thermalization;

pub use basis::BasisSpec;
pub use cycle::{
    BasisPolicy, CycleResult, CycleSpec, DeltaMode, EpsilonMode, Protocol, Regime, TSDiagram,
};
pub use error::{Error, Result};
pub use measures::{DensityMatrix, MeasureReport, Subsystem};
pub use operators::{HamiltonianParams, OperatorMatrix, PauliAxis};
pub use spectral::{SpectralDecomposition, ThermalState};
pub use thermalization::{BathCoupling, RateMatrix};

/// Dense real matrix type used throughout.
pub type Mat = nalgebra::DMatrix<f64>;
