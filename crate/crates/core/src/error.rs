//! Error type shared by all modules.

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A basis or parameter precondition was violated.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation expecting a symmetric matrix received one that is not.
    #[error("matrix not symmetric: max |A - Aᵀ| = {max_asym:.3e} exceeds {tol:.1e}")]
    NotSymmetric { max_asym: f64, tol: f64 },

    /// The iterative symmetric eigensolver did not converge.
    #[error("symmetric eigensolver failed to converge (dim = {dim})")]
    EigensolverFailed { dim: usize },

    /// Matrix/basis dimensions do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Temperature outside the admissible range of the operation.
    #[error("invalid temperature {value}: {reason}")]
    InvalidTemperature { value: f64, reason: &'static str },

    /// Cutoff doubling exhausted without meeting the tolerance; the
    /// parameters are pathological for a desk-scale dense solve.
    #[error("Fock cutoff did not converge by n_max = {limit} (tol = {tol:.1e})")]
    CutoffNotConverged { limit: usize, tol: f64 },

    /// The rate generator's level graph is disconnected, so the chosen
    /// system–bath coupling cannot thermalize the spectrum.
    #[error("rate generator is reducible: {components} disconnected level groups")]
    ReducibleGenerator { components: usize },

    /// Entropy matching for a T–S adiabat endpoint found no solution.
    #[error("entropy matching has no solution in (0, {upper}]; the T-S loop does not close")]
    EntropyMatchFailed { upper: f64 },

    /// T–S diagrams are only defined for cycles that produce positive work.
    #[error("cycle yields no positive work (W = {w:.3e}); T-S loop undefined")]
    NonPositiveWork { w: f64 },

    /// A linear solve failed (singular system).
    #[error("linear solve failed: {0}")]
    SingularSystem(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
