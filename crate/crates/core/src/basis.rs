//! Truncated qubit ⊗ Fock product basis.
//!
//! The composite index convention is *qubit-major*:
//!
//! ```text
//! k = s·(n_max + 1) + n,    s ∈ {0, 1},  n ∈ {0, …, n_max}
//! ```
//!
//! with `s = 0` the lower bare qubit level.  Partial traces, partial
//! transposes and operator embeddings all rely on this ordering; it is fixed
//! here once and never restated.

use crate::error::{Error, Result};

/// Truncated-basis specification: the highest retained Fock occupation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    n_max: usize,
}

impl BasisSpec {
    /// Basis keeping Fock states `0..=n_max`. Requires `n_max >= 1`.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter(format!(
                "n_max must be >= 1, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Dimension of the field factor, `n_max + 1`.
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Dimension of the composite space, `2 (n_max + 1)`.
    pub fn dim(&self) -> usize {
        2 * self.fock_dim()
    }

    /// Composite index of `(s, n)` in qubit-major order.
    pub fn index(&self, s: usize, n: usize) -> usize {
        debug_assert!(s < 2 && n <= self.n_max);
        s * self.fock_dim() + n
    }

    /// Inverse of [`BasisSpec::index`].
    pub fn split(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.dim());
        (k / self.fock_dim(), k % self.fock_dim())
    }
}
