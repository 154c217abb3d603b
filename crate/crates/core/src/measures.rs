//! Coherence and correlation diagnostics on a density matrix.
//!
//! Implements the full diagnostic set for a qubit ⊗ field state ρ:
//! reduced density matrices, the atomic coherence |ρ¹²|, the field
//! amplitude ⟨a⟩, the second-order coherence g²(0) = ⟨a†a†aa⟩/⟨a†a⟩²,
//! von Neumann entropies, mutual information I = S_atom + S_field − S,
//! and the logarithmic negativity E_N = log₂‖ρ^Γ‖₁.
//!
//! Logarithm bases are mixed on purpose: S and I are in nats (natural log),
//! E_N is in bits (log₂).

use nalgebra::DMatrix;

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::operators::{self, annihilation};
use crate::spectral::symmetric_eigen;
use crate::Mat;

/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;

/// Eigenvalues below this floor are treated as exact zeros inside logs.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;

/// ⟨a†a⟩ below this threshold flags g²(0) as undefined (vacuum).
pub const G2_OCCUPATION_FLOOR: f64 = 1e-10;

/// Which subsystem survives a partial trace / is transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Atom,
    Field,
}

/// A dense real symmetric density matrix on the composite basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: Mat,
    basis: BasisSpec,
}

impl DensityMatrix {
    /// Wrap a matrix after checking dimension, symmetry and unit trace.
    /// Positive semidefiniteness is not recomputed here (it costs a full
    /// eigensolve); use [`DensityMatrix::min_eigenvalue`] where it matters.
    pub fn new(entries: Mat, basis: BasisSpec) -> Result<Self> {
        if entries.nrows() != basis.dim() || entries.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: entries.nrows() });
        }
        let max_asym = operators::max_asymmetry(&entries);
        if max_asym > operators::SYMMETRY_TOL {
            return Err(Error::NotSymmetric { max_asym, tol: operators::SYMMETRY_TOL });
        }
        let trace = entries.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace {trace} deviates from 1 by more than {TRACE_TOL:.1e}"
            )));
        }
        Ok(Self { entries, basis })
    }

    /// Pure state ρ = ψψᵀ from a normalized real amplitude vector.
    pub fn pure(psi: &nalgebra::DVector<f64>, basis: BasisSpec) -> Result<Self> {
        let psi = psi / psi.norm();
        Self::new(&psi * psi.transpose(), basis)
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Smallest eigenvalue; a valid state has it ≥ −1e−10.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = symmetric_eigen(&self.entries)?;
        Ok(vals[0])
    }

    /// Expectation value Tr(ρ A).
    pub fn expect(&self, op: &Mat) -> f64 {
        // Tr(ρA) = Σ_ij ρ_ij A_ji without forming the product
        let mut sum = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                sum += self.entries[(i, j)] * op[(j, i)];
            }
        }
        sum
    }
}

/// Trace out one subsystem, keeping the other.
///
/// Qubit-major layout: ρ_atom[s,s'] = Σ_n ρ[(s,n),(s',n)] and
/// ρ_field[n,n'] = Σ_s ρ[(s,n),(s,n')].
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Mat {
    let basis = rho.basis();
    let nf = basis.fock_dim();
    let m = rho.entries();
    match keep {
        Subsystem::Atom => {
            let mut out = DMatrix::zeros(2, 2);
            for s in 0..2 {
                for t in 0..2 {
                    let mut acc = 0.0;
                    for n in 0..nf {
                        acc += m[(basis.index(s, n), basis.index(t, n))];
                    }
                    out[(s, t)] = acc;
                }
            }
            out
        }
        Subsystem::Field => {
            let mut out = DMatrix::zeros(nf, nf);
            for n in 0..nf {
                for np in 0..nf {
                    out[(n, np)] = m[(basis.index(0, n), basis.index(0, np))]
                        + m[(basis.index(1, n), basis.index(1, np))];
                }
            }
            out
        }
    }
}

/// |ρ¹²|: magnitude of the off-diagonal of the reduced atom matrix.
pub fn atom_coherence(rho: &DensityMatrix) -> f64 {
    partial_trace(rho, Subsystem::Atom)[(0, 1)].abs()
}

/// ⟨a⟩ = Tr(ρ a), real in the real representation.  Signed; callers that
/// plot coherence magnitudes take the absolute value.
pub fn field_amplitude(rho: &DensityMatrix) -> f64 {
    let a = annihilation(rho.basis()).into_entries();
    rho.expect(&a)
}

/// Second-order coherence g²(0) = ⟨a†a†aa⟩ / ⟨a†a⟩².
///
/// Returns `None` when ⟨a†a⟩ is below [`G2_OCCUPATION_FLOOR`] (vacuum).
pub fn g2_zero(rho: &DensityMatrix) -> Option<f64> {
    let a = annihilation(rho.basis()).into_entries();
    let n_op = a.transpose() * &a;
    let occupation = rho.expect(&n_op);
    if occupation <= G2_OCCUPATION_FLOOR {
        return None;
    }
    let aa = &a * &a;
    let numerator_op = aa.transpose() * aa;
    Some(rho.expect(&numerator_op) / (occupation * occupation))
}

/// Von Neumann entropy −Σ λ ln λ (nats) of a symmetric PSD matrix.
/// Eigenvalues below [`EIGENVALUE_FLOOR`] are treated as zero.
pub fn matrix_entropy(m: &Mat) -> Result<f64> {
    let (vals, _) = symmetric_eigen(m)?;
    Ok(vals
        .iter()
        .filter(|&&v| v > EIGENVALUE_FLOOR)
        .map(|&v| -v * v.ln())
        .sum())
}

/// Von Neumann entropy of the full state, in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.entries())
}

/// Quantum mutual information I = S_atom + S_field − S_total ≥ 0, in nats.
/// Rounding-level negatives (> −1e−9) are clamped to zero.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let s_atom = matrix_entropy(&partial_trace(rho, Subsystem::Atom))?;
    let s_field = matrix_entropy(&partial_trace(rho, Subsystem::Field))?;
    let s_total = von_neumann_entropy(rho)?;
    let i = s_atom + s_field - s_total;
    Ok(if i < 0.0 && i > -1e-9 { 0.0 } else { i })
}

/// Partial transpose ρ^Γ with respect to one subsystem.
///
/// In qubit-major layout the atom transpose swaps the two off-diagonal
/// qubit blocks; the field transpose transposes each block in place.  For
/// a symmetric ρ both give the same matrix, which stays symmetric and
/// unit-trace (but generally not positive, which is the point).
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> DensityMatrix {
    let basis = rho.basis();
    let nf = basis.fock_dim();
    let m = rho.entries();
    let mut out = DMatrix::zeros(basis.dim(), basis.dim());
    for s in 0..2 {
        for t in 0..2 {
            for n in 0..nf {
                for np in 0..nf {
                    let (row, col) = match subsystem {
                        // (s,n),(t,n') ← (t,n),(s,n')
                        Subsystem::Atom => (basis.index(t, n), basis.index(s, np)),
                        // (s,n),(t,n') ← (s,n'),(t,n)
                        Subsystem::Field => (basis.index(s, np), basis.index(t, n)),
                    };
                    out[(basis.index(s, n), basis.index(t, np))] = m[(row, col)];
                }
            }
        }
    }
    DensityMatrix { entries: out, basis }
}

/// Logarithmic negativity E_N = log₂ ‖ρ^Γ‖₁ in bits, clamped to ≥ 0.
/// The trace norm is Σ|λ| over the symmetric spectrum of ρ^Γ.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    let gamma = partial_transpose(rho, Subsystem::Atom);
    let (vals, _) = symmetric_eigen(gamma.entries())?;
    let trace_norm: f64 = vals.iter().map(|v| v.abs()).sum();
    Ok(trace_norm.log2().max(0.0))
}

/// Every diagnostic for one state, computed in a single pass.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    /// |ρ¹²| of the reduced atom matrix.
    pub atom_coherence: f64,
    /// Signed ⟨a⟩.
    pub field_amplitude: f64,
    /// |⟨a⟩|, the value used in plots and CSV output.
    pub field_amplitude_abs: f64,
    /// g²(0), or `None` when the field occupation is at vacuum level.
    pub g2: Option<f64>,
    /// Entropy of the reduced atom state (nats).
    pub s_atom: f64,
    /// Entropy of the reduced field state (nats).
    pub s_field: f64,
    /// Entropy of the full state (nats).
    pub s_total: f64,
    /// Mutual information (nats).
    pub mutual_info: f64,
    /// Logarithmic negativity (bits).
    pub log_negativity: f64,
}

impl MeasureReport {
    pub fn compute(rho: &DensityMatrix) -> Result<Self> {
        let s_atom = matrix_entropy(&partial_trace(rho, Subsystem::Atom))?;
        let s_field = matrix_entropy(&partial_trace(rho, Subsystem::Field))?;
        let s_total = von_neumann_entropy(rho)?;
        let i = s_atom + s_field - s_total;
        let amplitude = field_amplitude(rho);
        Ok(Self {
            atom_coherence: atom_coherence(rho),
            field_amplitude: amplitude,
            field_amplitude_abs: amplitude.abs(),
            g2: g2_zero(rho),
            s_atom,
            s_field,
            s_total,
            mutual_info: if i < 0.0 && i > -1e-9 { 0.0 } else { i },
            log_negativity: log_negativity(rho)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::HamiltonianParams;
    use crate::spectral::{gibbs_state, population_entropy, SpectralDecomposition};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn basis(n_max: usize) -> BasisSpec {
        BasisSpec::new(n_max).unwrap()
    }

    fn thermal(omega: f64, delta: f64, epsilon: f64, g: f64, t: f64, n_max: usize) -> DensityMatrix {
        let p = HamiltonianParams::new(omega, delta, epsilon, g).unwrap();
        let spec = SpectralDecomposition::from_params(&p, basis(n_max)).unwrap();
        gibbs_state(&spec, t).unwrap().rho().clone()
    }

    /// (|0,0⟩ + |1,1⟩)/√2, maximally entangled on qubit ⊗ {Fock 0, 1}.
    fn bell_like(n_max: usize) -> DensityMatrix {
        let b = basis(n_max);
        let mut psi = DVector::zeros(b.dim());
        psi[b.index(0, 0)] = 1.0;
        psi[b.index(1, 1)] = 1.0;
        DensityMatrix::pure(&psi, b).unwrap()
    }

    /// |α⟩⟨α| ⊗ ground qubit, with real coherent amplitude α.
    fn coherent_fixture(alpha: f64, n_max: usize) -> DensityMatrix {
        let b = basis(n_max);
        let mut psi = DVector::zeros(b.dim());
        let mut log_fact = 0.0;
        for n in 0..=n_max {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            psi[b.index(0, n)] =
                (-alpha * alpha / 2.0 + n as f64 * alpha.ln() - 0.5 * log_fact).exp();
        }
        DensityMatrix::pure(&psi, b).unwrap()
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factors() {
        let b = basis(3);
        let rho_a = nalgebra::dmatrix![0.7, 0.1; 0.1, 0.3];
        let mut rho_f = DMatrix::zeros(4, 4);
        rho_f[(0, 0)] = 0.5;
        rho_f[(1, 1)] = 0.3;
        rho_f[(2, 2)] = 0.2;
        rho_f[(0, 2)] = 0.1;
        rho_f[(2, 0)] = 0.1;
        let rho = DensityMatrix::new(rho_a.kronecker(&rho_f), b).unwrap();
        assert_abs_diff_eq!(partial_trace(&rho, Subsystem::Atom), rho_a, epsilon = 1e-14);
        assert_abs_diff_eq!(partial_trace(&rho, Subsystem::Field), rho_f, epsilon = 1e-14);
    }

    #[test]
    fn bell_like_reductions_are_maximally_mixed() {
        let rho = bell_like(4);
        let ra = partial_trace(&rho, Subsystem::Atom);
        assert_abs_diff_eq!(ra, DMatrix::identity(2, 2) * 0.5, epsilon = 1e-14);
        let rf = partial_trace(&rho, Subsystem::Field);
        assert_abs_diff_eq!(rf.trace(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rf[(0, 0)], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rf[(1, 1)], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn thermal_reduced_states_are_valid() {
        let rho = thermal(1.0, 0.5, 0.005, 0.8, 0.35, 30);
        for keep in [Subsystem::Atom, Subsystem::Field] {
            let r = partial_trace(&rho, keep);
            assert_abs_diff_eq!(r.trace(), 1.0, epsilon = 1e-12);
            let (vals, _) = symmetric_eigen(&r).unwrap();
            assert!(vals.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn atom_coherence_decoupled_closed_form() {
        // ε = 0: diagonal thermal qubit, no coherence
        let rho0 = thermal(1.0, 0.5, 0.0, 0.0, 0.2, 15);
        assert!(atom_coherence(&rho0) < 1e-14);
        // ε > 0: |ρ¹²| = tanh(√(Δ²+ε²)/T)·ε/(2√(Δ²+ε²)) from the 2×2 Gibbs state
        let (delta, eps, t) = (0.5, 0.005, 0.05);
        let rho = thermal(1.0, delta, eps, 0.0, t, 15);
        let gap = (delta * delta + eps * eps).sqrt();
        let expected = (gap / t).tanh() * eps / (2.0 * gap);
        assert_abs_diff_eq!(atom_coherence(&rho), expected, epsilon = 1e-12);
        // frozen: 0.004999749998 at these parameters
        assert_abs_diff_eq!(atom_coherence(&rho), 0.004999749998, epsilon = 1e-10);
    }

    #[test]
    fn field_amplitude_vanishes_decoupled_and_tracks_coherent_fixture() {
        let rho = thermal(1.0, 0.5, 0.005, 0.0, 0.3, 20);
        assert!(field_amplitude(&rho).abs() < 1e-12);
        let coh = coherent_fixture(0.5, 30);
        assert_abs_diff_eq!(field_amplitude(&coh), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn field_amplitude_transition_from_weak_to_large_coherence() {
        // deep in the ultrastrong regime the cold field amplitude dwarfs
        // its weak-coupling value
        let weak = field_amplitude(&thermal(1.0, 0.5, 0.005, 0.5, 0.05, 40)).abs();
        let strong = field_amplitude(&thermal(1.0, 0.5, 0.005, 2.5, 0.05, 40)).abs();
        assert!(strong > 5.0 * weak, "ratio {}", strong / weak);
    }

    #[test]
    fn g2_thermal_field_is_two_and_coherent_is_one() {
        for t in [0.2, 0.35, 1.0] {
            let rho = thermal(1.0, 0.5, 0.005, 0.0, t, 40);
            let g2 = g2_zero(&rho).expect("occupied thermal field");
            assert_abs_diff_eq!(g2, 2.0, epsilon = 1e-8);
        }
        let coh = coherent_fixture(0.5, 30);
        assert_abs_diff_eq!(g2_zero(&coh).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn g2_flags_vacuum_as_undefined() {
        let b = basis(6);
        let mut psi = DVector::zeros(b.dim());
        psi[b.index(0, 0)] = 1.0;
        let vac = DensityMatrix::pure(&psi, b).unwrap();
        assert!(g2_zero(&vac).is_none());
    }

    #[test]
    fn entropy_pure_and_maximally_mixed() {
        let rho = bell_like(3);
        assert!(von_neumann_entropy(&rho).unwrap() < 1e-12);
        let mixed = nalgebra::dmatrix![0.5, 0.0; 0.0, 0.5];
        assert_abs_diff_eq!(matrix_entropy(&mixed).unwrap(), 2.0_f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn thermal_entropy_equals_population_shannon_entropy() {
        // two independent code paths: eigensolve of ρ vs Shannon over P_n
        let p = HamiltonianParams::from_omega(1.0, 0.8).unwrap();
        let spec = SpectralDecomposition::from_params(&p, basis(30)).unwrap();
        let state = gibbs_state(&spec, 0.35).unwrap();
        let s_rho = von_neumann_entropy(state.rho()).unwrap();
        let s_pop = population_entropy(state.populations());
        assert_abs_diff_eq!(s_rho, s_pop, epsilon = 1e-10);
    }

    #[test]
    fn mutual_information_product_and_bell() {
        let rho = thermal(1.0, 0.5, 0.005, 0.0, 0.3, 20);
        assert!(mutual_information(&rho).unwrap() < 1e-10);
        let bell = bell_like(4);
        assert_abs_diff_eq!(
            mutual_information(&bell).unwrap(),
            2.0 * 2.0_f64.ln(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn mutual_information_grows_toward_ultrastrong_coupling() {
        let i_weak = mutual_information(&thermal(1.0, 0.5, 0.005, 0.1, 0.05, 40)).unwrap();
        let i_strong = mutual_information(&thermal(1.0, 0.5, 0.005, 1.0, 0.05, 40)).unwrap();
        assert!(i_weak > 0.0);
        assert!(i_strong > i_weak);
        // frozen cross-check values from an independent diagonalization
        assert_abs_diff_eq!(i_weak, 3.502e-2, epsilon = 2e-4);
        assert_abs_diff_eq!(i_strong, 0.985, epsilon = 2e-3);
    }

    #[test]
    fn log_negativity_product_bell_and_transpose_side() {
        let product = thermal(1.0, 0.5, 0.005, 0.0, 0.3, 20);
        assert!(log_negativity(&product).unwrap() < 1e-10);
        let bell = bell_like(4);
        assert_abs_diff_eq!(log_negativity(&bell).unwrap(), 1.0, epsilon = 1e-10);
        // transposing the field instead of the atom gives the same value
        let rho = thermal(1.0, 0.5, 0.005, 0.9, 0.05, 40);
        let via_atom = log_negativity(&rho).unwrap();
        let gamma_f = partial_transpose(&rho, Subsystem::Field);
        let (vals, _) = symmetric_eigen(gamma_f.entries()).unwrap();
        let via_field = vals.iter().map(|v| v.abs()).sum::<f64>().log2().max(0.0);
        assert_abs_diff_eq!(via_atom, via_field, epsilon = 1e-10);
        // frozen: E_N ≈ 0.8480 at g = 0.9, T = 0.05
        assert_abs_diff_eq!(via_atom, 0.848, epsilon = 2e-3);
    }

    #[test]
    fn partial_transpose_is_a_unit_trace_involution() {
        let rho = thermal(1.0, 0.5, 0.005, 0.8, 0.35, 25);
        let gamma = partial_transpose(&rho, Subsystem::Atom);
        assert_abs_diff_eq!(gamma.entries().trace(), 1.0, epsilon = 1e-12);
        let back = partial_transpose(&gamma, Subsystem::Atom);
        assert_eq!(back.entries(), rho.entries());
    }

    #[test]
    fn pure_state_schmidt_symmetry() {
        // for any pure global state: S_atom = S_field and I = 2 S_atom
        let b = basis(5);
        let mut psi = DVector::zeros(b.dim());
        for (k, v) in [(0usize, 0.6), (1, 0.3), (7, 0.5), (10, 0.45)] {
            psi[k] = v;
        }
        let rho = DensityMatrix::pure(&psi, b).unwrap();
        let report = MeasureReport::compute(&rho).unwrap();
        assert_abs_diff_eq!(report.s_atom, report.s_field, epsilon = 1e-10);
        assert!(report.s_total < 1e-10);
        assert_abs_diff_eq!(report.mutual_info, 2.0 * report.s_atom, epsilon = 1e-9);
    }

    #[test]
    fn report_is_deterministic() {
        let rho = thermal(1.0, 0.5, 0.005, 0.8, 0.05, 30);
        let a = MeasureReport::compute(&rho).unwrap();
        let b = MeasureReport::compute(&rho).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frozen_ultrastrong_cold_measures() {
        // cross-checked against an independent diagonalization at
        // ω = 1, Δ = 0.5, ε = 0.005, g = 0.8, T = 0.05, n_max = 40
        let rho = thermal(1.0, 0.5, 0.005, 0.8, 0.05, 40);
        let r = MeasureReport::compute(&rho).unwrap();
        assert_abs_diff_eq!(r.atom_coherence, 0.015151085342821, epsilon = 1e-9);
        assert_abs_diff_eq!(r.field_amplitude, 0.024241736548513, epsilon = 1e-9);
        assert_abs_diff_eq!(r.g2.unwrap(), 1.836379620568, epsilon = 1e-8);
        assert_abs_diff_eq!(r.mutual_info, 0.911799213232, epsilon = 1e-8);
        assert_abs_diff_eq!(r.log_negativity, 0.812652078126, epsilon = 1e-8);
    }

    #[test]
    fn survives_extreme_dynamic_range_at_deep_cold() {
        // at T = 0.05 the reduced field matrix spans ~140 orders of
        // magnitude, which knocks out the QL path; the Jacobi fallback
        // must still deliver the product-state answers
        let rho = thermal(1.0, 0.5, 0.005, 0.0, 0.05, 40);
        let i = mutual_information(&rho).unwrap();
        assert!(i.abs() < 1e-10, "I = {i:.3e}");
        let en = log_negativity(&rho).unwrap();
        assert!(en < 1e-10, "E_N = {en:.3e}");
        let s_field = matrix_entropy(&partial_trace(&rho, Subsystem::Field)).unwrap();
        assert!(s_field.is_finite() && s_field >= 0.0);
    }

    #[test]
    fn rejects_wrong_dimension_and_bad_trace() {
        let b = basis(4);
        assert!(matches!(
            DensityMatrix::new(Mat::identity(3, 3), b),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = Mat::identity(b.dim(), b.dim());
        assert!(DensityMatrix::new(m, b).is_err()); // trace = dim, not 1
    }
}
