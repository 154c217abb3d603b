//! Exact diagonalization and Gibbs states.
//!
//! The spectrum is returned in ascending order; with ε > 0 the avoided
//! crossings keep it simple, so the plain sort is the level ordering used
//! everywhere downstream.  Boltzmann weights are ground-shifted,
//!
//! ```text
//! P_n(T) = exp(−(E_n − E₀)/T) / Σ_m exp(−(E_m − E₀)/T),
//! ```
//!
//! which is exact and avoids overflow for β up to the hundreds.  T = 0 is
//! handled as the ground-state projector rather than a large-β exponential.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::measures::DensityMatrix;
use crate::operators::{self, HamiltonianParams, OperatorMatrix};
use crate::Mat;

/// Eigenvalue floor used when taking logarithms of populations.
pub const POPULATION_LOG_FLOOR: f64 = 1e-14;

/// Eigendecomposition of a symmetric matrix, sorted ascending.
///
/// Surfaces eigensolver non-convergence as an error instead of panicking.
/// The tridiagonal-QL solver is used first; on matrices whose entries span
/// hundreds of orders of magnitude (deep thermal tails) it can emit NaNs,
/// in which case a cyclic Jacobi sweep takes over.
pub fn symmetric_eigen(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    let max_asym = operators::max_asymmetry(m);
    if max_asym > operators::SYMMETRY_TOL {
        return Err(Error::NotSymmetric { max_asym, tol: operators::SYMMETRY_TOL });
    }
    let dim = m.nrows();
    let ql = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 50 * dim.max(8))
        .filter(|eig| eig.eigenvalues.iter().all(|v| v.is_finite()));
    let (values, vectors) = match ql {
        Some(eig) => (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors),
        None => jacobi_eigen(m)?,
    };
    Ok(sort_eigenpairs(values, vectors))
}

fn sort_eigenpairs(values: Vec<f64>, vectors: Mat) -> (Vec<f64>, Mat) {
    let dim = values.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let energies: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        sorted.set_column(col, &vectors.column(i));
    }
    (energies, sorted)
}

/// Cyclic Jacobi diagonalization.  Slower than QL but unconditionally
/// stable: every step is a bounded plane rotation, so extreme entry ranges
/// cannot produce overflow or NaN.
fn jacobi_eigen(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    const MAX_SWEEPS: usize = 100;
    let dim = m.nrows();
    let mut a = m.clone();
    let mut v = Mat::identity(dim, dim);
    let norm = a.norm().max(f64::MIN_POSITIVE);
    let tol = f64::EPSILON * norm;
    for _ in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                off_sq += a[(i, j)] * a[(i, j)];
            }
        }
        if off_sq.sqrt() <= tol {
            let values: Vec<f64> = (0..dim).map(|i| a[(i, i)]).collect();
            return Ok((values, v));
        }
        for p in 0..dim - 1 {
            for q in (p + 1)..dim {
                let apq = a[(p, q)];
                if apq.abs() <= tol / dim as f64 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                // for |θ| beyond √(f64::MAX) the exact formula overflows;
                // its limit is t = 1/(2θ)
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::EigensolverFailed { dim })
}

/// Ascending spectrum and orthonormal eigenvectors of a Rabi Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    energies: Vec<f64>,
    vectors: Mat,
    params: HamiltonianParams,
    basis: BasisSpec,
}

impl SpectralDecomposition {
    /// Build and diagonalize H(params) on the given basis.
    pub fn from_params(params: &HamiltonianParams, basis: BasisSpec) -> Result<Self> {
        let h = operators::build_hamiltonian(params, basis);
        Self::from_hamiltonian(&h, params, basis)
    }

    /// Diagonalize an already-assembled Hamiltonian.
    pub fn from_hamiltonian(
        h: &OperatorMatrix,
        params: &HamiltonianParams,
        basis: BasisSpec,
    ) -> Result<Self> {
        if h.dim() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: h.dim() });
        }
        let (energies, vectors) = symmetric_eigen(h.entries())?;
        Ok(Self { energies, vectors, params: *params, basis })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Orthonormal eigencolumns aligned with [`Self::energies`].
    pub fn vectors(&self) -> &Mat {
        &self.vectors
    }

    pub fn params(&self) -> &HamiltonianParams {
        &self.params
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }
}

/// Ground-shifted Boltzmann populations over a sorted spectrum.
///
/// For `t == 0` this is the exact limit: all weight on the ground level.
pub fn boltzmann_populations(energies: &[f64], t: f64) -> Result<Vec<f64>> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTemperature { value: t, reason: "temperature must be >= 0" });
    }
    let e0 = energies[0];
    if t == 0.0 {
        let mut p = vec![0.0; energies.len()];
        p[0] = 1.0;
        return Ok(p);
    }
    let mut weights: Vec<f64> = energies.iter().map(|e| (-(e - e0) / t).exp()).collect();
    let z: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= z;
    }
    Ok(weights)
}

/// ln Z(β) for the given spectrum, computed with the ground shift:
/// ln Z = −β E₀ + ln Σ exp(−β (E_n − E₀)).
pub fn log_partition(energies: &[f64], beta: f64) -> f64 {
    let e0 = energies[0];
    let s: f64 = energies.iter().map(|e| (-beta * (e - e0)).exp()).sum();
    -beta * e0 + s.ln()
}

/// Shannon entropy −Σ p ln p of a population vector, in nats.
pub fn population_entropy(populations: &[f64]) -> f64 {
    populations
        .iter()
        .filter(|&&p| p > POPULATION_LOG_FLOOR)
        .map(|&p| -p * p.ln())
        .sum()
}

/// A Gibbs state: full density matrix plus its Boltzmann populations.
#[derive(Debug, Clone)]
pub struct ThermalState {
    rho: DensityMatrix,
    populations: Vec<f64>,
    temperature: f64,
}

impl ThermalState {
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Boltzmann populations aligned with the spectrum's energy ordering.
    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Mean energy Σ P_n E_n of this state on its spectrum.
    pub fn mean_energy(&self, spec: &SpectralDecomposition) -> f64 {
        self.populations.iter().zip(spec.energies()).map(|(p, e)| p * e).sum()
    }

    /// Shannon entropy of the populations (equals the von Neumann entropy
    /// of `rho` since the state is diagonal in the eigenbasis).
    pub fn entropy(&self) -> f64 {
        population_entropy(&self.populations)
    }
}

/// Thermal state ρ = Σ_n P_n(T) |n⟩⟨n| at temperature `t >= 0`.
pub fn gibbs_state(spec: &SpectralDecomposition, t: f64) -> Result<ThermalState> {
    let populations = boltzmann_populations(spec.energies(), t)?;
    let dim = spec.dim();
    // V · diag(P) · Vᵀ, assembled symmetrically
    let mut scaled = spec.vectors().clone();
    for (col, &p) in populations.iter().enumerate() {
        let mut c = scaled.column_mut(col);
        c *= p;
    }
    let mut rho = scaled * spec.vectors().transpose();
    // remove the eigensolver's rounding-level asymmetry so downstream
    // symmetry invariants hold exactly
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = 0.5 * (rho[(i, j)] + rho[(j, i)]);
            rho[(i, j)] = v;
            rho[(j, i)] = v;
        }
    }
    let rho = DensityMatrix::new(rho, spec.basis())?;
    Ok(ThermalState { rho, populations, temperature: t })
}

/// Cutoff-doubling convergence search.
///
/// Starting from n_max = 20 and doubling, accept the first cutoff where
/// (i) the lowest ten energies move by less than `tol` when the cutoff is
/// doubled and (ii) the Gibbs weight in the top 10% of levels at
/// temperature `t` is below `tol`.  Fails past n_max = 320.
pub fn converge_cutoff(p: &HamiltonianParams, t: f64, tol: f64) -> Result<BasisSpec> {
    const START: usize = 20;
    const LIMIT: usize = 320;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTemperature { value: t, reason: "temperature must be >= 0" });
    }
    let mut n_max = START;
    let mut spec = SpectralDecomposition::from_params(p, BasisSpec::new(n_max)?)?;
    while n_max <= LIMIT {
        let doubled = SpectralDecomposition::from_params(p, BasisSpec::new(2 * n_max)?)?;
        let low_shift = spec
            .energies()
            .iter()
            .zip(doubled.energies())
            .take(10)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        let pops = boltzmann_populations(spec.energies(), t)?;
        let dim = spec.dim();
        let top = dim.div_ceil(10);
        let tail: f64 = pops[dim - top..].iter().sum();
        if low_shift < tol && tail < tol {
            return Ok(spec.basis());
        }
        n_max *= 2;
        spec = doubled;
    }
    Err(Error::CutoffNotConverged { limit: LIMIT, tol })
}
