//! Detailed-balance rate equations in the dressed basis.
//!
//! The cycle assumes each isochore ends in the Gibbs state of the stage
//! Hamiltonian.  This module verifies that assumption independently: a
//! thermal reservoir coupled through an operator A induces transitions
//! between exact eigenstates with golden-rule rates
//!
//! ```text
//! R_{m←n} = s · |⟨m|A|n⟩|² · (n̄(Δ) + 1)      downward, Δ = E_n − E_m > 0
//! R_{n←m} = s · |⟨m|A|n⟩|² · n̄(Δ)            upward,  n̄(Δ) = 1/(e^{Δ/T} − 1)
//! ```
//!
//! which satisfy detailed balance for any overall scale s and any coupling
//! operator.  Whenever the induced level graph is connected the unique
//! steady state is therefore the Boltzmann distribution, independent of
//! the rates; that is exactly the property the engine relies on.
//!
//! Only populations are tracked (the secular limit): with ε > 0 the
//! spectrum is simple, so coherences between eigenstates decay on their own
//! and play no role in the steady state.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operators::{annihilation, pauli, PauliAxis};
use crate::spectral::SpectralDecomposition;
use crate::Mat;

/// Degenerate pairs (gap below this) carry no secular population transfer.
const DEGENERACY_FLOOR: f64 = 1e-14;

/// Relative floor below which a rate does not count as a graph edge.
const EDGE_FLOOR: f64 = 1e-14;

/// System–bath coupling operator choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathCoupling {
    /// A = a + a† (field quadrature).
    FieldQuadrature,
    /// A = σx.
    QubitX,
    /// Two independent baths, one per operator; their rates add.  This is
    /// the default: it keeps the level graph connected even at g = 0.
    Both,
}

/// Population-rate generator over the eigenstate ladder: off-diagonal
/// entries are nonnegative transition rates, columns sum to zero.
#[derive(Debug, Clone)]
pub struct RateMatrix {
    generator: Mat,
    temperature: f64,
    coupling: BathCoupling,
}

impl RateMatrix {
    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn coupling(&self) -> BathCoupling {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }
}

fn accumulate_rates(
    generator: &mut Mat,
    coupling_eig: &Mat,
    energies: &[f64],
    t: f64,
    rate_scale: f64,
) {
    let dim = energies.len();
    for lower in 0..dim {
        for upper in (lower + 1)..dim {
            let gap = energies[upper] - energies[lower];
            if gap < DEGENERACY_FLOOR {
                continue;
            }
            let weight = coupling_eig[(lower, upper)].powi(2) * rate_scale;
            if weight == 0.0 {
                continue;
            }
            let nbar = 1.0 / (gap / t).exp_m1();
            generator[(lower, upper)] += weight * (nbar + 1.0); // downward
            generator[(upper, lower)] += weight * nbar; // upward
        }
    }
}

/// Golden-rule rate generator for the given spectrum, bath temperature,
/// coupling operator and overall scale.
pub fn build_rate_matrix(
    spec: &SpectralDecomposition,
    t: f64,
    coupling: BathCoupling,
    rate_scale: f64,
) -> Result<RateMatrix> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidTemperature { value: t, reason: "temperature must be > 0" });
    }
    if !rate_scale.is_finite() || rate_scale <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rate_scale must be > 0, got {rate_scale}"
        )));
    }
    let basis = spec.basis();
    let dim = spec.dim();
    let mut generator = DMatrix::zeros(dim, dim);
    let to_eig = |op: Mat| spec.vectors().transpose() * op * spec.vectors();
    let quad = || {
        let a = annihilation(basis).into_entries();
        &a + a.transpose()
    };
    match coupling {
        BathCoupling::FieldQuadrature => {
            accumulate_rates(&mut generator, &to_eig(quad()), spec.energies(), t, rate_scale);
        }
        BathCoupling::QubitX => {
            let sx = pauli(PauliAxis::X, basis).into_entries();
            accumulate_rates(&mut generator, &to_eig(sx), spec.energies(), t, rate_scale);
        }
        BathCoupling::Both => {
            accumulate_rates(&mut generator, &to_eig(quad()), spec.energies(), t, rate_scale);
            let sx = pauli(PauliAxis::X, basis).into_entries();
            accumulate_rates(&mut generator, &to_eig(sx), spec.energies(), t, rate_scale);
        }
    }
    for col in 0..dim {
        let outflow: f64 = (0..dim).filter(|&row| row != col).map(|row| generator[(row, col)]).sum();
        generator[(col, col)] = -outflow;
    }
    Ok(RateMatrix { generator, temperature: t, coupling })
}

/// Number of connected components of the transition graph.
fn component_count(generator: &Mat) -> usize {
    let dim = generator.nrows();
    let mut max_rate = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                max_rate = max_rate.max(generator[(i, j)].abs());
            }
        }
    }
    let floor = EDGE_FLOOR * max_rate;
    let mut label = vec![usize::MAX; dim];
    let mut components = 0;
    for start in 0..dim {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = components;
        while let Some(i) = stack.pop() {
            for j in 0..dim {
                if label[j] == usize::MAX
                    && (generator[(i, j)].abs() > floor || generator[(j, i)].abs() > floor)
                {
                    label[j] = components;
                    stack.push(j);
                }
            }
        }
        components += 1;
    }
    components
}

/// Normalized nonnegative kernel vector of the generator: the steady state.
///
/// Errors on a reducible generator (disconnected level graph: the chosen
/// coupling cannot thermalize the spectrum), which is also the case where
/// the kernel would not be one-dimensional.
pub fn steady_populations(rates: &RateMatrix) -> Result<Vec<f64>> {
    let dim = rates.dim();
    let components = component_count(rates.generator());
    if components != 1 {
        return Err(Error::ReducibleGenerator { components });
    }
    // replace one balance row by the normalization Σ p = 1; the omitted row
    // is implied because the generator's columns sum to zero
    let scale = rates.generator().amax();
    let mut system = rates.generator() / scale;
    for col in 0..dim {
        system[(0, col)] = 1.0;
    }
    let mut rhs = nalgebra::DVector::zeros(dim);
    rhs[0] = 1.0;
    let solution = system
        .full_piv_lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem("rate generator kernel solve"))?;
    let mut populations: Vec<f64> = solution.iter().copied().collect();
    for p in &mut populations {
        if *p < 0.0 && *p > -1e-9 {
            *p = 0.0;
        }
    }
    if populations.iter().any(|&p| p < 0.0) {
        return Err(Error::SingularSystem("kernel vector has negative entries"));
    }
    let total: f64 = populations.iter().sum();
    for p in &mut populations {
        *p /= total;
    }
    Ok(populations)
}

/// Largest relative detailed-balance violation over all level pairs.
pub fn detailed_balance_residual(rates: &RateMatrix, energies: &[f64]) -> f64 {
    let t = rates.temperature();
    let e0 = energies[0];
    let mut worst = 0.0_f64;
    for lower in 0..energies.len() {
        for upper in (lower + 1)..energies.len() {
            let down = rates.generator()[(lower, upper)];
            let up = rates.generator()[(upper, lower)];
            if down == 0.0 && up == 0.0 {
                continue;
            }
            let lhs = down * (-(energies[upper] - e0) / t).exp();
            let rhs = up * (-(energies[lower] - e0) / t).exp();
            let denom = lhs.abs().max(rhs.abs());
            if denom > 0.0 {
                worst = worst.max((lhs - rhs).abs() / denom);
            }
        }
    }
    worst
}

/// Explicit Euler relaxation of a population vector under the generator,
/// with step 1e−3/‖R‖∞.  Used to check that the flow stays a probability
/// distribution and converges to the kernel.
pub fn evolve_populations(rates: &RateMatrix, initial: &[f64], steps: usize) -> Vec<f64> {
    let dim = rates.dim();
    assert_eq!(initial.len(), dim);
    let norm = (0..dim)
        .map(|i| (0..dim).map(|j| rates.generator()[(i, j)].abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let h = 1e-3 / norm;
    let mut p = nalgebra::DVector::from_column_slice(initial);
    for _ in 0..steps {
        let flow = rates.generator() * &p;
        p += flow * h;
    }
    p.iter().copied().collect()
}
