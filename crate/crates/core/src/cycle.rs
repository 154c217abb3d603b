//! The four-stroke quantum Otto cycle.
//!
//! Two isochores (heat exchange at fixed spectrum) and two quantum adiabats
//! (spectrum change at frozen populations, by the adiabatic theorem).  The
//! spectrum is shifted either by changing the field frequency at fixed
//! coupling (ω_h → ω_l) or by changing the coupling at fixed frequency
//! (g_h → g_l).  Heat and work per cycle:
//!
//! ```text
//! Q₁ = Σ_n E_n^h (P_n(T_h) − P_n(T_l))      heat absorbed on the hot isochore
//! Q₂ = Σ_n E_n^l (P_n(T_l) − P_n(T_h))      heat exchanged on the cold isochore
//! W  = Q₁ + Q₂,    η = W / Q₁ when W > 0
//! ```
//!
//! with P_n(T_h) Boltzmann populations of the hot-stage spectrum and
//! P_n(T_l) of the cold-stage spectrum, paired level by level;
//! this is why both stages must share one truncation.

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::operators::HamiltonianParams;
use crate::spectral::{
    boltzmann_populations, converge_cutoff, population_entropy, SpectralDecomposition,
};

/// Base frequency ω₀ = 1 fixing the unit system.
pub const BASE_FREQUENCY: f64 = 1.0;

/// Default Fock cutoff; ample for couplings up to g ≈ 3ω (field
/// displacement ⟨n⟩ ≈ (g/ω)² ≈ 9), and certified by [`converge_cutoff`].
pub const DEFAULT_N_MAX: usize = 40;

/// |W| below this is classed as [`Regime::Idle`].
pub const REGIME_TOL: f64 = 1e-12;

/// Which parameter the adiabats change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Fixed coupling g, frequency swept ω_h → ω_l → ω_h.
    ChangeFrequency { omega_h: f64, omega_l: f64, g: f64 },
    /// Fixed frequency ω, coupling swept g_h → g_l → g_h.
    ChangeCoupling { omega: f64, g_h: f64, g_l: f64 },
}

/// How the qubit half-splitting Δ follows the stage frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaMode {
    /// Δ = ω_stage / 2: the qubit gap tracks the field (the mode in which
    /// the uncoupled engine has η = 1 − ω_l/ω_h).
    #[default]
    Scaled,
    /// Δ = ω₀ / 2 regardless of stage, for sensitivity studies.
    Fixed,
}

/// How the bias ε follows the stage frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonMode {
    /// ε = coeff · ω_stage.
    #[default]
    Scaled,
    /// ε = coeff · ω₀.
    Fixed,
}

/// Fock-truncation policy for the cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisPolicy {
    Fixed(usize),
    /// Cutoff-doubling search at the given tolerance, sized by the more
    /// demanding stage.
    Adaptive { tol: f64 },
}

impl Default for BasisPolicy {
    fn default() -> Self {
        BasisPolicy::Fixed(DEFAULT_N_MAX)
    }
}

/// Full protocol definition for one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    pub protocol: Protocol,
    pub t_h: f64,
    pub t_l: f64,
    /// ε = epsilon_coeff · ω (per [`EpsilonMode`]).
    pub epsilon_coeff: f64,
    pub delta_mode: DeltaMode,
    pub epsilon_mode: EpsilonMode,
    pub basis_policy: BasisPolicy,
}

impl CycleSpec {
    /// Cycle with default Δ/ε scaling, ε = 0.005 ω and n_max = 40.
    pub fn new(protocol: Protocol, t_h: f64, t_l: f64) -> Result<Self> {
        let spec = Self {
            protocol,
            t_h,
            t_l,
            epsilon_coeff: crate::operators::DEFAULT_EPSILON_COEFF,
            delta_mode: DeltaMode::default(),
            epsilon_mode: EpsilonMode::default(),
            basis_policy: BasisPolicy::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_h.is_finite() || !self.t_l.is_finite() || self.t_l < 0.0 || self.t_h < self.t_l {
            return Err(Error::InvalidParameter(format!(
                "temperatures must satisfy T_h >= T_l >= 0, got T_h = {}, T_l = {}",
                self.t_h, self.t_l
            )));
        }
        if !self.epsilon_coeff.is_finite() || self.epsilon_coeff < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon_coeff must be >= 0, got {}",
                self.epsilon_coeff
            )));
        }
        match self.protocol {
            Protocol::ChangeFrequency { omega_h, omega_l, g } => {
                if !omega_h.is_finite() || !omega_l.is_finite() || omega_l <= 0.0 || omega_h < omega_l {
                    return Err(Error::InvalidParameter(format!(
                        "frequencies must satisfy omega_h >= omega_l > 0, got {omega_h}, {omega_l}"
                    )));
                }
                if !g.is_finite() || g < 0.0 {
                    return Err(Error::InvalidParameter(format!("g must be >= 0, got {g}")));
                }
            }
            Protocol::ChangeCoupling { omega, g_h, g_l } => {
                if !omega.is_finite() || omega <= 0.0 {
                    return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
                }
                if !g_h.is_finite() || !g_l.is_finite() || g_h < 0.0 || g_l < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "couplings must be >= 0, got g_h = {g_h}, g_l = {g_l}"
                    )));
                }
            }
        }
        if let BasisPolicy::Fixed(n_max) = self.basis_policy {
            BasisSpec::new(n_max)?;
        }
        Ok(())
    }

    fn delta(&self, omega_stage: f64) -> f64 {
        match self.delta_mode {
            DeltaMode::Scaled => omega_stage / 2.0,
            DeltaMode::Fixed => BASE_FREQUENCY / 2.0,
        }
    }

    fn epsilon(&self, omega_stage: f64) -> f64 {
        match self.epsilon_mode {
            EpsilonMode::Scaled => self.epsilon_coeff * omega_stage,
            EpsilonMode::Fixed => self.epsilon_coeff * BASE_FREQUENCY,
        }
    }

    /// Hamiltonian parameters of the hot and cold stages.
    pub fn stage_params(&self) -> Result<(HamiltonianParams, HamiltonianParams)> {
        self.validate()?;
        let (omega_h, omega_l, g_h, g_l) = match self.protocol {
            Protocol::ChangeFrequency { omega_h, omega_l, g } => (omega_h, omega_l, g, g),
            Protocol::ChangeCoupling { omega, g_h, g_l } => (omega, omega, g_h, g_l),
        };
        let hot = HamiltonianParams::new(omega_h, self.delta(omega_h), self.epsilon(omega_h), g_h)?;
        let cold = HamiltonianParams::new(omega_l, self.delta(omega_l), self.epsilon(omega_l), g_l)?;
        Ok((hot, cold))
    }
}

/// Operating regime classified from the net work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HeatEngine,
    RefrigeratorOrHeatPump,
    Idle,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::HeatEngine => "heat-engine",
            Regime::RefrigeratorOrHeatPump => "refrigerator-or-heat-pump",
            Regime::Idle => "idle",
        };
        f.write_str(s)
    }
}

/// HeatEngine if W > 1e−12, RefrigeratorOrHeatPump if W < −1e−12,
/// Idle otherwise.
pub fn classify_regime(w: f64) -> Regime {
    if w > REGIME_TOL {
        Regime::HeatEngine
    } else if w < -REGIME_TOL {
        Regime::RefrigeratorOrHeatPump
    } else {
        Regime::Idle
    }
}

/// Heat, work, efficiency and regime of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    /// Heat absorbed on the hot isochore.
    pub q1: f64,
    /// Heat exchanged on the cold isochore (negative when released).
    pub q2: f64,
    /// Net work W = Q₁ + Q₂ (same arithmetic, by construction).
    pub w: f64,
    /// η = W/Q₁, present only when W > 0.
    pub eta: Option<f64>,
    pub regime: Regime,
    /// Carnot bound 1 − T_l/T_h.
    pub carnot: f64,
}

/// Diagonalized hot and cold stages on one shared basis.
pub fn stage_hamiltonians(
    spec: &CycleSpec,
) -> Result<(SpectralDecomposition, SpectralDecomposition)> {
    let (hot_params, cold_params) = spec.stage_params()?;
    let basis = match spec.basis_policy {
        BasisPolicy::Fixed(n_max) => BasisSpec::new(n_max)?,
        BasisPolicy::Adaptive { tol } => {
            let hot_basis = converge_cutoff(&hot_params, spec.t_h, tol)?;
            let cold_basis = converge_cutoff(&cold_params, spec.t_l, tol)?;
            BasisSpec::new(hot_basis.n_max().max(cold_basis.n_max()))?
        }
    };
    let hot = SpectralDecomposition::from_params(&hot_params, basis)?;
    let cold = SpectralDecomposition::from_params(&cold_params, basis)?;
    Ok((hot, cold))
}

/// Cycle thermodynamics from already-diagonalized stages.
pub fn cycle_from_spectra(
    hot: &SpectralDecomposition,
    cold: &SpectralDecomposition,
    t_h: f64,
    t_l: f64,
) -> Result<CycleResult> {
    if hot.dim() != cold.dim() {
        return Err(Error::DimensionMismatch { expected: hot.dim(), got: cold.dim() });
    }
    let p_hot = boltzmann_populations(hot.energies(), t_h)?;
    let p_cold = boltzmann_populations(cold.energies(), t_l)?;
    let mut q1 = 0.0;
    let mut q2 = 0.0;
    for n in 0..hot.dim() {
        let dp = p_hot[n] - p_cold[n];
        q1 += hot.energies()[n] * dp;
        q2 -= cold.energies()[n] * dp;
    }
    let w = q1 + q2;
    let eta = if w > 0.0 { Some(w / q1) } else { None };
    let carnot = if t_h > 0.0 { 1.0 - t_l / t_h } else { 0.0 };
    Ok(CycleResult { q1, q2, w, eta, regime: classify_regime(w), carnot })
}

/// Run the full cycle: build stages, thermalize endpoints, apply the
/// heat/work bookkeeping above.
pub fn run_cycle(spec: &CycleSpec) -> Result<CycleResult> {
    let (hot, cold) = stage_hamiltonians(spec)?;
    cycle_from_spectra(&hot, &cold, spec.t_h, spec.t_l)
}

/// Temperature–entropy representation of the cycle.
///
/// Adiabats preserve populations, hence entropy: they are vertical in T–S.
/// The effective corner temperatures close the loop by entropy matching:
/// T₂* solves S_hot(T₂*) = S_cold(T_l) and T₄* solves S_cold(T₄*) = S_hot(T_h).
#[derive(Debug, Clone)]
pub struct TSDiagram {
    /// (T, S) samples along the hot-spectrum isochore, T₂* → T_h.
    pub hot_isochore: Vec<(f64, f64)>,
    /// (T, S) samples along the cold-spectrum isochore, T₄* → T_l.
    pub cold_isochore: Vec<(f64, f64)>,
    /// Effective temperature at the start of the hot isochore.
    pub t2_star: f64,
    /// Effective temperature at the start of the cold isochore.
    pub t4_star: f64,
    /// ∮ T dS around the closed loop (trapezoid rule).
    pub loop_area: f64,
}

/// Bisection tolerance for the entropy-matched corner temperatures.
const ENTROPY_MATCH_TOL: f64 = 1e-8;

fn entropy_at(energies: &[f64], t: f64) -> f64 {
    population_entropy(&boltzmann_populations(energies, t).expect("t >= 0"))
}

/// Solve S(T*) = target on (0, upper] by bisection; S is nondecreasing in T.
fn match_entropy(energies: &[f64], target: f64, upper: f64) -> Result<f64> {
    if entropy_at(energies, upper) < target {
        return Err(Error::EntropyMatchFailed { upper });
    }
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > ENTROPY_MATCH_TOL {
        let mid = 0.5 * (lo + hi);
        if entropy_at(energies, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Compute the T–S diagram of a positive-work cycle.
pub fn ts_diagram(spec: &CycleSpec, points_per_isochore: usize) -> Result<TSDiagram> {
    if points_per_isochore < 16 {
        return Err(Error::InvalidParameter(format!(
            "points_per_isochore must be >= 16, got {points_per_isochore}"
        )));
    }
    let (hot, cold) = stage_hamiltonians(spec)?;
    let result = cycle_from_spectra(&hot, &cold, spec.t_h, spec.t_l)?;
    if result.w <= 0.0 {
        return Err(Error::NonPositiveWork { w: result.w });
    }
    let upper = 10.0 * spec.t_h;
    let s_cold_floor = entropy_at(cold.energies(), spec.t_l);
    let s_hot_ceiling = entropy_at(hot.energies(), spec.t_h);
    let t2_star = match_entropy(hot.energies(), s_cold_floor, upper)?;
    let t4_star = match_entropy(cold.energies(), s_hot_ceiling, upper)?;

    let sample = |energies: &[f64], from: f64, to: f64| -> Vec<(f64, f64)> {
        (0..points_per_isochore)
            .map(|i| {
                let x = i as f64 / (points_per_isochore - 1) as f64;
                let t = from + (to - from) * x;
                (t, entropy_at(energies, t))
            })
            .collect()
    };
    let hot_isochore = sample(hot.energies(), t2_star, spec.t_h);
    let cold_isochore = sample(cold.energies(), t4_star, spec.t_l);

    // ∮ T dS: isochores in traversal order; the vertical adiabats carry dS = 0
    let mut loop_area = 0.0;
    for leg in [&hot_isochore, &cold_isochore] {
        for pair in leg.windows(2) {
            let (t0, s0) = pair[0];
            let (t1, s1) = pair[1];
            loop_area += 0.5 * (t0 + t1) * (s1 - s0);
        }
    }

    Ok(TSDiagram { hot_isochore, cold_isochore, t2_star, t4_star, loop_area })
}
