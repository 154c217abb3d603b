//! Subcommand implementations.

use rabi_otto::cycle::{
    self, cycle_from_spectra, stage_hamiltonians, ts_diagram, BasisPolicy, CycleResult, CycleSpec,
    DeltaMode, EpsilonMode, Protocol,
};
use rabi_otto::measures::MeasureReport;
use rabi_otto::operators::{HamiltonianParams, DEFAULT_EPSILON_COEFF};
use rabi_otto::spectral::{
    boltzmann_populations, converge_cutoff, gibbs_state, SpectralDecomposition,
};
use rabi_otto::thermalization::{build_rate_matrix, steady_populations, BathCoupling};
use rabi_otto::BasisSpec;
use rayon::prelude::*;

use crate::args::*;
use crate::error::CliError;
use crate::output::{format_number, ghz_comments, render_csv, write_output, Cell};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(args) => spectrum(args),
        Command::Cycle(args) => cycle_cmd(args),
        Command::Sweep(args) => sweep(args),
        Command::Measures(args) => measures_cmd(args),
        Command::TsDiagram(args) => ts_diagram_cmd(args),
        Command::VerifyThermalization(args) => verify_thermalization(args),
    }
}

fn comments(common: &CommonArgs) -> Vec<String> {
    common.ghz.map(ghz_comments).unwrap_or_default()
}

/// Single-Hamiltonian parameters with Δ = ω/2, ε = 0.005ω defaults.
fn single_params(
    omega: f64,
    g: f64,
    delta: Option<f64>,
    epsilon: Option<f64>,
) -> Result<HamiltonianParams, CliError> {
    HamiltonianParams::new(
        omega,
        delta.unwrap_or(omega / 2.0),
        epsilon.unwrap_or(DEFAULT_EPSILON_COEFF * omega),
        g,
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

/// Resolve the basis for a single-Hamiltonian command.
fn single_basis(
    common: &CommonArgs,
    params: &HamiltonianParams,
    temperature: f64,
) -> Result<BasisSpec, CliError> {
    if common.adaptive {
        Ok(converge_cutoff(params, temperature, common.tol)?)
    } else {
        BasisSpec::new(common.n_max).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Assemble a CycleSpec from protocol flags; mixed or incomplete protocol
/// selections are configuration errors.
fn build_cycle_spec(p: &ProtocolArgs, common: &CommonArgs) -> Result<CycleSpec, CliError> {
    let freq_given = p.omega_h.is_some() || p.omega_l.is_some();
    let coupling_given = p.omega.is_some() || p.g_h.is_some() || p.g_l.is_some();
    let protocol = match (freq_given, coupling_given) {
        (true, true) => {
            return Err(CliError::Config(
                "choose one protocol: --omega-h/--omega-l/--g or --omega/--g-h/--g-l".into(),
            ))
        }
        (true, false) => Protocol::ChangeFrequency {
            omega_h: p
                .omega_h
                .ok_or_else(|| CliError::Config("frequency protocol requires omega-h".into()))?,
            omega_l: p
                .omega_l
                .ok_or_else(|| CliError::Config("frequency protocol requires omega-l".into()))?,
            g: p.g.unwrap_or(0.0),
        },
        (false, true) => Protocol::ChangeCoupling {
            omega: p
                .omega
                .ok_or_else(|| CliError::Config("coupling protocol requires omega".into()))?,
            g_h: p
                .g_h
                .ok_or_else(|| CliError::Config("coupling protocol requires g-h".into()))?,
            g_l: p
                .g_l
                .ok_or_else(|| CliError::Config("coupling protocol requires g-l".into()))?,
        },
        (false, false) => {
            return Err(CliError::Config(
                "no protocol given: provide --omega-h/--omega-l [--g] or --omega/--g-h/--g-l"
                    .into(),
            ))
        }
    };
    let mode = |m: ModeArg| match m {
        ModeArg::Scaled => DeltaMode::Scaled,
        ModeArg::Fixed => DeltaMode::Fixed,
    };
    let emode = |m: ModeArg| match m {
        ModeArg::Scaled => EpsilonMode::Scaled,
        ModeArg::Fixed => EpsilonMode::Fixed,
    };
    let mut spec = CycleSpec::new(protocol, p.t_h.expect("required"), p.t_l.expect("required"))
        .map_err(|e| CliError::Config(e.to_string()))?;
    spec.epsilon_coeff = p.epsilon_coeff;
    spec.delta_mode = mode(p.delta_mode);
    spec.epsilon_mode = emode(p.epsilon_mode);
    spec.basis_policy = if common.adaptive {
        BasisPolicy::Adaptive { tol: common.tol }
    } else {
        BasisPolicy::Fixed(common.n_max)
    };
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

fn spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let params = single_params(args.omega, args.g, args.delta, args.epsilon)?;
    let basis = single_basis(&args.common, &params, 0.0)?;
    let spec = SpectralDecomposition::from_params(&params, basis)?;
    let count = args.levels.unwrap_or(spec.dim()).min(spec.dim());
    let rows: Vec<Vec<Cell>> = spec.energies()[..count]
        .iter()
        .enumerate()
        .map(|(n, &e)| vec![Cell::Int(n), Cell::Num(e)])
        .collect();
    let doc = render_csv(&comments(&args.common), &["n", "energy"], &rows);
    write_output(args.common.output.as_deref(), &doc)
}

const CYCLE_HEADER: &[&str] = &[
    "g", "T_h", "T_l", "Q1", "Q2", "W", "eta", "regime", "carnot", "omega_h", "omega_l", "g_h",
    "g_l", "error",
];

fn cycle_param_cells(spec: &CycleSpec) -> (Cell, [Cell; 4]) {
    let (omega_h, omega_l, g_h, g_l) = match spec.protocol {
        Protocol::ChangeFrequency { omega_h, omega_l, g } => (omega_h, omega_l, g, g),
        Protocol::ChangeCoupling { omega, g_h, g_l } => (omega, omega, g_h, g_l),
    };
    let g_cell = if g_h == g_l { Cell::Num(g_h) } else { Cell::Empty };
    (g_cell, [Cell::Num(omega_h), Cell::Num(omega_l), Cell::Num(g_h), Cell::Num(g_l)])
}

fn cycle_row(spec: &CycleSpec, outcome: &Result<CycleResult, rabi_otto::Error>) -> Vec<Cell> {
    let (g_cell, [oh, ol, gh, gl]) = cycle_param_cells(spec);
    let mut row = vec![g_cell, Cell::Num(spec.t_h), Cell::Num(spec.t_l)];
    match outcome {
        Ok(r) => {
            row.extend([
                Cell::Num(r.q1),
                Cell::Num(r.q2),
                Cell::Num(r.w),
                r.eta.map_or(Cell::Empty, Cell::Num),
                Cell::Text(r.regime.to_string()),
                Cell::Num(r.carnot),
                oh,
                ol,
                gh,
                gl,
                Cell::Empty,
            ]);
        }
        Err(e) => {
            row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                oh,
                ol,
                gh,
                gl,
                Cell::Text(e.to_string()),
            ]);
        }
    }
    row
}

fn cycle_cmd(args: CycleArgs) -> Result<(), CliError> {
    let spec = build_cycle_spec(&args.protocol, &args.common)?;
    let result = cycle::run_cycle(&spec)?;
    let mut text = String::new();
    for c in comments(&args.common) {
        text.push_str(&format!("# {c}\n"));
    }
    text.push_str(&format!("Q1 = {}\n", format_number(result.q1)));
    text.push_str(&format!("Q2 = {}\n", format_number(result.q2)));
    text.push_str(&format!("W = {}\n", format_number(result.w)));
    match result.eta {
        Some(eta) => text.push_str(&format!("eta = {}\n", format_number(eta))),
        None => text.push_str("eta = undefined (W <= 0)\n"),
    }
    text.push_str(&format!("regime = {}\n", result.regime));
    text.push_str(&format!("carnot = {}\n", format_number(result.carnot)));
    if let Some(path) = args.common.output.as_deref() {
        let doc = render_csv(
            &comments(&args.common),
            CYCLE_HEADER,
            &[cycle_row(&spec, &Ok(result))],
        );
        write_output(Some(path), &doc)?;
    }
    print!("{text}");
    Ok(())
}

const MEASURE_FIELDS: &[&str] = &["coh", "amp", "g2", "s_atom", "s_field", "s_total", "mi", "en"];

fn measure_cells(report: &MeasureReport) -> Vec<Cell> {
    vec![
        Cell::Num(report.atom_coherence),
        Cell::Num(report.field_amplitude_abs),
        report.g2.map_or(Cell::Empty, Cell::Num),
        Cell::Num(report.s_atom),
        Cell::Num(report.s_field),
        Cell::Num(report.s_total),
        Cell::Num(report.mutual_info),
        Cell::Num(report.log_negativity),
    ]
}

/// Apply one grid value to the swept variable; incompatible combinations
/// are configuration errors.
fn apply_variable(
    spec: &CycleSpec,
    variable: SweepVariable,
    value: f64,
) -> Result<CycleSpec, CliError> {
    let mut out = *spec;
    match (variable, &mut out.protocol) {
        (SweepVariable::G, Protocol::ChangeFrequency { g, .. }) => *g = value,
        (SweepVariable::OmegaH, Protocol::ChangeFrequency { omega_h, .. }) => *omega_h = value,
        (SweepVariable::GH, Protocol::ChangeCoupling { g_h, .. }) => *g_h = value,
        (SweepVariable::GL, Protocol::ChangeCoupling { g_l, .. }) => *g_l = value,
        (SweepVariable::TH, _) => out.t_h = value,
        (SweepVariable::TL, _) => out.t_l = value,
        (var, _) => {
            return Err(CliError::Config(format!(
                "sweep variable {var:?} does not apply to the chosen protocol"
            )))
        }
    }
    Ok(out)
}

/// One sweep point: cycle result plus optional per-stage measure reports.
fn evaluate_point(spec: &CycleSpec, with_measures: bool) -> Vec<Cell> {
    let stages = match stage_hamiltonians(spec) {
        Ok(s) => s,
        Err(e) => {
            let mut row = cycle_row(spec, &Err(e));
            if with_measures {
                let error = row.pop().expect("error cell");
                row.extend(std::iter::repeat_with(|| Cell::Empty).take(2 * MEASURE_FIELDS.len()));
                row.push(error);
            }
            return row;
        }
    };
    let (hot, cold) = stages;
    let outcome = cycle_from_spectra(&hot, &cold, spec.t_h, spec.t_l);
    let mut row = cycle_row(spec, &outcome);
    if with_measures {
        let error = row.pop().expect("error cell");
        let reports = gibbs_state(&hot, spec.t_h)
            .and_then(|sh| Ok((MeasureReport::compute(sh.rho())?, gibbs_state(&cold, spec.t_l)?)))
            .and_then(|(rh, sc)| Ok((rh, MeasureReport::compute(sc.rho())?)));
        match reports {
            Ok((hot_report, cold_report)) => {
                row.extend(measure_cells(&hot_report));
                row.extend(measure_cells(&cold_report));
                row.push(error);
            }
            Err(e) => {
                row.extend(std::iter::repeat_with(|| Cell::Empty).take(2 * MEASURE_FIELDS.len()));
                row.push(Cell::Text(e.to_string()));
            }
        }
    }
    row
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    if !args.start.is_finite() || !args.stop.is_finite() || args.start >= args.stop {
        return Err(CliError::Config(format!(
            "sweep requires start < stop, got {} and {}",
            args.start, args.stop
        )));
    }
    if args.points < 2 {
        return Err(CliError::Config(format!(
            "sweep requires points >= 2, got {}",
            args.points
        )));
    }
    let template = build_cycle_spec(&args.protocol, &args.common)?;
    let grid: Vec<f64> = (0..args.points)
        .map(|i| args.start + (args.stop - args.start) * i as f64 / (args.points - 1) as f64)
        .collect();
    // validate the variable/protocol combination before any computation
    apply_variable(&template, args.variable, grid[0])?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let rows: Vec<Vec<Cell>> = pool.install(|| {
        grid.par_iter()
            .map(|&value| {
                // template was validated with grid[0]; later values cannot fail here
                let spec = apply_variable(&template, args.variable, value).expect("validated");
                evaluate_point(&spec, args.measures)
            })
            .collect()
    });

    let mut header: Vec<&str> = CYCLE_HEADER.to_vec();
    let with_measures: Vec<String>;
    if args.measures {
        with_measures = ["h", "l"]
            .iter()
            .flat_map(|stage| MEASURE_FIELDS.iter().map(move |f| format!("{f}_{stage}")))
            .collect();
        let error = header.pop().expect("error column");
        header.extend(with_measures.iter().map(String::as_str));
        header.push(error);
    }
    let doc = render_csv(&comments(&args.common), &header, &rows);
    write_output(args.common.output.as_deref(), &doc)
}

fn measures_cmd(args: MeasuresArgs) -> Result<(), CliError> {
    let t = args.t.expect("required");
    if !t.is_finite() || t < 0.0 {
        return Err(CliError::Config(format!("t must be >= 0, got {t}")));
    }
    let params = single_params(args.omega, args.g, args.delta, args.epsilon)?;
    let basis = single_basis(&args.common, &params, t)?;
    let spec = SpectralDecomposition::from_params(&params, basis)?;
    let state = gibbs_state(&spec, t)?;
    let report = MeasureReport::compute(state.rho())?;

    let mut text = String::new();
    for c in comments(&args.common) {
        text.push_str(&format!("# {c}\n"));
    }
    text.push_str(&format!("atom_coherence = {}\n", format_number(report.atom_coherence)));
    text.push_str(&format!("field_amplitude = {}\n", format_number(report.field_amplitude)));
    text.push_str(&format!(
        "field_amplitude_abs = {}\n",
        format_number(report.field_amplitude_abs)
    ));
    match report.g2 {
        Some(g2) => text.push_str(&format!("g2 = {}\n", format_number(g2))),
        None => text.push_str("g2 = undefined (field at vacuum level)\n"),
    }
    text.push_str(&format!("s_atom = {}\n", format_number(report.s_atom)));
    text.push_str(&format!("s_field = {}\n", format_number(report.s_field)));
    text.push_str(&format!("s_total = {}\n", format_number(report.s_total)));
    text.push_str(&format!("mutual_info = {}\n", format_number(report.mutual_info)));
    text.push_str(&format!("log_negativity = {}\n", format_number(report.log_negativity)));
    if let Some(path) = args.common.output.as_deref() {
        let mut header = vec!["omega", "g", "T"];
        header.extend(MEASURE_FIELDS);
        let mut row = vec![Cell::Num(args.omega), Cell::Num(args.g), Cell::Num(t)];
        row.extend(measure_cells(&report));
        let doc = render_csv(&comments(&args.common), &header, &[row]);
        write_output(Some(path), &doc)?;
    }
    print!("{text}");
    Ok(())
}

fn ts_diagram_cmd(args: TsDiagramArgs) -> Result<(), CliError> {
    let spec = build_cycle_spec(&args.protocol, &args.common)?;
    let result = cycle::run_cycle(&spec)?;
    let diagram = ts_diagram(&spec, args.points_per_isochore)?;
    let mut notes = comments(&args.common);
    notes.push(format!("t2_star = {}", format_number(diagram.t2_star)));
    notes.push(format!("t4_star = {}", format_number(diagram.t4_star)));
    notes.push(format!("loop_area = {}", format_number(diagram.loop_area)));
    notes.push(format!("W = {}", format_number(result.w)));
    if let Some(eta) = result.eta {
        notes.push(format!("eta = {}", format_number(eta)));
    }
    notes.push(format!("carnot = {}", format_number(result.carnot)));
    let mut rows = Vec::new();
    for (stage, leg) in [("hot", &diagram.hot_isochore), ("cold", &diagram.cold_isochore)] {
        for &(t, s) in leg {
            rows.push(vec![Cell::Text(stage.into()), Cell::Num(t), Cell::Num(s)]);
        }
    }
    let doc = render_csv(&notes, &["stage", "T", "S"], &rows);
    write_output(args.common.output.as_deref(), &doc)
}

fn verify_thermalization(args: VerifyArgs) -> Result<(), CliError> {
    let t = args.t.expect("required");
    if !t.is_finite() || t <= 0.0 {
        return Err(CliError::Config(format!("t must be > 0, got {t}")));
    }
    if args.rate_scales.is_empty() {
        return Err(CliError::Config("rate-scales must not be empty".into()));
    }
    let params = single_params(args.omega, args.g, None, None)?;
    let basis = single_basis(&args.common, &params, t)?;
    let spec = SpectralDecomposition::from_params(&params, basis)?;
    let boltzmann = boltzmann_populations(spec.energies(), t)?;
    let couplings: Vec<BathCoupling> = match args.coupling {
        CouplingArg::FieldQuadrature => vec![BathCoupling::FieldQuadrature],
        CouplingArg::QubitX => vec![BathCoupling::QubitX],
        CouplingArg::Both => vec![BathCoupling::Both],
        CouplingArg::All => {
            vec![BathCoupling::FieldQuadrature, BathCoupling::QubitX, BathCoupling::Both]
        }
    };
    let mut text = String::new();
    for c in comments(&args.common) {
        text.push_str(&format!("# {c}\n"));
    }
    let mut worst = 0.0_f64;
    for &coupling in &couplings {
        for &scale in &args.rate_scales {
            let rates = build_rate_matrix(&spec, t, coupling, scale)?;
            let steady = steady_populations(&rates)?;
            let deviation = steady
                .iter()
                .zip(&boltzmann)
                .map(|(s, b)| (s - b).abs())
                .fold(0.0_f64, f64::max);
            worst = worst.max(deviation);
            let verdict = if deviation <= args.tolerance { "PASS" } else { "FAIL" };
            text.push_str(&format!(
                "coupling={coupling:?} scale={scale}: max|steady - boltzmann| = {} {verdict}\n",
                format_number(deviation)
            ));
        }
    }
    let combos = couplings.len() * args.rate_scales.len();
    if worst <= args.tolerance {
        text.push_str(&format!(
            "PASS: steady state matches the Gibbs distribution for all {combos} rate choices\n"
        ));
        write_output(args.common.output.as_deref(), &text)
    } else {
        print!("{text}");
        Err(CliError::Numerical(format!(
            "steady state deviates from the Gibbs distribution by {worst:.3e} (tolerance {:.3e})",
            args.tolerance
        )))
    }
}
