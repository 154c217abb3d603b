//! Deterministic CSV output: UTF-8, LF line endings, numbers at 12
//! significant digits, byte-identical across repeated identical runs.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

/// 12 significant digits in scientific notation; -0 normalized.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            // cells must not introduce separators or line breaks
            Cell::Text(s) => s.replace([',', '\n', '\r'], ";"),
            Cell::Empty => String::new(),
        }
    }
}

/// Render a full CSV document: optional `#` comment lines, a header, rows.
pub fn render_csv(comments: &[String], header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Write to the path, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Physical-scale annotation for `--ghz`.
pub fn ghz_comments(ghz: f64) -> Vec<String> {
    const HBAR: f64 = 1.054_571_817e-34; // J s
    const K_B: f64 = 1.380_649e-23; // J/K
    let omega0 = 2.0 * std::f64::consts::PI * ghz * 1e9;
    let energy_j = HBAR * omega0;
    let temp_k = energy_j / K_B;
    vec![
        "units: hbar = k_B = 1; energies in hbar*omega0, temperatures in hbar*omega0/k_B".into(),
        format!(
            "omega0/2pi = {ghz} GHz: hbar*omega0 = {:.6e} J, hbar*omega0/k_B = {:.6e} K",
            energy_j, temp_k
        ),
    ]
}
