//! File emission: report CSVs, aligned text tables and ASCII plot data.
//! Every file is written to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use ffsl::{CellField, CellField2D, ErrorReport};

use crate::config::ExperimentConfig;

/// One CSV row of the run reports.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub experiment: String,
    pub report: ErrorReport,
    pub runtime_s: f64,
}

impl ReportRow {
    pub fn new(config: &ExperimentConfig, report: &ErrorReport, runtime_s: f64) -> Self {
        Self {
            experiment: config.experiment.name().to_string(),
            report: report.clone(),
            runtime_s,
        }
    }
}

pub const CSV_HEADER: &str =
    "experiment,scheme,order,N,M,mu,C,l2_rel,linf_rel,mass_drift_rel,runtime_s";

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_default()
}

/// Serialize rows with fixed formats so identical runs give identical bytes
/// (the runtime column is the one nondeterministic field).
pub fn csv_lines(rows: &[ReportRow]) -> String {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in rows {
        let r = &row.report;
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{:.6e},{:.3}",
            row.experiment,
            r.scheme,
            r.order,
            r.cells,
            r.steps,
            opt(r.mu, |v| format!("{v:.4}")),
            opt(r.courant, |v| format!("{v:.4}")),
            opt(r.l2_rel, |v| format!("{v:.6e}")),
            opt(r.linf_rel, |v| format!("{v:.6e}")),
            r.mass_drift_rel,
            row.runtime_s,
        );
    }
    text
}

pub fn write_report_csv(path: &Path, rows: &[ReportRow]) -> Result<()> {
    write_atomic(path, &csv_lines(rows))
}

/// Two- or three-column whitespace-delimited profile: x, numerical value and
/// the reference value at the same cell. `offset` shifts the emitted
/// abscissa (profiles centered on the periodic seam are unwrapped by the
/// caller passing -L/2); rows come out sorted by the shifted coordinate.
pub fn write_profile(
    path: &Path,
    numerical: &CellField,
    reference: &CellField,
    offset: f64,
) -> Result<()> {
    let grid = numerical.grid;
    let mut rows: Vec<(f64, f64, f64)> = (0..grid.cells)
        .map(|i| {
            let x = grid.cell_center(i);
            // offset = -L/2 unwraps a seam-centered profile to [-L/2, L/2)
            let x_out = if offset != 0.0 && x >= -offset {
                x - grid.length
            } else {
                x
            };
            (x_out, numerical.values()[i], reference.values()[i])
        })
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut text = String::new();
    for (x, num, rf) in rows {
        let _ = writeln!(text, "{x:.8e} {num:.8e} {rf:.8e}");
    }
    write_atomic(path, &text)
}

/// Grid of (x, y, value) rows suitable for contouring, blank line between
/// x-slices. `offset` shifts both coordinates.
pub fn write_field_2d(path: &Path, field: &CellField2D, offset: f64) -> Result<()> {
    let grid = field.grid;
    let mut text = String::new();
    for ix in 0..grid.cells_x {
        let x = (ix as f64 + 0.5) * grid.dx + offset;
        for iy in 0..grid.cells_y {
            let y = (iy as f64 + 0.5) * grid.dx + offset;
            let _ = writeln!(text, "{x:.8e} {y:.8e} {:.8e}", field.at(ix, iy));
        }
        text.push('\n');
    }
    write_atomic(path, &text)
}

/// Compact time tag for filenames: 2 -> "2", 0.5 -> "0p5".
pub fn time_tag(t: f64) -> String {
    if t == t.trunc() {
        format!("{}", t as i64)
    } else {
        format!("{t}").replace('.', "p")
    }
}

pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().context("output path has no parent")?;
    fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
