//! Whole-table runs: every (N, M, scheme, order) cell of one of the seven
//! benchmark tables, emitted as a CSV and an aligned text table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use ffsl::Norm;

use crate::config::{ExperimentConfig, ExperimentId, Scheme};
use crate::output::{self, ReportRow};
use crate::runner::run_experiment;

pub struct TableSpec {
    pub id: usize,
    pub experiment: ExperimentId,
    pub norm: Norm,
    pub rows: &'static [(usize, usize)],
    pub title: &'static str,
}

const CONST_ROWS: &[(usize, usize)] = &[
    (200, 50),
    (200, 100),
    (200, 200),
    (400, 100),
    (400, 200),
    (400, 400),
];
const VARIABLE_ROWS: &[(usize, usize)] = &[(50, 50), (100, 25), (100, 100), (200, 50)];
const POROUS_ROWS: &[(usize, usize)] =
    &[(50, 320), (100, 640), (200, 1280), (400, 2560), (800, 5120)];

/// Scheme columns shared by every table: SL with linear and cubic
/// interpolation, FFSL with constant and quadratic reconstruction.
pub const COLUMNS: [(Scheme, usize); 4] = [
    (Scheme::Sl, 1),
    (Scheme::Sl, 3),
    (Scheme::Ffsl, 0),
    (Scheme::Ffsl, 2),
];

pub fn table_spec(id: usize) -> Result<TableSpec> {
    let spec = match id {
        1 => TableSpec {
            id,
            experiment: ExperimentId::ConstDiffusion,
            norm: Norm::L2,
            rows: CONST_ROWS,
            title: "constant-coefficient diffusion, relative l2 errors",
        },
        2 => TableSpec {
            id,
            experiment: ExperimentId::ConstDiffusion,
            norm: Norm::LInf,
            rows: CONST_ROWS,
            title: "constant-coefficient diffusion, relative linf errors",
        },
        3 => TableSpec {
            id,
            experiment: ExperimentId::ConstAdvdiff,
            norm: Norm::L2,
            rows: CONST_ROWS,
            title: "constant-coefficient advection-diffusion, relative l2 errors",
        },
        4 => TableSpec {
            id,
            experiment: ExperimentId::ConstAdvdiff,
            norm: Norm::LInf,
            rows: CONST_ROWS,
            title: "constant-coefficient advection-diffusion, relative linf errors",
        },
        5 => TableSpec {
            id,
            experiment: ExperimentId::VariableDiffusion,
            norm: Norm::L2,
            rows: VARIABLE_ROWS,
            title: "variable-coefficient diffusion, relative l2 errors",
        },
        6 => TableSpec {
            id,
            experiment: ExperimentId::VariableDiffusion,
            norm: Norm::LInf,
            rows: VARIABLE_ROWS,
            title: "variable-coefficient diffusion, relative linf errors",
        },
        7 => TableSpec {
            id,
            experiment: ExperimentId::PorousMedia,
            norm: Norm::L2,
            rows: POROUS_ROWS,
            title: "porous-medium (Barenblatt) solution, relative l2 errors",
        },
        other => bail!("table id {other} is out of range (1..=7)"),
    };
    Ok(spec)
}

pub struct TableOutput {
    pub csv_path: PathBuf,
    pub txt_path: PathBuf,
    pub text: String,
    pub rows: Vec<ReportRow>,
}

/// Run every cell of the table and emit `table<id>.csv` plus an aligned
/// text rendering. Cells run in a fixed order, so the outputs are
/// deterministic up to the runtime column.
pub fn run_table(id: usize, out_dir: &Path, mut progress: impl FnMut(&str)) -> Result<TableOutput> {
    let spec = table_spec(id)?;
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for &(n, m) in spec.rows {
        let mut errors = Vec::new();
        for (scheme, order) in COLUMNS {
            let config = ExperimentConfig::new(spec.experiment, scheme, order, n, m)?;
            progress(&format!(
                "table {id}: {} {} N={n} M={m}",
                spec.experiment,
                scheme.label(order)
            ));
            let outcome = run_experiment(&config)?;
            let err = match spec.norm {
                Norm::L2 => outcome.report.l2_rel,
                Norm::LInf => outcome.report.linf_rel,
            };
            errors.push(err.unwrap_or(f64::NAN));
            rows.push(ReportRow::new(&config, &outcome.report, outcome.runtime_s));
        }
        let last = &rows[rows.len() - 1].report;
        cells.push((n, m, last.mu, last.courant, errors));
    }

    let text = render_text(&spec, &cells);
    let csv_path = out_dir.join(format!("table{id}.csv"));
    let txt_path = out_dir.join(format!("table{id}.txt"));
    output::write_report_csv(&csv_path, &rows)?;
    output::write_atomic(&txt_path, &text)?;
    Ok(TableOutput {
        csv_path,
        txt_path,
        text,
        rows,
    })
}

#[allow(clippy::type_complexity)]
fn render_text(
    spec: &TableSpec,
    cells: &[(usize, usize, Option<f64>, Option<f64>, Vec<f64>)],
) -> String {
    let mut text = format!("Table {}: {}\n", spec.id, spec.title);
    let _ = writeln!(
        text,
        "{:>6} {:>6} {:>7} {:>6}  {:>12} {:>12} {:>12} {:>12}",
        "N", "M", "mu", "C", "SL I1", "SL I3", "FFSL R0", "FFSL R2"
    );
    for (n, m, mu, c, errors) in cells {
        let mu = mu.map_or("-".to_string(), |v| format!("{v:.3}"));
        let c = c.map_or("-".to_string(), |v| format!("{v:.3}"));
        let _ = writeln!(
            text,
            "{n:>6} {m:>6} {mu:>7} {c:>6}  {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
            errors[0], errors[1], errors[2], errors[3]
        );
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_cover_the_seven_tables() {
        for id in 1..=7 {
            let spec = table_spec(id).unwrap();
            assert_eq!(spec.id, id);
            assert!(!spec.rows.is_empty());
        }
        assert!(table_spec(0).is_err());
        assert!(table_spec(8).is_err());
    }

    #[test]
    fn table_one_shape() {
        let spec = table_spec(1).unwrap();
        assert_eq!(spec.rows.len(), 6);
        assert_eq!(COLUMNS.len(), 4);
        let spec = table_spec(7).unwrap();
        assert_eq!(spec.rows.len(), 5);
        let spec = table_spec(5).unwrap();
        assert!(spec.rows.contains(&(200, 50)));
    }
}
