//! Error norms and conservation diagnostics.

use crate::error::{FfslError, Result};
use crate::field::{CellField, CellField2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    LInf,
}

fn norm_of(values: impl Iterator<Item = f64>, dx: f64, norm: Norm) -> f64 {
    match norm {
        Norm::L2 => values.map(|v| v * v * dx).sum::<f64>().sqrt(),
        Norm::LInf => values.fold(0.0f64, |m, v| m.max(v.abs())),
    }
}

/// `||v - u|| / ||u||`. The l2 norm carries the cell-width weight so it
/// approximates the continuous one; relative errors are unaffected by the
/// weight either way.
pub fn relative_error(v: &CellField, u: &CellField, norm: Norm) -> Result<f64> {
    if v.grid != u.grid {
        return Err(FfslError::GridMismatch);
    }
    let dx = u.grid.dx;
    let diff = norm_of(
        v.values().iter().zip(u.values()).map(|(a, b)| a - b),
        dx,
        norm,
    );
    let reference = norm_of(u.values().iter().copied(), dx, norm);
    if reference == 0.0 {
        return Err(FfslError::ZeroReferenceNorm);
    }
    Ok(diff / reference)
}

/// Total mass `sum v_i dx`.
pub fn total_mass(field: &CellField) -> f64 {
    field.values().iter().sum::<f64>() * field.grid.dx
}

/// Total mass `sum v_ij dx^2`.
pub fn total_mass_2d(field: &CellField2D) -> f64 {
    field.values().iter().sum::<f64>() * field.grid.dx * field.grid.dx
}

/// Relative drift `|after - before| / |before|` of a conserved quantity.
pub fn relative_drift(before: f64, after: f64) -> f64 {
    (after - before).abs() / before.abs()
}

/// Outcome of one experiment run: norms against the reference, mass
/// bookkeeping, and the run's identifying parameters.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// Scheme id such as "SL/I3" or "FFSL/R2".
    pub scheme: String,
    pub order: usize,
    pub cells: usize,
    pub steps: usize,
    /// Diffusive stability parameter `nu dt / dx^2`, where defined.
    pub mu: Option<f64>,
    /// Courant number `a dt / dx`, where defined.
    pub courant: Option<f64>,
    /// Relative errors against the designated reference; absent when the
    /// experiment has no reference solution.
    pub l2_rel: Option<f64>,
    pub linf_rel: Option<f64>,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub mass_drift_rel: f64,
}
