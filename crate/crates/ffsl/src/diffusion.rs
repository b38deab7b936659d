//! One explicit step of the nonconservative (interpolation-based) and the
//! conservative flux-form schemes for `u_t = (nu u_x)_x` on a periodic grid.
//!
//! The flux-form step reconstructs the cell averages once, then moves mass
//! through every interface `x_k` according to
//!
//! ```text
//! F_k = 1/2 * ( int_{x_k}^{x_k+delta_k} R[V]  -  int_{x_k-delta_k}^{x_k} R[V] )
//! v_i <- v_i + (F_{i+1/2} - F_{i-1/2}) / dx
//! ```
//!
//! with `delta_k = sqrt(2 dt nu(x_k, t_n))`. The fluxes telescope, so total
//! mass is conserved to rounding no matter how `delta` is chosen. Diffusivity
//! values are always frozen at the step's start time.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{FfslError, Result};
use crate::field::CellField;
use crate::reconstruct::{
    build_reconstruction, lagrange_interpolate, NodeInterpolant, PiecewiseReconstruction,
};

/// Diffusion coefficient: a constant, a space-time field, or the power law
/// `nu(u) = m u^(m-1)` of the porous-medium equation.
#[derive(Clone)]
pub enum DiffusivityModel {
    Constant(f64),
    SpaceTime(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
    PowerLaw { exponent: f64 },
}

impl fmt::Debug for DiffusivityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(nu) => write!(f, "Constant({nu})"),
            Self::SpaceTime(_) => write!(f, "SpaceTime(..)"),
            Self::PowerLaw { exponent } => write!(f, "PowerLaw {{ exponent: {exponent} }}"),
        }
    }
}

impl DiffusivityModel {
    pub fn constant(nu: f64) -> Result<Self> {
        if nu < 0.0 || !nu.is_finite() {
            return Err(FfslError::NegativeDiffusivity {
                nu,
                x: f64::NAN,
                t: f64::NAN,
            });
        }
        Ok(Self::Constant(nu))
    }

    pub fn space_time(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::SpaceTime(Arc::new(f))
    }

    pub fn power_law(exponent: f64) -> Result<Self> {
        if !(exponent > 1.0) {
            return Err(FfslError::InvalidExponent(exponent));
        }
        Ok(Self::PowerLaw { exponent })
    }

    pub fn is_state_dependent(&self) -> bool {
        matches!(self, Self::PowerLaw { .. })
    }

    /// Evaluate a space-time diffusivity at `(x, t)`.
    pub fn value(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            Self::Constant(nu) => Ok(*nu),
            Self::SpaceTime(f) => {
                let nu = f(x, t);
                if nu < 0.0 || !nu.is_finite() {
                    Err(FfslError::NegativeDiffusivity { nu, x, t })
                } else {
                    Ok(nu)
                }
            }
            Self::PowerLaw { .. } => Err(FfslError::ExpectedLinearDiffusivity),
        }
    }
}

/// `nu(u) = m u^(m-1)` with the state clamped at zero.
pub fn power_law_diffusivity(exponent: f64, state: f64) -> f64 {
    let u = state.max(0.0);
    let p = exponent - 1.0;
    if p == 2.0 {
        exponent * u * u
    } else {
        exponent * u.powf(p)
    }
}

/// Time step, current time, and the spatial order of the step
/// (reconstruction degree `q` for flux-form, interpolation degree `p` for
/// the nonconservative scheme).
#[derive(Debug, Clone, Copy)]
pub struct StepParams {
    pub dt: f64,
    pub t: f64,
    pub order: usize,
}

impl StepParams {
    pub fn new(dt: f64, t: f64, order: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(FfslError::NonPositiveTimeStep(dt));
        }
        Ok(Self { dt, t, order })
    }
}

/// Flux-tube half-length at an interface: `sqrt(2 dt nu(x_k, t))`. No
/// equation has to be solved here.
pub fn interface_displacement(model: &DiffusivityModel, x_k: f64, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(FfslError::NonPositiveTimeStep(dt));
    }
    Ok((2.0 * dt * model.value(x_k, t)?).sqrt())
}

/// Diffusive interface flux: half the mass difference between the forward
/// and backward tubes of length `delta` at `x_k`.
pub fn ffsl_diffusion_flux(recon: &PiecewiseReconstruction, x_k: f64, delta: f64) -> Result<f64> {
    debug_assert!(delta >= 0.0);
    if delta == 0.0 {
        return Ok(0.0);
    }
    let forward = recon.integrate(x_k, x_k + delta)?;
    let backward = recon.integrate(x_k - delta, x_k)?;
    Ok(0.5 * (forward - backward))
}

/// One flux-form step for a space-time diffusivity. `params.order` is the
/// reconstruction degree (0 or 2).
pub fn ffsl_diffusion_step(
    field: &CellField,
    model: &DiffusivityModel,
    params: &StepParams,
) -> Result<CellField> {
    if model.is_state_dependent() {
        return Err(FfslError::ExpectedLinearDiffusivity);
    }
    let recon = build_reconstruction(field, params.order)?;
    let grid = field.grid;
    let mut fluxes = Vec::with_capacity(grid.cells);
    for k in 0..grid.cells {
        let x_k = grid.interface(k);
        let delta = interface_displacement(model, x_k, params.t, params.dt)?;
        fluxes.push(ffsl_diffusion_flux(&recon, x_k, delta)?);
    }
    apply_flux_divergence(field, &fluxes)
}

fn apply_flux_divergence(field: &CellField, fluxes: &[f64]) -> Result<CellField> {
    let grid = field.grid;
    let values = field
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v + (fluxes[(i + 1) % grid.cells] - fluxes[i]) / grid.dx)
        .collect();
    CellField::from_computed(grid, values)
}

/// Which side of the point the displaced evaluation lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

const FIXED_POINT_MAX_ITER: usize = 50;

/// Displacement of the nonconservative scheme, the fixed point of
/// `delta = sqrt(2 dt nu(x +/- delta, t))`, found by fixed-point iteration
/// started from the undisplaced value. Converges in one iteration for
/// constant diffusivity. Across a coefficient discontinuity the equation can
/// have no solution at all (the graph of the right side jumps over the
/// identity line and the iteration cycles); the solve then falls back to
/// bisection of `delta^2 - 2 dt nu(x +/- delta)`, whose sign change is the
/// jump location itself.
pub fn sl_displacement(
    model: &DiffusivityModel,
    x: f64,
    t: f64,
    dt: f64,
    side: Side,
) -> Result<f64> {
    sl_displacement_with_tol(model, x, t, dt, side, 1e-12)
}

pub(crate) fn sl_displacement_with_tol(
    model: &DiffusivityModel,
    x: f64,
    t: f64,
    dt: f64,
    side: Side,
    tol: f64,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(FfslError::NonPositiveTimeStep(dt));
    }
    let sign = side.sign();
    let g = |d: f64| -> Result<f64> { Ok((2.0 * dt * model.value(x + sign * d, t)?).sqrt()) };
    let mut delta = g(0.0)?;
    let mut residual = f64::INFINITY;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = g(delta)?;
        residual = (next - delta).abs();
        delta = next;
        if residual <= tol {
            return Ok(delta);
        }
    }
    // No fixed point reachable: bracket the sign change of delta^2 - 2 dt nu
    // and bisect. F(0) <= 0 always, and a bounded diffusivity guarantees an
    // upper bracket.
    let f = |d: f64| -> Result<f64> { Ok(d * d - 2.0 * dt * model.value(x + sign * d, t)?) };
    let mut hi = delta.max(tol.max(1e-6));
    let mut grew = 0;
    while f(hi)? <= 0.0 {
        hi *= 2.0;
        grew += 1;
        if grew > 100 {
            return Err(FfslError::DisplacementNotConverged {
                residual,
                iterations: FIXED_POINT_MAX_ITER,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One step of the nonconservative scheme: the two-point average of the
/// interpolant at the displaced nodes,
/// `v_i <- 1/2 I_p[V](x_i + delta_i^+) + 1/2 I_p[V](x_i - delta_i^-)`.
/// Values are read as point values at cell centers. Mass is not conserved in
/// general. A power-law model dispatches to the state-dependent displacement
/// solve.
pub fn sl_diffusion_step(
    field: &CellField,
    model: &DiffusivityModel,
    params: &StepParams,
) -> Result<CellField> {
    if let DiffusivityModel::PowerLaw { exponent } = model {
        return sl_nonlinear_step(field, *exponent, params);
    }
    let grid = field.grid;
    let p = params.order;
    let tol = 1e-12 * grid.dx;
    let mut values = Vec::with_capacity(grid.cells);
    for i in 0..grid.cells {
        let x = grid.cell_center(i);
        let dp = sl_displacement_with_tol(model, x, params.t, params.dt, Side::Plus, tol)?;
        let dm = sl_displacement_with_tol(model, x, params.t, params.dt, Side::Minus, tol)?;
        let right = lagrange_interpolate(field, x + dp, p)?;
        let left = lagrange_interpolate(field, x - dm, p)?;
        values.push(0.5 * (right + left));
    }
    CellField::from_computed(grid, values)
}

const SCAN_SAMPLES: usize = 256;
const BISECT_MAX_ITER: usize = 200;

/// Largest nonnegative solution of `delta = sqrt(2 dt nu(state(x +/- delta)))`
/// on `[0, window]`: a sign-change scan over 256 samples followed by
/// bisection of the last bracket. Near the edge of a compactly supported
/// state the equation has several roots and the largest one is the one that
/// propagates the support correctly.
///
/// Both sides of the equation are nonnegative, so only the sign of
/// `2 dt nu - delta^2` is needed; the scan walks backwards from the window
/// end and stops at the first nonnegative sample, which brackets the same
/// last sign change a forward scan would find.
fn largest_displacement_root(
    state_at: impl Fn(f64) -> f64,
    x: f64,
    side: Side,
    dt: f64,
    exponent: f64,
    window: f64,
    tol: f64,
) -> Result<f64> {
    let sign = side.sign();
    let excess =
        |d: f64| 2.0 * dt * power_law_diffusivity(exponent, state_at(x + sign * d)) - d * d;
    let step = window / (SCAN_SAMPLES - 1) as f64;
    let at_end = excess(window);
    if at_end >= 0.0 {
        return if at_end == 0.0 {
            Ok(window)
        } else {
            Err(FfslError::SearchWindowExhausted { window })
        };
    }
    let mut bracket = None;
    let mut right = window;
    for j in (0..SCAN_SAMPLES - 1).rev() {
        let d = j as f64 * step;
        if excess(d) >= 0.0 {
            bracket = Some((d, right));
            break;
        }
        right = d;
    }
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        // excess(0) >= 0 always, so this is unreachable with finite data
        None => return Ok(0.0),
    };
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Search window for the state-dependent displacement: generous multiple of
/// the largest admissible tube, floored at two cells.
fn displacement_window(dt: f64, exponent: f64, max_state: f64, dx: f64) -> f64 {
    let nu_max = power_law_diffusivity(exponent, max_state);
    (3.0 * (2.0 * dt * nu_max).sqrt()).max(2.0 * dx)
}

/// Interface displacement for the porous-medium flux: the largest roots on
/// both sides, averaged, `delta_k = (delta_k^+ + delta_k^-) / 2`.
pub fn nonlinear_interface_displacement(
    recon: &PiecewiseReconstruction,
    x_k: f64,
    dt: f64,
    exponent: f64,
) -> Result<f64> {
    if !(exponent > 1.0) {
        return Err(FfslError::InvalidExponent(exponent));
    }
    if !(dt > 0.0) {
        return Err(FfslError::NonPositiveTimeStep(dt));
    }
    let grid = recon.grid();
    let window = displacement_window(dt, exponent, recon.max_cell_average(), grid.dx);
    let tol = 1e-12 * grid.dx;
    let state = |x: f64| recon.evaluate(x);
    let dp = if recon.is_zero_on(x_k, x_k + window) {
        0.0
    } else {
        largest_displacement_root(state, x_k, Side::Plus, dt, exponent, window, tol)?
    };
    let dm = if recon.is_zero_on(x_k - window, x_k) {
        0.0
    } else {
        largest_displacement_root(state, x_k, Side::Minus, dt, exponent, window, tol)?
    };
    Ok(0.5 * (dp + dm))
}

/// One flux-form step of `u_t = (m u^(m-1) u_x)_x`. Same flux and update as
/// the linear step, with the displacement taken from the reconstructed state;
/// mass is conserved to rounding.
pub fn ffsl_nonlinear_step(
    field: &CellField,
    exponent: f64,
    params: &StepParams,
) -> Result<CellField> {
    if !(exponent > 1.0) {
        return Err(FfslError::InvalidExponent(exponent));
    }
    let recon = build_reconstruction(field, params.order)?;
    let grid = field.grid;
    // interfaces are independent; deterministic because each flux lands in
    // its own slot and no cross-interface reduction happens before the
    // per-cell difference
    let fluxes = (0..grid.cells)
        .into_par_iter()
        .map(|k| {
            let x_k = grid.interface(k);
            let delta = nonlinear_interface_displacement(&recon, x_k, params.dt, exponent)?;
            ffsl_diffusion_flux(&recon, x_k, delta)
        })
        .collect::<Result<Vec<f64>>>()?;
    apply_flux_divergence(field, &fluxes)
}

/// Nonconservative step for the porous-medium equation: displacements are
/// the largest roots of `delta = sqrt(2 dt nu(I_p[V](x_i +/- delta)))`.
fn sl_nonlinear_step(field: &CellField, exponent: f64, params: &StepParams) -> Result<CellField> {
    if !(exponent > 1.0) {
        return Err(FfslError::InvalidExponent(exponent));
    }
    let grid = field.grid;
    let window = displacement_window(params.dt, exponent, field.max_value(), grid.dx);
    let tol = 1e-12 * grid.dx;
    // interpolation needs p+1 nodes around the evaluation interval; treat a
    // window of identically zero nodes (padded by the stencil reach) as flat
    let pad = 2.0 * grid.dx;
    let zero_around = |a: f64, b: f64| {
        let lo = grid.cell_of(a - pad) as isize;
        let n = ((b - a + 2.0 * pad) / grid.dx).ceil() as isize + 1;
        (lo..=lo + n).all(|j| field.at_wrapped(j) == 0.0)
    };
    let interpolant = NodeInterpolant::new(field, params.order)?;
    let state = |x: f64| interpolant.eval(x);
    let values = (0..grid.cells)
        .into_par_iter()
        .map(|i| {
            let x = grid.cell_center(i);
            if zero_around(x - window, x + window) {
                return Ok(field.values()[i]);
            }
            let dp =
                largest_displacement_root(state, x, Side::Plus, params.dt, exponent, window, tol)?;
            let dm =
                largest_displacement_root(state, x, Side::Minus, params.dt, exponent, window, tol)?;
            Ok(0.5 * (interpolant.eval(x + dp) + interpolant.eval(x - dm)))
        })
        .collect::<Result<Vec<f64>>>()?;
    CellField::from_computed(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::metrics::total_mass;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(n: usize, seed: u64) -> CellField {
        let grid = Grid1D::new(10.0, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        CellField::new(grid, values).unwrap()
    }

    #[test]
    fn interface_displacement_closed_form() {
        let model = DiffusivityModel::constant(0.05).unwrap();
        let d = interface_displacement(&model, 1.0, 0.0, 0.04).unwrap();
        assert!((d - 0.004f64.sqrt()).abs() < 1e-15);
        assert!((d - 0.0632456).abs() < 1e-7);

        let zero = DiffusivityModel::constant(0.0).unwrap();
        assert_eq!(interface_displacement(&zero, 1.0, 0.0, 0.04).unwrap(), 0.0);

        // nu = 0.05, dt = 0.02, dx = 0.05: delta/dx = sqrt(2 mu) with mu = 0.4
        let d = interface_displacement(&model, 0.0, 0.0, 0.02).unwrap();
        assert!((d / 0.05 - (2.0f64 * 0.4).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn negative_diffusivity_is_an_error() {
        let model = DiffusivityModel::space_time(|_, _| -1.0);
        assert!(interface_displacement(&model, 0.0, 0.0, 0.1).is_err());
        assert!(DiffusivityModel::constant(-0.1).is_err());
    }

    #[test]
    fn flux_vanishes_on_constant_fields() {
        let grid = Grid1D::new(10.0, 50).unwrap();
        let field = CellField::constant(grid, 4.2).unwrap();
        for q in [0, 2] {
            let recon = build_reconstruction(&field, q).unwrap();
            for k in [0, 13, 49] {
                let f = ffsl_diffusion_flux(&recon, grid.interface(k), 0.37).unwrap();
                assert!(f.abs() < 1e-13, "q={q}, k={k}: {f}");
            }
        }
    }

    #[test]
    fn flux_on_linear_data_is_half_alpha_delta_squared() {
        // locally linear profile away from the periodic seam; the quadratic
        // reconstruction is exact there, so F = alpha delta^2 / 2 = dt nu u_x
        let grid = Grid1D::new(10.0, 100).unwrap();
        let alpha = 0.7;
        let field = CellField::from_fn(grid, |x| alpha * x).unwrap();
        let recon = build_reconstruction(&field, 2).unwrap();
        let x_k = grid.interface(50);
        let delta = 1.5 * grid.dx;
        let f = ffsl_diffusion_flux(&recon, x_k, delta).unwrap();
        assert!((f - 0.5 * alpha * delta * delta).abs() < 1e-13);
    }

    #[test]
    fn flux_through_a_unit_bump_with_cell_wide_tube() {
        let grid = Grid1D::new(10.0, 20).unwrap();
        let mut values = vec![0.0; 20];
        values[10] = 1.0;
        let field = CellField::new(grid, values).unwrap();
        let recon = build_reconstruction(&field, 0).unwrap();
        // left interface of the bump cell, tube of exactly one cell
        let f = ffsl_diffusion_flux(&recon, grid.interface(10), grid.dx).unwrap();
        assert!((f - grid.dx / 2.0).abs() < 1e-15);
    }

    #[test]
    fn oversized_tube_is_a_domain_error() {
        let field = random_field(10, 2);
        let recon = build_reconstruction(&field, 0).unwrap();
        assert!(ffsl_diffusion_flux(&recon, 0.0, 10.0).is_err());
    }

    #[test]
    fn zero_diffusivity_step_is_identity() {
        let field = random_field(32, 5);
        let model = DiffusivityModel::constant(0.0).unwrap();
        let params = StepParams::new(0.01, 0.0, 2).unwrap();
        let out = ffsl_diffusion_step(&field, &model, &params).unwrap();
        assert_eq!(out.values(), field.values());
        let params = StepParams::new(0.01, 0.0, 3).unwrap();
        let out = sl_diffusion_step(&field, &model, &params).unwrap();
        assert_eq!(out.values(), field.values());
    }

    #[test]
    fn constant_field_is_a_steady_state() {
        let grid = Grid1D::new(10.0, 40).unwrap();
        let field = CellField::constant(grid, 1.5).unwrap();
        let model = DiffusivityModel::constant(0.3).unwrap();
        for order in [0, 2] {
            let params = StepParams::new(0.05, 0.0, order).unwrap();
            let out = ffsl_diffusion_step(&field, &model, &params).unwrap();
            for v in out.values() {
                assert!((v - 1.5).abs() < 1e-13);
            }
        }
        let params = StepParams::new(0.05, 0.0, 3).unwrap();
        let out = sl_diffusion_step(&field, &model, &params).unwrap();
        for v in out.values() {
            assert!((v - 1.5).abs() < 1e-13);
        }
    }

    #[test]
    fn ffsl_step_conserves_mass() {
        let field = random_field(64, 8);
        let model = DiffusivityModel::space_time(|x, t| 0.05 + 0.02 * (x + t).sin().abs());
        let params = StepParams::new(0.02, 0.3, 2).unwrap();
        let out = ffsl_diffusion_step(&field, &model, &params).unwrap();
        let drift = (total_mass(&out) - total_mass(&field)).abs();
        assert!(drift <= 1e-12 * field.values().iter().map(|v| v.abs()).sum::<f64>());
    }

    #[test]
    fn fixed_point_for_constant_diffusivity() {
        let model = DiffusivityModel::constant(0.05).unwrap();
        let d = sl_displacement(&model, 2.0, 0.0, 0.04, Side::Plus).unwrap();
        assert!((d - 0.004f64.sqrt()).abs() < 1e-14);
        let zero = DiffusivityModel::constant(0.0).unwrap();
        assert_eq!(
            sl_displacement(&zero, 2.0, 0.0, 0.04, Side::Minus).unwrap(),
            0.0
        );
    }

    #[test]
    fn fixed_point_matches_bracketing_root() {
        // delta^2 = 2 dt nu(x + delta) solved independently by bisection
        let length = 10.0;
        let nu =
            move |x: f64, _t: f64| 0.05 + 0.01 * (2.0 * std::f64::consts::PI * x / length).sin();
        let model = DiffusivityModel::space_time(nu);
        let (x, dt) = (2.5, 0.02);
        let d = sl_displacement(&model, x, 0.0, dt, Side::Plus).unwrap();

        let f = |delta: f64| delta * delta - 2.0 * dt * nu(x + delta, 0.0);
        let (mut lo, mut hi) = (0.0, 1.0);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((d - oracle).abs() < 1e-10, "{d} vs {oracle}");
    }

    #[test]
    fn nonlinear_displacement_zero_state() {
        let grid = Grid1D::new(10.0, 20).unwrap();
        let field = CellField::constant(grid, 0.0).unwrap();
        let recon = build_reconstruction(&field, 2).unwrap();
        let d = nonlinear_interface_displacement(&recon, grid.interface(5), 0.05, 3.0).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn nonlinear_displacement_constant_state() {
        // constant u = c: the equation degenerates to delta = sqrt(2 dt m c^(m-1))
        let grid = Grid1D::new(10.0, 20).unwrap();
        let c = 0.8;
        let field = CellField::constant(grid, c).unwrap();
        let recon = build_reconstruction(&field, 2).unwrap();
        let dt = 0.05;
        let d = nonlinear_interface_displacement(&recon, grid.interface(7), dt, 3.0).unwrap();
        let want = (2.0 * dt * 3.0 * c * c).sqrt();
        assert!((d - want).abs() < 1e-10, "{d} vs {want}");
    }

    #[test]
    fn nonlinear_step_keeps_zero_state_and_mass() {
        let grid = Grid1D::new(10.0, 30).unwrap();
        let zero = CellField::constant(grid, 0.0).unwrap();
        let params = StepParams::new(0.05, 0.0, 2).unwrap();
        let out = ffsl_nonlinear_step(&zero, 3.0, &params).unwrap();
        assert_eq!(out.values(), zero.values());

        // compactly supported bump
        let bump = CellField::from_fn(grid, |x| (1.0 - (x - 5.0) * (x - 5.0)).max(0.0)).unwrap();
        let out = ffsl_nonlinear_step(&bump, 3.0, &params).unwrap();
        let drift = (total_mass(&out) - total_mass(&bump)).abs() / total_mass(&bump).abs();
        assert!(drift <= 1e-13, "mass drift {drift}");
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let field = random_field(16, 4);
        assert!(StepParams::new(0.0, 0.0, 2).is_err());
        assert!(StepParams::new(-0.1, 0.0, 2).is_err());
        let params = StepParams::new(0.1, 0.0, 2).unwrap();
        assert!(ffsl_nonlinear_step(&field, 1.0, &params).is_err());
        assert!(DiffusivityModel::power_law(0.5).is_err());
        let pl = DiffusivityModel::power_law(3.0).unwrap();
        assert!(ffsl_diffusion_step(&field, &pl, &params).is_err());
        assert!(pl.value(0.0, 0.0).is_err());
    }
}
