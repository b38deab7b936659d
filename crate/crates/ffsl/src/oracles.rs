//! Reference solutions the experiments measure against: the spectral
//! constant-coefficient propagator, the Barenblatt-Pattle self-similar
//! solution of the porous-medium equation, and a finite-difference reference
//! solver for variable coefficients.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::diffusion::DiffusivityModel;
use crate::error::{FfslError, Result};
use crate::field::CellField;
use crate::grid::Grid1D;

// 10-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (&x, &w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
        sum += w * (f(mid + half * x) + f(mid - half * x));
    }
    sum * half
}

/// Integrate with geometric grading towards endpoints where the integrand
/// has a root-type singularity, as at the edge of a compact support.
fn gauss_legendre_graded(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    singular_left: bool,
    singular_right: bool,
) -> f64 {
    const LEVELS: usize = 40;
    if b <= a {
        return 0.0;
    }
    match (singular_left, singular_right) {
        (false, false) => gauss_legendre(f, a, b),
        (true, true) => {
            let mid = 0.5 * (a + b);
            gauss_legendre_graded(f, a, mid, true, false)
                + gauss_legendre_graded(f, mid, b, false, true)
        }
        (false, true) => {
            // pieces shrink geometrically towards the singular endpoint b,
            // each staying as far from it as it is long; a final sliver of
            // width h/2^LEVELS absorbs what is left
            let h = b - a;
            let mut sum = 0.0;
            let mut left = a;
            for j in 1..=LEVELS {
                let right = b - h / (1u64 << j) as f64;
                if right <= left {
                    break;
                }
                sum += gauss_legendre(f, left, right);
                left = right;
            }
            sum + gauss_legendre(f, left, b)
        }
        (true, false) => {
            let h = b - a;
            let mut sum = 0.0;
            let mut right = b;
            for j in 1..=LEVELS {
                let left = a + h / (1u64 << j) as f64;
                if left >= right {
                    break;
                }
                sum += gauss_legendre(f, left, right);
                right = left;
            }
            sum + gauss_legendre(f, a, right)
        }
    }
}

/// Cell averages of a smooth profile, one fixed-order Gauss rule per cell.
pub fn cell_averages(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<CellField> {
    let values = (0..grid.cells)
        .map(|i| {
            let a = grid.interface(i);
            gauss_legendre(&f, a, a + grid.dx) / grid.dx
        })
        .collect();
    CellField::new(grid, values)
}

/// Exact constant-coefficient solution of `u_t + a u_x = nu u_xx` on the
/// periodic grid: the discrete transform of the stored vector, each mode
/// damped by `exp(-nu w_k^2 t)` and shifted by `exp(-i a w_k t)`, transformed
/// back. Exact for band-limited data, spectrally accurate for a Gaussian.
/// Cell averaging commutes with the propagator, so the result is in the same
/// representation (point values or averages) as the input.
pub fn fourier_heat_solution(u0: &CellField, nu: f64, speed: f64, t: f64) -> Result<CellField> {
    if nu < 0.0 || !nu.is_finite() {
        return Err(FfslError::NegativeDiffusivity { nu, x: f64::NAN, t });
    }
    let grid = u0.grid;
    let n = grid.cells;
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut buf: Vec<Complex<f64>> = u0.values().iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = if j <= n / 2 {
            j as f64
        } else {
            j as f64 - n as f64
        };
        let omega = 2.0 * PI * k / grid.length;
        let damping = (-nu * omega * omega * t).exp();
        let phase = -speed * omega * t;
        *c *= Complex::from_polar(damping, phase);
    }
    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    let values = buf.iter().map(|c| c.re * scale).collect();
    CellField::new(grid, values)
}

/// Parameters of the Barenblatt-Pattle solution of `u_t = (m u^(m-1) u_x)_x`.
#[derive(Debug, Clone, Copy)]
pub struct BarenblattParams {
    pub exponent: f64,
    pub amplitude: f64,
    pub time_offset: f64,
}

impl BarenblattParams {
    pub fn new(exponent: f64, amplitude: f64, time_offset: f64) -> Result<Self> {
        if !(exponent > 1.0) {
            return Err(FfslError::InvalidExponent(exponent));
        }
        if amplitude == 0.0 || !(time_offset > 0.0) {
            return Err(FfslError::InvalidExponent(exponent));
        }
        Ok(Self {
            exponent,
            amplitude,
            time_offset,
        })
    }

    /// Self-similarity exponent `k = 1 / (m + 1)`.
    pub fn k(&self) -> f64 {
        1.0 / (self.exponent + 1.0)
    }

    /// Half-width of the support at time `t`.
    pub fn support_radius(&self, t: f64) -> f64 {
        let m = self.exponent;
        let k = self.k();
        let ts = t + self.time_offset;
        (2.0 * m * self.amplitude * self.amplitude * ts.powf(2.0 * k) / (k * (m - 1.0))).sqrt()
    }
}

/// The compactly supported self-similar profile
/// `u(x, t) = (t + t0)^(-k) (A^2 - k(m-1) x^2 / (2m (t+t0)^(2k)))_+^(1/(m-1))`.
pub fn barenblatt(x: f64, t: f64, params: &BarenblattParams) -> f64 {
    let m = params.exponent;
    let k = params.k();
    let ts = t + params.time_offset;
    debug_assert!(ts > 0.0);
    let arg =
        params.amplitude * params.amplitude - k * (m - 1.0) * x * x / (2.0 * m * ts.powf(2.0 * k));
    if arg <= 0.0 {
        0.0
    } else {
        ts.powf(-k) * arg.powf(1.0 / (m - 1.0))
    }
}

/// Cell averages of the Barenblatt profile centered at the grid origin
/// (coordinates are read in the centered fundamental domain `[-L/2, L/2)`,
/// so the bump wraps across the periodic seam). Cells cut by the support
/// edge are subdivided there, with grading against the root singularity.
pub fn barenblatt_cell_averages(grid: Grid1D, t: f64, params: &BarenblattParams) -> CellField {
    assert!(t + params.time_offset > 0.0);
    let r = params.support_radius(t);
    let f = |x: f64| barenblatt(x, t, params);
    let half = grid.length / 2.0;
    let values = (0..grid.cells)
        .map(|i| {
            let a = grid.interface(i);
            let b = a + grid.dx;
            // split the cell at the seam of the centered domain, then map
            let mut total = 0.0;
            for (s0, s1) in if a < half && b > half {
                vec![(a, half), (half - grid.length, b - grid.length)]
            } else if a >= half {
                vec![(a - grid.length, b - grid.length)]
            } else {
                vec![(a, b)]
            } {
                total += integrate_compact_profile(&f, s0, s1, r);
            }
            total / grid.dx
        })
        .collect();
    CellField::new(grid, values).expect("finite averages")
}

/// Integral of an even, compactly supported profile over `[a, b]`, splitting
/// at the support edges `+/-r` and grading towards them.
fn integrate_compact_profile(f: &impl Fn(f64) -> f64, a: f64, b: f64, r: f64) -> f64 {
    let mut cuts = vec![a];
    for edge in [-r, r] {
        if edge > a && edge < b {
            cuts.push(edge);
        }
    }
    cuts.push(b);
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        let mid = 0.5 * (p + q);
        if mid.abs() >= r {
            continue; // outside the support
        }
        let singular_left = (p - (-r)).abs() < 1e-14 * r.max(1.0);
        let singular_right = (q - r).abs() < 1e-14 * r.max(1.0);
        total += gauss_legendre_graded(f, p, q, singular_left, singular_right);
    }
    total
}

const FD_STEP_LIMIT: u64 = 50_000_000;

/// Second-order conservative finite-difference reference on the given fine
/// grid, advanced with RK4 under `dt = 0.2 dx^2 / max nu`, then restricted to
/// a four-times-coarser grid by exact block averaging.
pub fn fd_reference_solve(
    u0_fine: &CellField,
    model: &DiffusivityModel,
    horizon: f64,
) -> Result<CellField> {
    let grid = u0_fine.grid;
    let n = grid.cells;
    if !n.is_multiple_of(4) {
        return Err(FfslError::NotRefinableBy4(n));
    }
    if model.is_state_dependent() {
        return Err(FfslError::ExpectedLinearDiffusivity);
    }

    // stability bound from the largest diffusivity seen on the grid
    let mut nu_max: f64 = 0.0;
    let time_samples = 101;
    for j in 0..=time_samples {
        let t = horizon * j as f64 / time_samples as f64;
        for k in 0..n {
            nu_max = nu_max.max(model.value(grid.interface(k), t)?);
        }
        if matches!(model, DiffusivityModel::Constant(_)) {
            break;
        }
    }
    if nu_max == 0.0 || horizon == 0.0 {
        return Ok(restrict_by_4(u0_fine));
    }

    let dx2 = grid.dx * grid.dx;
    let steps = (horizon / (0.2 * dx2 / nu_max)).ceil() as u64;
    if steps > FD_STEP_LIMIT {
        return Err(FfslError::StepLimitExceeded {
            steps,
            limit: FD_STEP_LIMIT,
        });
    }
    let dt = horizon / steps as f64;

    let constant_nu = match model {
        DiffusivityModel::Constant(nu) => Some(vec![*nu; n]),
        _ => None,
    };
    let mut interface_nu = vec![0.0; n];
    let mut rhs = |u: &[f64], t: f64, out: &mut [f64]| -> Result<()> {
        let nu_row: &[f64] = match &constant_nu {
            Some(row) => row,
            None => {
                for (k, nu) in interface_nu.iter_mut().enumerate() {
                    *nu = model.value(grid.interface(k), t)?;
                }
                &interface_nu
            }
        };
        for i in 0..n {
            let left = nu_row[i] * (u[i] - u[(i + n - 1) % n]);
            let right = nu_row[(i + 1) % n] * (u[(i + 1) % n] - u[i]);
            out[i] = (right - left) / dx2;
        }
        Ok(())
    };

    let mut u = u0_fine.values().to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    for step in 0..steps {
        let t = step as f64 * dt;
        rhs(&u, t, &mut k1)?;
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k1[i];
        }
        rhs(&stage, t + 0.5 * dt, &mut k2)?;
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k2[i];
        }
        rhs(&stage, t + 0.5 * dt, &mut k3)?;
        for i in 0..n {
            stage[i] = u[i] + dt * k3[i];
        }
        rhs(&stage, t + dt, &mut k4)?;
        for i in 0..n {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(restrict_by_4(&CellField::new(grid, u)?))
}

fn restrict_by_4(fine: &CellField) -> CellField {
    let coarse_grid = Grid1D::new(fine.grid.length, fine.grid.cells / 4).expect("valid grid");
    let values = (0..coarse_grid.cells)
        .map(|i| {
            let base = 4 * i;
            fine.values()[base..base + 4].iter().sum::<f64>() / 4.0
        })
        .collect();
    CellField::new(coarse_grid, values).expect("finite averages")
}
