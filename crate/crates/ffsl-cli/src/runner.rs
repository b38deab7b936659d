//! Executes one configured experiment: builds the preset problem, advances
//! the chosen scheme, measures errors against the designated reference and
//! emits solution snapshots.

use std::time::Instant;

use anyhow::{Context, Result};
use ffsl::{
    advdiff_step, barenblatt, barenblatt_cell_averages, cell_averages, fd_reference_solve,
    ffsl_diffusion_step, ffsl_diffusion_step_2d, ffsl_nonlinear_step, fourier_heat_solution,
    relative_error, sl_advdiff_step, sl_diffusion_step, total_mass, total_mass_2d,
    BarenblattParams, CellField, CellField2D, DiagonalDiffusivity2D, DiffusivityModel, ErrorReport,
    Grid1D, Grid2D, Norm, StepParams, VelocityModel,
};

use crate::config::{ExperimentConfig, ExperimentId, Scheme};
use crate::output;

/// Fixed physics of each experiment.
pub struct Preset {
    pub length: f64,
    pub horizon: f64,
    /// Nominal diffusivity for the mu column, where meaningful.
    pub nominal_nu: Option<f64>,
    /// Transport speed for the Courant column, where meaningful.
    pub speed: Option<f64>,
    pub snapshot_times: &'static [f64],
}

pub fn preset(experiment: ExperimentId) -> Preset {
    match experiment {
        ExperimentId::ConstDiffusion => Preset {
            length: 10.0,
            horizon: 2.0,
            nominal_nu: Some(CONST_NU),
            speed: None,
            snapshot_times: &[2.0],
        },
        ExperimentId::ConstAdvdiff => Preset {
            length: 10.0,
            horizon: 2.0,
            nominal_nu: Some(CONST_NU),
            speed: Some(ADV_SPEED),
            snapshot_times: &[2.0],
        },
        ExperimentId::VariableDiffusion => Preset {
            length: 10.0,
            horizon: 4.0,
            nominal_nu: Some(CONST_NU),
            speed: None,
            snapshot_times: &[4.0],
        },
        ExperimentId::PorousMedia => Preset {
            length: POROUS_LENGTH,
            horizon: 16.0,
            nominal_nu: None,
            speed: None,
            snapshot_times: &[1.0, 4.0, 16.0],
        },
        ExperimentId::Isotropic2d => Preset {
            length: 6.0,
            horizon: 2.0,
            nominal_nu: None,
            speed: None,
            snapshot_times: &[2.0],
        },
    }
}

pub const CONST_NU: f64 = 0.05;
pub const ADV_SPEED: f64 = 1.5;
pub const POROUS_LENGTH: f64 = 20.0;
pub const POROUS_EXPONENT: f64 = 3.0;
/// Width of the Gaussian initial profile relative to the domain.
pub const GAUSSIAN_SIGMA_FRACTION: f64 = 1.0 / 20.0;
/// Offset applied when reporting 2D coordinates (the grid lives on [0, 6)^2,
/// the problem on [-3, 3)^2).
pub const PLANE_OFFSET: f64 = -3.0;

fn gaussian(center: f64, sigma: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x: f64| (-(x - center) * (x - center) / (2.0 * sigma * sigma)).exp()
}

/// Pulsating, discontinuous-in-space diffusivity of the variable-coefficient
/// experiment: `1/20 + (1/5) xi(x) sin^2(2 pi t / T)` with `xi` the indicator
/// of `[0.5 L, 0.8 L)` (half-open, deciding interface ties).
fn variable_nu(length: f64, horizon: f64) -> impl Fn(f64, f64) -> f64 + Copy {
    move |x: f64, t: f64| {
        let xi = (0.5 * length..0.8 * length).contains(&x) as u8 as f64;
        let s = (2.0 * std::f64::consts::PI * t / horizon).sin();
        0.05 + 0.2 * xi * s * s
    }
}

fn barenblatt_params() -> BarenblattParams {
    BarenblattParams::new(POROUS_EXPONENT, 1.0, 1.0).expect("valid parameters")
}

/// Map a grid coordinate of the porous-medium run into the centered
/// fundamental domain where the profile formula lives.
fn centered(length: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x: f64| if x >= 0.5 * length { x - length } else { x }
}

/// Raw simulation outcome, before any reference comparison. Criterion-style
/// mass checks can use this directly without paying for a reference solve.
pub struct Simulation {
    pub initial: FieldData,
    pub r#final: FieldData,
    pub snapshots: Vec<(f64, FieldData)>,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub runtime_s: f64,
}

pub enum FieldData {
    OneD(CellField),
    TwoD(CellField2D),
}

impl FieldData {
    pub fn as_1d(&self) -> &CellField {
        match self {
            FieldData::OneD(f) => f,
            FieldData::TwoD(_) => panic!("expected a 1D field"),
        }
    }

    pub fn as_2d(&self) -> &CellField2D {
        match self {
            FieldData::TwoD(f) => f,
            FieldData::OneD(_) => panic!("expected a 2D field"),
        }
    }
}

/// Advance the configured scheme over the full horizon without computing
/// any reference solution.
pub fn simulate(config: &ExperimentConfig) -> Result<Simulation> {
    config.validate()?;
    if config.experiment == ExperimentId::Isotropic2d {
        return simulate_2d(config);
    }
    let set = preset(config.experiment);
    let grid = Grid1D::new(set.length, config.cells)?;
    let dt = set.horizon / config.steps as f64;
    let ic = initial_condition(config, grid)?;
    let stepper = stepper_for(config, set.length, set.horizon);

    let snapshot_steps = snapshot_steps(set.snapshot_times, dt, config.steps);
    let mut snapshots = Vec::new();
    let mut state = ic.clone();
    let started = Instant::now();
    for n in 0..config.steps {
        let params = StepParams::new(dt, n as f64 * dt, config.order)?;
        state = stepper(&state, &params).with_context(|| format!("step {n} failed"))?;
        if let Some(&(_, t)) = snapshot_steps.iter().find(|(s, _)| *s == n + 1) {
            snapshots.push((t, FieldData::OneD(state.clone())));
        }
    }
    let runtime_s = started.elapsed().as_secs_f64();
    Ok(Simulation {
        mass_initial: total_mass(&ic),
        mass_final: total_mass(&state),
        initial: FieldData::OneD(ic),
        r#final: FieldData::OneD(state),
        snapshots,
        runtime_s,
    })
}

fn snapshot_steps(times: &[f64], dt: f64, steps: usize) -> Vec<(usize, f64)> {
    times
        .iter()
        .filter_map(|&t| {
            let n = (t / dt).round() as usize;
            (n >= 1 && n <= steps && (n as f64 * dt - t).abs() < 1e-9 * t.max(1.0))
                .then_some((n, t))
        })
        .collect()
}

fn initial_condition(config: &ExperimentConfig, grid: Grid1D) -> Result<CellField> {
    let set = preset(config.experiment);
    let ic = match config.experiment {
        ExperimentId::ConstDiffusion | ExperimentId::ConstAdvdiff => {
            let f = gaussian(0.5 * set.length, GAUSSIAN_SIGMA_FRACTION * set.length);
            match config.scheme {
                Scheme::Ffsl => cell_averages(grid, f)?,
                Scheme::Sl => CellField::from_fn(grid, f)?,
            }
        }
        ExperimentId::VariableDiffusion => {
            let f = gaussian(0.2 * set.length, GAUSSIAN_SIGMA_FRACTION * set.length);
            match config.scheme {
                Scheme::Ffsl => cell_averages(grid, f)?,
                Scheme::Sl => CellField::from_fn(grid, f)?,
            }
        }
        ExperimentId::PorousMedia => {
            let params = barenblatt_params();
            match config.scheme {
                Scheme::Ffsl => barenblatt_cell_averages(grid, 0.0, &params),
                Scheme::Sl => {
                    let c = centered(set.length);
                    CellField::from_fn(grid, |x| barenblatt(c(x), 0.0, &params))?
                }
            }
        }
        ExperimentId::Isotropic2d => unreachable!("2D runs take the dedicated path"),
    };
    Ok(ic)
}

type Stepper = Box<dyn Fn(&CellField, &StepParams) -> ffsl::Result<CellField>>;

fn stepper_for(config: &ExperimentConfig, length: f64, horizon: f64) -> Stepper {
    match (config.experiment, config.scheme) {
        (ExperimentId::ConstDiffusion, Scheme::Ffsl) => {
            let model = DiffusivityModel::Constant(CONST_NU);
            Box::new(move |f, p| ffsl_diffusion_step(f, &model, p))
        }
        (ExperimentId::ConstDiffusion, Scheme::Sl) => {
            let model = DiffusivityModel::Constant(CONST_NU);
            Box::new(move |f, p| sl_diffusion_step(f, &model, p))
        }
        (ExperimentId::ConstAdvdiff, Scheme::Ffsl) => {
            let model = DiffusivityModel::Constant(CONST_NU);
            let vel = VelocityModel::Constant(ADV_SPEED);
            // second-order advective reconstruction alongside the
            // third-order-accurate diffusive one
            Box::new(move |f, p| advdiff_step(f, &vel, &model, 1, p))
        }
        (ExperimentId::ConstAdvdiff, Scheme::Sl) => {
            let model = DiffusivityModel::Constant(CONST_NU);
            let vel = VelocityModel::Constant(ADV_SPEED);
            Box::new(move |f, p| sl_advdiff_step(f, &vel, &model, p))
        }
        (ExperimentId::VariableDiffusion, scheme) => {
            let nu = variable_nu(length, horizon);
            let model = DiffusivityModel::space_time(nu);
            match scheme {
                Scheme::Ffsl => Box::new(move |f, p| ffsl_diffusion_step(f, &model, p)),
                Scheme::Sl => Box::new(move |f, p| sl_diffusion_step(f, &model, p)),
            }
        }
        (ExperimentId::PorousMedia, Scheme::Ffsl) => {
            Box::new(move |f, p| ffsl_nonlinear_step(f, POROUS_EXPONENT, p))
        }
        (ExperimentId::PorousMedia, Scheme::Sl) => {
            let model = DiffusivityModel::PowerLaw {
                exponent: POROUS_EXPONENT,
            };
            Box::new(move |f, p| sl_diffusion_step(f, &model, p))
        }
        (ExperimentId::Isotropic2d, _) => unreachable!("2D runs take the dedicated path"),
    }
}

/// Reference solution at time `t`, in the same representation as the run's
/// own state (point values for SL, cell averages for FFSL).
pub fn reference_solution(config: &ExperimentConfig, ic: &CellField, t: f64) -> Result<CellField> {
    let set = preset(config.experiment);
    let grid = ic.grid;
    let reference = match config.experiment {
        ExperimentId::ConstDiffusion => fourier_heat_solution(ic, CONST_NU, 0.0, t)?,
        ExperimentId::ConstAdvdiff => fourier_heat_solution(ic, CONST_NU, ADV_SPEED, t)?,
        ExperimentId::VariableDiffusion => {
            let fine = Grid1D::new(set.length, 4 * grid.cells)?;
            let f = gaussian(0.2 * set.length, GAUSSIAN_SIGMA_FRACTION * set.length);
            let u0_fine = cell_averages(fine, f)?;
            let model = DiffusivityModel::space_time(variable_nu(set.length, set.horizon));
            fd_reference_solve(&u0_fine, &model, t)?
        }
        ExperimentId::PorousMedia => {
            let params = barenblatt_params();
            match config.scheme {
                Scheme::Ffsl => barenblatt_cell_averages(grid, t, &params),
                Scheme::Sl => {
                    let c = centered(set.length);
                    CellField::from_fn(grid, |x| barenblatt(c(x), t, &params))?
                }
            }
        }
        ExperimentId::Isotropic2d => anyhow::bail!("no reference solution for the 2D experiment"),
    };
    Ok(reference)
}

/// Full run: simulate, compare against the reference, write artifacts when
/// an output directory is configured.
pub struct RunOutcome {
    pub report: ErrorReport,
    pub runtime_s: f64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    let sim = simulate(config)?;
    let mass_drift_rel = (sim.mass_final - sim.mass_initial).abs() / sim.mass_initial.abs();

    let (l2_rel, linf_rel) = match &sim.r#final {
        FieldData::OneD(state) => {
            let reference = reference_solution(
                config,
                sim.initial.as_1d(),
                preset(config.experiment).horizon,
            )?;
            (
                Some(relative_error(state, &reference, Norm::L2)?),
                Some(relative_error(state, &reference, Norm::LInf)?),
            )
        }
        FieldData::TwoD(_) => (None, None),
    };

    let set = preset(config.experiment);
    let dt = set.horizon / config.steps as f64;
    let dx = set.length / config.cells as f64;
    let report = ErrorReport {
        scheme: config.scheme.label(config.order),
        order: config.order,
        cells: config.cells,
        steps: config.steps,
        mu: set.nominal_nu.map(|nu| nu * dt / (dx * dx)),
        courant: set.speed.map(|a| a * dt / dx),
        l2_rel,
        linf_rel,
        mass_initial: sim.mass_initial,
        mass_final: sim.mass_final,
        mass_drift_rel,
    };

    if let Some(dir) = &config.out_dir {
        let run_dir = dir.join(config.run_name());
        output::write_report_csv(
            &run_dir.join("report.csv"),
            &[output::ReportRow::new(config, &report, sim.runtime_s)],
        )?;
        match &sim.r#final {
            FieldData::OneD(_) => {
                for (t, snap) in &sim.snapshots {
                    let reference = reference_solution(config, sim.initial.as_1d(), *t)?;
                    output::write_profile(
                        &run_dir.join(format!("profile_t{}.dat", output::time_tag(*t))),
                        snap.as_1d(),
                        &reference,
                        profile_offset(config.experiment),
                    )?;
                }
            }
            FieldData::TwoD(_) => {
                for (t, snap) in &sim.snapshots {
                    output::write_field_2d(
                        &run_dir.join(format!("field_t{}.dat", output::time_tag(*t))),
                        snap.as_2d(),
                        PLANE_OFFSET,
                    )?;
                }
            }
        }
    }

    Ok(RunOutcome {
        report,
        runtime_s: sim.runtime_s,
    })
}

/// X-axis shift used when emitting 1D profiles (the porous-medium profile is
/// centered on the periodic seam, so plots unwrap it).
fn profile_offset(experiment: ExperimentId) -> f64 {
    match experiment {
        ExperimentId::PorousMedia => -0.5 * POROUS_LENGTH,
        _ => 0.0,
    }
}

fn simulate_2d(config: &ExperimentConfig) -> Result<Simulation> {
    let set = preset(config.experiment);
    let n = config.cells;
    let grid = Grid2D::new(set.length, set.length, n, n)?;
    let dt = set.horizon / config.steps as f64;

    // indicator of [-1.5, 1.5]^2 in problem coordinates
    let ic = indicator_square_averages(grid, -1.5 - PLANE_OFFSET, 1.5 - PLANE_OFFSET)?;
    let diffusivity = DiagonalDiffusivity2D::isotropic(corner_diffusivity());

    let snapshot_steps = snapshot_steps(set.snapshot_times, dt, config.steps);
    let mut snapshots = Vec::new();
    let mut state = ic.clone();
    let started = Instant::now();
    for step in 0..config.steps {
        let params = StepParams::new(dt, step as f64 * dt, config.order)?;
        state = ffsl_diffusion_step_2d(&state, &diffusivity, &params)
            .with_context(|| format!("step {step} failed"))?;
        if let Some(&(_, t)) = snapshot_steps.iter().find(|(s, _)| *s == step + 1) {
            snapshots.push((t, FieldData::TwoD(state.clone())));
        }
    }
    let runtime_s = started.elapsed().as_secs_f64();
    Ok(Simulation {
        mass_initial: total_mass_2d(&ic),
        mass_final: total_mass_2d(&state),
        initial: FieldData::TwoD(ic),
        r#final: FieldData::TwoD(state),
        snapshots,
        runtime_s,
    })
}

/// Isotropic diffusivity concentrated at the corner point (1.5, -1.5) of the
/// initial square, in grid coordinates.
pub fn corner_diffusivity() -> impl Fn(f64, f64, f64) -> f64 + Copy + Send + Sync {
    let (cx, cy) = (1.5 - PLANE_OFFSET, -1.5 - PLANE_OFFSET);
    move |x: f64, y: f64, _t: f64| (-5.0 * ((x - cx) * (x - cx) + (y - cy) * (y - cy))).exp()
}

/// Exact cell averages of the indicator of the square `[lo, hi]^2`:
/// the product of the two 1D overlap fractions.
pub fn indicator_square_averages(grid: Grid2D, lo: f64, hi: f64) -> Result<CellField2D> {
    let overlap = |i: usize| -> f64 {
        let a = i as f64 * grid.dx;
        let b = a + grid.dx;
        (((b.min(hi) - a.max(lo)).max(0.0)) / grid.dx).min(1.0)
    };
    let mut values = Vec::with_capacity(grid.cells_x * grid.cells_y);
    for ix in 0..grid.cells_x {
        let fx = overlap(ix);
        for iy in 0..grid.cells_y {
            values.push(fx * overlap(iy));
        }
    }
    Ok(CellField2D::new(grid, values)?)
}
