//! Quick invariant suite behind the `selftest` subcommand: the structural
//! identities the schemes are built on, each printed as one pass/fail line.

use ffsl::{
    build_reconstruction, ffsl_advection_step, ffsl_diffusion_step, ffsl_diffusion_step_2d,
    ffsl_nonlinear_step, lagrange_interpolate, total_mass, total_mass_2d, CellField, CellField2D,
    DiagonalDiffusivity2D, DiffusivityModel, Grid1D, Grid2D, StepParams, VelocityModel,
};

type Check = (&'static str, fn() -> Result<(), String>);

const CHECKS: &[Check] = &[
    ("sliding-average identity", sliding_average_identity),
    ("convex-combination form", convex_combination),
    ("2-norm stability", two_norm_stability),
    ("mass conservation (diffusion)", mass_diffusion),
    ("mass conservation (porous medium)", mass_nonlinear),
    ("mass conservation (advection)", mass_advection),
    ("mass conservation (2D)", mass_2d),
    ("integer-Courant exact shift", integer_shift),
    ("2D axis-swap equivariance", transpose_equivariance),
];

/// Run every check; returns false if any failed.
pub fn run(mut sink: impl FnMut(&str)) -> bool {
    let mut ok = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => sink(&format!("PASS {name}")),
            Err(msg) => {
                ok = false;
                sink(&format!("FAIL {name}: {msg}"));
            }
        }
    }
    ok
}

fn noisy_field(n: usize, seed: u64) -> CellField {
    let grid = Grid1D::new(10.0, n).unwrap();
    let values = (0..n)
        .map(|i| {
            let h = seed
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add((i as u64).wrapping_mul(0xbf58476d1ce4e5b9));
            (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect();
    CellField::new(grid, values).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sliding_average_identity() -> Result<(), String> {
    let field = noisy_field(64, 7);
    let recon = build_reconstruction(&field, 2).map_err(|e| e.to_string())?;
    let scale = field.max_abs();
    for k in 0..100 {
        let x = 10.0 * (k as f64 + 0.5) / 100.0;
        let ma = recon.sliding_average(x).map_err(|e| e.to_string())?;
        let ip = lagrange_interpolate(&field, x, 3).map_err(|e| e.to_string())?;
        ensure(
            (ma - ip).abs() <= 1e-12 * scale,
            format!("mismatch {:.2e} at x={x}", (ma - ip).abs()),
        )?;
    }
    Ok(())
}

fn convex_combination() -> Result<(), String> {
    let field = noisy_field(64, 21);
    let grid = field.grid;
    let nu = 0.05;
    let dt = 0.8 * grid.dx * grid.dx / nu;
    let delta = (2.0 * dt * nu).sqrt();
    let params = StepParams::new(dt, 0.0, 2).map_err(|e| e.to_string())?;
    let model = DiffusivityModel::Constant(nu);
    let stepped = ffsl_diffusion_step(&field, &model, &params).map_err(|e| e.to_string())?;
    for i in 0..grid.cells {
        let x = grid.cell_center(i);
        let plus = lagrange_interpolate(&field, x + delta, 3).map_err(|e| e.to_string())?;
        let minus = lagrange_interpolate(&field, x - delta, 3).map_err(|e| e.to_string())?;
        let gap = (stepped.values()[i] - 0.5 * (plus + minus)).abs();
        ensure(gap <= 1e-12, format!("cell {i}: gap {gap:.2e}"))?;
    }
    Ok(())
}

fn two_norm_stability() -> Result<(), String> {
    let field = noisy_field(128, 3);
    let nu = 0.05;
    let dt = 1.6 * field.grid.dx * field.grid.dx / nu;
    let params = StepParams::new(dt, 0.0, 2).map_err(|e| e.to_string())?;
    let model = DiffusivityModel::Constant(nu);
    let mut state = field;
    let norm = |f: &CellField| f.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut prev = norm(&state);
    for step in 0..200 {
        state = ffsl_diffusion_step(&state, &model, &params).map_err(|e| e.to_string())?;
        let next = norm(&state);
        ensure(
            next <= prev * (1.0 + 1e-12),
            format!("norm grew at step {step}: {next:.15e} > {prev:.15e}"),
        )?;
        prev = next;
    }
    Ok(())
}

fn mass_drift(before: f64, after: f64, what: &str) -> Result<(), String> {
    let drift = (after - before).abs() / before.abs().max(1e-300);
    ensure(drift <= 1e-12, format!("{what}: drift {drift:.2e}"))
}

fn mass_diffusion() -> Result<(), String> {
    let field = noisy_field(96, 5);
    let model = DiffusivityModel::space_time(|x, t| 0.05 + 0.02 * (x + t).sin().abs());
    let mut state = field.clone();
    for n in 0..25 {
        let params = StepParams::new(0.01, n as f64 * 0.01, 2).map_err(|e| e.to_string())?;
        state = ffsl_diffusion_step(&state, &model, &params).map_err(|e| e.to_string())?;
    }
    mass_drift(
        total_mass(&field) + 10.0,
        total_mass(&state) + 10.0,
        "space-time diffusion",
    )
}

fn mass_nonlinear() -> Result<(), String> {
    let grid = Grid1D::new(10.0, 64).unwrap();
    let field = CellField::from_fn(grid, |x| (1.0 - (x - 5.0) * (x - 5.0)).max(0.0)).unwrap();
    let mut state = field.clone();
    for n in 0..25 {
        let params = StepParams::new(0.02, n as f64 * 0.02, 2).map_err(|e| e.to_string())?;
        state = ffsl_nonlinear_step(&state, 3.0, &params).map_err(|e| e.to_string())?;
    }
    mass_drift(total_mass(&field), total_mass(&state), "porous medium")
}

fn mass_advection() -> Result<(), String> {
    let field = noisy_field(96, 11);
    let vel = VelocityModel::space_time(|x, t| 1.0 + 0.4 * (x - t).cos());
    let mut state = field.clone();
    for n in 0..25 {
        let params = StepParams::new(0.02, n as f64 * 0.02, 1).map_err(|e| e.to_string())?;
        state = ffsl_advection_step(&state, &vel, &params).map_err(|e| e.to_string())?;
    }
    mass_drift(
        total_mass(&field) + 10.0,
        total_mass(&state) + 10.0,
        "advection",
    )
}

fn mass_2d() -> Result<(), String> {
    let grid = Grid2D::new(6.0, 6.0, 24, 24).unwrap();
    let field =
        CellField2D::from_fn(grid, |x, y| 1.0 + 0.5 * (1.2 * x).sin() * (0.7 * y).cos()).unwrap();
    let diff = DiagonalDiffusivity2D::isotropic(|x, y, _| {
        (-((x - 4.5) * (x - 4.5) + (y - 1.5) * (y - 1.5))).exp()
    });
    let mut state = field.clone();
    for n in 0..10 {
        let params = StepParams::new(0.05, n as f64 * 0.05, 0).map_err(|e| e.to_string())?;
        state = ffsl_diffusion_step_2d(&state, &diff, &params).map_err(|e| e.to_string())?;
    }
    mass_drift(total_mass_2d(&field), total_mass_2d(&state), "2D diffusion")
}

fn integer_shift() -> Result<(), String> {
    let field = noisy_field(40, 13);
    let grid = field.grid;
    let dt = 2.0 * grid.dx;
    let params = StepParams::new(dt, 0.0, 2).map_err(|e| e.to_string())?;
    let out = ffsl_advection_step(&field, &VelocityModel::Constant(1.0), &params)
        .map_err(|e| e.to_string())?;
    for i in 0..grid.cells {
        let want = field.at_wrapped(i as isize - 2);
        ensure(
            (out.values()[i] - want).abs() <= 1e-13,
            format!("cell {i} differs"),
        )?;
    }
    Ok(())
}

fn transpose_equivariance() -> Result<(), String> {
    let grid = Grid2D::new(6.0, 6.0, 20, 20).unwrap();
    let field = CellField2D::from_fn(grid, |x, y| (1.3 * x).sin() + (0.9 * y).cos()).unwrap();
    let nu = |x: f64, y: f64, _t: f64| (-((x - 3.0) * (x - 3.0) + (y - 3.0) * (y - 3.0))).exp();
    let diff = DiagonalDiffusivity2D::isotropic(nu);
    let params = StepParams::new(0.05, 0.0, 0).map_err(|e| e.to_string())?;
    let stepped = ffsl_diffusion_step_2d(&field, &diff, &params).map_err(|e| e.to_string())?;
    let swapped =
        ffsl_diffusion_step_2d(&field.transposed(), &diff, &params).map_err(|e| e.to_string())?;
    let gap = stepped
        .transposed()
        .values()
        .iter()
        .zip(swapped.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    ensure(gap <= 1e-12, format!("max gap {gap:.2e}"))
}
