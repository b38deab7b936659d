use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use ffsl_cli::config::{load_key_values, ExperimentConfig, ExperimentId, Scheme};
use ffsl_cli::{run_experiment, run_table, selftest};

#[derive(Parser)]
#[command(
    name = "ffsl",
    about = "Flux-form semi-Lagrangian diffusion experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and report its errors and mass balance.
    Run {
        /// const_diffusion | const_advdiff | variable_diffusion |
        /// porous_media | isotropic_2d
        #[arg(long)]
        experiment: Option<String>,
        /// SL | FFSL
        #[arg(long)]
        scheme: Option<String>,
        /// Interpolation degree (SL: 1 or 3) or reconstruction degree
        /// (FFSL: 0 or 2)
        #[arg(long)]
        order: Option<usize>,
        /// Cell count
        #[arg(long = "N")]
        n: Option<usize>,
        /// Step count
        #[arg(long = "M")]
        m: Option<usize>,
        /// Output directory for the report and solution snapshots
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional key=value file supplying defaults for the flags above
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every cell of one benchmark table (1..=7).
    Table {
        #[arg(long)]
        id: usize,
        /// Output directory (default "out")
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and print one line per check.
    Selftest,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            experiment,
            scheme,
            order,
            n,
            m,
            out,
            config,
        } => {
            let file = match &config {
                Some(path) => load_key_values(path)?,
                None => Default::default(),
            };
            let lookup = |flag: Option<String>, key: &str| -> Result<String> {
                flag.or_else(|| file.get(key).cloned())
                    .with_context(|| format!("missing --{key} (or '{key}=' in the config file)"))
            };
            let experiment = ExperimentId::parse(&lookup(experiment, "experiment")?)?;
            let scheme = Scheme::parse(&lookup(scheme, "scheme")?)?;
            let parse_num = |v: String, key: &str| -> Result<usize> {
                v.parse()
                    .with_context(|| format!("{key} must be a positive integer, got '{v}'"))
            };
            let order = match order {
                Some(o) => o,
                None => parse_num(lookup(None, "order")?, "order")?,
            };
            let cells = match n {
                Some(v) => v,
                None => parse_num(lookup(None, "n")?, "n")?,
            };
            let steps = match m {
                Some(v) => v,
                None => parse_num(lookup(None, "m")?, "m")?,
            };
            let mut cfg = ExperimentConfig::new(experiment, scheme, order, cells, steps)?;
            if let Some(dir) = out.or_else(|| file.get("out").map(PathBuf::from)) {
                cfg = cfg.with_out_dir(dir);
            }
            let outcome = run_experiment(&cfg)?;
            let r = &outcome.report;
            println!("experiment:     {}", cfg.experiment);
            println!("scheme:         {}", r.scheme);
            println!("resolution:     N={} M={}", r.cells, r.steps);
            if let Some(mu) = r.mu {
                println!("mu:             {mu:.4}");
            }
            if let Some(c) = r.courant {
                println!("courant:        {c:.4}");
            }
            if let Some(l2) = r.l2_rel {
                println!("l2_rel:         {l2:.6e}");
            }
            if let Some(linf) = r.linf_rel {
                println!("linf_rel:       {linf:.6e}");
            }
            println!("mass_initial:   {:.12e}", r.mass_initial);
            println!("mass_final:     {:.12e}", r.mass_final);
            println!("mass_drift_rel: {:.6e}", r.mass_drift_rel);
            println!("runtime_s:      {:.3}", outcome.runtime_s);
            if let Some(dir) = &cfg.out_dir {
                println!("artifacts:      {}", dir.join(cfg.run_name()).display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { id, out } => {
            let out_dir = out.unwrap_or_else(|| PathBuf::from("out"));
            let output = run_table(id, &out_dir, |msg| eprintln!("{msg}"))?;
            print!("{}", output.text);
            println!("wrote {}", output.csv_path.display());
            println!("wrote {}", output.txt_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let ok = selftest::run(|line| println!("{line}"));
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
