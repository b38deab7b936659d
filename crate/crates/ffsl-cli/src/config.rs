//! Experiment identifiers, scheme selection and run configuration.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// The named experiments. Physical parameters (domain, horizon,
/// coefficients, initial data) are fixed per experiment by the presets in
/// the runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    /// `u_t = nu u_xx`, nu = 0.05, Gaussian initial profile, T = 2.
    ConstDiffusion,
    /// `u_t + a u_x = nu u_xx`, a = 1.5, nu = 0.05, T = 2.
    ConstAdvdiff,
    /// `u_t = (nu(x,t) u_x)_x` with a discontinuous-in-space, pulsating
    /// coefficient, T = 4.
    VariableDiffusion,
    /// Porous-medium equation `u_t = (m u^(m-1) u_x)_x`, Barenblatt data,
    /// m = 3, T = 16.
    PorousMedia,
    /// 2D isotropic variable diffusion on [-3,3]^2, indicator initial data,
    /// T = 2.
    Isotropic2d,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 5] = [
        Self::ConstDiffusion,
        Self::ConstAdvdiff,
        Self::VariableDiffusion,
        Self::PorousMedia,
        Self::Isotropic2d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ConstDiffusion => "const_diffusion",
            Self::ConstAdvdiff => "const_advdiff",
            Self::VariableDiffusion => "variable_diffusion",
            Self::PorousMedia => "porous_media",
            Self::Isotropic2d => "isotropic_2d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .with_context(|| {
                let names: Vec<_> = Self::ALL.iter().map(|e| e.name()).collect();
                format!(
                    "unknown experiment '{s}'; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Nonconservative semi-Lagrangian (interpolation at displaced points).
    Sl,
    /// Conservative flux-form variant.
    Ffsl,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sl => "SL",
            Self::Ffsl => "FFSL",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SL" => Ok(Self::Sl),
            "FFSL" => Ok(Self::Ffsl),
            other => bail!("unknown scheme '{other}'; expected SL or FFSL"),
        }
    }

    /// Column label in the reports: "SL/I3", "FFSL/R2", ...
    pub fn label(self, order: usize) -> String {
        match self {
            Self::Sl => format!("SL/I{order}"),
            Self::Ffsl => format!("FFSL/R{order}"),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One experiment run: which scheme at which resolution, and where to put
/// the artifacts (no files are written when `out_dir` is empty).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub scheme: Scheme,
    pub order: usize,
    pub cells: usize,
    pub steps: usize,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(
        experiment: ExperimentId,
        scheme: Scheme,
        order: usize,
        cells: usize,
        steps: usize,
    ) -> Result<Self> {
        let config = Self {
            experiment,
            scheme,
            order,
            cells,
            steps,
            out_dir: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells == 0 || self.steps == 0 {
            bail!(
                "N and M must be at least 1 (got N={}, M={})",
                self.cells,
                self.steps
            );
        }
        match (self.scheme, self.order) {
            (Scheme::Sl, 1 | 3) => {}
            (Scheme::Sl, o) => bail!("SL interpolation order must be 1 or 3, got {o}"),
            (Scheme::Ffsl, 0 | 2) => {}
            (Scheme::Ffsl, o) => bail!("FFSL reconstruction degree must be 0 or 2, got {o}"),
        }
        if self.experiment == ExperimentId::Isotropic2d && self.scheme == Scheme::Sl {
            bail!("the 2D experiment is defined for the FFSL scheme only");
        }
        Ok(())
    }

    /// Directory-safe run name, used for output paths.
    pub fn run_name(&self) -> String {
        let kind = match self.scheme {
            Scheme::Sl => format!("sl_i{}", self.order),
            Scheme::Ffsl => format!("ffsl_r{}", self.order),
        };
        format!(
            "{}_{kind}_N{}_M{}",
            self.experiment.name(),
            self.cells,
            self.steps
        )
    }
}

/// Read a `key=value` configuration file ('#' starts a comment). Recognized
/// keys: experiment, scheme, order, n, m, out.
pub fn load_key_values(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
        map.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!(
            ExperimentId::parse("porous_media").unwrap(),
            ExperimentId::PorousMedia
        );
        assert!(ExperimentId::parse("bogus").is_err());
        assert_eq!(Scheme::parse("ffsl").unwrap(), Scheme::Ffsl);
        assert_eq!(Scheme::parse("SL").unwrap(), Scheme::Sl);
    }

    #[test]
    fn validates_orders() {
        use ExperimentId::*;
        assert!(ExperimentConfig::new(ConstDiffusion, Scheme::Sl, 3, 100, 10).is_ok());
        assert!(ExperimentConfig::new(ConstDiffusion, Scheme::Sl, 2, 100, 10).is_err());
        assert!(ExperimentConfig::new(ConstDiffusion, Scheme::Ffsl, 2, 100, 10).is_ok());
        assert!(ExperimentConfig::new(ConstDiffusion, Scheme::Ffsl, 1, 100, 10).is_err());
        assert!(ExperimentConfig::new(Isotropic2d, Scheme::Sl, 3, 50, 40).is_err());
        assert!(ExperimentConfig::new(ConstDiffusion, Scheme::Ffsl, 2, 0, 10).is_err());
    }

    #[test]
    fn run_names_are_path_safe() {
        let c = ExperimentConfig::new(ExperimentId::PorousMedia, Scheme::Ffsl, 2, 50, 320).unwrap();
        assert_eq!(c.run_name(), "porous_media_ffsl_r2_N50_M320");
    }
}
