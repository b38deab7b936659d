use thiserror::Error;

/// Errors produced by grid construction, reconstruction and the step operators.
#[derive(Debug, Error)]
pub enum FfslError {
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("grid needs at least one cell")]
    ZeroCells,

    #[error("cells must be square: dx = {dx}, dy = {dy}")]
    NonSquareCells { dx: f64, dy: f64 },

    #[error("field has {len} values but the grid has {cells} cells")]
    FieldSizeMismatch { len: usize, cells: usize },

    #[error("field value at index {0} is not finite")]
    NonFiniteValue(usize),

    #[error("unsupported reconstruction degree {0} (expected 0 or 2)")]
    UnsupportedDegree(usize),

    #[error("unsupported interpolation degree {0} (expected 1 or 3)")]
    UnsupportedInterpolation(usize),

    #[error("unsupported advective reconstruction order {0} (expected 1 or 2)")]
    UnsupportedAdvectionOrder(usize),

    #[error("reconstruction of degree {degree} needs more than {degree} cells, grid has {cells}")]
    StencilTooWide { degree: usize, cells: usize },

    #[error("integration range of width {span} exceeds the domain length {domain}")]
    RangeExceedsDomain { span: f64, domain: f64 },

    #[error("diffusivity is negative ({nu}) at x = {x}, t = {t}")]
    NegativeDiffusivity { nu: f64, x: f64, t: f64 },

    #[error("state-dependent diffusivity passed where a space-time model is required")]
    ExpectedLinearDiffusivity,

    #[error("power-law exponent must exceed 1, got {0}")]
    InvalidExponent(f64),

    #[error("time step must be positive, got {0}")]
    NonPositiveTimeStep(f64),

    #[error("displacement iteration stalled: residual {residual} after {iterations} iterations")]
    DisplacementNotConverged { residual: f64, iterations: usize },

    #[error("no admissible displacement in the search window [0, {window}]")]
    SearchWindowExhausted { window: f64 },

    #[error("relative error undefined: reference field has zero norm")]
    ZeroReferenceNorm,

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("reference solve needs {steps} steps, above the limit of {limit}")]
    StepLimitExceeded { steps: u64, limit: u64 },

    #[error("fine grid with {0} cells cannot be restricted 4:1")]
    NotRefinableBy4(usize),
}

pub type Result<T> = std::result::Result<T, FfslError>;
