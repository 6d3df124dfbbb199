use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("contact condition degenerate at point (density {density:e})")]
    DegenerateContact { density: f64 },
    #[error("contact density changes sign (min {min:e}, max {max:e})")]
    NonOrientedDensity { min: f64, max: f64 },
    #[error("empty orbit set")]
    EmptyOrbitSet,
    #[error("point outside Darboux chart (|x| = {norm})")]
    OutOfChart { norm: f64 },
    #[error("integrator step underflow at t = {t}")]
    StepFailure { t: f64 },
    #[error("no return to the section before t = {t_max}")]
    NoReturn { t_max: f64 },
    #[error("orbit left the Darboux chart family (overlap {overlap})")]
    ChartEscape { overlap: f64 },
    #[error("form is not normalized: reference fiber closure residual {residual:e}")]
    NotNormalized { residual: f64 },
    #[error("orbit alignment failed: residual {residual:e}")]
    AlignmentFailure { residual: f64 },
    #[error("Weinstein chart domain violated: |theta - Theta| = {gap}")]
    OutOfDomain { gap: f64 },
    #[error("negative radicand {value:e} in Weinstein inverse")]
    NegativeRadicand { value: f64 },
    #[error("division at the binding (rho = 0)")]
    DivisionAtBinding,
    #[error("function does not vanish on the boundary (max {max:e})")]
    NonVanishingBoundary { max: f64 },
    #[error("angular displacement overflow {gap}")]
    DomainOverflow { gap: f64 },
    #[error("radial factor not monotone at theta = {theta}")]
    NonMonotone { theta: f64 },
    #[error("no sign witness found: {reason}")]
    WitnessNotFound { reason: String },
    #[error("configuration error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
