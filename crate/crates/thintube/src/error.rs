//! Crate-wide error type.
//!
//! Variants follow the failure modes of the numerical pipeline: bad inputs
//! (geometry, config), physical preconditions (tube overlap, band gaps),
//! solver breakdown, and quality guards that refuse to report numbers the
//! mesh cannot support.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve does not close: endpoint gap {gap:.3e} exceeds {tol:.3e}")]
    OpenCurve { gap: f64, tol: f64 },

    #[error("degenerate curve: tangent norm {norm:.3e} below 1e-12")]
    DegenerateCurve { norm: f64 },

    #[error("profile is not periodic up to the declared holonomy: wrap mismatch {mismatch:.3e}")]
    PeriodicityViolation { mismatch: f64 },

    #[error("band {band} is degenerate: neighbour distance {gap:.3e} below tolerance {tol:.3e}")]
    DegeneracyDetected { band: usize, gap: f64, tol: f64 },

    #[error("band gap {gamma:.3e} at or below tolerance {tol:.3e}")]
    GapViolation { gamma: f64, tol: f64 },

    #[error("eigenfunction section does not close around the loop: overlap {overlap:.8}")]
    GaugeInconsistency { overlap: f64 },

    #[error("grid mismatch: expected {expected} samples, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("effective metric coefficient nonpositive: a(q) = {value:.3e} at sample {index}")]
    MetricDegenerate { value: f64, index: usize },

    #[error("tube self-overlaps: eps * sup|n.kappa| = {value:.3} >= 1")]
    TubeOverlap { value: f64 },

    #[error("resolution too coarse: {what}")]
    ResolutionTooCoarse { what: String },

    #[error("eigensolver failed: {what}")]
    SolverFailure { what: String },

    #[error("initial state leaks {leak:.3e} of its norm above the energy cutoff (tolerance {tol:.3e})")]
    CutoffLeak { leak: f64, tol: f64 },

    #[error("mesh-independence guard failed for every epsilon; refusing to fit")]
    MeshNotConverged,

    #[error("insufficient spectrum: found {found} eigenvalues below the cutoff, need {need}")]
    InsufficientSpectrum { found: usize, need: usize },

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 2 config/input, 3 solver, 4 guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SolverFailure { .. } => 3,
            Error::MeshNotConverged
            | Error::CutoffLeak { .. }
            | Error::InsufficientSpectrum { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
