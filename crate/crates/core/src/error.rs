use thiserror::Error;

pub type Result<T> = std::result::Result<T, ScatterError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error("invalid potential: {}", .0.join("; "))]
    InvalidPotential(Vec<String>),

    #[error("invalid incident wave: {0}")]
    InvalidWave(String),

    #[error("non-finite argument: {0}")]
    NonFinite(f64),

    #[error("matrix is singular: pivot {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The system matrix is singular at a real wavenumber: a zero-width
    /// resonance of the potential.
    #[error("spectral singularity at k = {k}")]
    SpectralSingularity { k: f64, theta0: Option<f64> },

    #[error("line coefficients a and b are both zero")]
    DegenerateLine,

    #[error("incidence angle {theta0} rad is grazing after rotation")]
    GrazingAfterRotation { theta0: f64 },

    #[error("delta separation is degenerate (a*k = {ak})")]
    DegenerateSeparation { ak: f64 },

    #[error("incommensurate frequencies: {0}")]
    IncommensurateFrequencies(String),

    /// A diffraction channel propagates parallel to the line (ω ≈ 0).
    #[error("grazing mode at shift {shift} (k = {k}, theta0 = {theta0})")]
    GrazingMode { shift: i64, k: f64, theta0: f64 },

    #[error("p0 = {p0} lies outside the mode cell (j = {j}, q = {q})")]
    OutOfCell { j: u32, q: u32, p0: f64 },

    #[error("outside regime: {0}")]
    OutOfRegime(String),

    #[error("Born series did not converge after {terms} terms (contraction estimate {ratio})")]
    NotConverged { terms: usize, ratio: f64 },
}

impl ScatterError {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ScatterError::InvalidPotential(_) => "InvalidPotential",
            ScatterError::InvalidWave(_) => "InvalidWave",
            ScatterError::NonFinite(_) => "NonFinite",
            ScatterError::SingularMatrix { .. } => "SingularMatrix",
            ScatterError::DimensionMismatch(_) => "DimensionMismatch",
            ScatterError::SpectralSingularity { .. } => "SpectralSingularity",
            ScatterError::DegenerateLine => "DegenerateLine",
            ScatterError::GrazingAfterRotation { .. } => "GrazingAfterRotation",
            ScatterError::DegenerateSeparation { .. } => "DegenerateSeparation",
            ScatterError::IncommensurateFrequencies(_) => "IncommensurateFrequencies",
            ScatterError::GrazingMode { .. } => "GrazingMode",
            ScatterError::OutOfCell { .. } => "OutOfCell",
            ScatterError::OutOfRegime(_) => "OutOfRegime",
            ScatterError::NotConverged { .. } => "NotConverged",
        }
    }
}
