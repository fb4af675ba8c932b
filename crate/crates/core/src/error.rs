use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid quotient at simplex {simplex}: {reason}")]
    QuotientInvalid { simplex: Simplex, reason: String },

    #[error("not a pseudomanifold: ridge {ridge} lies in {facet_count} facets")]
    NotPseudomanifold { ridge: Simplex, facet_count: usize },

    #[error("not a pseudomanifold: {0}")]
    NotPseudomanifoldShape(String),

    #[error("complex is not orientable; no fundamental class")]
    NotOrientable,

    #[error("invalid simplicial map: image of {simplex} is not a simplex")]
    MapInvalid { simplex: Simplex },

    #[error(
        "zero threshold {threshold:e} separates {spectral} harmonic forms in degree {degree}, \
         exact count is {exact}; nearest eigenvalue to the gap is {gap_eigenvalue:e}"
    )]
    ThresholdFailure {
        degree: usize,
        exact: usize,
        spectral: usize,
        threshold: f64,
        gap_eigenvalue: f64,
    },

    #[error("determinant undefined: spectrum in degree {degree} has no nonzero eigenvalue")]
    UndefinedDeterminant { degree: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("spectrum in degree {degree} is partial; the full spectrum is required")]
    PartialSpectrum { degree: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("degree {degree} out of range for complex of dimension {dim:?}")]
    DegreeOutOfRange { degree: usize, dim: Option<usize> },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or ill-formed input rather than
    /// by the mathematics of a well-formed request.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedInput(_)
                | Error::Io(_)
                | Error::DimensionMismatch { .. }
                | Error::DegreeOutOfRange { .. }
                | Error::UnknownEntry(_)
        )
    }
}
