use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Core(#[from] heatrace_core::Error),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("coefficient a = {value} at {location:?} violates {lower} <= a <= {upper}")]
    Ellipticity { value: f64, location: Vec<f64>, lower: f64, upper: f64 },

    #[error("potential is nonzero within the declared margin {margin} of the boundary")]
    SupportMargin { margin: f64 },

    #[error("potential support spans only {nodes} nodes along axis {axis}; at least {required} are needed")]
    Unresolved { axis: usize, nodes: usize, required: usize },

    #[error("potential grid does not match the domain grid")]
    GridMismatch,

    #[error("the model was built without eigenvectors")]
    MissingEigenvectors,

    #[error("Duhamel order {0} is not supported (1 to 3)")]
    DuhamelOrder(usize),

    #[error("eigenvalue cutoff too aggressive: truncation bound {bound:e} exceeds tolerance {tolerance:e}")]
    CutoffTooAggressive { bound: f64, tolerance: f64 },

    #[error("invalid time grid: {0}")]
    TimeGrid(String),

    #[error("underdetermined fit: {samples} samples for {powers} powers")]
    Underdetermined { samples: usize, powers: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("mismatched potentials: {0}")]
    MismatchedPotentials(String),
}

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;
