use thiserror::Error;

/// Errors raised by the geometric operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("points do not span a line")]
    DegenerateSpan,
    #[error("affine chart breaks down{}", view_suffix(.view))]
    ChartDegenerate { view: Option<usize> },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("camera matrix is not of rank 3")]
    InvalidCamera,
    #[error("camera pair has equal centers")]
    DegeneratePair,
    #[error("matrix is not a rank-2 fundamental matrix")]
    InvalidFundamental,
    #[error("plane passes through a camera center")]
    PlaneThroughCenter,
    #[error("camera center lies on the curve")]
    CenterOnCurve,
    #[error("cone vertex lies on the curve")]
    VertexOnCurve,
    #[error("expected a degree-{expected} curve, got degree {got}")]
    InvalidDegree { expected: usize, got: usize },
    #[error("no planar solution: {0}")]
    NoPlanarSolution(String),
    #[error("no camera pair with distinct centers")]
    NoValidPair,
    #[error("camera {index}: {source}")]
    InCamera {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

fn view_suffix(view: &Option<usize>) -> String {
    match view {
        Some(v) => format!(" in view {v}"),
        None => String::new(),
    }
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::DegenerateSpan => "degenerate-span",
            Error::ChartDegenerate { .. } => "chart-degenerate",
            Error::DegenerateParameter(_) => "degenerate-parameter",
            Error::InvalidCamera => "invalid-camera",
            Error::DegeneratePair => "degenerate-pair",
            Error::InvalidFundamental => "invalid-fundamental",
            Error::PlaneThroughCenter => "plane-through-center",
            Error::CenterOnCurve => "center-on-curve",
            Error::VertexOnCurve => "vertex-on-curve",
            Error::InvalidDegree { .. } => "invalid-degree",
            Error::NoPlanarSolution(_) => "no-planar-solution",
            Error::NoValidPair => "no-valid-pair",
            Error::InCamera { source, .. } => source.code(),
        }
    }

    pub(crate) fn in_camera(self, index: usize) -> Error {
        Error::InCamera {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
