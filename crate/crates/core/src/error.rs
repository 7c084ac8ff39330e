use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown fixture `{name}` (valid fixtures: {})", valid.join(", "))]
    UnknownFixture {
        name: String,
        valid: Vec<&'static str>,
    },

    #[error("unknown evaluator `{0}` (expected compositional, printed or corrected)")]
    UnknownImpl(String),

    #[error("unknown region `{0}` (expected full, t-le-half, agreement or defect)")]
    UnknownRegion(String),

    #[error("{space} point has dimension {got}, expected {expected}")]
    Dimension {
        space: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("coordinate {0} is not finite")]
    NonFinite(f64),

    #[error("parameter {0} lies outside the unit interval")]
    OutOfUnitInterval(f64),

    #[error("point is not on the top of the cylinder")]
    NotOnTop,

    #[error("sample region contains no points")]
    EmptyRegion,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
