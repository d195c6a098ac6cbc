use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid grid cuts: {0}")]
    InvalidCuts(String),
    #[error("cell set is not locally closed: chain {lower} <= {middle} <= {upper} has its middle cell missing")]
    NotLocallyClosed { lower: usize, middle: usize, upper: usize },
    #[error("subset is not {expected} in the ambient cell set")]
    BadSubset { expected: &'static str },
    #[error("complex is not refined along the line x.d = {0}")]
    NotRefined(String),
    #[error("region is not rectilinear: {0}")]
    NotRectilinear(String),
    #[error("unsupported on this backend: {0}")]
    Backend(String),
    #[error("point {0} lies outside the ambient window")]
    OutsideWindow(String),
    #[error("window margin {margin} does not exceed the radius {radius}")]
    Margin { margin: String, radius: String },
    #[error("invalid convex region: {0}")]
    InvalidRegion(String),
    #[error("generator {index}: {reason}")]
    Generator { index: usize, reason: String },
    #[error("rank function is not realizable: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("scene schema violation at {location}: {message}")]
    Schema { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
