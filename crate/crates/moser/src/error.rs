use algebroid_core::geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MoserError {
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid numeric field: {0}")]
    InvalidField(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("form does not vanish along L: {0}")]
    NotRelative(String),
    #[error("structures differ along L: {0}")]
    Disagree(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("quadrature did not converge at {point:?}: difference {difference:e}")]
    Quadrature { point: Vec<f64>, difference: f64 },
    #[error("singular pointwise solve at {point:?}, t = {t}")]
    Singular { point: Vec<f64>, t: f64 },
    #[error("trajectory from {start:?} left the grid box at t = {t}")]
    LeftBox { start: Vec<f64>, t: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed grid dump: {0}")]
    Dump(String),
}
