use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("series is not invertible: constant coefficient vanishes")]
    NonInvertible,

    #[error("singularity in {what}: denominator modulus {modulus:e} below threshold")]
    Singularity { what: &'static str, modulus: f64 },

    #[error("coincident spectral parameters ({what}); use the homogeneous or jet-based evaluators")]
    CoincidentParameters { what: &'static str },

    #[error("{what} = {got} exceeds the cap {max}")]
    SizeCap {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("degenerate Hankel determinant at order {order}")]
    DegenerateHankel { order: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
