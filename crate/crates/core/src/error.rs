use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion does not represent a Minkowski vector (defect {defect:e})")]
    NotAVector { defect: f64 },

    #[error("quaternion is not in Spin(1,3): |H(q,q) - 1| = {defect:e}")]
    NotInSpin { defect: f64 },

    #[error("quaternion has a real part of size {real_part:e}; expected an imaginary quaternion")]
    NotImaginary { real_part: f64 },

    #[error("quaternion is not invertible: |H(q,q)| = {norm:e}")]
    NotInvertible { norm: f64 },

    #[error("degenerate plane: {0}")]
    DegeneratePlane(String),

    #[error("normal frame is degenerate at node ({i}, {j})")]
    DegenerateNormalFrame { i: usize, j: usize },

    #[error("node ({i}, {j}) is not an interior node of a {nx}x{ny} grid")]
    NotInterior { i: usize, j: usize, nx: usize, ny: usize },

    #[error("angle {psi1} + {psi2}i is neither real nor purely imaginary")]
    WrongAngleClass { psi1: f64, psi2: f64 },

    #[error("complex angle {psi1} + {psi2}i is degenerate for this operation ({reason})")]
    AngleDegenerate { psi1: f64, psi2: f64, reason: String },

    #[error("Cauchy curve is not strictly monotone in both coordinates near point {index}")]
    NonMonotoneCurve { index: usize },

    #[error("loop closure failed: residual {residual:e} exceeds tolerance {tolerance:e} at cell ({i}, {j})")]
    ClosureFailure {
        residual: f64,
        tolerance: f64,
        i: usize,
        j: usize,
    },

    #[error("bad family parameters: {0}")]
    BadSpecParameters(String),

    #[error("potentials do not solve the coordinate-form system: residual {residual:e} exceeds {tolerance:e} (equation {equation})")]
    PotentialsInconsistent {
        equation: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable short name used in machine-readable CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAVector { .. } => "NotAVector",
            Error::NotInSpin { .. } => "NotInSpin",
            Error::NotImaginary { .. } => "NotImaginary",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::DegeneratePlane(_) => "DegeneratePlane",
            Error::DegenerateNormalFrame { .. } => "DegenerateNormalFrame",
            Error::NotInterior { .. } => "NotInterior",
            Error::WrongAngleClass { .. } => "WrongAngleClass",
            Error::AngleDegenerate { .. } => "AngleDegenerate",
            Error::NonMonotoneCurve { .. } => "NonMonotoneCurve",
            Error::ClosureFailure { .. } => "ClosureFailure",
            Error::BadSpecParameters(_) => "BadSpecParameters",
            Error::PotentialsInconsistent { .. } => "PotentialsInconsistent",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
