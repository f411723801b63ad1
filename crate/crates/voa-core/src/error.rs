use thiserror::Error;

#[derive(Debug, Error)]
pub enum VoaError {
    #[error("product a_({n}) from levels ({la}, {lb}) leaves the window (cutoff {cutoff})")]
    OutOfWindow { la: u32, n: i64, lb: u32, cutoff: u32 },

    #[error("operation requires a homogeneous vector")]
    NotHomogeneous,

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("model file: {0}")]
    Format(String),

    #[error("{0}")]
    Check(String),
}
