use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid phase model: {0}")]
    InvalidModel(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid harmonic order {0}: must be nonnegative")]
    InvalidHarmonic(i32),
    #[error("invalid harmonic moment: |m| = {0} exceeds 1")]
    InvalidMoment(f64),
    #[error("invalid visibility: |V| = {0} exceeds 1")]
    InvalidVisibility(f64),
    #[error("degenerate reduced state: {0}")]
    DegenerateState(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
