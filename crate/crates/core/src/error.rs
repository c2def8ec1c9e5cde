use thiserror::Error;

/// Errors raised by the channel model, rate, code and outage routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid OFDM configuration: {0}")]
    InvalidConfig(String),
    #[error("impulse response has no taps")]
    EmptyTaps,
    #[error("legitimate channel length {len} exceeds cyclic prefix {mu}; ISI-free demodulation impossible")]
    ChannelTooLong { len: usize, mu: usize },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("legitimate channel has zero gain on every subcarrier")]
    ZeroGain,
    #[error("input covariance is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("infeasible code parameters: {0}")]
    InfeasibleCode(String),
    #[error("threshold bracket not found in [{lo_db}, {hi_db}] dB")]
    BracketNotFound { lo_db: f64, hi_db: f64 },
    #[error("SNR grid exhausted: {0}")]
    GridExhausted(String),
    #[error("alist parse error at line {line}: {msg}")]
    Alist { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
