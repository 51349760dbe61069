use thiserror::Error;

/// Errors raised by the domain operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsgError {
    #[error("a coalition must contain at least one agent")]
    EmptyCoalition,
    #[error("agent {agent} is out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },
    #[error("coalition index {index} is out of range for {n} agents")]
    IndexOutOfRange { index: u64, n: usize },
    #[error("agent count {n} is outside the supported range {min}..={max}")]
    AgentCountOutOfRange { n: usize, min: usize, max: usize },
    #[error("dimension mismatch: structure has {structure} agents, instance has {instance}")]
    DimensionMismatch { structure: usize, instance: usize },
    #[error("stirling number Z({n},{i}) requires 1 <= i <= n")]
    StirlingOutOfRange { n: usize, i: usize },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("coalition value {value} at index {index} is negative or not finite")]
    InvalidValue { index: usize, value: f64 },
    #[error("expected {expected} values, got {got}")]
    WrongValueCount { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("statistics require at least one record")]
    EmptyRecords,
}

pub type Result<T> = std::result::Result<T, CsgError>;
