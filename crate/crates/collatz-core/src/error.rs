use num_bigint::BigUint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The trajectory did not reach 1 within the iteration cap. Either the
    /// cap was too small or the start value is a counterexample candidate;
    /// the last value reached and the iteration count are carried along so
    /// the caller can report or resume.
    #[error("trajectory did not reach 1 within {iterations} iterations (last value has {} bits)", .last.bits())]
    NonTermination { last: BigUint, iterations: u64 },

    #[error("value {0} is outside the domain of the Collatz step (requires n >= 2)")]
    StepDomain(BigUint),

    #[error("argument must be >= 1")]
    ZeroArgument,

    #[error("not a decimal natural number: {0:?}")]
    InvalidNatural(String),

    #[error("checkpoint format error: {0}")]
    CheckpointFormat(String),

    #[error("checkpoint was written by format version {found}, expected {expected}")]
    CheckpointVersion { expected: u32, found: u32 },

    #[error("checkpoint campaign does not match the requested campaign: {0}")]
    CheckpointMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
