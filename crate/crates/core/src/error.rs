use thiserror::Error;

/// Errors raised by the group, engine and diagnostic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("duplicate character {0}")]
    DuplicateCharacter(String),

    #[error("character set is empty")]
    EmptySet,

    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A hard size limit was hit before any useful work could be done
    /// (torsion product, candidate universe, signing enumeration, ...).
    #[error("resource limit: {what} needs {needed} units, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        budget: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
