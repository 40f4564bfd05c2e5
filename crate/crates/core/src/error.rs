use thiserror::Error;

/// Errors shared by the model, the solvers and the algebra module.
///
/// Mathematical verdicts (absence of a matching, failed searches, violated
/// invariants found by a validator) are *data*, not errors; this type only
/// covers broken preconditions and out-of-scope requests.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid colour {colour}: instance has {n} colours")]
    InvalidColour { colour: usize, n: usize },

    #[error("invalid reference: {0}")]
    InvalidReference(String),

    #[error("colour {colour} is not missing from the matching")]
    MissingColourPresent { colour: usize },

    #[error("switching application: {0}")]
    SwitchingApplication(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("out of feasible scope: {0}")]
    InfeasibleScope(String),

    #[error("ground set of size {size} exceeds the cap of {cap}")]
    GroundTooLarge { size: usize, cap: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("no witness: {0}")]
    NoWitness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
