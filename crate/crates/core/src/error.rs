use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters too large for the exhaustive backend: l + t = {bits} exceeds {limit}")]
    ParamsTooLarge { bits: u32, limit: u32 },

    #[error("{what} = {value:#x} does not fit in {bits} bits")]
    Length { what: &'static str, value: u64, bits: u32 },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    /// Simulator tables out of sync; always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("distribution supports cannot be unified")]
    SupportMismatch,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("under-sampled: expected count per cell {expected:.3} is below {minimum}")]
    UnderSampled { expected: f64, minimum: f64 },

    #[error("no samples requested")]
    NoSamples,

    #[error("encoded length {bits} bits does not embed into modulus {modulus}")]
    EncodingOverflow { bits: u32, modulus: u64 },

    #[error("signature component out of range")]
    SignatureRange,

    #[error("key generation failed: {0}")]
    KeyGeneration(String),

    #[error("oracle {0} is not granted by model {1}")]
    OracleNotGranted(&'static str, &'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown bound `{0}`")]
    UnknownBound(String),

    #[error("freshness violated: the chosen point was already answered by an oracle")]
    FreshnessViolation,

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
