use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} {value} out of range (must be below {limit})")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// `p = (i - q) mod l` landed on an input the AWG does not have.
    #[error("no physical input: output {output} on wavelength {wavelength} needs input {input}, but the AWG has {inputs} inputs")]
    NoInput {
        output: usize,
        wavelength: usize,
        input: usize,
        inputs: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid request set: {0}")]
    InvalidSet(String),

    #[error("conflicting wavelength conversion demands: {0}")]
    TwcConflict(String),

    #[error("resource guard: {what} requires {required}, limit is {limit}")]
    ResourceGuard {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: impl TryInto<u64>, limit: impl TryInto<u64>) -> Self {
        Error::Range {
            what,
            value: value.try_into().unwrap_or(u64::MAX),
            limit: limit.try_into().unwrap_or(u64::MAX),
        }
    }
}
