use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input. `field` names what was wrong.
    #[error("invalid {field}: {message}")]
    Input { field: String, message: String },

    /// An exhaustive search was asked to go past its configured limit.
    #[error("{what} of size {size} exceeds the limit of {limit}")]
    Capacity { what: &'static str, size: u64, limit: u64 },

    /// The optimum is zero, so no competitive ratio exists.
    #[error("ratio is undefined: optimal value is zero")]
    UndefinedRatio,
}

impl Error {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn capacity(what: &'static str, size: impl TryInto<u64>, limit: impl TryInto<u64>) -> Self {
        Error::Capacity {
            what,
            size: size.try_into().unwrap_or(u64::MAX),
            limit: limit.try_into().unwrap_or(u64::MAX),
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
