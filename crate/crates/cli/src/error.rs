use std::fmt;

/// Failures that end a run before any output is written.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration, model names or library preconditions.
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<orlicz_core::Error> for CliError {
    fn from(e: orlicz_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
