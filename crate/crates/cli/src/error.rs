use std::fmt;

use biflex_core::Error;

/// A failure classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable or schema-violating input (exit 2).
    Input(String),
    /// The inputs were fine but the computation could not proceed (exit 1).
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn input(e: impl fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Treats every failure while loading an input file as an input error.
pub trait InputContext<T> {
    fn as_input(self) -> CliResult<T>;
}

impl<T> InputContext<T> for biflex_core::Result<T> {
    fn as_input(self) -> CliResult<T> {
        self.map_err(CliError::input)
    }
}
