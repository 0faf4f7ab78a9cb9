//! Library half of the `qsvand` command-line tool: the instance file
//! format, the matrix dump format, and the error-to-exit-code mapping.

pub mod dump;
pub mod instance_file;

use std::fmt;

/// Exit code for singular matrices or residuals above threshold.
pub const EXIT_NUMERIC: u8 = 2;
/// Exit code for bad arguments or malformed files.
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed files: exit 3.
    Input(String),
    /// Singular matrices or residuals above threshold: exit 2.
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<qsvand::Error> for CliError {
    fn from(e: qsvand::Error) -> Self {
        match e {
            qsvand::Error::NumericallySingular { .. } | qsvand::Error::SingularBasis { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}
