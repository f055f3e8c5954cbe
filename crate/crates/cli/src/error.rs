use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    /// Aliased momentum window or unconverged grid.
    #[error("{0}")]
    Resolution(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resolution(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<qmirror::Error> for CliError {
    fn from(e: qmirror::Error) -> Self {
        use qmirror::Error as E;
        match e {
            E::Grid(_) | E::Parameter { .. } | E::Budget { .. } => CliError::Config(e.to_string()),
            E::NotNormalized { .. } | E::Contract(_) | E::Numerical(_) => CliError::Numerical(e.to_string()),
        }
    }
}
