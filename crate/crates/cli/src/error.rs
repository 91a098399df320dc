use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Solver(String),
    #[error("reproduction bounds failed:\n{0}")]
    Bounds(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Bounds(_) => 3,
        }
    }
}

impl From<hybridfrac::Error> for CliError {
    fn from(e: hybridfrac::Error) -> Self {
        use hybridfrac::Error as E;
        match e {
            E::Solver { .. } | E::Model { .. } | E::Oracle(_) => CliError::Solver(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
