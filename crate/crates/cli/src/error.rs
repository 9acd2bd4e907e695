use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    /// Rejected by the document schema; `location` is the JSON path of the offending value.
    #[error("{}: schema error at `{location}`: {message}", path.display())]
    Schema { path: PathBuf, location: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {target}: {source}")]
    Write { target: String, source: std::io::Error },
    #[error(transparent)]
    Analysis(#[from] pyragas::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 3 when the numerics could not finish.
    pub fn exit_code(&self) -> u8 {
        use pyragas::Error as E;
        match self {
            CliError::Read { .. } | CliError::Schema { .. } | CliError::Usage(_) => 2,
            CliError::Write { .. } => 1,
            CliError::Analysis(e) => match e {
                E::Input(_) | E::Parse(_) | E::Domain { .. } | E::Precondition(_) => 2,
                E::Numerical(_) | E::Inconclusive(_) => 3,
            },
        }
    }
}
