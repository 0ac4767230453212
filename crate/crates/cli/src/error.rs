use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] loopstrata::Error),
}

impl CliError {
    /// 2 bad input, 3 precision, 4 not regular, 5 resonant, 6 torus or depth mismatch.
    pub fn exit_code(&self) -> ExitCode {
        use loopstrata::Error as E;
        let code = match self {
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::Invalid(_) | E::InvalidFormalType(_) | E::NotCompatible(_) => 2,
                E::InsufficientPrecision(_) => 3,
                E::NotRegular(_) | E::NotRegularClass(_) | E::EigenvaluesOutsideField(_) => 4,
                E::Resonant(_) => 5,
                E::Mismatch(_) => 6,
                E::NotInvertible(_) | E::NoSolution(_) | E::Stalled(_) => 1,
            },
        };
        ExitCode::from(code)
    }
}

pub type CliResult<T> = Result<T, CliError>;
