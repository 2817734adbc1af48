use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Core(qups::Error),
    Usage(String),
    Io(String),
    /// Some bound check failed; carries the failing rows' descriptions.
    Verification(Vec<String>),
}

impl CliError {
    /// 0 ok, 2 usage or domain, 3 budget or resource, 4 verification failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(qups::Error::Resource(_) | qups::Error::Overflow(_)) => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Verification(rows) => write!(f, "{} check(s) failed: {}", rows.len(), rows.join("; ")),
        }
    }
}

impl From<qups::Error> for CliError {
    fn from(e: qups::Error) -> Self {
        CliError::Core(e)
    }
}
