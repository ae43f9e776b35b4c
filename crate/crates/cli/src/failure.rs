use std::fmt;
use std::process::ExitCode;

/// Errors classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Mismatch(_) => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Domain(m) => write!(f, "error: {m}"),
            Failure::Mismatch(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<samrot::Error> for Failure {
    fn from(e: samrot::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}
