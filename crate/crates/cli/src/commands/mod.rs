//! Subcommand implementations and the exit-code contract.

use std::fmt;

pub mod audit;
pub mod gasreport;
pub mod keygen;
pub mod run;
pub mod trace;

/// Failures mapped onto the stable exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad arguments, unreadable inputs, malformed files.
    Usage(String),
    /// Exit 3: a scenario ended with nodes disagreeing.
    Divergence(String),
    /// Exit 4: the requested product does not exist.
    NotFound(String),
    /// Exit 5: a ledger failed verification.
    AuditFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::NotFound(_) => 4,
            CliError::AuditFailed(_) => 5,
        }
    }

    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Divergence(m)
            | CliError::NotFound(m)
            | CliError::AuditFailed(m) => f.write_str(m),
        }
    }
}
