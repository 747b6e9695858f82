//! CLI error channel with the exit-code contract:
//!
//! * `1` — I/O failure writing results;
//! * `2` — configuration problems: unreadable/unparseable config files,
//!   missing or contradictory fields, malformed flags, bad time grids or
//!   scan ranges;
//! * `3` — physics validation: values with the right shape that the library
//!   rejects (Heisenberg violations, non-positive diffusion, `lambda <= 0`,
//!   and friends).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Physics(m) => write!(f, "physics: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl From<lindblad_sieve::Error> for CliError {
    fn from(err: lindblad_sieve::Error) -> Self {
        CliError::Physics(err.to_string())
    }
}
