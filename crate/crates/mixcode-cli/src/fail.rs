//! Failure modes mapped onto the stable exit-code contract.

use std::fmt;

pub enum Failure {
    /// Bad flags, unparseable files, infeasible parameters: exit 2.
    Input(String),
    /// The code under validation fails the strict criteria: exit 1.
    Criteria,
    /// A session aborted mid-protocol: exit 3.
    Protocol(String),
    /// The requested computation exceeds a hard cap: exit 4.
    Resource(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Criteria => 1,
            Failure::Input(_) => 2,
            Failure::Protocol(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    pub fn input(err: impl fmt::Display) -> Failure {
        Failure::Input(err.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => write!(f, "{msg}"),
            Failure::Criteria => write!(f, "code fails the strict construction criteria"),
            Failure::Protocol(msg) => write!(f, "{msg}"),
            Failure::Resource(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Failure {
        Failure::Input(err.to_string())
    }
}
