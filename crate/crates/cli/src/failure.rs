use std::fmt;

/// A failed command and its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Invalid input data, parameters inconsistent with it, or I/O trouble.
    Invalid(String),
    /// Flag values rejected before any I/O.
    Usage(String),
    /// An internal check failed (for example, a differential mismatch).
    Invariant(String),
    /// The queried target is unknown or not reachable.
    Unreached(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Unreached(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) | Failure::Invariant(m) | Failure::Unreached(m) => f.write_str(m),
        }
    }
}

pub fn invalid(e: impl fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

pub fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}
