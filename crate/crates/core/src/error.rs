use std::fmt;

/// Error type shared by every module.
///
/// The variants mirror the CLI exit codes: precondition and parse failures
/// exit 2, resource-budget failures exit 3, and `Invariant` marks a
/// bug-class violation (a proven identity failed) and exits 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation was called with arguments violating its contract
    /// (mismatched group specs, arity mismatch, unbounded input, ...).
    Precondition(String),
    /// Malformed textual input (group spec, phase expression, JSON).
    Parse(String),
    /// The requested computation exceeds the configured budget.
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },
    /// A proven identity failed; this indicates an implementation fault,
    /// never a property of the input.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Budget {
                what,
                needed,
                budget,
            } => write!(
                f,
                "budget exceeded: {what} needs an estimated {needed} ops, budget is {budget}"
            ),
            Error::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) | Error::Parse(_) => 2,
            Error::Budget { .. } => 3,
            Error::Invariant(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
