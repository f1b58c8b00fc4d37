use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: `Validation`/`Domain`/`Parse`
/// are input problems, `BoundExceeded` is a resource refusal, and `Contract`
/// carries a witness showing that an operation's precondition fails.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("order relation has a cycle: {}", .0.join(" < "))]
    Cycle(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bound exceeded: {what} needs {needed}, limit is {limit}")]
    BoundExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("not in the isometry group: {reason} (witness {witness:?})")]
    NotInGroup { reason: String, witness: Vec<u32> },

    #[error("closed-form predicate unavailable: {0}")]
    PredicateUnavailable(String),

    #[error("every solution over this lattice is trivial (no non-principal member)")]
    AllSolutionsTrivial,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_bound(what: &'static str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        Err(Error::BoundExceeded {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}

impl Error {
    /// Process exit status for the CLI: `1` for a property that does not
    /// hold, `2` for invalid input, `3` for a refused bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundExceeded { .. } => 3,
            Error::AllSolutionsTrivial => 1,
            _ => 2,
        }
    }
}
