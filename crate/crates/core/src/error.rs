use thiserror::Error;

/// Errors produced by the exact operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: {value} is outside the domain {domain}")]
    Domain {
        op: &'static str,
        value: String,
        domain: String,
    },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("{0} is not a dyadic rational")]
    NotDyadic(String),

    #[error("{what}: digit {digit} is not allowed")]
    InvalidDigit { what: &'static str, digit: u64 },

    #[error("{0}: a digit does not fit in 64 bits")]
    DigitOverflow(String),

    #[error("unknown {kind} {name:?} (expected one of: {expected})")]
    Unknown {
        kind: &'static str,
        name: String,
        expected: String,
    },

    #[error("step {step}: {source}")]
    AtStep {
        step: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, value: impl ToString, domain: impl ToString) -> Self {
        Error::Domain {
            op,
            value: value.to_string(),
            domain: domain.to_string(),
        }
    }

    pub(crate) fn parse(what: &'static str, input: &str, reason: impl ToString) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
