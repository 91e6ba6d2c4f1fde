use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no primes up to {limit}: limit must be at least 2")]
    EmptyTable { limit: u64 },

    #[error("invalid projective point: all coordinates are zero")]
    InvalidPoint,

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// All homogeneous forms vanish at the point. `modulus` is `None` over the rationals.
    #[error("{}", indeterminate_message(*.modulus, *.iterate))]
    Indeterminate {
        modulus: Option<u64>,
        iterate: Option<usize>,
    },

    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,

    #[error("finite orbit: iterate {later} equals iterate {earlier} over Q")]
    FiniteOrbit { earlier: usize, later: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn indeterminate_message(modulus: Option<u64>, iterate: Option<usize>) -> String {
    let place = match modulus {
        Some(p) => format!("modulo {p}"),
        None => "over Q".to_string(),
    };
    match iterate {
        Some(n) => format!("indeterminate point {place} at iterate {n}"),
        None => format!("indeterminate point {place}"),
    }
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
