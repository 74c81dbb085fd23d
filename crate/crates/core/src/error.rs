use std::fmt;

use thiserror::Error;

/// Where in a genus run an error surfaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub genus: u32,
    pub stratum: Option<u32>,
    pub degree: Option<u32>,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {}", self.genus)?;
        if let Some(k) = self.stratum {
            write!(f, ", stratum {k}")?;
        }
        if let Some(d) = self.degree {
            write!(f, ", degree {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("partition {raw:?} is not weakly decreasing")]
    NonMonotone { raw: Vec<i64> },
    #[error("partition {raw:?} has {rows} nonzero rows, more than genus {genus} allows")]
    TooManyRows {
        raw: Vec<i64>,
        rows: usize,
        genus: u32,
    },
    #[error("negative multiplicity: cannot remove {missing} ({context})")]
    NegativeMultiplicity { missing: String, context: String },
    #[error("exterior power degree {q} out of range 0..={max}")]
    OutOfRange { q: i64, max: u32 },
    #[error("forced differential {from:?}->{to:?} cancels {system}, which is absent from the {side} entry")]
    MismatchedDifferential {
        from: (u32, u32),
        to: (u32, u32),
        system: String,
        side: &'static str,
    },
    #[error("bad stratification dimensions: {0}")]
    BadDims(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {partition} needs more rows than genus {genus}")]
    GenusMismatch {
        line: usize,
        partition: String,
        genus: u32,
    },
    #[error("line {line}: degree {degree} appears twice in one section")]
    DuplicateDegree { line: usize, degree: String },
    #[error("contradiction: {symbol} is both {first} and {second}")]
    Contradiction {
        symbol: String,
        first: String,
        second: String,
    },
    #[error("new local systems are not symmetric: degree {degree} has {here}, mirror degree {mirror} has {there}")]
    SymmetryViolation {
        degree: u32,
        mirror: i64,
        here: String,
        there: String,
    },
    #[error("dataset check failed for {name}: {message}")]
    InvalidDataset { name: String, message: String },
    #[error("no dataset {0}")]
    MissingDataset(String),
    #[error("{site}: {source}")]
    At {
        site: Site,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at(self, site: Site) -> Self {
        Error::At {
            site,
            source: Box::new(self),
        }
    }

    /// The innermost error, with site wrappers stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code: 2 for malformed input, 1 for engine inconsistencies.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Parse { .. }
            | Error::GenusMismatch { .. }
            | Error::DuplicateDegree { .. }
            | Error::MissingDataset(_)
            | Error::OutOfRange { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
