use thiserror::Error;

use crate::rmq::Interval;

/// Errors raised while building, querying, or (de)serializing an index.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input text is empty")]
    EmptyInput,
    #[error("input contains the reserved sentinel byte 0x00 at offset {0}")]
    SentinelByteInInput(usize),
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("pattern contains the sentinel symbol")]
    SentinelInPattern,
    #[error("cannot build range queries over an empty array")]
    EmptyArray,
    #[error("invalid range [{lo},{hi}] over positions 1..={n}")]
    InvalidRange { lo: usize, hi: usize, n: usize },
    #[error("invalid position {pos} over positions 1..={n}")]
    InvalidPosition { pos: usize, n: usize },
    #[error("suffix array part {0} crosses the left text boundary")]
    BoundaryPart(Interval),
    #[error("left-boundary part {0} holds more than one suffix")]
    NonSingletonBoundary(Interval),
    #[error("bad magic number, not an index file")]
    BadMagic,
    #[error("unsupported index file version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt section `{section}`: {reason}")]
    CorruptSection {
        section: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
