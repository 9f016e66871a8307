use thiserror::Error;

/// Errors produced by the transforms, the coders, and the container codec.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("input must not be empty")]
    EmptyInput,
    #[error("symbol at position {position} is not in the alphabet")]
    SymbolNotInAlphabet { position: usize },
    #[error("alphabet symbols must be distinct and sorted")]
    InvalidAlphabet,
    #[error("rotation index {index} out of range 1..={len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("move-to-front rank {rank} at position {position} out of range 0..{alphabet_size}")]
    RankOutOfRange {
        rank: u32,
        position: usize,
        alphabet_size: usize,
    },
    #[error("frequency tuple must not be empty")]
    EmptyFrequencies,
    #[error("frequency at position {position} must be positive")]
    NonPositiveFrequency { position: usize },
    #[error("frequency tuple of size {size} exceeds oracle limit {limit}")]
    TupleTooLarge { size: usize, limit: usize },
    #[error("code table has no entry for symbol index {symbol} under context of length {context_len}")]
    MissingCodeword { symbol: usize, context_len: usize },
    #[error("context of length {got} does not match order {order}")]
    ContextLength { got: usize, order: usize },
    #[error("context table would need {bits} bits, exceeding the {guard}-bit guard")]
    GuardExceeded { bits: u128, guard: u64 },
    #[error("codeword of {len} bits exceeds the 255-bit container limit")]
    CodewordTooLong { len: usize },
    #[error("alphabet of {size} symbols exceeds the container limit of 256")]
    AlphabetTooLarge { size: usize },
    #[error("container truncated while reading {what}")]
    Truncated { what: &'static str },
    #[error("bad container magic")]
    BadMagic,
    #[error("unsupported container version {0}")]
    BadVersion(u8),
    #[error("container field {what} is inconsistent")]
    Inconsistent { what: &'static str },
    #[error("codeword count {codewords} does not match the occurrence bitmap ({expected} expected)")]
    PopcountMismatch { codewords: usize, expected: usize },
    #[error("compressed stream exhausted before all symbols were decoded")]
    StreamExhausted,
    #[error("no codeword matches the compressed stream at bit {bit}")]
    UnmatchedCodeword { bit: usize },
    #[error("context with no recorded followers reached while decoding")]
    DeadContext,
    #[error("block size must be 0 or at least 1 KiB, got {0}")]
    BadBlockSize(u64),
    #[error("order must be at least 1")]
    BadOrder,
    #[error("block {index}: {source}")]
    Block {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_block(self, index: usize) -> Error {
        Error::Block {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
