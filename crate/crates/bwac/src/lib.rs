//! Lossless block compression built from the Burrows-Wheeler transform,
//! move-to-front coding, and per-context Huffman codes in which a context
//! with a single recorded follower transmits no bits at all.
//!
//! The top-level entry points are [`pipeline::compress`] /
//! [`pipeline::decompress`] and their byte-level convenience wrappers; the
//! stages are usable on their own through the [`bwt`], [`mtf`], [`huffman`],
//! [`adaptive_code`], and [`eah`] modules. [`container`] defines the archive
//! format (see FORMAT.md).

pub mod adaptive_code;
pub mod alphabet;
pub mod bits;
pub mod bwt;
pub mod container;
pub mod eah;
pub mod error;
pub mod huffman;
pub mod mtf;
pub mod pipeline;

pub use alphabet::Alphabet;
pub use bits::BitString;
pub use container::Container;
pub use error::{Error, Result};
pub use pipeline::PipelineConfig;
