//! The archive format. Layout (all integers little-endian):
//!
//! ```text
//! magic "BWAC" | version u8 = 1 | block_count u32
//! per block:
//!   t u64 | order u8 | bwt_index u64 (0-based on disk) | p u16
//!   alphabet: p bytes, strictly increasing
//!   prefix: min(order, t) bytes of alphabet indices
//!   b bitmap: p^(order+1) bits, symbol-major over contexts in rank order,
//!             zero-padded to a byte
//!   codeword table: per codeword an 8-bit length then its bits, bit-packed,
//!                   zero-padded to a byte
//!   z: bit count u64, then the bits, zero-padded to a byte
//! ```
//!
//! See FORMAT.md at the repository root for the full description.

use std::collections::BTreeSet;

use crate::bits::{BitReader, BitWriter};
use crate::eah::{EahOutput, DEFAULT_BITMAP_GUARD};
use crate::error::{Error, Result};
use crate::huffman::CodewordTuple;

pub const MAGIC: [u8; 4] = *b"BWAC";
pub const VERSION: u8 = 1;

/// Everything the decoder needs for one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRecord {
    /// Original block length.
    pub t: u64,
    pub order: usize,
    /// 1-based rotation index; stored 0-based on disk.
    pub bwt_index: u64,
    /// Sorted distinct bytes of the block.
    pub alphabet: Vec<u8>,
    pub eah: EahOutput,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Container {
    pub blocks: Vec<BlockRecord>,
}

pub fn write_container(container: &Container) -> Result<Vec<u8>> {
    let mut w = BitWriter::new();
    w.write_bytes(&MAGIC);
    w.write_u8(VERSION);
    let count = u32::try_from(container.blocks.len()).map_err(|_| Error::Inconsistent {
        what: "block count",
    })?;
    w.write_u32(count);
    for (index, block) in container.blocks.iter().enumerate() {
        write_block(&mut w, block).map_err(|e| e.in_block(index))?;
    }
    Ok(w.into_bytes())
}

fn write_block(w: &mut BitWriter, block: &BlockRecord) -> Result<()> {
    let p = block.alphabet.len();
    if p > 256 {
        return Err(Error::AlphabetTooLarge { size: p });
    }
    if block.alphabet.windows(2).any(|x| x[0] >= x[1]) {
        return Err(Error::InvalidAlphabet);
    }
    let n = block.order;
    if n < 1 {
        return Err(Error::BadOrder);
    }
    if n > u8::MAX as usize
        || block.t == 0
        || p == 0
        || block.bwt_index < 1
        || block.bwt_index > block.t
    {
        return Err(Error::Inconsistent {
            what: "block header",
        });
    }
    let bits = bitmap_bits(p, n)?;
    let contexts = bits / p as u64;

    w.write_u64(block.t);
    w.write_u8(n as u8);
    w.write_u64(block.bwt_index - 1);
    w.write_u16(p as u16);
    w.write_bytes(&block.alphabet);

    let prefix_len = (n as u64).min(block.t) as usize;
    if block.eah.prefix.len() != prefix_len
        || block.eah.prefix.iter().any(|&s| s as usize >= p)
    {
        return Err(Error::Inconsistent { what: "prefix" });
    }
    let prefix_bytes: Vec<u8> = block.eah.prefix.iter().map(|&s| s as u8).collect();
    w.write_bytes(&prefix_bytes);

    let mut bitmap = vec![0u8; (bits as usize).div_ceil(8)];
    for &(symbol, rank) in &block.eah.b {
        if symbol as usize >= p || rank >= contexts {
            return Err(Error::Inconsistent {
                what: "occurrence table entry",
            });
        }
        let bit = symbol as u64 * contexts + rank;
        bitmap[(bit / 8) as usize] |= 0x80 >> (bit % 8);
    }
    let expected = coded_pair_count(&block.eah.b);
    if expected != block.eah.y.words.len() {
        return Err(Error::PopcountMismatch {
            codewords: block.eah.y.words.len(),
            expected,
        });
    }
    w.write_bytes(&bitmap);

    for word in &block.eah.y.words {
        let len = word.len();
        if len == 0 || len > 255 {
            return Err(Error::CodewordTooLong { len });
        }
        write_u8_bits(w, len as u8);
        w.write_bits(word);
    }
    w.align();

    w.write_u64(block.eah.z.len() as u64);
    w.write_bitstring_padded(&block.eah.z);
    Ok(())
}

pub fn read_container(bytes: &[u8]) -> Result<Container> {
    let mut r = BitReader::new(bytes);
    if r.read_bytes(4, "magic")? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = r.read_u8("version")?;
    if version != VERSION {
        return Err(Error::BadVersion(version));
    }
    let count = r.read_u32("block count")?;
    let mut blocks = Vec::new();
    for index in 0..count as usize {
        blocks.push(read_block(&mut r).map_err(|e| e.in_block(index))?);
    }
    if !r.at_end() {
        return Err(Error::Inconsistent {
            what: "trailing bytes",
        });
    }
    Ok(Container { blocks })
}

fn read_block(r: &mut BitReader) -> Result<BlockRecord> {
    let t = r.read_u64("block length")?;
    let n = r.read_u8("order")? as usize;
    let bwt_index0 = r.read_u64("rotation index")?;
    let p = r.read_u16("alphabet size")? as usize;
    if t == 0 || n == 0 || p == 0 || p > 256 || bwt_index0 >= t {
        return Err(Error::Inconsistent {
            what: "block header",
        });
    }
    let alphabet = r.read_bytes(p, "alphabet")?.to_vec();
    if alphabet.windows(2).any(|x| x[0] >= x[1]) {
        return Err(Error::Inconsistent { what: "alphabet" });
    }
    let prefix_len = (n as u64).min(t) as usize;
    let prefix: Vec<u32> = r
        .read_bytes(prefix_len, "prefix")?
        .iter()
        .map(|&b| b as u32)
        .collect();
    if prefix.iter().any(|&s| s as usize >= p) {
        return Err(Error::Inconsistent { what: "prefix" });
    }

    let bits = bitmap_bits(p, n)?;
    let contexts = bits / p as u64;
    let bitmap = r.read_bytes((bits as usize).div_ceil(8), "occurrence bitmap")?;
    if bits % 8 != 0 {
        let mask = 0xffu8 >> (bits % 8);
        if bitmap.last().copied().unwrap_or(0) & mask != 0 {
            return Err(Error::Inconsistent {
                what: "occurrence bitmap padding",
            });
        }
    }
    // bit index ascends in (symbol, rank) order, so the pairs arrive sorted;
    // scan a u64 at a time since the bitmap is mostly zero
    let mut pairs = Vec::new();
    let mut push_bits = |base_bit: u64, mut word: u64| {
        while word != 0 {
            let lz = word.leading_zeros() as u64;
            let bit = base_bit + lz;
            pairs.push(((bit / contexts) as u32, bit % contexts));
            word &= !(1 << (63 - lz));
        }
    };
    let mut chunks = bitmap.chunks_exact(8);
    for (wi, chunk) in chunks.by_ref().enumerate() {
        let word = u64::from_be_bytes(chunk.try_into().unwrap());
        if word != 0 {
            push_bits(wi as u64 * 64, word);
        }
    }
    let tail_base = (bitmap.len() / 8 * 8) as u64 * 8;
    for (bi, &byte) in chunks.remainder().iter().enumerate() {
        if byte != 0 {
            push_bits(tail_base + bi as u64 * 8, (byte as u64) << 56);
        }
    }
    let b: BTreeSet<(u32, u64)> = pairs.into_iter().collect();

    let expected = coded_pair_count(&b);
    let mut words = Vec::with_capacity(expected);
    for _ in 0..expected {
        let len = read_u8_bits(r, "codeword length")?;
        if len == 0 {
            return Err(Error::Inconsistent {
                what: "codeword length",
            });
        }
        words.push(r.read_bits(len as usize, "codeword")?);
    }
    r.align("codeword table padding")?;

    let z_len = r.read_u64("z length")? as usize;
    let z = r.read_bitstring_padded(z_len, "z padding")?;

    Ok(BlockRecord {
        t,
        order: n,
        bwt_index: bwt_index0 + 1,
        alphabet,
        eah: EahOutput {
            prefix,
            b,
            y: CodewordTuple { words },
            z,
        },
    })
}

/// Dense bitmap size p^(n+1) in bits, checked against the guard.
fn bitmap_bits(p: usize, n: usize) -> Result<u64> {
    match (p as u128).checked_pow(n as u32 + 1) {
        Some(bits) if bits <= DEFAULT_BITMAP_GUARD as u128 => Ok(bits as u64),
        Some(bits) => Err(Error::GuardExceeded {
            bits,
            guard: DEFAULT_BITMAP_GUARD,
        }),
        None => Err(Error::GuardExceeded {
            bits: u128::MAX,
            guard: DEFAULT_BITMAP_GUARD,
        }),
    }
}

/// Number of codewords the b table implies: one per follower of every context
/// with at least two followers.
fn coded_pair_count(b: &BTreeSet<(u32, u64)>) -> usize {
    let mut per_context = std::collections::BTreeMap::new();
    for &(_, rank) in b {
        *per_context.entry(rank).or_insert(0usize) += 1;
    }
    per_context.values().filter(|&&c| c >= 2).sum()
}

fn write_u8_bits(w: &mut BitWriter, v: u8) {
    for i in (0..8).rev() {
        w.write_bit(v & (1 << i) != 0);
    }
}

fn read_u8_bits(r: &mut BitReader, what: &'static str) -> Result<u8> {
    let mut v = 0u8;
    for _ in 0..8 {
        v = (v << 1) | r.read_bit(what)? as u8;
    }
    Ok(v)
}
