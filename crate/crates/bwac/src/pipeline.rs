//! The per-block compression chain: BWT, then move-to-front, then the
//! per-context coder over the rank sequence, and the inverse chain.

use crate::alphabet::{rank_alphabet, Alphabet};
use crate::bwt::{bwt_forward, bwt_inverse, BwtResult};
use crate::container::{read_container, write_container, BlockRecord, Container};
use crate::eah::{eah_decode, eah_encode_with_guard, ContextModel, EahOutput, DEFAULT_BITMAP_GUARD};
use crate::error::{Error, Result};
use crate::mtf::{mtf_decode, mtf_encode, MtfSequence};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Context order of the final coding stage.
    pub order: usize,
    /// Block size in bytes; 0 transforms the whole input as one block.
    pub block_size: u64,
    /// Cap on the per-block occurrence bitmap, in bits.
    pub bitmap_guard: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            order: 1,
            block_size: 1 << 20,
            bitmap_guard: DEFAULT_BITMAP_GUARD,
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::BadOrder);
        }
        if self.block_size != 0 && self.block_size < 1024 {
            return Err(Error::BadBlockSize(self.block_size));
        }
        Ok(())
    }

    fn chunks<'a>(&self, data: &'a [u8]) -> Vec<&'a [u8]> {
        if data.is_empty() {
            Vec::new()
        } else if self.block_size == 0 {
            vec![data]
        } else {
            data.chunks(self.block_size as usize).collect()
        }
    }
}

/// Intermediate values of one block, for inspection and testing.
pub struct BlockTrace {
    pub alphabet: Alphabet<u8>,
    pub bwt: BwtResult<u8>,
    pub ranks: MtfSequence,
    pub eah: EahOutput,
    pub model: ContextModel,
}

fn encode_block(block: &[u8], cfg: &PipelineConfig) -> Result<BlockTrace> {
    let alphabet = Alphabet::from_data(block);
    let bwt = bwt_forward(block, &alphabet)?;
    let ranks = mtf_encode(&bwt.transformed, &alphabet)?;
    let (eah, model) = eah_encode_with_guard(
        &ranks.ranks,
        &rank_alphabet(alphabet.len()),
        cfg.order,
        cfg.bitmap_guard,
    )?;
    Ok(BlockTrace {
        alphabet,
        bwt,
        ranks,
        eah,
        model,
    })
}

/// Runs the forward chain and keeps every intermediate per block.
pub fn trace_blocks(data: &[u8], cfg: &PipelineConfig) -> Result<Vec<BlockTrace>> {
    cfg.validate()?;
    cfg.chunks(data)
        .iter()
        .enumerate()
        .map(|(i, block)| encode_block(block, cfg).map_err(|e| e.in_block(i)))
        .collect()
}

pub fn compress(data: &[u8], cfg: &PipelineConfig) -> Result<Container> {
    let blocks = trace_blocks(data, cfg)?
        .into_iter()
        .map(|trace| BlockRecord {
            t: trace.bwt.transformed.len() as u64,
            order: cfg.order,
            bwt_index: trace.bwt.index,
            alphabet: trace.alphabet.symbols().to_vec(),
            eah: trace.eah,
        })
        .collect();
    Ok(Container { blocks })
}

pub fn decompress(container: &Container) -> Result<Vec<u8>> {
    decompress_with_limit(container, u64::MAX)
}

/// Like [`decompress`], but refuses up front when the declared output size
/// exceeds `max_bytes` — the guard against headers corrupted into absurd
/// lengths.
pub fn decompress_with_limit(container: &Container, max_bytes: u64) -> Result<Vec<u8>> {
    let mut total: u64 = 0;
    for block in &container.blocks {
        total = total
            .checked_add(block.t)
            .filter(|&s| s <= max_bytes)
            .ok_or(Error::Inconsistent {
                what: "declared output size",
            })?;
    }
    let mut out = Vec::new();
    for (index, block) in container.blocks.iter().enumerate() {
        decompress_block(block, &mut out).map_err(|e| e.in_block(index))?;
    }
    Ok(out)
}

fn decompress_block(block: &BlockRecord, out: &mut Vec<u8>) -> Result<()> {
    let alphabet = Alphabet::new(block.alphabet.clone())?;
    let ranks = eah_decode(
        &block.eah,
        &rank_alphabet(alphabet.len()),
        block.order,
        block.t,
    )?;
    let transformed = mtf_decode(&MtfSequence { ranks }, &alphabet)?;
    let restored = bwt_inverse(
        &BwtResult {
            transformed,
            index: block.bwt_index,
        },
        &alphabet,
    )?;
    out.extend_from_slice(&restored);
    Ok(())
}

/// Compresses straight to the serialized container.
pub fn compress_to_bytes(data: &[u8], cfg: &PipelineConfig) -> Result<Vec<u8>> {
    write_container(&compress(data, cfg)?)
}

/// Parses and decompresses a serialized container.
pub fn decompress_bytes(bytes: &[u8]) -> Result<Vec<u8>> {
    decompress(&read_container(bytes)?)
}

/// The headline metric: 8 · compressed bytes / original bytes.
pub fn bits_per_symbol(original_bytes: u64, compressed_bytes: u64) -> f64 {
    8.0 * compressed_bytes as f64 / original_bytes as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn research_intermediates() {
        let cfg = PipelineConfig::default();
        let traces = trace_blocks(b"research", &cfg).unwrap();
        assert_eq!(traces.len(), 1);
        let t = &traces[0];
        assert_eq!(t.bwt.transformed, b"ersrcahe".to_vec());
        assert_eq!(t.bwt.index, 7);
        assert_eq!(t.ranks.ranks, vec![2, 4, 5, 1, 4, 4, 5, 5]);
    }

    #[test]
    fn research_roundtrip() {
        let cfg = PipelineConfig::default();
        let bytes = compress_to_bytes(b"research", &cfg).unwrap();
        assert_eq!(decompress_bytes(&bytes).unwrap(), b"research".to_vec());
    }

    #[test]
    fn empty_input_zero_blocks() {
        let cfg = PipelineConfig::default();
        let c = compress(b"", &cfg).unwrap();
        assert!(c.blocks.is_empty());
        assert_eq!(decompress(&c).unwrap(), Vec::<u8>::new());
        assert_eq!(compress_to_bytes(b"", &cfg).unwrap().len(), 9);
    }

    #[test]
    fn repeated_byte_compresses_hard() {
        let data = vec![0x42u8; 1 << 20];
        let cfg = PipelineConfig::default();
        let bytes = compress_to_bytes(&data, &cfg).unwrap();
        assert!(bytes.len() < data.len() / 100, "got {} bytes", bytes.len());
        assert_eq!(decompress_bytes(&bytes).unwrap(), data);
    }

    #[test]
    fn multi_block_matches_concatenation() {
        let mut data = Vec::new();
        for i in 0..8192u32 {
            data.push((i * 31 % 7) as u8);
        }
        let cfg = PipelineConfig {
            block_size: 1024,
            ..PipelineConfig::default()
        };
        let whole = decompress(&compress(&data, &cfg).unwrap()).unwrap();
        assert_eq!(whole, data);
        let mut pieces = Vec::new();
        for chunk in data.chunks(1024) {
            pieces.extend(decompress(&compress(chunk, &cfg).unwrap()).unwrap());
        }
        assert_eq!(pieces, data);
    }

    #[test]
    fn invalid_config_rejected() {
        let data = b"xyz";
        let cfg = PipelineConfig {
            block_size: 100,
            ..PipelineConfig::default()
        };
        assert_eq!(compress(data, &cfg), Err(Error::BadBlockSize(100)));
        let cfg = PipelineConfig {
            order: 0,
            ..PipelineConfig::default()
        };
        assert_eq!(compress(data, &cfg), Err(Error::BadOrder));
    }
}
