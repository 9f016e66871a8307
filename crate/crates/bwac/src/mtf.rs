//! Move-to-front coding over a list initialized to the alphabet in sorted
//! order.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// The rank sequence: each value counts the list elements that preceded the
/// encoded symbol at its step, so every rank is in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtfSequence {
    pub ranks: Vec<u32>,
}

pub fn mtf_encode<T: Ord + Copy>(s: &[T], alphabet: &Alphabet<T>) -> Result<MtfSequence> {
    let ids = alphabet.to_indices(s)?;
    let mut list: Vec<u32> = (0..alphabet.len() as u32).collect();
    let mut ranks = Vec::with_capacity(ids.len());
    for id in ids {
        let pos = list.iter().position(|&c| c == id).unwrap();
        ranks.push(pos as u32);
        list.copy_within(..pos, 1);
        list[0] = id;
    }
    Ok(MtfSequence { ranks })
}

pub fn mtf_decode<T: Ord + Copy>(r: &MtfSequence, alphabet: &Alphabet<T>) -> Result<Vec<T>> {
    let p = alphabet.len();
    let mut list: Vec<u32> = (0..p as u32).collect();
    let mut out = Vec::with_capacity(r.ranks.len());
    for (position, &rank) in r.ranks.iter().enumerate() {
        if rank as usize >= p {
            return Err(Error::RankOutOfRange {
                rank,
                position,
                alphabet_size: p,
            });
        }
        let id = list[rank as usize];
        out.push(alphabet.symbol(id));
        list.copy_within(..rank as usize, 1);
        list[0] = id;
    }
    Ok(out)
}
