use crate::error::{Error, Result};

/// An ordered set of distinct symbols. Lexicographic comparisons everywhere in
/// the crate are by alphabet index, so the order fixed here is the order that
/// matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet<T> {
    symbols: Vec<T>,
}

impl<T: Ord + Copy> Alphabet<T> {
    /// Builds an alphabet from symbols that must already be sorted and distinct.
    pub fn new(symbols: Vec<T>) -> Result<Self> {
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphabet);
        }
        Ok(Self { symbols })
    }

    /// The sorted distinct symbols occurring in `data`.
    pub fn from_data(data: &[T]) -> Self {
        let mut symbols: Vec<T> = data.to_vec();
        symbols.sort_unstable();
        symbols.dedup();
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[T] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: T) -> Option<u32> {
        self.symbols.binary_search(&symbol).ok().map(|i| i as u32)
    }

    pub fn symbol(&self, index: u32) -> T {
        self.symbols[index as usize]
    }

    /// Maps a symbol sequence to alphabet indices, reporting the position of
    /// the first symbol not in the alphabet.
    pub fn to_indices(&self, data: &[T]) -> Result<Vec<u32>> {
        data.iter()
            .enumerate()
            .map(|(position, &s)| {
                self.index_of(s)
                    .ok_or(Error::SymbolNotInAlphabet { position })
            })
            .collect()
    }

    pub fn to_symbols(&self, indices: &[u32]) -> Vec<T> {
        indices.iter().map(|&i| self.symbol(i)).collect()
    }
}

/// Alphabet over the numeric symbols `0..size`, as produced by move-to-front
/// coding.
pub fn rank_alphabet(size: usize) -> Alphabet<u32> {
    Alphabet {
        symbols: (0..size as u32).collect(),
    }
}
