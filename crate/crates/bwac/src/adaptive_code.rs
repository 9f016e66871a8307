//! Context-conditioned code tables: a codeword per (symbol, context) pair for
//! contexts up to a fixed order, the homomorphic-extension encoder, and the
//! prefix-code sufficiency check for injectivity.

use std::collections::HashMap;

use crate::alphabet::Alphabet;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// True iff the words are all non-empty, pairwise distinct, and none is a
/// proper prefix of another.
pub fn is_prefix_code(words: &[BitString]) -> bool {
    if words.iter().any(|w| w.is_empty()) {
        return false;
    }
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            if a.is_prefix_of(b) || b.is_prefix_of(a) {
                return false;
            }
        }
    }
    true
}

/// A total code table over `Σ × Σ^{≤n}`. Contexts shorter than the order are
/// used only for the first positions of an input, where fewer preceding
/// symbols exist.
#[derive(Debug, Clone)]
pub struct AdaptiveCodeTable<T> {
    order: usize,
    alphabet: Alphabet<T>,
    entries: HashMap<(u32, Vec<u32>), BitString>,
}

impl<T: Ord + Copy + std::fmt::Debug> AdaptiveCodeTable<T> {
    /// Builds a table, checking that every (symbol, context) pair with context
    /// length `0..=order` has a codeword.
    pub fn new(
        alphabet: Alphabet<T>,
        order: usize,
        entries: HashMap<(u32, Vec<u32>), BitString>,
    ) -> Result<Self> {
        if order < 1 {
            return Err(Error::BadOrder);
        }
        let p = alphabet.len();
        let contexts: u128 = (0..=order as u32).map(|h| (p as u128).pow(h)).sum();
        let total = contexts * p as u128;
        if total > 1 << 22 {
            return Err(Error::GuardExceeded {
                bits: total,
                guard: 1 << 22,
            });
        }
        let table = Self {
            order,
            alphabet,
            entries,
        };
        for h in 0..=order {
            for ctx in contexts_of_length(p, h) {
                for s in 0..p as u32 {
                    if !table.entries.contains_key(&(s, ctx.clone())) {
                        return Err(Error::MissingCodeword {
                            symbol: s as usize,
                            context_len: h,
                        });
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &Alphabet<T> {
        &self.alphabet
    }

    pub fn entry(&self, symbol: T, context: &[T]) -> Option<&BitString> {
        let s = self.alphabet.index_of(symbol)?;
        let ctx = self.alphabet.to_indices(context).ok()?;
        self.entries.get(&(s, ctx))
    }

    /// Encodes per the homomorphic extension: position k (1-based) uses the
    /// preceding min(k−1, order) symbols as context.
    pub fn encode(&self, x: &[T]) -> Result<BitString> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        let ids = self.alphabet.to_indices(x)?;
        let mut out = BitString::new();
        for (k, &s) in ids.iter().enumerate() {
            let ctx_len = k.min(self.order);
            let ctx = ids[k - ctx_len..k].to_vec();
            let word = self
                .entries
                .get(&(s, ctx))
                .ok_or(Error::MissingCodeword {
                    symbol: s as usize,
                    context_len: ctx_len,
                })?;
            out.extend(word);
        }
        Ok(out)
    }

    /// The sufficient condition for injectivity: every per-context codeword
    /// column (over all contexts of length 0..=order) is a prefix code. A
    /// `false` result does not prove non-injectivity.
    pub fn verify_theorem1(&self) -> bool {
        let p = self.alphabet.len();
        for h in 0..=self.order {
            for ctx in contexts_of_length(p, h) {
                let column: Vec<BitString> = (0..p as u32)
                    .filter_map(|s| self.entries.get(&(s, ctx.clone())).cloned())
                    .collect();
                if column.len() != p || !is_prefix_code(&column) {
                    return false;
                }
            }
        }
        true
    }
}

/// All index contexts of length `h` over `p` symbols, in lexicographic order.
pub(crate) fn contexts_of_length(p: usize, h: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; h];
    loop {
        out.push(current.clone());
        // odometer increment
        let mut pos = h;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if (current[pos] as usize) + 1 < p {
                current[pos] += 1;
                for c in current[pos + 1..].iter_mut() {
                    *c = 0;
                }
                break;
            }
        }
    }
}

impl AdaptiveCodeTable<char> {
    /// Parses a whitespace-separated table: a header row of context labels
    /// (with `λ`, `-`, or `.` for the empty context, and an optional leading
    /// corner label), then one row per symbol of codewords.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(Error::EmptyInput)?;
        let mut header_tokens: Vec<&str> = header.split_whitespace().collect();

        let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        // Drop the corner label if the header is one token longer than a row's
        // codeword list.
        if header_tokens.len() == rows[0].len() {
            header_tokens.remove(0);
        }

        let mut symbols: Vec<char> = rows
            .iter()
            .map(|r| {
                let mut chars = r[0].chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::InvalidAlphabet),
                }
            })
            .collect::<Result<_>>()?;
        symbols.sort_unstable();
        let alphabet = Alphabet::new(symbols)?;

        let contexts: Vec<Vec<u32>> = header_tokens
            .iter()
            .map(|&label| {
                if label == "λ" || label == "-" || label == "." {
                    Ok(Vec::new())
                } else {
                    alphabet.to_indices(&label.chars().collect::<Vec<_>>())
                }
            })
            .collect::<Result<_>>()?;
        let order = contexts.iter().map(Vec::len).max().unwrap_or(0);

        let mut entries = HashMap::new();
        for row in &rows {
            if row.len() != contexts.len() + 1 {
                return Err(Error::Inconsistent {
                    what: "table row width",
                });
            }
            let sym = alphabet
                .index_of(row[0].chars().next().unwrap())
                .ok_or(Error::InvalidAlphabet)?;
            for (ctx, &word) in contexts.iter().zip(&row[1..]) {
                entries.insert((sym, ctx.clone()), BitString::from_bits(word));
            }
        }
        Self::new(alphabet, order, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        BitString::from_bits(s)
    }

    // The order-two code over {a, b, c} used across the encoder tests.
    pub(crate) const ORDER_TWO_TABLE: &str = "\
        .  a  b  c  aa ab ac ba bb bc ca cb cc λ
        a  01 10 10 00 11 10 01 10 11 11 11 0  0
        b  10 00 11 11 01 00 00 11 01 10 00 10 11
        c  11 01 01 10 00 11 11 00 00 00 10 11 10";

    #[test]
    fn prefix_code_checks() {
        assert!(is_prefix_code(&[bits("0"), bits("10"), bits("11")]));
        assert!(!is_prefix_code(&[bits("0"), bits("01")]));
        assert!(!is_prefix_code(&[BitString::new()]));
        assert!(!is_prefix_code(&[bits("01"), bits("01")]));
        assert!(is_prefix_code(&[]));
    }

    #[test]
    fn encode_abacca() {
        let table = AdaptiveCodeTable::from_text(ORDER_TWO_TABLE).unwrap();
        let x: Vec<char> = "abacca".chars().collect();
        assert_eq!(table.encode(&x).unwrap().to_string(), "0101111110");
    }

    #[test]
    fn encode_single_symbol_uses_empty_context() {
        let table = AdaptiveCodeTable::from_text(ORDER_TWO_TABLE).unwrap();
        assert_eq!(table.encode(&['c']).unwrap().to_string(), "10");
    }

    #[test]
    fn encode_cb() {
        let table = AdaptiveCodeTable::from_text(ORDER_TWO_TABLE).unwrap();
        // c(c,λ)=10, c(b,c)=11
        assert_eq!(table.encode(&['c', 'b']).unwrap().to_string(), "1011");
    }

    #[test]
    fn verify_order_two_table() {
        let table = AdaptiveCodeTable::from_text(ORDER_TWO_TABLE).unwrap();
        assert!(table.verify_theorem1());
    }

    #[test]
    fn verify_rejects_prefix_violation() {
        let text = "\
            .  a   b   λ
            a  0   0   0
            b  01  10  1";
        let table = AdaptiveCodeTable::from_text(text).unwrap();
        assert!(!table.verify_theorem1());
    }

    #[test]
    fn incomplete_table_rejected() {
        let text = "\
            .  a  λ
            a  0  0
            b  1  1";
        // order 1 over {a, b} needs contexts a, b, and λ; context b is missing.
        assert!(matches!(
            AdaptiveCodeTable::from_text(text),
            Err(Error::MissingCodeword { .. })
        ));
    }

    #[test]
    fn context_enumeration_is_lexicographic() {
        let ctxs = contexts_of_length(2, 2);
        assert_eq!(
            ctxs,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(contexts_of_length(3, 0), vec![Vec::<u32>::new()]);
    }
}
