//! Per-context Huffman coding over follower sets.
//!
//! A first pass records, for every length-n context occurring in the input,
//! which symbols follow it and how often. A second pass builds one Huffman
//! code per context over its follower frequencies, but only where a context
//! has two or more followers: a context with a single follower is fully
//! determined by the occurrence table, so its positions emit zero bits.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::alphabet::Alphabet;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::huffman::{huffman, CodewordTuple, FrequencyTuple};

/// Cap on the dense occurrence bitmap (p^{n+1} bits) a block may require.
pub const DEFAULT_BITMAP_GUARD: u64 = 1 << 26;

/// One follower of a context: its frequency and its codeword (empty when the
/// context has a single follower and no code is needed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Follower {
    pub symbol: u32,
    pub count: u64,
    pub codeword: BitString,
}

/// Followers of one context, sorted by symbol index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContextEntry {
    pub followers: Vec<Follower>,
}

impl ContextEntry {
    fn follower(&self, symbol: u32) -> Option<&Follower> {
        self.followers
            .binary_search_by_key(&symbol, |f| f.symbol)
            .ok()
            .map(|i| &self.followers[i])
    }
}

/// The codeword (a), occurrence (b), and frequency (c) functions over
/// `Σ × Σ^n`, keyed by the 0-based lexicographic context rank (the 1-based
/// enumeration lives in [`context_rank`]). Contexts that never occur are
/// absent: their b row is all zero and they contribute nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextModel {
    order: usize,
    alphabet_size: usize,
    contexts: BTreeMap<u64, ContextEntry>,
}

impl ContextModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Occurrence bit: true iff the symbol follows the context in the input.
    pub fn b(&self, symbol: u32, ctx_rank: u64) -> bool {
        self.c(symbol, ctx_rank) >= 1
    }

    /// Frequency of context·symbol in the input.
    pub fn c(&self, symbol: u32, ctx_rank: u64) -> u64 {
        self.contexts
            .get(&ctx_rank)
            .and_then(|e| e.follower(symbol))
            .map_or(0, |f| f.count)
    }

    /// Codeword, or None for λ (symbol not a follower, or singleton context).
    pub fn a(&self, symbol: u32, ctx_rank: u64) -> Option<&BitString> {
        self.contexts
            .get(&ctx_rank)
            .and_then(|e| e.follower(symbol))
            .filter(|f| !f.codeword.is_empty())
            .map(|f| &f.codeword)
    }

    /// Occurring contexts in lexicographic rank order.
    pub fn contexts(&self) -> impl Iterator<Item = (u64, &ContextEntry)> {
        self.contexts.iter().map(|(&r, e)| (r, e))
    }
}

/// The four-tuple an encoder run produces: the raw first n symbols, the
/// occurrence table, the codeword tuple in symbol-major traversal order, and
/// the compressed remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EahOutput {
    /// Alphabet indices of the first min(order, len) input symbols.
    pub prefix: Vec<u32>,
    /// (symbol index, 0-based context rank) pairs with occurrence bit 1.
    pub b: BTreeSet<(u32, u64)>,
    /// Non-λ codewords, symbols outer and contexts (rank order) inner.
    pub y: CodewordTuple,
    pub z: BitString,
}

/// 1-based lexicographic rank of a length-`order` context: the first context
/// σ₁…σ₁ has rank 1, the last σₚ…σₚ has rank pⁿ.
pub fn context_rank<T: Ord + Copy>(
    u: &[T],
    alphabet: &Alphabet<T>,
    order: usize,
) -> Result<u64> {
    if u.len() != order {
        return Err(Error::ContextLength {
            got: u.len(),
            order,
        });
    }
    let ids = alphabet.to_indices(u)?;
    let p = alphabet.len() as u64;
    Ok(ids.iter().fold(0u64, |acc, &d| acc * p + d as u64) + 1)
}

/// Inverse of [`context_rank`].
pub fn rank_context<T: Ord + Copy>(
    j: u64,
    alphabet: &Alphabet<T>,
    order: usize,
) -> Result<Vec<T>> {
    let p = alphabet.len() as u64;
    let total = (p as u128).pow(order as u32);
    if j < 1 || (j as u128) > total {
        return Err(Error::Inconsistent {
            what: "context rank",
        });
    }
    let mut v = j - 1;
    let mut digits = vec![0u32; order];
    for d in digits.iter_mut().rev() {
        *d = (v % p) as u32;
        v /= p;
    }
    Ok(alphabet.to_symbols(&digits))
}

pub fn eah_encode<T: Ord + Copy>(
    x: &[T],
    alphabet: &Alphabet<T>,
    order: usize,
) -> Result<(EahOutput, ContextModel)> {
    eah_encode_with_guard(x, alphabet, order, DEFAULT_BITMAP_GUARD)
}

pub fn eah_encode_with_guard<T: Ord + Copy>(
    x: &[T],
    alphabet: &Alphabet<T>,
    order: usize,
    guard_bits: u64,
) -> Result<(EahOutput, ContextModel)> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if order < 1 {
        return Err(Error::BadOrder);
    }
    check_guard(alphabet.len(), order, guard_bits)?;
    let ids = alphabet.to_indices(x)?;
    let p = alphabet.len() as u64;
    let n = order;
    let t = ids.len();

    // (context rank, follower, position) per coded position; sorting groups
    // each context's followers together, replacing per-symbol map updates
    let mut pairs: Vec<(u64, u32, u32)> = Vec::new();
    if t > n {
        pairs.reserve(t - n);
        let mut rank = ids[..n].iter().fold(0u64, |acc, &d| acc * p + d as u64);
        let high = p.pow(n as u32 - 1);
        for i in n..t {
            pairs.push((rank, ids[i], (i - n) as u32));
            rank = (rank - ids[i - n] as u64 * high) * p + ids[i] as u64;
        }
    }
    pairs.sort_unstable();

    // locs[pos] points at the follower coding that position
    let mut locs: Vec<(u32, u32)> = vec![(0, 0); pairs.len()];
    let mut entries: Vec<(u64, ContextEntry)> = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let rank = pairs[start].0;
        let end = start
            + pairs[start..]
                .iter()
                .position(|&(r, _, _)| r != rank)
                .unwrap_or(pairs.len() - start);
        let ctx_idx = entries.len() as u32;
        let mut followers: Vec<Follower> = Vec::new();
        let mut s = start;
        while s < end {
            let symbol = pairs[s].1;
            let mut e = s;
            while e < end && pairs[e].1 == symbol {
                locs[pairs[e].2 as usize] = (ctx_idx, followers.len() as u32);
                e += 1;
            }
            followers.push(Follower {
                symbol,
                count: (e - s) as u64,
                codeword: BitString::new(),
            });
            s = e;
        }
        if followers.len() >= 2 {
            let freqs: Vec<u64> = followers.iter().map(|f| f.count).collect();
            let code = huffman(&FrequencyTuple::new(freqs).expect("counts are positive"));
            for (f, codeword) in followers.iter_mut().zip(code.words) {
                f.codeword = codeword;
            }
        }
        entries.push((rank, ContextEntry { followers }));
        start = end;
    }
    let model = ContextModel {
        order: n,
        alphabet_size: p as usize,
        contexts: entries.into_iter().collect(),
    };

    let mut pairs: Vec<(u32, u64)> = Vec::new();
    let mut coded: Vec<(u32, u64, &BitString)> = Vec::new();
    for (rank, entry) in model.contexts() {
        for f in &entry.followers {
            pairs.push((f.symbol, rank));
            if !f.codeword.is_empty() {
                coded.push((f.symbol, rank, &f.codeword));
            }
        }
    }
    pairs.sort_unstable();
    let b: BTreeSet<(u32, u64)> = pairs.into_iter().collect();
    coded.sort_by_key(|&(s, r, _)| (s, r));
    let y = CodewordTuple {
        words: coded.into_iter().map(|(_, _, w)| w.clone()).collect(),
    };

    // iteration order of the context map matches the index order of `entries`
    let refs: Vec<&ContextEntry> = model.contexts.values().collect();
    let mut z = BitString::new();
    for &(ctx_idx, fol_idx) in &locs {
        z.extend(&refs[ctx_idx as usize].followers[fol_idx as usize].codeword);
    }

    let output = EahOutput {
        prefix: ids[..n.min(t)].to_vec(),
        b,
        y,
        z,
    };
    Ok((output, model))
}

fn check_guard(p: usize, order: usize, guard_bits: u64) -> Result<()> {
    let bits = (p as u128).checked_pow(order as u32 + 1);
    match bits {
        Some(bits) if bits <= guard_bits as u128 => Ok(()),
        Some(bits) => Err(Error::GuardExceeded {
            bits,
            guard: guard_bits,
        }),
        None => Err(Error::GuardExceeded {
            bits: u128::MAX,
            guard: guard_bits,
        }),
    }
}

const EMPTY_SLOT: u32 = u32::MAX;

/// Context-rank → small-index map: a direct-index table when the context
/// space is small enough, a hash map otherwise.
enum RankSlots {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl RankSlots {
    fn new(total_contexts: u128) -> Self {
        if total_contexts <= 1 << 22 {
            RankSlots::Dense(vec![EMPTY_SLOT; total_contexts as usize])
        } else {
            RankSlots::Sparse(HashMap::new())
        }
    }

    fn insert(&mut self, rank: u64, idx: u32) {
        match self {
            RankSlots::Dense(v) => v[rank as usize] = idx,
            RankSlots::Sparse(m) => {
                m.insert(rank, idx);
            }
        }
    }

    fn get(&self, rank: u64) -> Option<u32> {
        match self {
            RankSlots::Dense(v) => v
                .get(rank as usize)
                .copied()
                .filter(|&i| i != EMPTY_SLOT),
            RankSlots::Sparse(m) => m.get(&rank).copied(),
        }
    }
}

/// Binary trie over one context's codewords for left-to-right decoding.
struct CodeTrie {
    // node = [child on 0, child on 1], usize::MAX = none; leaf payload below
    nodes: Vec<[usize; 2]>,
    symbols: Vec<Option<u32>>,
}

impl CodeTrie {
    fn build(words: &[(u32, &BitString)]) -> Self {
        let mut trie = CodeTrie {
            nodes: vec![[usize::MAX; 2]],
            symbols: vec![None],
        };
        for &(symbol, word) in words {
            let mut node = 0;
            for bit in word.iter() {
                let slot = bit as usize;
                if trie.nodes[node][slot] == usize::MAX {
                    trie.nodes[node][slot] = trie.nodes.len();
                    trie.nodes.push([usize::MAX; 2]);
                    trie.symbols.push(None);
                }
                node = trie.nodes[node][slot];
            }
            trie.symbols[node] = Some(symbol);
        }
        trie
    }
}

pub fn eah_decode<T: Ord + Copy>(
    out: &EahOutput,
    alphabet: &Alphabet<T>,
    order: usize,
    t: u64,
) -> Result<Vec<T>> {
    if order < 1 {
        return Err(Error::BadOrder);
    }
    let p = alphabet.len() as u64;
    let n = order;
    let prefix_len = (n as u64).min(t) as usize;
    if out.prefix.len() != prefix_len {
        return Err(Error::Inconsistent {
            what: "prefix length",
        });
    }
    if out.prefix.iter().any(|&s| s as u64 >= p) {
        return Err(Error::Inconsistent {
            what: "prefix symbol",
        });
    }

    let mut ids: Vec<u32> = out.prefix.clone();
    if t as usize > n {
        // Follower sets per context, from the occurrence table. Iterating the
        // b pairs in their natural (symbol, rank) order rebuilds each list in
        // symbol order and matches the codeword tuple's traversal.
        let total_contexts = (p as u128).saturating_pow(n as u32);
        let mut grouped: Vec<(u64, u32)> = Vec::with_capacity(out.b.len());
        for &(symbol, rank) in &out.b {
            if symbol as u64 >= p || rank >= p.saturating_pow(n as u32) {
                return Err(Error::Inconsistent {
                    what: "occurrence table entry",
                });
            }
            grouped.push((rank, symbol));
        }
        grouped.sort_unstable();

        // follower lists in rank order, flattened into one array addressed
        // through the slot table and per-context offsets
        let mut slots = RankSlots::new(total_contexts);
        let mut flat: Vec<u32> = Vec::with_capacity(grouped.len());
        let mut ctx_off: Vec<u32> = vec![0];
        let mut start = 0;
        while start < grouped.len() {
            let rank = grouped[start].0;
            let end = start
                + grouped[start..]
                    .iter()
                    .position(|&(r, _)| r != rank)
                    .unwrap_or(grouped.len() - start);
            slots.insert(rank, ctx_off.len() as u32 - 1);
            flat.extend(grouped[start..end].iter().map(|&(_, s)| s));
            ctx_off.push(flat.len() as u32);
            start = end;
        }
        let span = |idx: usize| ctx_off[idx] as usize..ctx_off[idx + 1] as usize;

        // hand out codewords in the b table's (symbol, rank) order and attach
        // them to each multi-follower context's symbols
        let mut words_of: Vec<Option<&BitString>> = vec![None; flat.len()];
        let mut next = 0usize;
        for &(symbol, rank) in &out.b {
            let idx = slots.get(rank).expect("every b pair was grouped") as usize;
            let range = span(idx);
            if range.len() >= 2 {
                let word = out.y.words.get(next).ok_or(Error::PopcountMismatch {
                    codewords: out.y.words.len(),
                    expected: next + 1,
                })?;
                let fol = flat[range.clone()]
                    .binary_search(&symbol)
                    .expect("symbol came from this context's b row");
                words_of[range.start + fol] = Some(word);
                next += 1;
            }
        }
        if next != out.y.words.len() {
            return Err(Error::PopcountMismatch {
                codewords: out.y.words.len(),
                expected: next,
            });
        }
        let tries: Vec<Option<CodeTrie>> = (0..ctx_off.len() - 1)
            .map(|idx| {
                let range = span(idx);
                (range.len() >= 2).then(|| {
                    let pairs: Vec<(u32, &BitString)> = flat[range.clone()]
                        .iter()
                        .zip(&words_of[range])
                        .map(|(&s, w)| (s, w.expect("assigned above")))
                        .collect();
                    CodeTrie::build(&pairs)
                })
            })
            .collect();

        let mut rank = ids[..n].iter().fold(0u64, |acc, &d| acc * p + d as u64);
        let high = p.pow(n as u32 - 1);
        let mut cursor = 0usize;
        for _ in n as u64..t {
            let idx = slots.get(rank).ok_or(Error::DeadContext)? as usize;
            let syms = &flat[span(idx)];
            let symbol = if syms.len() == 1 {
                syms[0]
            } else {
                let trie = tries[idx].as_ref().expect("multi-follower context");
                let mut node = 0usize;
                loop {
                    if let Some(s) = trie.symbols[node] {
                        break s;
                    }
                    if cursor >= out.z.len() {
                        return Err(Error::StreamExhausted);
                    }
                    let bit = out.z.get(cursor);
                    node = trie.nodes[node][bit as usize];
                    cursor += 1;
                    if node == usize::MAX {
                        return Err(Error::UnmatchedCodeword { bit: cursor - 1 });
                    }
                }
            };
            ids.push(symbol);
            rank = (rank - ids[ids.len() - 1 - n] as u64 * high) * p + symbol as u64;
        }
        if cursor != out.z.len() {
            return Err(Error::Inconsistent {
                what: "trailing compressed bits",
            });
        }
    } else if !out.z.is_empty() || !out.y.words.is_empty() {
        return Err(Error::Inconsistent {
            what: "payload for short input",
        });
    }
    Ok(alphabet.to_symbols(&ids))
}
