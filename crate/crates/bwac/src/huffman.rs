//! Tuple-based Huffman construction with fixed tie-breaking.
//!
//! The work list holds (weight, original positions) items. Each merge picks
//! the smallest positions i < j attaining the two smallest weights, prepends
//! bit 0 under item i and bit 1 under item j, and appends the merged item at
//! the end of the list. The tie-breaking is part of the output contract: the
//! serialized codeword tables depend on it.

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTuple {
    pub freqs: Vec<u64>,
}

impl FrequencyTuple {
    pub fn new(freqs: Vec<u64>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::EmptyFrequencies);
        }
        if let Some(position) = freqs.iter().position(|&f| f == 0) {
            return Err(Error::NonPositiveFrequency { position });
        }
        Ok(Self { freqs })
    }
}

/// Codewords positionally aligned with the frequency tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordTuple {
    pub words: Vec<BitString>,
}

pub fn huffman(f: &FrequencyTuple) -> CodewordTuple {
    let n = f.freqs.len();
    let mut words = vec![BitString::new(); n];
    if n == 1 {
        words[0] = BitString::from_bits("0");
        return CodewordTuple { words };
    }
    // Node arena: 0..n are the leaves, merges append internal nodes. The work
    // list holds arena ids; a merge removes both and appends the new node's
    // id at the end.
    let mut weight: Vec<u64> = f.freqs.clone();
    let mut parent: Vec<(usize, bool)> = vec![(usize::MAX, false); 2 * n - 1];
    let mut list: Vec<usize> = (0..n).collect();
    while list.len() > 1 {
        let (i, j) = pick_pair(&weight, &list);
        let (a, b) = (list[i], list[j]);
        list.remove(j);
        list.remove(i);
        let merged = weight.len();
        weight.push(weight[a] + weight[b]);
        parent[a] = (merged, false);
        parent[b] = (merged, true);
        list.push(merged);
    }

    // each leaf's word is its root-to-leaf path: item i of a merge gets 0,
    // item j gets 1
    let mut path = Vec::new();
    for (leaf, word) in words.iter_mut().enumerate() {
        path.clear();
        let mut node = leaf;
        while parent[node].0 != usize::MAX {
            path.push(parent[node].1);
            node = parent[node].0;
        }
        for &bit in path.iter().rev() {
            word.push(bit);
        }
    }
    CodewordTuple { words }
}

/// Smallest positions i < j in the work list attaining its two smallest
/// weights.
fn pick_pair(weight: &[u64], list: &[usize]) -> (usize, usize) {
    debug_assert!(list.len() >= 2);
    let mut m1 = u64::MAX;
    let mut m2 = u64::MAX;
    for &id in list {
        let w = weight[id];
        if w < m1 {
            m2 = m1;
            m1 = w;
        } else if w < m2 {
            m2 = w;
        }
    }
    let i = list
        .iter()
        .position(|&id| weight[id] == m1 || weight[id] == m2)
        .unwrap();
    let other = if weight[list[i]] == m1 { m2 } else { m1 };
    let j = (i + 1..list.len())
        .find(|&j| weight[list[j]] == other)
        .unwrap();
    (i, j)
}

const ORACLE_LIMIT: usize = 12;

/// Minimum of Σ fᵢ·lᵢ over all binary prefix codes, by exhaustive search over
/// Kraft-complete length multisets. Independent of `huffman`; test oracle.
pub fn optimal_weighted_length(f: &FrequencyTuple) -> Result<u64> {
    let n = f.freqs.len();
    if n > ORACLE_LIMIT {
        return Err(Error::TupleTooLarge {
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    if n == 1 {
        return Ok(f.freqs[0]);
    }
    let mut sorted_desc = f.freqs.clone();
    sorted_desc.sort_unstable_by(|a, b| b.cmp(a));

    let mut best = u64::MAX;
    for lengths in kraft_multisets_cached(n) {
        // lengths ascending; pairing shortest lengths with largest
        // frequencies is optimal for a fixed multiset.
        let cost: u64 = sorted_desc
            .iter()
            .zip(lengths.iter())
            .map(|(&f, &l)| f * l as u64)
            .sum();
        best = best.min(cost);
    }
    Ok(best)
}

/// Per-size cache: the enumeration depends only on the tuple size.
fn kraft_multisets_cached(n: usize) -> &'static [Vec<u8>] {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<Vec<Vec<u8>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (0..=ORACLE_LIMIT).map(kraft_complete_multisets).collect());
    &all[n]
}

/// All non-decreasing length vectors (l₁,…,lₙ) with Σ 2^{-lᵢ} = 1.
fn kraft_complete_multisets(n: usize) -> Vec<Vec<u8>> {
    if n < 2 {
        return Vec::new(); // the single-codeword case is handled directly
    }
    // Budget tracked in units of 2^{-(n-1)}; n-1 is the deepest useful level.
    let max_len = (n - 1).max(1) as u8;
    let total: u64 = 1 << (max_len as u64);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn recurse(
        remaining_items: usize,
        remaining_budget: u64,
        min_len: u8,
        max_len: u8,
        current: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if remaining_items == 0 {
            if remaining_budget == 0 {
                out.push(current.clone());
            }
            return;
        }
        for l in min_len..=max_len {
            let cost = 1u64 << (max_len - l);
            if cost > remaining_budget {
                continue; // deeper levels are cheaper and may still fit
            }
            // The remaining items can spend at most `cost` each (they are at
            // least as deep), so prune when they cannot cover the budget.
            if (remaining_budget - cost) > (remaining_items as u64 - 1) * cost {
                continue;
            }
            current.push(l);
            recurse(
                remaining_items - 1,
                remaining_budget - cost,
                l,
                max_len,
                current,
                out,
            );
            current.pop();
        }
    }
    recurse(n, total, 1, max_len, &mut current, &mut out);
    out
}
