//! Burrows-Wheeler transform over full cyclic rotations (no sentinel).
//!
//! The rotation matrix is conceptual only: the forward transform sorts
//! rotation start positions by prefix doubling with counting sorts, so a
//! doubling round is linear and the whole transform is O(n log n).

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Last column of the sorted rotation matrix plus the 1-based rank of the
/// rotation equal to the original string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtResult<T> {
    pub transformed: Vec<T>,
    /// 1-based; for periodic inputs this is the smallest matching rank.
    pub index: u64,
}

/// Sorts the cyclic rotations of `s` (lexicographically by alphabet index) and
/// returns the last column together with the smallest rank whose rotation
/// equals `s`.
pub fn bwt_forward<T: Ord + Copy>(s: &[T], alphabet: &Alphabet<T>) -> Result<BwtResult<T>> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ids = alphabet.to_indices(s)?;
    let (order, rank) = sort_rotations(&ids);
    let n = ids.len();

    let transformed: Vec<T> = order
        .iter()
        .map(|&start| s[(start + n - 1) % n])
        .collect();
    // Equal rotations share a rank class; the class of position 0 starts at
    // the first occurrence of its rank in sorted order.
    let first = order
        .iter()
        .position(|&p| rank[p] == rank[0])
        .expect("position 0 is in the sorted order");
    Ok(BwtResult {
        transformed,
        index: first as u64 + 1,
    })
}

/// Prefix doubling over cyclic indices. Returns rotation starts in sorted
/// order and the final (dense) rank of each start position.
fn sort_rotations(ids: &[u32]) -> (Vec<usize>, Vec<usize>) {
    let n = ids.len();
    let mut rank: Vec<usize> = ids.iter().map(|&c| c as usize).collect();
    let mut order = counting_sort_by_key(n, |i| rank[i], ids.iter().map(|&c| c as usize).max().unwrap() + 1);
    compact_ranks(&order, &mut rank, |i| (ids[i] as usize, 0));

    let mut k = 1;
    while k < n {
        let max_rank = *rank.iter().max().unwrap();
        if max_rank == n - 1 {
            break; // all rotations already distinguished
        }
        // Sorting by the second key rank[(i+k) % n] is a rotation of the
        // current order; then a stable sort by the first key finishes the pass.
        let by_second: Vec<usize> = order.iter().map(|&j| (j + n - k) % n).collect();
        order = stable_sort_by_key(&by_second, |i| rank[i], max_rank + 1);
        let prev = rank.clone();
        compact_ranks(&order, &mut rank, |i| (prev[i], prev[(i + k) % n]));
        k *= 2;
    }
    (order, rank)
}

fn counting_sort_by_key(n: usize, key: impl Fn(usize) -> usize, buckets: usize) -> Vec<usize> {
    stable_sort_by_key(&(0..n).collect::<Vec<_>>(), key, buckets)
}

fn stable_sort_by_key(
    items: &[usize],
    key: impl Fn(usize) -> usize,
    buckets: usize,
) -> Vec<usize> {
    let mut counts = vec![0usize; buckets + 1];
    for &i in items {
        counts[key(i) + 1] += 1;
    }
    for b in 1..counts.len() {
        counts[b] += counts[b - 1];
    }
    let mut out = vec![0usize; items.len()];
    for &i in items {
        let k = key(i);
        out[counts[k]] = i;
        counts[k] += 1;
    }
    out
}

fn compact_ranks(
    order: &[usize],
    rank: &mut [usize],
    key: impl Fn(usize) -> (usize, usize),
) {
    let mut current = 0;
    let mut prev_key = key(order[0]);
    for &i in order {
        let k = key(i);
        if k != prev_key {
            current += 1;
            prev_key = k;
        }
        rank[i] = current;
    }
}

/// Reverses the transform with the standard LF mapping: stable counting of the
/// last column recovers, for each row, the row holding its right rotation.
pub fn bwt_inverse<T: Ord + Copy>(r: &BwtResult<T>, alphabet: &Alphabet<T>) -> Result<Vec<T>> {
    let n = r.transformed.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if r.index < 1 || r.index > n as u64 {
        return Err(Error::IndexOutOfRange {
            index: r.index,
            len: n as u64,
        });
    }
    let ids = alphabet.to_indices(&r.transformed)?;
    let p = alphabet.len();

    let mut counts = vec![0usize; p + 1];
    for &c in &ids {
        counts[c as usize + 1] += 1;
    }
    for c in 1..counts.len() {
        counts[c] += counts[c - 1];
    }
    // lf[i]: row whose rotation is row i shifted right by one.
    let mut lf = vec![0usize; n];
    for (i, &c) in ids.iter().enumerate() {
        lf[i] = counts[c as usize];
        counts[c as usize] += 1;
    }

    let mut out = vec![r.transformed[0]; n];
    let mut row = (r.index - 1) as usize;
    for slot in out.iter_mut().rev() {
        *slot = r.transformed[row];
        row = lf[row];
    }
    Ok(out)
}

/// Reference transform that materializes and sorts all rotations. Quadratic;
/// for cross-checking the fast path on short inputs only.
pub fn bwt_forward_naive<T: Ord + Copy>(s: &[T], alphabet: &Alphabet<T>) -> Result<BwtResult<T>> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ids = alphabet.to_indices(s)?;
    let n = ids.len();
    let mut rotations: Vec<Vec<u32>> = (0..n)
        .map(|start| (0..n).map(|j| ids[(start + j) % n]).collect())
        .collect();
    rotations.sort();
    let transformed = rotations
        .iter()
        .map(|rot| alphabet.symbol(rot[n - 1]))
        .collect();
    let index = rotations.iter().position(|rot| *rot == ids).unwrap() as u64 + 1;
    Ok(BwtResult { transformed, index })
}
