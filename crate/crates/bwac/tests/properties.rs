use std::collections::HashMap;
use std::collections::HashSet;

use proptest::prelude::*;

use bwac::adaptive_code::{is_prefix_code, AdaptiveCodeTable};
use bwac::alphabet::{rank_alphabet, Alphabet};
use bwac::bits::BitString;
use bwac::bwt::{bwt_forward, bwt_forward_naive, bwt_inverse};
use bwac::container::{read_container, write_container, BlockRecord, Container};
use bwac::eah::{eah_decode, eah_encode};
use bwac::huffman::{huffman, optimal_weighted_length, FrequencyTuple};
use bwac::mtf::{mtf_decode, mtf_encode};
use bwac::pipeline::{compress_to_bytes, decompress_bytes, PipelineConfig};

fn string_over(p: usize, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..p as u32, 1..=max_len)
}

proptest! {
    #[test]
    fn bwt_roundtrip_and_multiset(s in string_over(8, 512)) {
        let ab = rank_alphabet(8);
        let r = bwt_forward(&s, &ab).unwrap();
        let mut a = r.transformed.clone();
        let mut b = s.clone();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert_eq!(bwt_inverse(&r, &ab).unwrap(), s);
    }

    #[test]
    fn bwt_matches_naive(s in string_over(4, 64)) {
        let ab = rank_alphabet(4);
        prop_assert_eq!(
            bwt_forward(&s, &ab).unwrap(),
            bwt_forward_naive(&s, &ab).unwrap()
        );
    }

    #[test]
    fn mtf_roundtrip(s in string_over(16, 512)) {
        let ab = Alphabet::from_data(&s);
        let r = mtf_encode(&s, &ab).unwrap();
        prop_assert!(r.ranks.iter().all(|&x| (x as usize) < ab.len()));
        prop_assert_eq!(mtf_decode(&r, &ab).unwrap(), s);
    }

    #[test]
    fn mtf_runs_become_zeros(sym in 0u32..4, run in 2usize..32) {
        let mut s = vec![3u32, 2, 1, 0];
        s.extend(std::iter::repeat(sym).take(run));
        let ab = Alphabet::from_data(&s);
        let r = mtf_encode(&s, &ab).unwrap();
        prop_assert!(r.ranks[s.len() - run + 1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn huffman_is_optimal_prefix_code(freqs in prop::collection::vec(1u64..1000, 1..=12)) {
        let f = FrequencyTuple::new(freqs).unwrap();
        let code = huffman(&f);
        prop_assert!(is_prefix_code(&code.words));
        let total: u64 = f.freqs.iter().zip(&code.words)
            .map(|(&fq, w)| fq * w.len() as u64)
            .sum();
        prop_assert_eq!(total, optimal_weighted_length(&f).unwrap());
    }

    #[test]
    fn eah_roundtrip(
        p in 2usize..=16,
        order in 1usize..=3,
        raw in prop::collection::vec(0u32..16, 1..=256),
    ) {
        let x: Vec<u32> = raw.iter().map(|&v| v % p as u32).collect();
        let ab = rank_alphabet(p);
        let (out, model) = eah_encode(&x, &ab, order).unwrap();
        // per-context codeword sets are prefix codes
        for (_, entry) in model.contexts() {
            let coded: Vec<BitString> = entry.followers.iter()
                .filter(|f| !f.codeword.is_empty())
                .map(|f| f.codeword.clone())
                .collect();
            if entry.followers.len() >= 2 {
                prop_assert_eq!(coded.len(), entry.followers.len());
                prop_assert!(is_prefix_code(&coded));
            } else {
                prop_assert!(coded.is_empty());
            }
        }
        // z length accounting
        let mut expected_bits = 0u64;
        for (rank, entry) in model.contexts() {
            for f in &entry.followers {
                prop_assert_eq!(model.c(f.symbol, rank) >= 1, model.b(f.symbol, rank));
                expected_bits += f.count * f.codeword.len() as u64;
            }
        }
        prop_assert_eq!(out.z.len() as u64, expected_bits);
        prop_assert_eq!(eah_decode(&out, &ab, order, x.len() as u64).unwrap(), x);
    }

    #[test]
    fn container_roundtrip(
        data in prop::collection::vec(any::<u8>(), 1..=512),
        order in 1usize..=2,
    ) {
        let ab = Alphabet::from_data(&data);
        let (eah, _) = eah_encode(&data, &ab, order).unwrap();
        let container = Container { blocks: vec![BlockRecord {
            t: data.len() as u64,
            order,
            bwt_index: 1,
            alphabet: ab.symbols().to_vec(),
            eah,
        }]};
        let bytes = write_container(&container).unwrap();
        prop_assert_eq!(read_container(&bytes).unwrap(), container);
    }

    #[test]
    fn container_survives_bit_flips(
        data in prop::collection::vec(any::<u8>(), 1..=128),
        flip in any::<prop::sample::Index>(),
    ) {
        let cfg = PipelineConfig::default();
        let mut bytes = compress_to_bytes(&data, &cfg).unwrap();
        let bit = flip.index(bytes.len() * 8);
        bytes[bit / 8] ^= 0x80 >> (bit % 8);
        // must not panic; any Ok/Err outcome is acceptable
        if let Ok(container) = read_container(&bytes) {
            let _ = bwac::pipeline::decompress_with_limit(&container, 1 << 20);
        }
    }

    #[test]
    fn pipeline_roundtrip(
        data in prop::collection::vec(any::<u8>(), 0..=4096),
        order in 1usize..=2,
        block in prop::sample::select(vec![0u64, 1024, 1 << 20]),
    ) {
        let cfg = PipelineConfig { order, block_size: block, ..PipelineConfig::default() };
        let bytes = compress_to_bytes(&data, &cfg).unwrap();
        prop_assert_eq!(decompress_bytes(&bytes).unwrap(), data);
    }
}

/// Random complete code tables whose per-context columns are prefix codes
/// must induce injective extensions on short strings.
#[test]
fn verified_tables_are_injective_on_short_strings() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let mut rng = StdRng::seed_from_u64(0x1eaf);
    for _ in 0..20 {
        let p = rng.gen_range(2..=4usize);
        let order = rng.gen_range(1..=2usize);
        let alphabet = rank_alphabet(p);

        let mut entries = HashMap::new();
        for h in 0..=order {
            for ctx in all_contexts(p, h) {
                // a random prefix code for this column, from random frequencies
                let freqs: Vec<u64> = (0..p).map(|_| rng.gen_range(1..=8u64)).collect();
                let code = huffman(&FrequencyTuple::new(freqs).unwrap());
                for (s, word) in code.words.into_iter().enumerate() {
                    entries.insert((s as u32, ctx.clone()), word);
                }
            }
        }
        let table = AdaptiveCodeTable::new(alphabet, order, entries).unwrap();
        assert!(table.verify_theorem1());

        let max_len = if p == 2 { 8 } else { 5 };
        let mut seen = HashSet::new();
        let mut count = 0usize;
        for len in 1..=max_len {
            for x in all_contexts(p, len) {
                seen.insert(table.encode(&x).unwrap().to_string());
                count += 1;
            }
        }
        assert_eq!(seen.len(), count, "two strings shared an encoding");
    }
}

fn all_contexts(p: usize, h: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..h {
        let mut next = Vec::new();
        for ctx in &out {
            for s in 0..p as u32 {
                let mut c = ctx.clone();
                c.push(s);
                next.push(c);
            }
        }
        out = next;
    }
    out
}
