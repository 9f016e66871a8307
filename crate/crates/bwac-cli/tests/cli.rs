//! End-to-end checks of every CLI path through the real binary.

use std::collections::BinaryHeap;
use std::path::Path;
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::tempdir;

fn bwac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn roundtrip_via_files() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("input");
    let packed = dir.path().join("packed");
    let restored = dir.path().join("restored");
    let mut rng = StdRng::seed_from_u64(41);
    let data: Vec<u8> = (0..10_000).map(|_| rng.gen_range(b'a'..=b'f')).collect();
    std::fs::write(&input, &data).unwrap();

    let out = bwac(&["compress", path(&input), path(&packed)]);
    assert!(out.status.success(), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("bits/symbol"));

    let out = bwac(&["decompress", path(&packed), path(&restored)]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(std::fs::read(&restored).unwrap(), data);
}

#[test]
fn empty_file_makes_nine_byte_container() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("empty");
    let packed = dir.path().join("packed");
    std::fs::write(&input, b"").unwrap();
    let out = bwac(&["compress", path(&input), path(&packed)]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(std::fs::metadata(&packed).unwrap().len(), 9);
}

#[test]
fn unreadable_input_is_io_error() {
    let dir = tempdir().unwrap();
    let out = bwac(&[
        "compress",
        path(&dir.path().join("missing")),
        path(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn corrupted_containers_are_reported() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("input");
    let packed = dir.path().join("packed");
    let restored = dir.path().join("restored");
    std::fs::write(&input, b"some recoverable text").unwrap();
    assert!(bwac(&["compress", path(&input), path(&packed)])
        .status
        .success());

    let bytes = std::fs::read(&packed).unwrap();
    let truncated = dir.path().join("truncated");
    std::fs::write(&truncated, &bytes[..bytes.len() - 1]).unwrap();
    let out = bwac(&["decompress", path(&truncated), path(&restored)]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");

    let mut magic = bytes;
    magic[0] ^= 0xff;
    let bad_magic = dir.path().join("bad_magic");
    std::fs::write(&bad_magic, &magic).unwrap();
    let out = bwac(&["decompress", path(&bad_magic), path(&restored)]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn usage_errors_exit_one() {
    let out = bwac(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempdir().unwrap();
    let input = dir.path().join("input");
    std::fs::write(&input, b"xyz").unwrap();
    let out = bwac(&[
        "compress",
        path(&input),
        path(&dir.path().join("out")),
        "--order",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn inspect_prints_worked_intermediates() {
    let dir = tempdir().unwrap();
    let research = dir.path().join("research");
    std::fs::write(&research, b"research").unwrap();
    let out = bwac(&["inspect", path(&research), "--stage", "bwt"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(out.status.success());
    assert!(text.contains("I=7") && text.contains("ersrcahe"), "{text}");

    let aaa = dir.path().join("aaa");
    std::fs::write(&aaa, b"aaa").unwrap();
    let out = bwac(&["inspect", path(&aaa), "--stage", "mtf"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("(0,0,0)"));

    let ex3 = dir.path().join("ex3");
    std::fs::write(&ex3, b"baabbabab").unwrap();
    let out = bwac(&[
        "inspect",
        path(&ex3),
        "--stage",
        "eah",
        "--raw-eah",
        "--order",
        "2",
        "--block-size",
        "0",
    ]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(out.status.success());
    assert!(text.contains("Y=(0,0,1,1)"), "{text}");
    assert!(text.contains("Z=\"01101\""), "{text}");
}

/// Parsed `#TSV` row: (name, original, compressed, bits/symbol).
fn tsv_rows(stdout: &str) -> Vec<(String, u64, u64, f64)> {
    stdout
        .lines()
        .filter(|l| l.starts_with("#TSV\t"))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (
                f[1].to_string(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn bench_totals_and_baseline_columns() {
    let dir = tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    std::fs::write(corpus.join("one"), vec![b'q'; 4096]).unwrap();
    std::fs::write(corpus.join("two"), b"abracadabra".repeat(100)).unwrap();
    let baseline = dir.path().join("sizes.tsv");
    std::fs::write(&baseline, "one\t2000\ntwo\t500\n").unwrap();

    let out = bwac(&[
        "bench",
        path(&corpus),
        "--baseline",
        path(&baseline),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let rows = tsv_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].1 + rows[1].1, 4096 + 1100);

    // the totals line of the table equals the column sums of the rows
    let total_line = text
        .lines()
        .find(|l| l.trim_start().starts_with("total"))
        .unwrap();
    let fields: Vec<&str> = total_line.split_whitespace().collect();
    assert_eq!(fields[1].parse::<u64>().unwrap(), rows[0].1 + rows[1].1);
    assert_eq!(fields[2].parse::<u64>().unwrap(), rows[0].2 + rows[1].2);
    assert_eq!(fields[5].parse::<u64>().unwrap(), 2500);
    assert!(text.contains("improvement"));
}

#[test]
fn bench_empty_dir_fails() {
    let dir = tempdir().unwrap();
    let out = bwac(&["bench", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

/// Weighted codeword length of an optimal prefix code, by the standard
/// heap-based construction — independent of the library's coder.
fn huffman_bound(freqs: &[u64]) -> f64 {
    let total: u64 = freqs.iter().sum();
    let live: Vec<u64> = freqs.iter().copied().filter(|&f| f > 0).collect();
    if live.len() <= 1 {
        return 1.0;
    }
    let mut heap: BinaryHeap<std::cmp::Reverse<(u64, u64)>> =
        live.iter().map(|&f| std::cmp::Reverse((f, 0))).collect();
    let mut weighted_bits = 0u64;
    while heap.len() > 1 {
        let std::cmp::Reverse((f1, _)) = heap.pop().unwrap();
        let std::cmp::Reverse((f2, _)) = heap.pop().unwrap();
        weighted_bits += f1 + f2;
        heap.push(std::cmp::Reverse((f1 + f2, 0)));
    }
    weighted_bits as f64 / total as f64
}

#[test]
fn bench_markov_text_beats_plain_huffman() {
    // 100 KiB of order-1 Markov text: each symbol strongly prefers its
    // successor, so context coding should beat symbol-frequency coding
    let symbols = b"abcdefgh";
    let mut rng = StdRng::seed_from_u64(0x3a7);
    let mut state = 0usize;
    let mut data = Vec::with_capacity(100 << 10);
    for _ in 0..(100 << 10) {
        data.push(symbols[state]);
        state = if rng.gen_bool(0.9) {
            (state + 1) % symbols.len()
        } else {
            rng.gen_range(0..symbols.len())
        };
    }
    let mut freqs = [0u64; 256];
    for &b in &data {
        freqs[b as usize] += 1;
    }
    let bound = huffman_bound(&freqs);

    let dir = tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    std::fs::write(corpus.join("markov"), &data).unwrap();
    let out = bwac(&["bench", path(&corpus), "--block-size", "0"]);
    assert!(out.status.success(), "{out:?}");
    let rows = tsv_rows(&String::from_utf8_lossy(&out.stdout));
    let bps = rows[0].3;
    assert!(bps < 8.0, "got {bps}");
    assert!(bps < bound, "got {bps}, plain Huffman bound {bound}");
}
