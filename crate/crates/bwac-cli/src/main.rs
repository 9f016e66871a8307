//! Command-line front end for the block-sorting compressor.
//!
//! Exit codes are a stable contract: 0 success, 1 usage, 2 I/O, 3 corrupted
//! input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use bwac::eah::eah_encode;
use bwac::pipeline::{
    bits_per_symbol, compress_to_bytes, decompress_bytes, trace_blocks, PipelineConfig,
};
use bwac::Alphabet;

#[derive(Parser)]
#[command(name = "bwac", version, about = "Block-sorting compressor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PipelineArgs {
    /// Context order of the final coding stage
    #[arg(long, default_value_t = 1)]
    order: usize,
    /// Block size in bytes; 0 transforms the whole input as one block
    #[arg(long, default_value_t = 1 << 20)]
    block_size: u64,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            order: self.order,
            block_size: self.block_size,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file into a container
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Restore the original file from a container
    Decompress { input: PathBuf, output: PathBuf },
    /// Print per-block intermediates of the compression chain
    Inspect {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Stage::Eah)]
        stage: Stage,
        /// Feed the raw input straight to the context coder, skipping the
        /// transform and move-to-front stages (only with --stage eah)
        #[arg(long)]
        raw_eah: bool,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Compress every file in a directory and report bits/symbol
    Bench {
        corpus_dir: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// TSV of "name<TAB>bytes" reference sizes; adds savings columns
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Stage {
    Bwt,
    Mtf,
    Eah,
}

enum CliError {
    Usage(String),
    Io(String),
    Corrupt(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Corrupt(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Corrupt(m) => m,
        }
    }
}

fn io_err(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Compress {
            input,
            output,
            pipeline,
        } => cmd_compress(&input, &output, &pipeline.config()),
        Command::Decompress { input, output } => cmd_decompress(&input, &output),
        Command::Inspect {
            input,
            stage,
            raw_eah,
            pipeline,
        } => cmd_inspect(&input, stage, raw_eah, &pipeline.config()),
        Command::Bench {
            corpus_dir,
            pipeline,
            baseline,
        } => cmd_bench(&corpus_dir, &pipeline.config(), baseline.as_deref()),
    }
}

fn cmd_compress(input: &Path, output: &Path, cfg: &PipelineConfig) -> Result<(), CliError> {
    let data = std::fs::read(input).map_err(|e| io_err(input, e))?;
    let bytes = compress_to_bytes(&data, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    std::fs::write(output, &bytes).map_err(|e| io_err(output, e))?;
    println!(
        "{}: {} bytes -> {} bytes, {:.2} bits/symbol",
        input.display(),
        data.len(),
        bytes.len(),
        bits_per_symbol(data.len() as u64, bytes.len() as u64)
    );
    Ok(())
}

fn cmd_decompress(input: &Path, output: &Path) -> Result<(), CliError> {
    let bytes = std::fs::read(input).map_err(|e| io_err(input, e))?;
    let data = decompress_bytes(&bytes).map_err(|e| CliError::Corrupt(e.to_string()))?;
    std::fs::write(output, &data).map_err(|e| io_err(output, e))?;
    println!(
        "{}: {} bytes -> {} bytes",
        input.display(),
        bytes.len(),
        data.len()
    );
    Ok(())
}

fn cmd_inspect(
    input: &Path,
    stage: Stage,
    raw_eah: bool,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    let data = std::fs::read(input).map_err(|e| io_err(input, e))?;
    if raw_eah {
        if !matches!(stage, Stage::Eah) {
            return Err(CliError::Usage(
                "--raw-eah applies only to --stage eah".into(),
            ));
        }
        let alphabet = Alphabet::from_data(&data);
        let (out, _) =
            eah_encode(&data, &alphabet, cfg.order).map_err(|e| CliError::Usage(e.to_string()))?;
        let prefix: Vec<u8> = out.prefix.iter().map(|&s| alphabet.symbol(s)).collect();
        println!("prefix=\"{}\"", prefix.escape_ascii());
        println!("b={} pairs", out.b.len());
        println!("Y=({})", join(out.y.words.iter().map(|w| w.to_string())));
        println!("Z=\"{}\" ({} bits)", out.z, out.z.len());
        return Ok(());
    }
    let traces = trace_blocks(&data, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    for (i, trace) in traces.iter().enumerate() {
        match stage {
            Stage::Bwt => println!(
                "block {i}: I={} S'=\"{}\"",
                trace.bwt.index,
                trace.bwt.transformed.iter().copied().collect::<Vec<u8>>().escape_ascii()
            ),
            Stage::Mtf => println!(
                "block {i}: ({})",
                join(trace.ranks.ranks.iter().map(|r| r.to_string()))
            ),
            Stage::Eah => {
                let prefix: Vec<u8> = trace
                    .eah
                    .prefix
                    .iter()
                    .map(|&s| trace.alphabet.symbol(s))
                    .collect();
                println!(
                    "block {i}: prefix=\"{}\" b={} pairs Y=({}) |Z|={} bits",
                    prefix.escape_ascii(),
                    trace.eah.b.len(),
                    join(trace.eah.y.words.iter().map(|w| w.to_string())),
                    trace.eah.z.len()
                );
            }
        }
    }
    Ok(())
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}

struct BenchRow {
    name: String,
    original: u64,
    compressed: u64,
    seconds: f64,
    baseline: Option<u64>,
}

fn cmd_bench(
    dir: &Path,
    cfg: &PipelineConfig,
    baseline: Option<&Path>,
) -> Result<(), CliError> {
    let baseline = baseline.map(read_baseline).transpose()?;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!(
            "no files to compress in {}",
            dir.display()
        )));
    }

    let mut rows = Vec::new();
    for path in &paths {
        let data = std::fs::read(path).map_err(|e| io_err(path, e))?;
        let start = Instant::now();
        let bytes = compress_to_bytes(&data, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
        let seconds = start.elapsed().as_secs_f64();
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let reference = baseline.as_ref().and_then(|b| {
            b.iter()
                .find(|(n, _)| *n == name)
                .map(|&(_, bytes)| bytes)
        });
        rows.push(BenchRow {
            name,
            original: data.len() as u64,
            compressed: bytes.len() as u64,
            seconds,
            baseline: reference,
        });
    }
    print!("{}", render_report(&rows, baseline.is_some()));
    Ok(())
}

fn read_baseline(path: &Path) -> Result<Vec<(String, u64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (name, size) = line.split_once('\t').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected \"name<TAB>bytes\"",
                path.display(),
                lineno + 1
            ))
        })?;
        let size: u64 = size.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{}:{}: bad byte count {size:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        out.push((name.to_string(), size));
    }
    Ok(out)
}

/// Aligned table followed by machine-readable `#TSV` rows with the same
/// figures at full precision.
fn render_report(rows: &[BenchRow], with_baseline: bool) -> String {
    let mut table: Vec<Vec<String>> = Vec::new();
    let mut header = vec![
        "file".to_string(),
        "original".to_string(),
        "compressed".to_string(),
        "bits/symbol".to_string(),
        "seconds".to_string(),
    ];
    if with_baseline {
        header.push("baseline".to_string());
        header.push("saved".to_string());
        header.push("improvement".to_string());
    }
    table.push(header);

    let fmt_row = |name: &str, original: u64, compressed: u64, seconds: f64, base: Option<u64>| {
        let mut row = vec![
            name.to_string(),
            original.to_string(),
            compressed.to_string(),
            format!("{:.2}", bits_per_symbol(original, compressed)),
            format!("{seconds:.2}"),
        ];
        if with_baseline {
            match base {
                Some(b) => {
                    let saved = b as i64 - compressed as i64;
                    row.push(b.to_string());
                    row.push(saved.to_string());
                    row.push(format!("{:.2}%", 100.0 * saved as f64 / b as f64));
                }
                None => row.extend(["-".into(), "-".into(), "-".into()]),
            }
        }
        row
    };
    for r in rows {
        table.push(fmt_row(&r.name, r.original, r.compressed, r.seconds, r.baseline));
    }
    let total_original: u64 = rows.iter().map(|r| r.original).sum();
    let total_compressed: u64 = rows.iter().map(|r| r.compressed).sum();
    let total_seconds: f64 = rows.iter().map(|r| r.seconds).sum();
    let total_baseline: Option<u64> = rows
        .iter()
        .map(|r| r.baseline)
        .sum::<Option<u64>>()
        .filter(|_| with_baseline);
    table.push(fmt_row(
        "total",
        total_original,
        total_compressed,
        total_seconds,
        total_baseline,
    ));

    let widths: Vec<usize> = (0..table[0].len())
        .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &table {
        for (cell, width) in row.iter().zip(&widths) {
            let _ = write!(out, "{cell:>width$}  ");
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    for r in rows {
        let _ = write!(
            out,
            "#TSV\t{}\t{}\t{}\t{}\t{}",
            r.name,
            r.original,
            r.compressed,
            bits_per_symbol(r.original, r.compressed),
            r.seconds
        );
        if let Some(b) = r.baseline {
            let saved = b as i64 - r.compressed as i64;
            let _ = write!(out, "\t{b}\t{saved}\t{}", 100.0 * saved as f64 / b as f64);
        }
        out.push('\n');
    }
    out
}
