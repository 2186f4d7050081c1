use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use sbt_cli::{
    cmd_distance, cmd_sort, cmd_verify, loglog_slope, median_doubling_ratio, parse_permutation, read_move_blocks,
    run_bench, write_csv, BenchSpec,
};
use sbt_core::SortOptions;

/// Sort permutations by transpositions.
#[derive(Parser)]
#[command(name = "sbt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct EngineArgs {
    /// Longest sequence the configuration search tries.
    #[arg(long, default_value_t = 4)]
    search_depth: usize,
}

impl EngineArgs {
    fn options(self) -> SortOptions {
        SortOptions { search_depth: self.search_depth, ..SortOptions::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sort each line (space-separated, 1-based) of INPUT or stdin.
    Sort {
        input: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Check that each move list in MOVES sorts the matching line of PERMS.
    Verify { perms: PathBuf, moves: Option<PathBuf> },
    /// Print lower bound, exact distance (n <= 10) and the sorter's move count.
    Distance {
        input: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Time random sorts over powers of two and fit the scaling slope.
    Bench {
        #[arg(long, default_value_t = 1 << 10)]
        min_n: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 600.0)]
        budget_seconds: f64,
        /// Write records here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

fn open(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?)),
        None => Box::new(io::stdin().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout().lock();
    match cli.command {
        Command::Sort { input, engine } => {
            let mut out = BufWriter::new(stdout);
            cmd_sort(open(input.as_deref())?, &mut out, engine.options())?;
            out.flush()?;
        }
        Command::Verify { perms, moves } => {
            let perms = open(Some(&perms))?
                .lines()
                .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
                .map(|l| parse_permutation(&l?))
                .collect::<Result<Vec<_>>>()?;
            let blocks = read_move_blocks(open(moves.as_deref())?)?;
            let failed = cmd_verify(&perms, &blocks)?;
            for &idx in &failed {
                eprintln!("line {}: moves do not sort the permutation", idx + 1);
            }
            if !failed.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
            println!("ok {}", perms.len());
        }
        Command::Distance { input, engine } => {
            let mut out = BufWriter::new(stdout);
            cmd_distance(open(input.as_deref())?, &mut out, engine.options())?;
            out.flush()?;
        }
        Command::Bench { min_n, max_n, seeds, budget_seconds, csv, engine } => {
            let spec = BenchSpec {
                min_n,
                max_n,
                seeds,
                budget: Duration::from_secs_f64(budget_seconds),
                options: SortOptions { timing: true, ..engine.options() },
            };
            let records = run_bench(&spec, |r| {
                eprintln!("n={} seed={} moves={} ratio={:.4} ms={:.1}", r.n, r.seed, r.moves, r.ratio, r.ns_total as f64 / 1e6)
            })?;
            match csv {
                Some(path) => write_csv(&records, File::create(&path).with_context(|| format!("creating {}", path.display()))?)?,
                None => write_csv(&records, stdout)?,
            }
            if let Some(s) = loglog_slope(&records) {
                eprintln!("slope={s:.3}");
            }
            if let Some(r) = median_doubling_ratio(&records) {
                eprintln!("median_doubling_ratio={r:.3}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
