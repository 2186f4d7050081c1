//! Front end for the sorter: text formats, the `sort`/`verify`/`distance`
//! commands and the scaling benchmark.

use std::io::{BufRead, Write};
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sbt_core::oracle::{self, naive};
use sbt_core::{sort, Permutation, SortOptions, SortReport, Transposition};

/// Parses a line of space-separated 1-based values.
pub fn parse_permutation(line: &str) -> Result<Permutation> {
    let values = line
        .split_whitespace()
        .map(|tok| tok.parse::<u32>().with_context(|| format!("bad value {tok:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Permutation::from_one_based(&values)?)
}

pub fn format_move(t: Transposition) -> String {
    format!("t {} {} {}", t.i + 1, t.j + 1, t.k + 1)
}

/// Parses a `t i j k` line back into 0-based cut points.
pub fn parse_move(line: &str) -> Result<Transposition> {
    let mut it = line.split_whitespace();
    ensure!(it.next() == Some("t"), "move line must start with 't': {line:?}");
    let mut cut = [0usize; 3];
    for c in &mut cut {
        let tok = it.next().with_context(|| format!("move line needs three cut points: {line:?}"))?;
        let v: usize = tok.parse().with_context(|| format!("bad cut point {tok:?}"))?;
        ensure!(v >= 1, "cut points are 1-based: {line:?}");
        *c = v - 1;
    }
    ensure!(it.next().is_none(), "trailing input on move line: {line:?}");
    Ok(Transposition::new(cut[0], cut[1], cut[2]))
}

pub fn summary_line(report: &SortReport) -> String {
    let m = report.moves.len();
    let lb = report.lower_bound;
    let ratio = if m == 0 { 0.0 } else { report.ratio_vs_lb() };
    let ratio = format!("{ratio:.4}");
    format!("moves={m} lb={lb} ratio={}", ratio.trim_end_matches('0').trim_end_matches('.'))
}

/// Sorts every non-empty input line, writing its moves and a summary.
pub fn cmd_sort(input: impl BufRead, mut out: impl Write, options: SortOptions) -> Result<()> {
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let perm = parse_permutation(&line).with_context(|| format!("line {}", no + 1))?;
        let report = sort(&perm, options)?;
        for &t in &report.moves {
            writeln!(out, "{}", format_move(t))?;
        }
        writeln!(out, "{}", summary_line(&report))?;
    }
    Ok(())
}

/// Splits `sort` output into one move list per summary line. A trailing
/// block without a summary counts as one more list.
pub fn read_move_blocks(input: impl BufRead) -> Result<Vec<Vec<Transposition>>> {
    let mut blocks = Vec::new();
    let mut cur = Vec::new();
    let mut open = false;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("moves=") {
            blocks.push(std::mem::take(&mut cur));
            open = false;
        } else {
            cur.push(parse_move(line)?);
            open = true;
        }
    }
    if open {
        blocks.push(cur);
    }
    Ok(blocks)
}

/// Checks each move list against the matching permutation; a missing list
/// counts as empty. Returns the indices of the lists that fail to sort.
pub fn cmd_verify(perms: &[Permutation], blocks: &[Vec<Transposition>]) -> Result<Vec<usize>> {
    ensure!(blocks.len() <= perms.len(), "{} move lists for {} permutations", blocks.len(), perms.len());
    let empty = Vec::new();
    let failed = perms
        .iter()
        .enumerate()
        .filter(|&(idx, perm)| !matches!(oracle::verify_sequence(perm, blocks.get(idx).unwrap_or(&empty)), Ok(true)))
        .map(|(idx, _)| idx)
        .collect();
    Ok(failed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceBounds {
    pub lower_bound: usize,
    /// Known only for small `n`.
    pub exact: Option<usize>,
    pub upper_bound: usize,
}

pub fn distance_bounds(perm: &Permutation, options: SortOptions) -> Result<DistanceBounds> {
    let exact = if perm.len() <= oracle::MAX_N { Some(oracle::exact_distance(perm)?) } else { None };
    Ok(DistanceBounds {
        lower_bound: naive::lower_bound(perm.as_slice()),
        exact,
        upper_bound: sort(perm, options)?.moves.len(),
    })
}

pub fn cmd_distance(input: impl BufRead, mut out: impl Write, options: SortOptions) -> Result<()> {
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let perm = parse_permutation(&line).with_context(|| format!("line {}", no + 1))?;
        let b = distance_bounds(&perm, options)?;
        let exact = b.exact.map_or_else(|| "?".to_string(), |d| d.to_string());
        writeln!(out, "lb={} exact={} ub={}", b.lower_bound, exact, b.upper_bound)?;
    }
    Ok(())
}

/// The random permutation used for cell `(n, seed)`.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(&mut rng);
    Permutation::new(v).expect("shuffled identity")
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub seed: u64,
    pub algorithm: &'static str,
    pub moves: usize,
    pub lower_bound: usize,
    pub ratio: f64,
    pub ns_total: u64,
    pub ns_tree: u64,
    pub ns_graph: u64,
}

pub const CSV_HEADER: [&str; 8] = ["n", "seed", "moves", "lb", "ratio", "ns_total", "ns_tree", "ns_graph"];

impl BenchRecord {
    pub fn from_report(n: usize, seed: u64, report: &SortReport) -> Self {
        BenchRecord {
            n,
            seed,
            algorithm: "eh",
            moves: report.moves.len(),
            lower_bound: report.lower_bound,
            ratio: report.ratio_vs_lb(),
            ns_total: report.timings.total_ns,
            ns_tree: report.timings.tree_ns,
            ns_graph: report.timings.graph_ns(),
        }
    }

    fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.seed.to_string(),
            self.moves.to_string(),
            self.lower_bound.to_string(),
            format!("{:.6}", self.ratio),
            self.ns_total.to_string(),
            self.ns_tree.to_string(),
            self.ns_graph.to_string(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub min_n: usize,
    pub max_n: usize,
    pub seeds: u64,
    pub budget: Duration,
    pub options: SortOptions,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            min_n: 1 << 10,
            max_n: 1 << 20,
            seeds: 5,
            budget: Duration::from_secs(600),
            options: SortOptions { timing: true, ..SortOptions::default() },
        }
    }
}

impl BenchSpec {
    /// Powers of two from `min_n` through `max_n`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut n = self.min_n.max(1).next_power_of_two();
        while n <= self.max_n {
            out.push(n);
            n *= 2;
        }
        out
    }
}

/// Runs every `(n, seed)` cell, smallest `n` first. Before each size the
/// time for that size is projected from the previous one; the run stops
/// with an error if the projection would exceed the budget.
pub fn run_bench(spec: &BenchSpec, mut progress: impl FnMut(&BenchRecord)) -> Result<Vec<BenchRecord>> {
    ensure!(spec.seeds > 0, "need at least one seed");
    let start = Instant::now();
    let mut records = Vec::new();
    let mut last: Option<(usize, Duration)> = None;
    for n in spec.sizes() {
        if let Some((prev_n, prev)) = last {
            let scale = n as f64 / prev_n as f64;
            let projected = prev.mul_f64(scale * 1.3);
            let used = start.elapsed();
            if used + projected > spec.budget {
                bail!(
                    "budget exceeded: n = {n} projected to take {:.1}s after {:.1}s used (budget {:.1}s)",
                    projected.as_secs_f64(),
                    used.as_secs_f64(),
                    spec.budget.as_secs_f64()
                );
            }
        }
        let t = Instant::now();
        for seed in 0..spec.seeds {
            let perm = random_permutation(n, seed);
            let report = sort(&perm, spec.options)?;
            let rec = BenchRecord::from_report(n, seed, &report);
            progress(&rec);
            records.push(rec);
        }
        last = Some((n, t.elapsed()));
    }
    records.sort_by_key(|r| (r.n, r.seed));
    Ok(records)
}

pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln ns_total` against `ln n` over all records.
pub fn loglog_slope(records: &[BenchRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        records.iter().filter(|r| r.n > 0 && r.ns_total > 0).map(|r| ((r.n as f64).ln(), (r.ns_total as f64).ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

/// Median over consecutive doublings of `median(ns(2n)) / median(ns(n))`.
pub fn median_doubling_ratio(records: &[BenchRecord]) -> Option<f64> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.dedup();
    let per_n: Vec<(usize, f64)> = sizes
        .iter()
        .filter_map(|&n| median(records.iter().filter(|r| r.n == n).map(|r| r.ns_total as f64).collect()).map(|t| (n, t)))
        .collect();
    let ratios = per_n.windows(2).filter(|w| w[1].0 == 2 * w[0].0).map(|w| w[1].1 / w[0].1).collect();
    median(ratios)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn move_lines_round_trip() {
        let t = Transposition::new(0, 2, 5);
        assert_eq!(format_move(t), "t 1 3 6");
        assert_eq!(parse_move("t 1 3 6").unwrap(), t);
        assert!(parse_move("t 0 3 6").is_err());
        assert!(parse_move("t 1 3").is_err());
        assert!(parse_move("x 1 2 3").is_err());
    }

    #[test]
    fn parse_rejects_bad_lines() {
        assert!(parse_permutation("1 2 2").is_err());
        assert!(parse_permutation("0 1").is_err());
        assert!(parse_permutation("1 a").is_err());
        assert_eq!(parse_permutation("2 1").unwrap().as_slice(), &[1, 0]);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let recs: Vec<BenchRecord> = [1024usize, 2048, 4096]
            .iter()
            .map(|&n| BenchRecord {
                n,
                seed: 0,
                algorithm: "eh",
                moves: 0,
                lower_bound: 0,
                ratio: 0.0,
                ns_total: (n * n) as u64,
                ns_tree: 0,
                ns_graph: 0,
            })
            .collect();
        assert!((loglog_slope(&recs).unwrap() - 2.0).abs() < 1e-9);
        assert!((median_doubling_ratio(&recs).unwrap() - 4.0).abs() < 1e-9);
        assert!(loglog_slope(&recs[..1]).is_none());
    }

    #[test]
    fn sizes_are_powers_of_two() {
        let spec = BenchSpec { min_n: 1000, max_n: 5000, ..BenchSpec::default() };
        assert_eq!(spec.sizes(), vec![1024, 2048, 4096]);
    }
}
