//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sbt_cli::{loglog_slope, median_doubling_ratio, random_permutation, run_bench, write_csv, BenchSpec};
use sbt_core::oracle::{naive, table, unrank};
use sbt_core::perm::all_transpositions;
use sbt_core::sequence_search::find_22_sequence;
use sbt_core::simplifier::{mimic, simplify};
use sbt_core::{sort, BlackEdge, Forest, GraphState, PermTree, Permutation, SortOptions, Transposition};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Array split into chunks, so a transposition costs `O(sqrt n)` instead of
/// `O(n)`. Shares no code with the library's tree or replay.
struct Chunks {
    blocks: Vec<Vec<u32>>,
    len: usize,
}

impl Chunks {
    fn new(values: Vec<u32>) -> Self {
        let len = values.len();
        let mut c = Chunks { blocks: vec![values], len };
        c.rechunk();
        c
    }

    fn rechunk(&mut self) {
        let flat: Vec<u32> = self.blocks.concat();
        let size = ((self.len as f64).sqrt() as usize).max(16);
        self.blocks = flat.chunks(size).map(<[u32]>::to_vec).collect();
    }

    /// Index of the block starting at position `pos`, splitting a block if
    /// needed; `blocks.len()` when `pos == len`.
    fn cut(&mut self, pos: usize) -> usize {
        let mut start = 0;
        for b in 0..self.blocks.len() {
            let end = start + self.blocks[b].len();
            if pos == start {
                return b;
            }
            if pos < end {
                let tail = self.blocks[b].split_off(pos - start);
                self.blocks.insert(b + 1, tail);
                return b + 1;
            }
            start = end;
        }
        self.blocks.len()
    }

    fn transpose(&mut self, i: usize, j: usize, k: usize) {
        let bi = self.cut(i);
        let bj = self.cut(j);
        let bk = self.cut(k);
        self.blocks[bi..bk].rotate_left(bj - bi);
        if self.blocks.len() > 4 * (self.len as f64).sqrt() as usize + 16 {
            self.rechunk();
        }
    }

    fn is_identity(&self) -> bool {
        self.blocks.iter().flatten().enumerate().all(|(i, &v)| v as usize == i)
    }
}

fn splice_sorts(perm: &[u32], moves: &[Transposition]) -> bool {
    let mut cur = Chunks::new(perm.to_vec());
    for t in moves {
        if !(t.i < t.j && t.j < t.k && t.k <= cur.len) {
            return false;
        }
        cur.transpose(t.i, t.j, t.k);
    }
    cur.is_identity()
}

fn sorts(perm: &Permutation) -> bool {
    sort(perm, SortOptions::default()).is_ok_and(|r| splice_sorts(perm.as_slice(), &r.moves))
}

fn criterion_1() -> Outcome {
    // the replay oracle must reject wrong sequences
    let probe = random_permutation(5_000, 99);
    let mut moves = sort(&probe, SortOptions::default()).unwrap().moves;
    let complete = splice_sorts(probe.as_slice(), &moves);
    moves.pop();
    if !complete || splice_sorts(probe.as_slice(), &moves) {
        return Outcome::new(false, "replay oracle self-check failed");
    }
    let all8 = (0..factorial(8)).into_par_iter().filter(|&r| !sorts(&Permutation::new(unrank(8, r)).unwrap())).count();
    let mut detail = format!("n=8 exhaustive: {} failures", all8);
    let mut pass = all8 == 0;
    for n in [50usize, 500, 5_000, 50_000] {
        let t = Instant::now();
        let failed = (0..10_000u64).into_par_iter().filter(|&seed| !sorts(&random_permutation(n, seed))).count();
        detail += &format!("; n={n}: {failed}/10000 failures ({:.0}s)", t.elapsed().as_secs_f64());
        pass &= failed == 0;
    }
    Outcome::new(pass, detail)
}

fn criterion_2() -> Outcome {
    let (mut total, mut within, mut violations) = (0usize, 0usize, 0usize);
    let mut worst = (0usize, 1usize);
    for n in 1..=8 {
        let t = table(n).unwrap();
        let rows: Vec<(usize, usize)> = (0..t.len())
            .into_par_iter()
            .map(|r| {
                let perm = Permutation::new(unrank(n, r)).unwrap();
                let report = sort(&perm, SortOptions::default()).unwrap();
                (report.moves.len(), t.by_rank(r) as usize)
            })
            .collect();
        for (m, d) in rows {
            total += 1;
            if m < d || 2 * m > 3 * d {
                violations += 1;
            }
            if 8 * m <= 11 * d {
                within += 1;
            }
            if d > 0 && m * worst.1 > worst.0 * d {
                worst = (m, d);
            }
        }
    }
    let detail = format!(
        "{total} permutations, {violations} outside [d, 1.5d]; {:.4}% within 1.375d; worst ratio {}/{} = {:.4}",
        100.0 * within as f64 / total as f64,
        worst.0,
        worst.1,
        worst.0 as f64 / worst.1 as f64
    );
    Outcome::new(violations == 0, detail)
}

fn criterion_3() -> Outcome {
    let results: Vec<(usize, usize)> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=300);
            let map = simplify(&random_permutation(n, seed));
            let p = map.padded().as_slice();
            let g = GraphState::new(map.padded());
            let cycles = naive::cycles(p);
            let mut cycle_of = vec![usize::MAX; p.len() + 1];
            for (idx, c) in cycles.iter().enumerate() {
                for &e in c {
                    cycle_of[e] = idx;
                }
            }
            let (mut queries, mut bad) = (0, 0);
            for c in g.cycles().into_iter().filter(|c| !c.oriented && c.k() >= 2) {
                let mut e: Vec<usize> = c.edges.iter().map(|b| b.0).collect();
                e.sort_unstable();
                for a in 0..e.len() {
                    for b in a + 1..e.len() {
                        queries += 1;
                        let ok = match g.query_intersecting_pair(BlackEdge(e[a]), BlackEdge(e[b])) {
                            Ok((x, y)) => cycle_of[x.0] == cycle_of[y.0] && naive::pairs_alternate(e[a], e[b], x.0, y.0),
                            Err(_) => false,
                        };
                        bad += usize::from(!ok);
                    }
                }
            }
            (queries, bad)
        })
        .collect();
    let queries: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1).sum();
    Outcome::new(bad == 0 && queries > 0, format!("10000 simple permutations, {queries} queries, {bad} wrong"))
}

/// Random operations on a forest against plain vectors; every touched tree
/// is audited and compared after each operation.
fn criterion_4() -> Outcome {
    const N: usize = 10_000;
    const OPS: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut forest = Forest::new();
    let mut initial: Vec<u32> = (0..N as u32).collect();
    initial.shuffle(&mut rng);
    let mut trees: Vec<(PermTree, Vec<u32>)> = vec![(forest.build(&initial).unwrap(), initial)];
    let mut mismatches = 0usize;
    let mut worst_height_ratio = 0f64;
    for _ in 0..OPS {
        let count = trees.len();
        let mut touched: Vec<usize> = Vec::new();
        match rng.gen_range(0..5) {
            0 => {
                let idx = rng.gen_range(0..count);
                let (t, mut v) = trees.swap_remove(idx);
                forest.release(t);
                v.shuffle(&mut rng);
                trees.push((forest.build(&v).unwrap(), v));
                touched.push(trees.len() - 1);
            }
            1 if count < 16 => {
                let idx = rng.gen_range(0..count);
                let (t, v) = trees.swap_remove(idx);
                let m = rng.gen_range(0..=v.len());
                let (a, b) = forest.split(t, m).unwrap();
                trees.push((a, v[..m].to_vec()));
                trees.push((b, v[m..].to_vec()));
                touched.extend([trees.len() - 2, trees.len() - 1]);
            }
            1 | 2 if count >= 2 => {
                let (ta, mut va) = trees.swap_remove(rng.gen_range(0..count));
                let (tb, vb) = trees.swap_remove(rng.gen_range(0..count - 1));
                va.extend(vb);
                trees.push((forest.join(ta, tb), va));
                touched.push(trees.len() - 1);
            }
            3 => {
                let idx = rng.gen_range(0..count);
                let (t, v) = &trees[idx];
                if !v.is_empty() {
                    let i = rng.gen_range(1..=v.len());
                    let j = rng.gen_range(i..=v.len());
                    let (max, pos) = forest.range_max(t, i, j).unwrap();
                    let expected = *v[i - 1..j].iter().max().unwrap();
                    mismatches += usize::from(max != expected || v[pos - 1] != expected);
                }
            }
            _ => {
                let idx = rng.gen_range(0..count);
                let (t, v) = &mut trees[idx];
                if v.len() >= 2 {
                    let mut c = [0; 3];
                    while !(c[0] < c[1] && c[1] < c[2]) {
                        c = [0; 3].map(|_| rng.gen_range(1..=v.len() + 1));
                        c.sort_unstable();
                    }
                    forest.apply_transposition(t, c[0], c[1], c[2]).unwrap();
                    v[c[0] - 1..c[2] - 1].rotate_left(c[1] - c[0]);
                    touched.push(idx);
                }
            }
        }
        for idx in touched {
            let (t, v) = &trees[idx];
            if forest.audit(t).is_err() || forest.to_sequence(t) != *v {
                mismatches += 1;
            }
            if let Some(h) = forest.height(t) {
                let ratio = h as f64 / ((v.len() + 2) as f64).log2();
                worst_height_ratio = worst_height_ratio.max(ratio);
            }
        }
    }
    let pass = mismatches == 0 && worst_height_ratio <= 1.4405;
    Outcome::new(pass, format!("{OPS} operations on n={N}: {mismatches} mismatches, max height/log2(n+2) = {worst_height_ratio:.3}"))
}

/// Two 2-moves in a row ending simple, by exhaustive search.
fn has_22(p: &[u32]) -> bool {
    let n = p.len();
    let odd = naive::odd_count(p);
    all_transpositions(n).any(|t1| {
        let mut q = p.to_vec();
        naive::transpose(&mut q, t1.i, t1.j, t1.k);
        naive::odd_count(&q) == odd + 2
            && all_transpositions(n).any(|t2| {
                let mut r = q.clone();
                naive::transpose(&mut r, t2.i, t2.j, t2.k);
                naive::odd_count(&r) == odd + 4 && naive::is_simple(&r)
            })
    })
}

fn criterion_5() -> Outcome {
    let (mut checked, mut fp, mut fneg) = (0, 0, 0);
    for n in 1..=7 {
        let rows: Vec<(bool, bool)> = (0..factorial(n))
            .into_par_iter()
            .filter_map(|r| {
                let p = unrank(n, r);
                naive::is_simple(&p).then(|| {
                    let g = GraphState::new(&Permutation::new(p.clone()).unwrap());
                    (find_22_sequence(&g).ok().flatten().is_some(), has_22(&p))
                })
            })
            .collect();
        for (found, exists) in rows {
            checked += 1;
            fp += usize::from(found && !exists);
            fneg += usize::from(!found && exists);
        }
    }
    Outcome::new(fp == 0 && fneg == 0, format!("{checked} simple permutations, {fp} false positives, {fneg} false negatives"))
}

fn criterion_6() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for n in [100usize, 1_000, 10_000] {
        let rows: Vec<[bool; 3]> = (0..1_000u64)
            .into_par_iter()
            .map(|seed| {
                let report = sort(&random_permutation(n, seed), SortOptions::default()).unwrap();
                let s = &report.stats;
                [s.three_permutation_after_step3, s.two_cycles_before_step3.is_multiple_of(2), s.loop_iterations <= n]
            })
            .collect();
        let fails: Vec<usize> = (0..3).map(|i| rows.iter().filter(|r| !r[i]).count()).collect();
        pass &= fails.iter().all(|&f| f == 0);
        detail.push(format!("n={n}: 3-perm {} / even {} / loop {} failures", fails[0], fails[1], fails[2]));
    }
    Outcome::new(pass, detail.join("; "))
}

fn criterion_7() -> Outcome {
    let spec = BenchSpec::default();
    let records = match run_bench(&spec, |_| {}) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("bench aborted: {e:#}")),
    };
    let csv = std::env::temp_dir().join("sbt-acceptance-bench.csv");
    let _ = std::fs::File::create(&csv).map(|f| write_csv(&records, f));
    let slope = loglog_slope(&records).unwrap_or(f64::INFINITY);
    let doubling = median_doubling_ratio(&records).unwrap_or(f64::INFINITY);
    Outcome::new(
        slope <= 1.2 && doubling <= 2.6,
        format!("slope {slope:.3} (<= 1.2), median doubling ratio {doubling:.3} (<= 2.6), csv {}", csv.display()),
    )
}

fn criterion_8() -> Outcome {
    let rows: Vec<[bool; 2]> = (0..1_000u64)
        .into_par_iter()
        .map(|i| {
            // log-spaced sizes from 1 to 100000
            let n = 10f64.powf(5.0 * (i + 1) as f64 / 1_000.0).round() as usize;
            let perm = random_permutation(n, i);
            let map = simplify(&perm);
            let short = naive::cycles(map.padded().as_slice()).iter().all(|c| c.len() <= 3);
            let report = sort(&perm, SortOptions::default()).unwrap();
            let sorted = mimic(&map, &report.simple_moves.moves).is_ok_and(|m| {
                m.len() <= report.simple_moves.len() && m == report.moves && splice_sorts(perm.as_slice(), &m)
            });
            [short, sorted]
        })
        .collect();
    let long = rows.iter().filter(|r| !r[0]).count();
    let unsorted = rows.iter().filter(|r| !r[1]).count();
    Outcome::new(
        long == 0 && unsorted == 0,
        format!("1000 permutations up to n=100000: {long} with long cycles, {unsorted} mimic failures"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("sorting correctness", criterion_1),
        ("approximation vs exact oracle", criterion_2),
        ("intersecting-pair query", criterion_3),
        ("permutation tree vs arrays", criterion_4),
        ("(2,2)-sequence detector", criterion_5),
        ("phase postconditions", criterion_6),
        ("scaling", criterion_7),
        ("simplification", criterion_8),
    ];
    let only: Vec<usize> = std::env::var("SBT_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let no = idx + 1;
        if !only.is_empty() && !only.contains(&no) {
            continue;
        }
        let t = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {no} ({name}): {verdict} [{:.1}s] {}", t.elapsed().as_secs_f64(), out.detail);
        failed += usize::from(!out.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
