//! Exact transposition distances for small `n` by breadth-first search.
//!
//! Permutations are indexed by their rank in the factorial number system.
//! Every transposition has a transposition inverse, so the distance of `π`
//! is its BFS depth from the identity.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use crate::error::{OracleError, PermError};
use crate::perm::{all_transpositions, replay, Permutation, Transposition};

/// Largest `n` a table is built for.
pub const MAX_N: usize = 10;

const MAGIC: &[u8; 4] = b"SBT1";
/// Environment variable naming the on-disk table cache directory.
pub const CACHE_ENV: &str = "SBT_TABLE_CACHE";

/// Distance of every permutation of `0..n`, by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u8>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lehmer rank of a permutation of `0..n`.
pub fn rank(elems: &[u32]) -> usize {
    let n = elems.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = elems[i + 1..].iter().filter(|&&v| v < elems[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, mut r: usize) -> Vec<u32> {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<u32> = (0..n as u32).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

impl DistanceTable {
    /// Full BFS over `S_n`.
    pub fn build(n: usize) -> Result<Self, OracleError> {
        if n > MAX_N {
            return Err(OracleError::Size { n, max: MAX_N });
        }
        let size = factorial(n);
        let moves: Vec<Transposition> = all_transpositions(n).collect();
        let mut dist = vec![u8::MAX; size];
        dist[0] = 0;
        let mut frontier = vec![0usize];
        let mut depth = 0u8;
        let mut buf = vec![0u32; n];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &r in &frontier {
                let base = unrank(n, r);
                for t in &moves {
                    buf.copy_from_slice(&base);
                    t.apply_to(&mut buf);
                    let q = rank(&buf);
                    if dist[q] == u8::MAX {
                        dist[q] = depth + 1;
                        next.push(q);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        Ok(DistanceTable { n, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn by_rank(&self, r: usize) -> u8 {
        self.dist[r]
    }

    pub fn distance(&self, perm: &Permutation) -> Result<usize, OracleError> {
        if perm.len() != self.n {
            return Err(OracleError::Lookup { got: perm.len(), n: self.n });
        }
        Ok(self.dist[rank(perm.as_slice())] as usize)
    }

    pub fn diameter(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }

    /// Number of permutations at each distance.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.diameter() + 1];
        for &d in &self.dist {
            h[d as usize] += 1;
        }
        h
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<(), OracleError> {
        w.write_all(MAGIC)?;
        w.write_all(&[self.n as u8])?;
        w.write_all(&self.dist)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self, OracleError> {
        let mut head = [0u8; 5];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(OracleError::Cache("bad magic".into()));
        }
        let n = head[4] as usize;
        if n > MAX_N {
            return Err(OracleError::Cache(format!("n = {n} out of range")));
        }
        let mut dist = Vec::with_capacity(factorial(n));
        r.read_to_end(&mut dist)?;
        if dist.len() != factorial(n) {
            return Err(OracleError::Cache(format!("expected {} entries, found {}", factorial(n), dist.len())));
        }
        Ok(DistanceTable { n, dist })
    }

    /// Loads the table from `dir` or builds and stores it there.
    pub fn load_or_build(n: usize, dir: &Path) -> Result<Self, OracleError> {
        let path = cache_path(dir, n);
        if let Ok(f) = fs::File::open(&path) {
            if let Ok(t) = Self::read_from(std::io::BufReader::new(f)) {
                if t.n == n {
                    return Ok(t);
                }
            }
        }
        let t = Self::build(n)?;
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        t.write_to(std::io::BufWriter::new(fs::File::create(&tmp)?))?;
        fs::rename(&tmp, &path)?;
        Ok(t)
    }
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("sbt-distances-{n}.bin"))
}

/// Shared table for `n`, built once per process (through the cache
/// directory in `SBT_TABLE_CACHE` when set).
pub fn table(n: usize) -> Result<&'static DistanceTable, OracleError> {
    static TABLES: [OnceLock<DistanceTable>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];
    if n > MAX_N {
        return Err(OracleError::Size { n, max: MAX_N });
    }
    if let Some(t) = TABLES[n].get() {
        return Ok(t);
    }
    let built = match std::env::var_os(CACHE_ENV) {
        Some(dir) => DistanceTable::load_or_build(n, Path::new(&dir))?,
        None => DistanceTable::build(n)?,
    };
    Ok(TABLES[n].get_or_init(|| built))
}

/// Exact distance of a permutation with at most [`MAX_N`] elements.
pub fn exact_distance(perm: &Permutation) -> Result<usize, OracleError> {
    table(perm.len())?.distance(perm)
}

/// Whether `moves` turn `perm` into the identity.
pub fn verify_sequence(perm: &Permutation, moves: &[Transposition]) -> Result<bool, PermError> {
    Ok(replay(perm, moves)?.is_identity())
}

/// Array-based breakpoint-graph reference, independent of the tree and the
/// incremental cycle bookkeeping.
pub mod naive {
    /// Cycles of the breakpoint graph as gap lists in traversal order.
    /// Gap `i` is the black edge in front of 0-based position `i`.
    pub fn cycles(perm: &[u32]) -> Vec<Vec<usize>> {
        let n = perm.len();
        // linear frame 0, π + 1, n + 1; gap i + 1 here is gap i outside
        let ext: Vec<usize> = std::iter::once(0).chain(perm.iter().map(|&v| v as usize + 1)).chain([n + 1]).collect();
        let mut pos = vec![0; n + 2];
        for (p, &v) in ext.iter().enumerate() {
            pos[v] = p;
        }
        let mut seen = vec![false; n + 2];
        let mut out = Vec::new();
        for start in 1..=n + 1 {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i - 1);
                i = pos[ext[i] - 1] + 1;
            }
            out.push(cyc);
        }
        out
    }

    pub fn odd_count(perm: &[u32]) -> usize {
        cycles(perm).iter().filter(|c| c.len() % 2 == 1).count()
    }

    pub fn is_simple(perm: &[u32]) -> bool {
        cycles(perm).iter().all(|c| c.len() <= 3)
    }

    pub fn lower_bound(perm: &[u32]) -> usize {
        (perm.len() + 1 - odd_count(perm)) / 2
    }

    /// Exchanges `[i, j)` and `[j, k)`.
    pub fn transpose(perm: &mut [u32], i: usize, j: usize, k: usize) {
        perm[i..k].rotate_left(j - i);
    }

    /// `Δc_odd` of `trans(i, j, k)` by recomputation.
    pub fn delta(perm: &[u32], i: usize, j: usize, k: usize) -> i32 {
        let mut q = perm.to_vec();
        transpose(&mut q, i, j, k);
        odd_count(&q) as i32 - odd_count(perm) as i32
    }

    /// Whether the gap pairs `(a, b)` and `(c, d)` alternate.
    pub fn pairs_alternate(a: usize, b: usize, c: usize, d: usize) -> bool {
        let (lo, hi) = (a.min(b), a.max(b));
        let inside = |x: usize| lo < x && x < hi;
        c != a && c != b && d != a && d != b && inside(c) != inside(d)
    }

    /// Whether some transposition of three of the cycle's edges is a 2-move.
    pub fn cycle_is_oriented(perm: &[u32], cycle: &[usize]) -> bool {
        let mut e = cycle.to_vec();
        e.sort_unstable();
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                for c in b + 1..e.len() {
                    if delta(perm, e[a], e[b], e[c]) == 2 {
                        return true;
                    }
                }
            }
        }
        false
    }
}
