//! Breakpoint graph of a permutation and its cycle decomposition.
//!
//! The permutation `π` on `0..n` is shifted to `1..=n` and closed into a
//! circle by a frame element `0`. Black edge `b_i` (`i = 0..=n`) is the gap
//! in front of 0-based position `i`; `b_n` sits between the last element and
//! the frame. Grey edges join `r_v` and `l_{v+1}` (values modulo `n + 1`).
//!
//! Internally a black edge is keyed by the element on its right (the frame,
//! key `0`, for `b_n`). Keys are stable under transpositions: applying
//! `trans(i, j, k)` only rewires which element sits left of the three keyed
//! edges. The cycle successor of edge `v` is the edge keyed by the element
//! following `v - 1`, so a transposition is an O(1) relink of a circular list
//! plus a local recount of the (at most three) cycles through its cut edges.
//! Positions come from the permutation tree in `O(log n)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use smallvec::SmallVec;

use crate::error::PermError;
use crate::perm::{Permutation, Transposition};
use crate::permutation_tree::{Forest, PermTree};

pub type CycleId = u32;

/// Black edge `b_i`, identified by its gap index `i` in `0..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlackEdge(pub usize);

/// The framed circular form of a permutation: `elems[0] = 0` is the frame and
/// `elems[p + 1] = π_p + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPermutation {
    elems: Vec<u32>,
}

impl ExtendedPermutation {
    pub fn new(perm: &Permutation) -> Self {
        let mut elems = Vec::with_capacity(perm.len() + 1);
        elems.push(0);
        elems.extend(perm.as_slice().iter().map(|&v| v + 1));
        ExtendedPermutation { elems }
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    /// Number of black edges, `n + 1`.
    pub fn edge_count(&self) -> usize {
        self.elems.len()
    }
}

/// Snapshot view of one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub id: CycleId,
    /// Black edges in traversal order, starting at the smallest key.
    pub edges: Vec<BlackEdge>,
    pub oriented: bool,
}

impl Cycle {
    pub fn k(&self) -> usize {
        self.edges.len()
    }

    pub fn is_odd(&self) -> bool {
        self.k() % 2 == 1
    }

    pub fn is_short(&self) -> bool {
        self.k() < 3
    }
}

/// Result of applying one transposition to a [`GraphState`].
#[derive(Clone, Debug)]
pub struct MoveEffect {
    pub transposition: Transposition,
    /// Change of the odd-cycle count.
    pub delta_odd: i32,
    pub removed: SmallVec<[CycleId; 3]>,
    pub created: SmallVec<[CycleId; 3]>,
    /// Total weight in front of each cut point, for a weighted graph.
    pub weighted_cuts: Option<[u64; 3]>,
}

#[derive(Clone, Debug)]
struct CycleRec {
    edges: SmallVec<[u32; 3]>,
    alive: bool,
}

/// Breakpoint graph kept in sync with a permutation tree.
///
/// Cycle ids are never reused, so a stale id simply reports a dead cycle.
#[derive(Debug)]
pub struct GraphState {
    n: usize,
    forest: Forest,
    tree: PermTree,
    succ: Vec<u32>,
    pred: Vec<u32>,
    cycle_of: Vec<CycleId>,
    cycles: Vec<CycleRec>,
    alive: usize,
    odd: usize,
    long: usize,
    twos: BTreeSet<(u32, CycleId)>,
    threes: BTreeSet<(u32, CycleId)>,
    weighted: bool,
    timing: bool,
    tree_ns: u64,
}

impl Clone for GraphState {
    fn clone(&self) -> Self {
        GraphState {
            n: self.n,
            forest: self.forest.clone(),
            tree: self.tree.alias(),
            succ: self.succ.clone(),
            pred: self.pred.clone(),
            cycle_of: self.cycle_of.clone(),
            cycles: self.cycles.clone(),
            alive: self.alive,
            odd: self.odd,
            long: self.long,
            twos: self.twos.clone(),
            threes: self.threes.clone(),
            weighted: self.weighted,
            timing: self.timing,
            tree_ns: self.tree_ns,
        }
    }
}

impl GraphState {
    /// Builds the graph and its full cycle decomposition in linear time (plus
    /// the tree build).
    pub fn new(perm: &Permutation) -> Self {
        Self::build(perm, None).expect("unweighted build cannot fail")
    }

    /// Like [`GraphState::new`], with a weight per position. Every applied
    /// move then also reports the weight in front of its cut points.
    pub fn with_weights(perm: &Permutation, weights: &[u32]) -> Result<Self, PermError> {
        if weights.len() != perm.len() {
            return Err(PermError::Invalid(format!("{} weights for {} elements", weights.len(), perm.len())));
        }
        Self::build(perm, Some(weights))
    }

    fn build(perm: &Permutation, weights: Option<&[u32]>) -> Result<Self, PermError> {
        let ext = ExtendedPermutation::new(perm);
        let n = perm.len();
        let m = n + 1;
        let e = ext.elems();
        let mut succ = vec![0u32; m];
        let mut pred = vec![0u32; m];
        for p in 0..m {
            let a = e[p];
            let b = e[(p + 1) % m];
            succ[a as usize] = b;
            pred[b as usize] = a;
        }
        let mut forest = Forest::with_capacity(n);
        let tree = match weights {
            Some(w) => forest.build_weighted(&e[1..], w)?,
            None => forest.build(&e[1..])?,
        };
        let mut g = GraphState {
            n,
            forest,
            tree,
            succ,
            pred,
            cycle_of: vec![u32::MAX; m],
            cycles: Vec::new(),
            alive: 0,
            odd: 0,
            long: 0,
            twos: BTreeSet::new(),
            threes: BTreeSet::new(),
            weighted: weights.is_some(),
            timing: false,
            tree_ns: 0,
        };
        for v in 0..m as u32 {
            if g.cycle_of[v as usize] == u32::MAX {
                g.trace_cycle(v);
            }
        }
        Ok(g)
    }

    /// Accumulate wall time spent in permutation-tree operations.
    pub fn set_timing(&mut self, on: bool) {
        self.timing = on;
    }

    pub fn tree_ns(&self) -> u64 {
        self.tree_ns
    }

    /// Number of permutation elements `n` (black edges are `n + 1`).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.n + 1
    }

    pub fn cycle_count(&self) -> usize {
        self.alive
    }

    pub fn odd_count(&self) -> usize {
        self.odd
    }

    pub fn two_cycle_count(&self) -> usize {
        self.twos.len()
    }

    pub fn three_cycle_count(&self) -> usize {
        self.threes.len()
    }

    /// Cycles with more than three black edges.
    pub fn long_cycle_count(&self) -> usize {
        self.long
    }

    pub fn is_simple(&self) -> bool {
        self.long == 0
    }

    /// Only 1- and 3-cycles.
    pub fn is_three_permutation(&self) -> bool {
        self.long == 0 && self.twos.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.odd == self.n + 1
    }

    /// `(#black edges - c_odd) / 2`, a lower bound on the distance.
    pub fn lower_bound(&self) -> usize {
        (self.n + 1 - self.odd) / 2
    }

    /// 2-cycles, ordered by smallest key.
    pub fn two_cycles(&self) -> impl Iterator<Item = CycleId> + '_ {
        self.twos.iter().map(|&(_, id)| id)
    }

    /// 3-cycles, ordered by smallest key.
    pub fn three_cycles(&self) -> impl Iterator<Item = CycleId> + '_ {
        self.threes.iter().map(|&(_, id)| id)
    }

    pub fn is_alive(&self, id: CycleId) -> bool {
        self.cycles.get(id as usize).is_some_and(|c| c.alive)
    }

    /// Keys of a cycle in traversal order (smallest key first).
    pub fn cycle_keys(&self, id: CycleId) -> &[u32] {
        &self.cycles[id as usize].edges
    }

    pub fn cycle_len(&self, id: CycleId) -> usize {
        self.cycles[id as usize].edges.len()
    }

    pub fn cycle_of_key(&self, key: u32) -> CycleId {
        self.cycle_of[key as usize]
    }

    pub fn cycle_of_edge(&self, e: BlackEdge) -> Result<CycleId, PermError> {
        let key = self.key_of_gap(e.0)?;
        Ok(self.cycle_of[key as usize])
    }

    /// Cycle successor of edge `key`.
    #[inline]
    pub fn next_key(&self, key: u32) -> u32 {
        let m = (self.n + 1) as u32;
        self.succ[((key + m - 1) % m) as usize]
    }

    /// Key of the edge at gap `g`.
    pub fn key_of_gap(&self, g: usize) -> Result<u32, PermError> {
        if g > self.n {
            return Err(PermError::EdgeRange { edge: g, max: self.n });
        }
        if g == self.n {
            return Ok(0);
        }
        Ok(self.forest.element_at(&self.tree, g + 1)?)
    }

    /// Gap index of the edge keyed `key`.
    pub fn gap_of_key(&self, key: u32) -> usize {
        if key == 0 {
            self.n
        } else {
            self.forest.position_of(&self.tree, key).expect("key present") - 1
        }
    }

    /// Gap index of every key, computed in one linear pass.
    pub fn gap_snapshot(&self) -> Vec<u32> {
        let mut gaps = vec![0u32; self.n + 1];
        let mut v = self.succ[0];
        let mut g = 0u32;
        while v != 0 {
            gaps[v as usize] = g;
            g += 1;
            v = self.succ[v as usize];
        }
        gaps[0] = self.n as u32;
        gaps
    }

    /// The current permutation (0-based), read from the circular list.
    pub fn to_permutation(&self) -> Permutation {
        let mut out = Vec::with_capacity(self.n);
        let mut v = self.succ[0];
        while v != 0 {
            out.push(v - 1);
            v = self.succ[v as usize];
        }
        Permutation::new(out).expect("graph holds a permutation")
    }

    /// The current permutation read from the tree.
    pub fn tree_permutation(&self) -> Permutation {
        Permutation::new(self.forest.to_sequence(&self.tree).into_iter().map(|v| v - 1).collect())
            .expect("tree holds a permutation")
    }

    pub fn forest(&self) -> (&Forest, &PermTree) {
        (&self.forest, &self.tree)
    }

    /// Snapshot of a cycle with edge indices and orientation.
    pub fn cycle(&self, id: CycleId) -> Option<Cycle> {
        if !self.is_alive(id) {
            return None;
        }
        let edges = self.cycles[id as usize].edges.iter().map(|&k| BlackEdge(self.gap_of_key(k))).collect();
        Some(Cycle { id, edges, oriented: self.is_oriented(id) })
    }

    /// All live cycles ordered by smallest key.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut ids: Vec<(u32, CycleId)> = (0..self.cycles.len() as u32)
            .filter(|&id| self.cycles[id as usize].alive)
            .map(|id| (self.cycles[id as usize].edges[0], id))
            .collect();
        ids.sort_unstable();
        ids.into_iter().filter_map(|(_, id)| self.cycle(id)).collect()
    }

    /// Whether some triple of the cycle's black edges admits a 2-move.
    ///
    /// A 3-cycle is oriented exactly when its traversal runs against the
    /// cyclic position order of its edges. Longer cycles are tested by trying
    /// every triple.
    pub fn is_oriented(&self, id: CycleId) -> bool {
        let keys = self.cycle_keys(id);
        match keys.len() {
            0..=2 => false,
            3 => {
                let g: Vec<usize> = keys.iter().map(|&k| self.gap_of_key(k)).collect();
                oriented_triple(g[0], g[1], g[2], self.n + 1)
            }
            _ => {
                let keys: Vec<u32> = keys.to_vec();
                for a in 0..keys.len() {
                    for b in a + 1..keys.len() {
                        for c in b + 1..keys.len() {
                            if self.delta_keys(keys[a], keys[b], keys[c]) == 2 {
                                return true;
                            }
                        }
                    }
                }
                false
            }
        }
    }

    /// 3-cycle orientation from precomputed gaps.
    pub fn is_oriented_with(&self, id: CycleId, gaps: &[u32]) -> bool {
        let keys = self.cycle_keys(id);
        keys.len() == 3
            && oriented_triple(
                gaps[keys[0] as usize] as usize,
                gaps[keys[1] as usize] as usize,
                gaps[keys[2] as usize] as usize,
                self.n + 1,
            )
    }

    fn keys_of(&self, t: Transposition) -> Result<[u32; 3], PermError> {
        t.check(self.n)?;
        Ok([self.key_of_gap(t.i)?, self.key_of_gap(t.j)?, self.key_of_gap(t.k)?])
    }

    /// `Δc_odd` of `t` without applying it.
    pub fn delta_c_odd(&self, t: Transposition) -> Result<i32, PermError> {
        let [a, b, c] = self.keys_of(t)?;
        Ok(self.delta_ordered(a, b, c))
    }

    /// `k` such that `t` is a k-move.
    pub fn classify_move(&self, t: Transposition) -> Result<i32, PermError> {
        self.delta_c_odd(t)
    }

    pub fn is_2_move(&self, t: Transposition) -> Result<bool, PermError> {
        Ok(self.delta_c_odd(t)? == 2)
    }

    /// `Δc_odd` of the transposition cutting the edges keyed `a`, `b`, `c`
    /// (any order).
    pub fn delta_keys(&self, a: u32, b: u32, c: u32) -> i32 {
        let [x, y, z] = self.order_keys([a, b, c]);
        self.delta_ordered(x, y, z)
    }

    /// Sorts three keys by gap index.
    pub fn order_keys(&self, keys: [u32; 3]) -> [u32; 3] {
        let mut with_gap = keys.map(|k| (self.gap_of_key(k), k));
        with_gap.sort_unstable();
        with_gap.map(|(_, k)| k)
    }

    // Keys must be in cyclic position order. After the move the cycle
    // successor of every edge w becomes rho(next(w)) with rho = (a b c).
    fn delta_ordered(&self, a: u32, b: u32, c: u32) -> i32 {
        let mut touched: SmallVec<[CycleId; 3]> = SmallVec::new();
        for k in [a, b, c] {
            let id = self.cycle_of[k as usize];
            if !touched.contains(&id) {
                touched.push(id);
            }
        }
        let before = touched.iter().filter(|&&id| self.cycle_len(id) % 2 == 1).count() as i32;
        let rho = |v: u32| {
            if v == a {
                b
            } else if v == b {
                c
            } else if v == c {
                a
            } else {
                v
            }
        };
        let mut edges: SmallVec<[u32; 12]> = SmallVec::new();
        for &id in &touched {
            edges.extend_from_slice(self.cycle_keys(id));
        }
        let mut seen: SmallVec<[u32; 12]> = SmallVec::new();
        let mut after = 0;
        for &start in &edges {
            if seen.contains(&start) {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            loop {
                seen.push(v);
                len += 1;
                v = rho(self.next_key(v));
                if v == start {
                    break;
                }
            }
            after += len % 2;
        }
        after - before
    }

    /// Applies `t` to the tree and the cycle decomposition.
    pub fn apply(&mut self, t: Transposition) -> Result<MoveEffect, PermError> {
        let [a, b, c] = self.keys_of(t)?;
        Ok(self.apply_ordered(t, a, b, c))
    }

    /// Applies the transposition cutting the edges keyed `a`, `b`, `c`.
    pub fn apply_keys(&mut self, a: u32, b: u32, c: u32) -> MoveEffect {
        assert!(a != b && b != c && a != c, "three distinct edges");
        let mut with_gap = [a, b, c].map(|k| (self.gap_of_key(k), k));
        with_gap.sort_unstable();
        let t = Transposition::new(with_gap[0].0, with_gap[1].0, with_gap[2].0);
        self.apply_ordered(t, with_gap[0].1, with_gap[1].1, with_gap[2].1)
    }

    fn apply_ordered(&mut self, t: Transposition, a: u32, b: u32, c: u32) -> MoveEffect {
        let started = self.timing.then(Instant::now);
        let weighted_cuts = self.weighted.then(|| {
            [t.i, t.j, t.k].map(|p| self.forest.weight_prefix(&self.tree, p).expect("cut within range"))
        });
        self.forest
            .apply_transposition(&mut self.tree, t.i + 1, t.j + 1, t.k + 1)
            .expect("validated cut points");
        if let Some(s) = started {
            self.tree_ns += s.elapsed().as_nanos() as u64;
        }
        let (pa, pb, pc) = (self.pred[a as usize], self.pred[b as usize], self.pred[c as usize]);
        self.succ[pa as usize] = b;
        self.pred[b as usize] = pa;
        self.succ[pc as usize] = a;
        self.pred[a as usize] = pc;
        self.succ[pb as usize] = c;
        self.pred[c as usize] = pb;

        let odd_before = self.odd as i32;
        let mut removed: SmallVec<[CycleId; 3]> = SmallVec::new();
        for k in [a, b, c] {
            let id = self.cycle_of[k as usize];
            if !removed.contains(&id) {
                removed.push(id);
            }
        }
        let mut edges: SmallVec<[u32; 12]> = SmallVec::new();
        for &id in &removed {
            edges.extend_from_slice(&self.cycles[id as usize].edges);
            self.kill_cycle(id);
        }
        let mut created: SmallVec<[CycleId; 3]> = SmallVec::new();
        for &v in &edges {
            if self.cycle_of[v as usize] == u32::MAX {
                created.push(self.trace_cycle(v));
            }
        }
        MoveEffect { transposition: t, delta_odd: self.odd as i32 - odd_before, removed, created, weighted_cuts }
    }

    fn kill_cycle(&mut self, id: CycleId) {
        let rec = &mut self.cycles[id as usize];
        rec.alive = false;
        let edges = std::mem::take(&mut rec.edges);
        let len = edges.len();
        for &k in &edges {
            self.cycle_of[k as usize] = u32::MAX;
        }
        self.alive -= 1;
        if len % 2 == 1 {
            self.odd -= 1;
        }
        match len {
            2 => {
                self.twos.remove(&(edges[0], id));
            }
            3 => {
                self.threes.remove(&(edges[0], id));
            }
            l if l > 3 => self.long -= 1,
            _ => {}
        }
    }

    fn trace_cycle(&mut self, start: u32) -> CycleId {
        let id = self.cycles.len() as CycleId;
        let mut edges: SmallVec<[u32; 3]> = SmallVec::new();
        let mut v = start;
        loop {
            edges.push(v);
            self.cycle_of[v as usize] = id;
            v = self.next_key(v);
            if v == start {
                break;
            }
        }
        let min_at = edges.iter().enumerate().min_by_key(|&(_, &k)| k).map(|(i, _)| i).unwrap_or(0);
        edges.rotate_left(min_at);
        let len = edges.len();
        self.alive += 1;
        if len % 2 == 1 {
            self.odd += 1;
        }
        match len {
            2 => {
                self.twos.insert((edges[0], id));
            }
            3 => {
                self.threes.insert((edges[0], id));
            }
            l if l > 3 => self.long += 1,
            _ => {}
        }
        self.cycles.push(CycleRec { edges, alive: true });
        id
    }

    /// Pair of black edges intersecting `⟨b_i, b_j⟩` (`i < j`, both in one
    /// unoriented cycle of a simple permutation; on a long cycle the returned
    /// pair may share an edge with the query).
    ///
    /// With `π_k` the maximum of positions `i..j-1` and `π_l = π_k + 1`, the
    /// edges right after `π_k` and right before `π_l` lie in one cycle (they
    /// are joined by the grey edge `r_{π_k}`–`l_{π_k+1}`) and their pair
    /// intersects `⟨b_i, b_j⟩`. One range-maximum and one position lookup.
    pub fn query_intersecting_pair(&self, i: BlackEdge, j: BlackEdge) -> Result<(BlackEdge, BlackEdge), PermError> {
        let (i, j) = (i.0, j.0);
        if i >= j || j > self.n {
            return Err(PermError::Contract(format!("query needs i < j <= n, got ({i}, {j})")));
        }
        let (ki, kj) = (self.key_of_gap(i)?, self.key_of_gap(j)?);
        let id = self.cycle_of[ki as usize];
        if id != self.cycle_of[kj as usize] {
            return Err(PermError::Contract(format!("edges {i} and {j} lie in different cycles")));
        }
        if self.is_oriented(id) {
            return Err(PermError::Contract(format!("edges {i} and {j} lie in an oriented cycle")));
        }
        Ok(self.query_pair_unchecked(i, j))
    }

    /// Cycle holding the pair returned by [`GraphState::query_pair_unchecked`].
    pub fn query_cycle(&self, i: usize, j: usize) -> CycleId {
        let (max, _) = self.forest.range_max(&self.tree, i + 1, j).expect("nonempty segment");
        // the edge in front of value max + 1 is keyed by it
        let key = if max as usize == self.n { 0 } else { max + 1 };
        self.cycle_of[key as usize]
    }

    /// The query without the same-cycle/unoriented contract checks.
    pub fn query_pair_unchecked(&self, i: usize, j: usize) -> (BlackEdge, BlackEdge) {
        let (max, pos) = self.forest.range_max(&self.tree, i + 1, j).expect("nonempty segment");
        // 1-based pos is the gap right after 0-based position pos - 1
        let succ_gap = if max as usize == self.n {
            self.n
        } else {
            self.forest.position_of(&self.tree, max + 1).expect("value present") - 1
        };
        (BlackEdge(pos), BlackEdge(succ_gap))
    }

    /// Human-readable cycle listing, one `cycle k=<k> oriented=<0|1>
    /// edges=<i1,i2,...>` line per cycle.
    pub fn dump_cycles(&self) -> String {
        let mut s = String::new();
        for c in self.cycles() {
            let edges: Vec<String> = c.edges.iter().map(|e| e.0.to_string()).collect();
            let _ = writeln!(s, "cycle k={} oriented={} edges={}", c.k(), u8::from(c.oriented), edges.join(","));
        }
        s
    }

    /// Consistency audit of the incremental state against a fresh rebuild.
    pub fn audit(&self) -> Result<(), PermError> {
        let fresh = GraphState::new(&self.to_permutation());
        if self.tree_permutation() != self.to_permutation() {
            return Err(PermError::Contract("tree and circular list disagree".into()));
        }
        self.forest.audit(&self.tree)?;
        if fresh.alive != self.alive || fresh.odd != self.odd || fresh.long != self.long {
            return Err(PermError::Contract("cycle counts differ from rebuild".into()));
        }
        let mine: BTreeSet<Vec<u32>> =
            self.cycles.iter().filter(|c| c.alive).map(|c| c.edges.to_vec()).collect();
        let theirs: BTreeSet<Vec<u32>> =
            fresh.cycles.iter().filter(|c| c.alive).map(|c| c.edges.to_vec()).collect();
        if mine != theirs {
            return Err(PermError::Contract("cycle decomposition differs from rebuild".into()));
        }
        if self.twos.len() != fresh.twos.len() || self.threes.len() != fresh.threes.len() {
            return Err(PermError::Contract("cycle indices differ from rebuild".into()));
        }
        Ok(())
    }
}

/// Whether a 3-cycle whose edges, in traversal order, sit at gaps `g0, g1,
/// g2` is oriented: walking forward from `g0` meets `g2` before `g1`.
pub fn oriented_triple(g0: usize, g1: usize, g2: usize, m: usize) -> bool {
    let d1 = (g1 + m - g0) % m;
    let d2 = (g2 + m - g0) % m;
    d2 < d1
}

/// Whether the pairs `(a, b)` and `(c, d)` of black edges alternate in
/// cyclic order.
pub fn pairs_intersect(a: (BlackEdge, BlackEdge), b: (BlackEdge, BlackEdge)) -> Result<bool, PermError> {
    let all = [a.0 .0, a.1 .0, b.0 .0, b.1 .0];
    for x in 0..4 {
        for y in x + 1..4 {
            if all[x] == all[y] {
                return Err(PermError::DuplicateEdges(all.to_vec()));
            }
        }
    }
    Ok(alternate(all[0], all[1], all[2], all[3]))
}

/// Alternation test on four distinct positions.
#[inline]
pub fn alternate(a: usize, b: usize, c: usize, d: usize) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |x: usize| lo < x && x < hi;
    inside(c) != inside(d)
}
