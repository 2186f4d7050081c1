//! Configurations of cycles and their growth by intersecting-pair queries.

use smallvec::SmallVec;

use crate::breakpoint_graph::{alternate, oriented_triple, CycleId, GraphState};
use crate::sequence_search::cycles_intersect;

/// Set of cycles a search may cut, kept in insertion order.
///
/// Gap positions of the member edges are captured when a cycle joins, so a
/// configuration is only valid until the next move is applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    cycles: Vec<CycleId>,
    /// Member keys, cycle by cycle in traversal order.
    keys: Vec<u32>,
    /// Gap of each entry of `keys`.
    gaps: Vec<usize>,
    /// Start of each cycle in `keys`.
    offsets: Vec<usize>,
}

/// How a configuration grew.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Added the cycle intersecting an open gate.
    OpenGate(CycleId),
    /// Full configuration: added a cycle intersecting some pair of edges.
    Pair(CycleId),
}

impl Configuration {
    pub fn new(g: &GraphState, first: CycleId) -> Self {
        Self::from_cycles(g, &[first])
    }

    pub fn from_cycles(g: &GraphState, cycles: &[CycleId]) -> Self {
        let mut cfg = Configuration::default();
        for &c in cycles {
            cfg.push(g, c);
        }
        cfg
    }

    fn push(&mut self, g: &GraphState, c: CycleId) {
        self.cycles.push(c);
        self.offsets.push(self.keys.len());
        for &k in g.cycle_keys(c) {
            self.keys.push(k);
            self.gaps.push(g.gap_of_key(k));
        }
    }

    pub fn cycles(&self) -> &[CycleId] {
        &self.cycles
    }

    /// Keys of all member edges.
    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    /// Gaps matching [`Configuration::keys`].
    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn contains(&self, c: CycleId) -> bool {
        self.cycles.contains(&c)
    }

    fn member_gaps(&self, idx: usize) -> &[usize] {
        let end = self.offsets.get(idx + 1).copied().unwrap_or(self.keys.len());
        &self.gaps[self.offsets[idx]..end]
    }

    fn sorted_gaps(&self, idx: usize) -> SmallVec<[usize; 3]> {
        let mut v: SmallVec<[usize; 3]> = self.member_gaps(idx).iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// Whether member `idx` may hold a gate: a 2-cycle or an unoriented
    /// 3-cycle.
    fn gated(&self, g: &GraphState, idx: usize) -> bool {
        let e = self.member_gaps(idx);
        match e.len() {
            2 => true,
            3 => !oriented_triple(e[0], e[1], e[2], g.n() + 1),
            _ => false,
        }
    }

    /// Open gates: pairs of edges of a 2-cycle or unoriented 3-cycle that no
    /// other cycle of the configuration intersects. Pairs are sorted gap
    /// pairs, in configuration order.
    pub fn open_gates(&self, g: &GraphState) -> Vec<(usize, usize)> {
        let gaps: Vec<SmallVec<[usize; 3]>> = (0..self.len()).map(|i| self.sorted_gaps(i)).collect();
        let mut out = Vec::new();
        for idx in 0..self.len() {
            if !self.gated(g, idx) {
                continue;
            }
            let e = &gaps[idx];
            for a in 0..e.len() {
                for b in a + 1..e.len() {
                    let covered = gaps.iter().enumerate().any(|(o, d)| {
                        o != idx && (0..d.len()).any(|x| (x + 1..d.len()).any(|y| alternate(e[a], e[b], d[x], d[y])))
                    });
                    if !covered {
                        out.push((e[a], e[b]));
                    }
                }
            }
        }
        out
    }

    pub fn is_full(&self, g: &GraphState) -> bool {
        self.open_gates(g).is_empty()
    }

    /// Grows the configuration by one cycle.
    ///
    /// With an open gate, the cycle found by querying the first gate is
    /// added. A full configuration instead queries every pair of edges of
    /// its gated cycles and adds the first cycle found outside it. Returns
    /// `None` when neither produces a new cycle.
    pub fn extend(&mut self, g: &GraphState) -> Option<Extension> {
        let gates = self.open_gates(g);
        if let Some(&(i, j)) = gates.first() {
            let d = g.query_cycle(i, j);
            debug_assert!(!self.contains(d));
            self.push(g, d);
            return Some(Extension::OpenGate(d));
        }
        for idx in 0..self.len() {
            if !self.gated(g, idx) {
                continue;
            }
            let e = self.sorted_gaps(idx);
            for a in 0..e.len() {
                for b in a + 1..e.len() {
                    let d = g.query_cycle(e[a], e[b]);
                    if !self.contains(d) {
                        self.push(g, d);
                        return Some(Extension::Pair(d));
                    }
                }
            }
        }
        None
    }

    /// Whether the intersection graph of the configuration is connected.
    pub fn is_connected(&self) -> bool {
        let gaps: Vec<SmallVec<[usize; 3]>> = (0..self.len()).map(|i| self.sorted_gaps(i)).collect();
        let m = gaps.len();
        if m == 0 {
            return true;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for b in 0..m {
                if !seen[b] && cycles_intersect(&gaps[a], &gaps[b]) {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Connected components of the intersection graph over all cycles.
///
/// Quadratic in the number of cycles; for diagnostics and tests.
pub fn components(g: &GraphState) -> Vec<Vec<CycleId>> {
    let ids: Vec<CycleId> = g.cycles().into_iter().filter(|c| c.k() > 1).map(|c| c.id).collect();
    let gaps: Vec<SmallVec<[usize; 3]>> = ids
        .iter()
        .map(|&c| {
            let mut v: SmallVec<[usize; 3]> = g.cycle_keys(c).iter().map(|&k| g.gap_of_key(k)).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let m = ids.len();
    let mut comp = vec![usize::MAX; m];
    let mut out = Vec::new();
    for s in 0..m {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![ids[s]];
        comp[s] = out.len();
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for b in 0..m {
                if comp[b] == usize::MAX && cycles_intersect(&gaps[a], &gaps[b]) {
                    comp[b] = out.len();
                    members.push(ids[b]);
                    stack.push(b);
                }
            }
        }
        out.push(members);
    }
    out
}
