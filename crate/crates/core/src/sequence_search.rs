//! Finding k-moves and (x,y)-sequences.
//!
//! Searches run on a [`Local`] model of a configuration: its black edges in
//! cyclic position order plus the cycle-successor map restricted to them.
//! A transposition on three edges of the configuration only rewires cycles
//! of the configuration, so the model predicts `Δc_odd` and the resulting
//! cycle shapes exactly without touching the global state.
//!
//! Plans are expressed with edge keys, which stay valid across moves; the
//! cut positions are resolved when a plan is applied.

use smallvec::SmallVec;

use crate::breakpoint_graph::{alternate, oriented_triple, CycleId, GraphState};
use crate::engine::Configuration;
use crate::error::PermError;
use crate::perm::Transposition;

/// Transpositions with the number of 2-moves among them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveSequence {
    pub moves: Vec<Transposition>,
    pub two_move_count: usize,
}

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, t: Transposition, two_move: bool) {
        self.moves.push(t);
        if two_move {
            self.two_move_count += 1;
        }
    }

    pub fn extend(&mut self, other: MoveSequence) {
        self.moves.extend(other.moves);
        self.two_move_count += other.two_move_count;
    }
}

/// A planned sequence: for each move the three edge keys to cut and the
/// predicted `Δc_odd`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub moves: Vec<([u32; 3], i32)>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn two_moves(&self) -> usize {
        self.moves.iter().filter(|(_, d)| *d == 2).count()
    }

    /// `(x, y)` shape of the plan.
    pub fn shape(&self) -> (usize, usize) {
        (self.len(), self.two_moves())
    }
}

/// Applies a plan, checking every predicted `Δc_odd` against the real one.
pub fn apply_plan(g: &mut GraphState, plan: &Plan) -> Result<MoveSequence, PermError> {
    let mut seq = MoveSequence::default();
    for &(keys, predicted) in &plan.moves {
        let effect = g.apply_keys(keys[0], keys[1], keys[2]);
        if effect.delta_odd != predicted {
            return Err(PermError::Contract(format!(
                "move {} predicted as a {predicted}-move was a {}-move",
                effect.transposition, effect.delta_odd
            )));
        }
        seq.push(effect.transposition, effect.delta_odd == 2);
    }
    Ok(seq)
}

/// A 2-move on three black edges of `c`, if `c` is oriented.
pub fn find_2_move_on_cycle(g: &GraphState, c: CycleId) -> Option<Transposition> {
    let keys = g.cycle_keys(c).to_vec();
    let k = keys.len();
    for a in 0..k {
        for b in a + 1..k {
            for d in b + 1..k {
                if k == 3 && !g.is_oriented(c) {
                    return None;
                }
                if g.delta_keys(keys[a], keys[b], keys[d]) == 2 {
                    let [x, y, z] = g.order_keys([keys[a], keys[b], keys[d]]);
                    return Some(Transposition::new(g.gap_of_key(x), g.gap_of_key(y), g.gap_of_key(z)));
                }
            }
        }
    }
    None
}

fn cycle_plan(g: &GraphState, c: CycleId) -> ([u32; 3], i32) {
    let k = g.cycle_keys(c);
    ([k[0], k[1], k[2]], 2)
}

/// Looks for a (2,2)-sequence on a simple permutation.
///
/// (a) four or more 2-cycles: two disjoint pairs of 2-cycles each give a
/// 2-move. (b, c) exactly two 2-cycles: try the four transpositions on three
/// of their four black edges (each a 2-move) and look for an oriented cycle
/// afterwards. (d) a 3-permutation: some oriented 3-cycle whose 2-move
/// leaves another oriented cycle.
pub fn find_22_sequence(g: &GraphState) -> Result<Option<Plan>, PermError> {
    if !g.is_simple() {
        return Err(PermError::Contract("(2,2) detection needs a simple permutation".into()));
    }
    let twos: Vec<CycleId> = g.two_cycles().collect();
    if twos.len() >= 4 {
        let keys: Vec<u32> = twos[..4].iter().flat_map(|&c| g.cycle_keys(c).iter().copied()).collect();
        let gaps: Vec<usize> = keys.iter().map(|&k| g.gap_of_key(k)).collect();
        let local = Local::from_gaps(g, &keys, &gaps);
        let first = pair_move(&local, [0, 1], [2, 3]).ok_or_else(no_pair_move)?;
        let after = local.apply(first[0], first[1], first[2]);
        let second = pair_move(&after, [4, 5], [6, 7]).ok_or_else(no_pair_move)?;
        let to_keys = |t: [usize; 3]| t.map(|i| keys[i]);
        return Ok(Some(Plan { moves: vec![(to_keys(first), 2), (to_keys(second), 2)] }));
    }
    let gaps = g.gap_snapshot();
    let threes: Vec<CycleId> = g.three_cycles().collect();
    let oriented: Vec<bool> = threes.iter().map(|&c| g.is_oriented_with(c, &gaps)).collect();
    let sorted_gaps = |c: CycleId| {
        let mut v: SmallVec<[usize; 3]> = g.cycle_keys(c).iter().map(|&k| gaps[k as usize] as usize).collect();
        v.sort_unstable();
        v
    };

    if twos.len() == 2 {
        let (p, q) = (g.cycle_keys(twos[0]), g.cycle_keys(twos[1]));
        let pair_keys = [p[0], p[1], q[0], q[1]];
        let local = Local::from_keys(g, &pair_keys, &gaps);
        let options = [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        for opt in options {
            let keys = opt.map(|i| pair_keys[i]);
            let after = local.apply(opt[0], opt[1], opt[2]);
            // the new 3-cycle of the pair
            if let Some(c3) = after.first_oriented_three() {
                let k3 = after.cycle_edges(c3).map(|i| pair_keys[i]);
                return Ok(Some(Plan { moves: vec![(keys, 2), (k3, 2)] }));
            }
            let mut cut: SmallVec<[usize; 3]> = keys.iter().map(|&k| gaps[k as usize] as usize).collect();
            cut.sort_unstable();
            for (idx, &d) in threes.iter().enumerate() {
                let flips = interleaves(&cut, &sorted_gaps(d));
                if oriented[idx] != flips {
                    return Ok(Some(Plan { moves: vec![(keys, 2), (cycle_plan(g, d).0, 2)] }));
                }
            }
        }
        return Ok(None);
    }
    if !twos.is_empty() {
        return Err(PermError::Contract("odd number of 2-cycles".into()));
    }

    // (d): 3-permutation.
    let mut family: Vec<(SmallVec<[usize; 3]>, CycleId)> = threes
        .iter()
        .zip(&oriented)
        .filter(|(_, &o)| o)
        .map(|(&c, _)| (sorted_gaps(c), c))
        .collect();
    if family.is_empty() {
        return Ok(None);
    }
    family.sort_unstable();
    let m = family.len();
    if m >= 2 {
        let mut pairs: Vec<(usize, usize)> = (0..m - 1).map(|a| (a, a + 1)).collect();
        pairs.push((0, m - 1));
        for (a, b) in pairs {
            if !interleaves(&family[a].0, &family[b].0) {
                let plan = vec![cycle_plan(g, family[a].1), cycle_plan(g, family[b].1)];
                return Ok(Some(Plan { moves: plan }));
            }
        }
    }
    // Oriented cycles pairwise interleave, so x1 < .. < xm < y1 < .. < ym < z1 < .. < zm.
    let xs: Vec<usize> = family.iter().map(|f| f.0[0]).collect();
    let ys: Vec<usize> = family.iter().map(|f| f.0[1]).collect();
    let zs: Vec<usize> = family.iter().map(|f| f.0[2]).collect();
    let below = |v: &Vec<usize>, t: usize| v.partition_point(|&x| x < t);
    for (idx, &d) in threes.iter().enumerate() {
        if oriented[idx] {
            continue;
        }
        let dg = sorted_gaps(d);
        let (d1, d2, d3) = (dg[0], dg[1], dg[2]);
        // x < d1 < y < d2 < z < d3
        let lo1 = below(&ys, d1).max(below(&zs, d2));
        let hi1 = below(&xs, d1).min(below(&ys, d2)).min(below(&zs, d3));
        // d1 < x < d2 < y < d3 < z
        let lo2 = below(&xs, d1).max(below(&ys, d2)).max(below(&zs, d3));
        let hi2 = below(&xs, d2).min(below(&ys, d3));
        let hit = if lo1 < hi1 {
            Some(lo1)
        } else if lo2 < hi2 {
            Some(lo2)
        } else {
            None
        };
        if let Some(a) = hit {
            let plan = vec![cycle_plan(g, family[a].1), cycle_plan(g, d)];
            return Ok(Some(Plan { moves: plan }));
        }
    }
    Ok(None)
}

fn no_pair_move() -> PermError {
    PermError::Contract("two 2-cycles without a 2-move between them".into())
}

/// A 2-move cutting two edges of one 2-cycle and one of another, as local
/// edge indices. The first 2-move in cut-position order wins.
fn pair_move(local: &Local, p: [usize; 2], q: [usize; 2]) -> Option<[usize; 3]> {
    let options = [[p[0], p[1], q[0]], [p[0], p[1], q[1]], [q[0], q[1], p[0]], [q[0], q[1], p[1]]];
    options
        .into_iter()
        .map(|t| {
            let mut c = t.map(|e| local.pos[e] as usize);
            c.sort_unstable();
            c
        })
        .filter(|c| local.delta_pos(c[0], c[1], c[2]) == 2)
        .min()
        .map(|c| c.map(|x| local.order[x] as usize))
}

/// The 2-move joining 2-cycles `c1` and `c2` into a 1-cycle and a 3-cycle.
pub fn two_cycle_pair_move(g: &GraphState, c1: CycleId, c2: CycleId) -> Option<[u32; 3]> {
    let keys: Vec<u32> = [c1, c2].iter().flat_map(|&c| g.cycle_keys(c).iter().copied()).collect();
    if keys.len() != 4 {
        return None;
    }
    let gaps: Vec<usize> = keys.iter().map(|&k| g.gap_of_key(k)).collect();
    let local = Local::from_gaps(g, &keys, &gaps);
    pair_move(&local, [0, 1], [2, 3]).map(|t| t.map(|i| keys[i]))
}

/// Whether two sorted gap triples alternate completely.
fn interleaves(c: &[usize], d: &[usize]) -> bool {
    (c[0] < d[0] && d[0] < c[1] && c[1] < d[1] && d[1] < c[2] && c[2] < d[2])
        || (d[0] < c[0] && c[0] < d[1] && d[1] < c[1] && c[1] < d[2] && d[2] < c[2])
}

/// Whether two cycles intersect: some pair of black edges of one alternates
/// with some pair of the other. Takes gap positions.
pub fn cycles_intersect(c: &[usize], d: &[usize]) -> bool {
    for a in 0..c.len() {
        for b in a + 1..c.len() {
            for x in 0..d.len() {
                for y in x + 1..d.len() {
                    if alternate(c[a], c[b], d[x], d[y]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Extensions tried around a 3-cycle by [`find_32_sequence`].
pub const THREE_TWO_EXTENSIONS: usize = 4;

/// A (3,2)-sequence (or a shorter sequence of at least the same ratio)
/// starting from the 3-cycle with the smallest key.
///
/// An oriented cycle gives a single 2-move. Otherwise the cycle is grown
/// into a configuration by intersecting-pair queries, searching after each
/// added cycle. `None` when no sequence shows up within
/// [`THREE_TWO_EXTENSIONS`] extensions.
pub fn find_32_sequence(g: &GraphState) -> Result<Option<Plan>, PermError> {
    if g.two_cycle_count() > 0 || !g.is_simple() {
        return Err(PermError::Contract("(3,2) search needs a 3-permutation".into()));
    }
    let Some(c) = g.three_cycles().next() else {
        return Err(PermError::Contract("(3,2) search needs a 3-cycle".into()));
    };
    if g.is_oriented(c) {
        return Ok(Some(Plan { moves: vec![cycle_plan(g, c)] }));
    }
    let mut cfg = Configuration::new(g, c);
    for _ in 0..THREE_TWO_EXTENSIONS {
        if cfg.extend(g).is_none() {
            break;
        }
        if let Some(plan) = find_xy_sequence_at(g, cfg.keys(), cfg.gaps(), SearchGoal::three_two()) {
            return Ok(Some(plan));
        }
    }
    Ok(None)
}

/// Target for [`find_xy_sequence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchGoal {
    /// Accept `(x, y)` when `y * den >= x * num`.
    pub num: usize,
    pub den: usize,
    pub depth_cap: usize,
    /// Require the final permutation to have no 2-cycles.
    pub three_permutation: bool,
}

impl SearchGoal {
    /// 11/8-sequences: at least 8 2-moves per 11 moves.
    pub fn eleven_eighths(depth_cap: usize) -> Self {
        SearchGoal { num: 8, den: 11, depth_cap, three_permutation: true }
    }

    /// (3,2)-sequences or better.
    pub fn three_two() -> Self {
        SearchGoal { num: 2, den: 3, depth_cap: 3, three_permutation: true }
    }
}

/// Largest configuration the local model accepts, in black edges.
pub const MAX_LOCAL_EDGES: usize = 64;

/// Iterative-deepening search for an (x,y)-sequence whose cut points are
/// black edges of `cycles`.
///
/// Moves that are not 2-moves must be 0-moves. Candidates are tried 2-moves
/// first, each group in lexicographic order of cut positions, so the result
/// is deterministic. Returns `None` when nothing is found within the cap or
/// the configuration exceeds [`MAX_LOCAL_EDGES`].
pub fn find_xy_sequence(g: &GraphState, cycles: &[CycleId], goal: SearchGoal) -> Option<Plan> {
    let mut keys: Vec<u32> = Vec::new();
    for (i, &c) in cycles.iter().enumerate() {
        if cycles[..i].contains(&c) {
            continue;
        }
        keys.extend_from_slice(g.cycle_keys(c));
    }
    let gaps: Vec<usize> = keys.iter().map(|&k| g.gap_of_key(k)).collect();
    find_xy_sequence_at(g, &keys, &gaps, goal)
}

/// [`find_xy_sequence`] on the union of whole cycles given by their keys and
/// the current gap of each key.
pub fn find_xy_sequence_at(g: &GraphState, keys: &[u32], gaps: &[usize], goal: SearchGoal) -> Option<Plan> {
    if keys.len() > MAX_LOCAL_EDGES || keys.len() < 3 {
        return None;
    }
    let local = Local::from_gaps(g, keys, gaps);
    search_local(&local, goal).map(|path| Plan {
        moves: path.into_iter().map(|(m, d)| (m.map(|i| keys[i as usize]), d)).collect(),
    })
}

fn search_local(root: &Local, goal: SearchGoal) -> Option<Vec<([u8; 3], i32)>> {
    let mut path = Vec::new();
    for x in 1..=goal.depth_cap {
        let y_min = (goal.num * x).div_ceil(goal.den);
        if y_min > x {
            continue;
        }
        let budget = x - y_min;
        if dfs(root, x, budget, goal, &mut path) {
            return Some(path);
        }
    }
    None
}

fn dfs(state: &Local, remaining: usize, budget: usize, goal: SearchGoal, path: &mut Vec<([u8; 3], i32)>) -> bool {
    if remaining == 0 {
        return state.all_short() && (!goal.three_permutation || !state.has_two_cycle());
    }
    // every remaining non-budget move adds two odd cycles
    if state.odd + 2 * (remaining - budget) > state.k {
        return false;
    }
    for m in state.two_move_candidates() {
        let next = state.apply(m[0] as usize, m[1] as usize, m[2] as usize);
        path.push((m, 2));
        if dfs(&next, remaining - 1, budget, goal, path) {
            return true;
        }
        path.pop();
    }
    if budget > 0 {
        let k = state.k;
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    let (ea, eb, ec) = (state.order[a], state.order[b], state.order[c]);
                    if state.delta_pos(a, b, c) != 0 {
                        continue;
                    }
                    let next = state.apply(ea as usize, eb as usize, ec as usize);
                    path.push(([ea, eb, ec], 0));
                    if dfs(&next, remaining - 1, budget - 1, goal, path) {
                        return true;
                    }
                    path.pop();
                }
            }
        }
    }
    false
}

/// Configuration-local model of a breakpoint graph.
#[derive(Clone, Debug)]
pub(crate) struct Local {
    k: usize,
    odd: usize,
    /// Cycle successor, as local edge indices.
    next: [u8; MAX_LOCAL_EDGES],
    /// `order[p]`: local edge at cyclic position `p`.
    order: [u8; MAX_LOCAL_EDGES],
    pos: [u8; MAX_LOCAL_EDGES],
    cyc: [u8; MAX_LOCAL_EDGES],
    cyc_len: [u8; MAX_LOCAL_EDGES],
    /// First edge of each cycle.
    cyc_head: [u8; MAX_LOCAL_EDGES],
    ncyc: usize,
}

impl Local {
    fn from_keys(g: &GraphState, keys: &[u32], gaps: &[u32]) -> Local {
        let gp: Vec<usize> = keys.iter().map(|&k| gaps[k as usize] as usize).collect();
        Local::from_gaps(g, keys, &gp)
    }

    /// `keys` must be closed under the cycle successor.
    fn from_gaps(g: &GraphState, keys: &[u32], gaps: &[usize]) -> Local {
        let k = keys.len();
        let mut local = Local {
            k,
            odd: 0,
            next: [0; MAX_LOCAL_EDGES],
            order: [0; MAX_LOCAL_EDGES],
            pos: [0; MAX_LOCAL_EDGES],
            cyc: [0; MAX_LOCAL_EDGES],
            cyc_len: [0; MAX_LOCAL_EDGES],
            cyc_head: [0; MAX_LOCAL_EDGES],
            ncyc: 0,
        };
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_unstable_by_key(|&i| gaps[i]);
        for (p, &i) in idx.iter().enumerate() {
            local.order[p] = i as u8;
            local.pos[i] = p as u8;
        }
        for i in 0..k {
            let nk = g.next_key(keys[i]);
            let j = keys.iter().position(|&x| x == nk).expect("configuration closed under cycles");
            local.next[i] = j as u8;
        }
        local.recount();
        local
    }

    fn recount(&mut self) {
        let mut seen = 0u64;
        self.ncyc = 0;
        self.odd = 0;
        for p in 0..self.k {
            let start = self.order[p];
            if seen & (1 << start) != 0 {
                continue;
            }
            let id = self.ncyc as u8;
            let mut len = 0u8;
            let mut v = start;
            loop {
                seen |= 1 << v;
                self.cyc[v as usize] = id;
                len += 1;
                v = self.next[v as usize];
                if v == start {
                    break;
                }
            }
            self.cyc_len[id as usize] = len;
            self.cyc_head[id as usize] = start;
            self.odd += (len % 2) as usize;
            self.ncyc += 1;
        }
    }

    fn all_short(&self) -> bool {
        self.cyc_len[..self.ncyc].iter().all(|&l| l <= 3)
    }

    fn has_two_cycle(&self) -> bool {
        self.cyc_len[..self.ncyc].contains(&2)
    }

    fn cycle_edges(&self, c: usize) -> [usize; 3] {
        let a = self.cyc_head[c];
        let b = self.next[a as usize];
        let d = self.next[b as usize];
        [a as usize, b as usize, d as usize]
    }

    fn first_oriented_three(&self) -> Option<usize> {
        (0..self.ncyc).find(|&c| {
            self.cyc_len[c] == 3 && {
                let [a, b, d] = self.cycle_edges(c);
                oriented_triple(self.pos[a] as usize, self.pos[b] as usize, self.pos[d] as usize, self.k)
            }
        })
    }

    /// `Δc_odd` for cut edges at cyclic positions `pa < pb < pc`.
    fn delta_pos(&self, pa: usize, pb: usize, pc: usize) -> i32 {
        let (a, b, c) = (self.order[pa], self.order[pb], self.order[pc]);
        let (ca, cb, cc) = (self.cyc[a as usize], self.cyc[b as usize], self.cyc[c as usize]);
        if ca == cb && cb == cc && self.cyc_len[ca as usize] == 3 {
            let [x, y, z] = self.cycle_edges(ca as usize);
            let oriented = oriented_triple(self.pos[x] as usize, self.pos[y] as usize, self.pos[z] as usize, self.k);
            return if oriented { 2 } else { 0 };
        }
        let mut before = (self.cyc_len[ca as usize] % 2) as i32;
        if cb != ca {
            before += (self.cyc_len[cb as usize] % 2) as i32;
        }
        if cc != ca && cc != cb {
            before += (self.cyc_len[cc as usize] % 2) as i32;
            if cb != ca {
                // three cycles merge into one
                let len = self.cyc_len[ca as usize] as i32 + self.cyc_len[cb as usize] as i32 + self.cyc_len[cc as usize] as i32;
                return len % 2 - before;
            }
        }
        let rho = |v: u8| {
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
        let mut seen = 0u64;
        let mut after = 0;
        for start in [a, b, c] {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            loop {
                seen |= 1 << v;
                len += 1;
                v = rho(self.next[v as usize]);
                if v == start {
                    break;
                }
            }
            after += len % 2;
        }
        // cycles through the cut edges are the only ones that change; every
        // new cycle passes through one of a, b, c
        after - before
    }

    /// Applies the transposition cutting local edges `x`, `y`, `z`.
    fn apply(&self, x: usize, y: usize, z: usize) -> Local {
        let mut cuts = [self.pos[x] as usize, self.pos[y] as usize, self.pos[z] as usize];
        cuts.sort_unstable();
        let [pa, pb, pc] = cuts;
        let (a, b, c) = (self.order[pa], self.order[pb], self.order[pc]);
        let mut out = self.clone();
        // [0, pa) ++ [pb, pc) ++ [pa, pb) ++ [pc, k)
        out.order[pa..pc].rotate_left(pb - pa);
        for p in pa..pc {
            out.pos[out.order[p] as usize] = p as u8;
        }
        let rho = |v: u8| {
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
        for w in 0..self.k {
            out.next[w] = rho(self.next[w]);
        }
        out.recount();
        out
    }

    /// 2-moves: triples inside one cycle, or two edges of one even cycle and
    /// one of another even cycle. Sorted by cut positions.
    fn two_move_candidates(&self) -> SmallVec<[[u8; 3]; 16]> {
        // positions of each cycle's edges, ascending, via a counting pass
        let mut start = [0u8; MAX_LOCAL_EDGES + 1];
        for c in 0..self.ncyc {
            start[c + 1] = start[c] + self.cyc_len[c];
        }
        let mut fill = start;
        let mut members = [0u8; MAX_LOCAL_EDGES];
        for p in 0..self.k {
            let c = self.cyc[self.order[p] as usize] as usize;
            members[fill[c] as usize] = p as u8;
            fill[c] += 1;
        }
        let of = |c: usize| &members[start[c] as usize..start[c + 1] as usize];
        let mut cands: SmallVec<[[u8; 3]; 16]> = SmallVec::new();
        for c in 0..self.ncyc {
            let m = of(c);
            for a in 0..m.len() {
                for b in a + 1..m.len() {
                    for d in b + 1..m.len() {
                        cands.push([m[a], m[b], m[d]]);
                    }
                }
            }
        }
        for c1 in 0..self.ncyc {
            if self.cyc_len[c1] % 2 == 1 {
                continue;
            }
            for c2 in 0..self.ncyc {
                if c2 == c1 || self.cyc_len[c2] % 2 == 1 {
                    continue;
                }
                let (m1, m2) = (of(c1), of(c2));
                for a in 0..m1.len() {
                    for b in a + 1..m1.len() {
                        for &d in m2 {
                            let mut t = [m1[a], m1[b], d];
                            t.sort_unstable();
                            cands.push(t);
                        }
                    }
                }
            }
        }
        cands.retain(|t| self.delta_pos(t[0] as usize, t[1] as usize, t[2] as usize) == 2);
        cands.sort_unstable();
        for t in cands.iter_mut() {
            *t = t.map(|p| self.order[p as usize]);
        }
        cands
    }
}
