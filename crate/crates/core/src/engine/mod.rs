//! The eight-step sorting driver.
//!
//! 1. Simplify.
//! 2. Apply a (2,2)-sequence if one exists.
//! 3. Pair off 2-cycles with 2-moves.
//! 4. Mark all 3-cycles.
//! 5. While a marked 3-cycle remains, apply a 2-move on it or grow a
//!    configuration around it and search it for an 11/8-sequence, unmarking
//!    it on failure.
//! 6. Search pooled unmarked components.
//! 7. Drain the remaining 3-cycles with (3,2)-sequences.
//! 8. Translate the moves back to the input.
//!
//! The translation runs online: the tree of the simple permutation weighs
//! each element 1 if it belongs to the input and 0 if it was inserted, and
//! every move is mapped through the weights in front of its cut points.

pub mod config;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use crate::breakpoint_graph::{CycleId, GraphState, MoveEffect};
use crate::error::PermError;
use crate::perm::{Permutation, Transposition};
use crate::sequence_search::{
    find_22_sequence, find_32_sequence, find_xy_sequence, find_xy_sequence_at, two_cycle_pair_move, MoveSequence, Plan, SearchGoal,
};
use crate::simplifier::simplify;

pub use config::{components, Configuration, Extension};

/// Cycles pooled per Step 6 search.
const POOL_CYCLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortOptions {
    /// Longest sequence the configuration search tries.
    pub search_depth: usize,
    /// Time permutation-tree work separately.
    pub timing: bool,
    /// Audit the graph against a rebuild after every step (slow).
    pub audit: bool,
}

impl Default for SortOptions {
    fn default() -> Self {
        SortOptions { search_depth: 4, timing: false, audit: false }
    }
}

/// Wall time per phase, in nanoseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub total_ns: u64,
    pub simplify_ns: u64,
    pub search_ns: u64,
    /// Time inside permutation-tree operations (only with `timing`).
    pub tree_ns: u64,
}

impl Timings {
    /// Everything that is not tree work.
    pub fn graph_ns(&self) -> u64 {
        self.total_ns.saturating_sub(self.tree_ns)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub insertions: usize,
    pub found_22: bool,
    pub two_cycles_before_step3: usize,
    pub three_permutation_after_step3: bool,
    pub loop_iterations: usize,
    /// Cycles unmarked in Step 5.
    pub unmarked_cycles: usize,
    /// Sequences applied in Step 6.
    pub pooled_sequences: usize,
    /// Step 7 cycles that needed the strip fallback.
    pub fallbacks: usize,
    /// Applied sequence shapes `(x, y)` and how often each occurred.
    pub shapes: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
pub struct SortReport {
    /// Moves sorting the input.
    pub moves: Vec<Transposition>,
    pub lower_bound: usize,
    /// Moves sorting the simple permutation, with their 2-move count.
    pub simple_moves: MoveSequence,
    pub timings: Timings,
    pub stats: EngineStats,
}

impl SortReport {
    pub fn moves_on_simple(&self) -> usize {
        self.simple_moves.len()
    }

    /// `|moves| / max(lower_bound, 1)` as a fraction.
    pub fn ratio_parts(&self) -> (usize, usize) {
        (self.moves.len(), self.lower_bound.max(1))
    }

    pub fn ratio_vs_lb(&self) -> f64 {
        let (a, b) = self.ratio_parts();
        a as f64 / b as f64
    }
}

/// Sorts `perm`, returning moves that turn it into the identity.
pub fn sort(perm: &Permutation, options: SortOptions) -> Result<SortReport, PermError> {
    let start = Instant::now();
    let mut stats = EngineStats::default();
    let mut timings = Timings::default();

    let t = Instant::now();
    let map = simplify(perm);
    timings.simplify_ns = t.elapsed().as_nanos() as u64;
    stats.insertions = map.insertions();

    // Weights mark the elements of π, so every move on π̂ is translated to π
    // as it is applied.
    let mut g = GraphState::with_weights(map.padded(), &map.weights())?;
    g.set_timing(options.timing);
    // splits keep the lower bound
    let lower_bound = g.lower_bound();
    let t = Instant::now();
    let mut run = Run {
        g: &mut g,
        seq: MoveSequence::default(),
        original: Vec::new(),
        stats: &mut stats,
        options,
        marked: BTreeSet::new(),
    };
    run.steps()?;
    let simple_moves = std::mem::take(&mut run.seq);
    let moves = std::mem::take(&mut run.original);
    timings.search_ns = t.elapsed().as_nanos() as u64;
    if !g.is_sorted() {
        return Err(PermError::Contract("engine finished without sorting".into()));
    }
    timings.tree_ns = g.tree_ns();
    timings.total_ns = start.elapsed().as_nanos() as u64;
    Ok(SortReport { moves, lower_bound, simple_moves, timings, stats })
}

struct Run<'a> {
    g: &'a mut GraphState,
    seq: MoveSequence,
    /// `seq` translated to the input permutation.
    original: Vec<Transposition>,
    stats: &'a mut EngineStats,
    options: SortOptions,
    /// Marked 3-cycles by smallest key.
    marked: BTreeSet<(u32, CycleId)>,
}

impl Run<'_> {
    fn steps(&mut self) -> Result<(), PermError> {
        if let Some(plan) = find_22_sequence(self.g)? {
            self.stats.found_22 = true;
            self.apply(&plan)?;
        }
        self.audit()?;

        self.stats.two_cycles_before_step3 = self.g.two_cycle_count();
        self.eliminate_2cycles()?;
        self.stats.three_permutation_after_step3 = self.g.is_three_permutation();
        self.audit()?;

        self.marked = self.g.three_cycles().map(|c| (self.g.cycle_keys(c)[0], c)).collect();
        let bad = self.main_loop()?;
        self.audit()?;

        self.pooled(bad)?;
        self.audit()?;

        self.drain()?;
        self.audit()
    }

    fn audit(&self) -> Result<(), PermError> {
        if self.options.audit {
            self.g.audit()?;
        }
        Ok(())
    }

    /// Applies a plan, checking its predicted move kinds and keeping marks
    /// in sync: destroyed cycles lose their mark, new 3-cycles get one.
    /// Returns the 3-cycles created along the way that are still alive.
    fn apply(&mut self, plan: &Plan) -> Result<Vec<CycleId>, PermError> {
        let mut twos = 0;
        let mut created = Vec::new();
        for &(keys, predicted) in &plan.moves {
            for k in keys {
                let c = self.g.cycle_of_key(k);
                if let Some(&first) = self.g.cycle_keys(c).first() {
                    self.marked.remove(&(first, c));
                }
            }
            let effect = self.g.apply_keys(keys[0], keys[1], keys[2]);
            if effect.delta_odd != predicted {
                return Err(PermError::Contract(format!(
                    "move {} predicted as a {predicted}-move was a {}-move",
                    effect.transposition, effect.delta_odd
                )));
            }
            for &c in &effect.created {
                if self.g.cycle_len(c) == 3 {
                    self.marked.insert((self.g.cycle_keys(c)[0], c));
                    created.push(c);
                }
            }
            twos += usize::from(effect.delta_odd == 2);
            self.record(&effect);
        }
        *self.stats.shapes.entry((plan.len(), twos)).or_insert(0) += 1;
        created.retain(|&c| self.g.is_alive(c));
        Ok(created)
    }

    fn record(&mut self, effect: &MoveEffect) {
        self.seq.push(effect.transposition, effect.delta_odd == 2);
        let [i, j, k] = effect.weighted_cuts.expect("weighted graph").map(|w| w as usize);
        // moves shifting only inserted elements vanish on π
        if i < j && j < k {
            self.original.push(Transposition::new(i, j, k));
        }
    }

    fn eliminate_2cycles(&mut self) -> Result<(), PermError> {
        if self.g.two_cycle_count() % 2 == 1 {
            return Err(PermError::Contract("odd number of 2-cycles".into()));
        }
        while self.g.two_cycle_count() > 0 {
            let pair: Vec<CycleId> = self.g.two_cycles().take(2).collect();
            let (c1, c2) = (pair[0], pair[1]);
            let keys = two_cycle_pair_move(self.g, c1, c2)
                .ok_or_else(|| PermError::Contract("two 2-cycles without a 2-move".into()))?;
            self.apply(&Plan { moves: vec![(keys, 2)] })?;
        }
        Ok(())
    }

    /// Step 5. Returns the groups of cycles unmarked together.
    fn main_loop(&mut self) -> Result<Vec<Vec<CycleId>>, PermError> {
        let goal = SearchGoal::eleven_eighths(self.options.search_depth);
        let mut bad = Vec::new();
        while let Some(&(_, c)) = self.marked.first() {
            self.stats.loop_iterations += 1;
            if self.g.is_oriented(c) {
                let keys = self.g.cycle_keys(c);
                let plan = Plan { moves: vec![([keys[0], keys[1], keys[2]], 2)] };
                self.apply(&plan)?;
                continue;
            }
            let mut cfg = Configuration::new(self.g, c);
            let mut found = None;
            loop {
                if cfg.len() >= 2 {
                    if let Some(plan) = find_xy_sequence_at(self.g, cfg.keys(), cfg.gaps(), goal) {
                        found = Some(plan);
                        break;
                    }
                }
                if cfg.len() >= 9 || cfg.extend(self.g).is_none() {
                    break;
                }
            }
            match found {
                Some(plan) => {
                    self.apply(&plan)?;
                }
                None => {
                    for &d in cfg.cycles() {
                        if self.marked.remove(&(self.g.cycle_keys(d)[0], d)) {
                            self.stats.unmarked_cycles += 1;
                        }
                    }
                    bad.push(cfg.cycles().to_vec());
                }
            }
        }
        Ok(bad)
    }

    /// Step 6: while the unmarked groups hold at least eight 3-cycles, pool
    /// groups and search their union.
    fn pooled(&mut self, bad: Vec<Vec<CycleId>>) -> Result<(), PermError> {
        let goal = SearchGoal::eleven_eighths(self.options.search_depth);
        let mut queue: VecDeque<Vec<CycleId>> = bad.into();
        loop {
            let mut pool: Vec<CycleId> = Vec::new();
            while pool.len() < POOL_CYCLES {
                let Some(group) = queue.pop_front() else { break };
                // groups may overlap: a cycle can sit in several failed configurations
                for c in group {
                    if self.g.is_alive(c) && self.g.cycle_len(c) == 3 && !pool.contains(&c) {
                        pool.push(c);
                    }
                }
            }
            if pool.len() < POOL_CYCLES {
                return Ok(());
            }
            let Some(plan) = find_xy_sequence(self.g, &pool, goal) else {
                return Ok(());
            };
            // new 3-cycles join the leftovers of the pool
            let created = self.apply(&plan)?;
            self.marked.clear();
            self.stats.pooled_sequences += 1;
            let mut rest: Vec<CycleId> = pool.into_iter().filter(|&c| self.g.is_alive(c)).collect();
            rest.extend(created);
            queue.push_front(rest);
        }
    }

    /// Step 7: (3,2)-sequences until no 3-cycle is left.
    fn drain(&mut self) -> Result<(), PermError> {
        while self.g.three_cycle_count() > 0 {
            match find_32_sequence(self.g)? {
                Some(plan) => {
                    self.apply(&plan)?;
                }
                None => {
                    self.stats.fallbacks += 1;
                    self.strip()?;
                }
            }
        }
        self.marked.clear();
        Ok(())
    }

    /// Sorts what is left by moving each misplaced element home, one
    /// transposition each.
    fn strip(&mut self) -> Result<(), PermError> {
        let mut cur = self.g.to_permutation().into_vec();
        let mut where_is = vec![0usize; cur.len()];
        for (p, &v) in cur.iter().enumerate() {
            where_is[v as usize] = p;
        }
        for p in 0..cur.len() {
            if cur[p] as usize == p {
                continue;
            }
            let q = where_is[p];
            let t = Transposition::new(p, q, q + 1);
            let effect = self.g.apply(t)?;
            self.record(&effect);
            t.apply_to(&mut cur);
            for (r, &v) in cur.iter().enumerate().take(q + 1).skip(p) {
                where_is[v as usize] = r;
            }
        }
        Ok(())
    }
}
