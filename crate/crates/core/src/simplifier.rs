//! Making a permutation simple by (g,b)-splits, and carrying a sorting of
//! the simple permutation back to the original one.
//!
//! A (g,b)-split inserts one new element inside black edge `b` with a value
//! placed on grey edge `g` of the same cycle, splitting the cycle in two.
//! Every long cycle has a 3-cycle cut off its traversal start until at most
//! three black edges remain. Each such split keeps `#black edges - c_odd`
//! unchanged, so the lower bound carries over to the simple permutation.

use crate::error::PermError;
use crate::perm::{Permutation, Transposition};
use crate::permutation_tree::Forest;

/// The simple permutation `π̂` together with the way back to `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationMap {
    padded: Permutation,
    /// `original_of[v]` is the value of `π` that `π̂`-value `v` stands for,
    /// or `None` for an inserted element.
    original_of: Vec<Option<u32>>,
    original_len: usize,
}

impl SimplificationMap {
    pub fn padded(&self) -> &Permutation {
        &self.padded
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn insertions(&self) -> usize {
        self.padded.len() - self.original_len
    }

    pub fn original_of(&self, padded_value: u32) -> Option<u32> {
        self.original_of[padded_value as usize]
    }

    /// Per position of `π̂`: 1 for an element of `π`, 0 for an insertion.
    pub fn weights(&self) -> Vec<u32> {
        self.padded.as_slice().iter().map(|&v| u32::from(self.original_of[v as usize].is_some())).collect()
    }

    /// Positions of `π̂` holding inserted elements.
    pub fn inserted_positions(&self) -> Vec<usize> {
        self.padded
            .as_slice()
            .iter()
            .enumerate()
            .filter(|&(_, &v)| self.original_of[v as usize].is_none())
            .map(|(p, _)| p)
            .collect()
    }

    /// Drops the inserted elements and maps values back: recovers `π`.
    pub fn unpad(&self) -> Permutation {
        let elems = self.padded.as_slice().iter().filter_map(|&v| self.original_of[v as usize]).collect();
        Permutation::new(elems).expect("value map is a bijection onto the original values")
    }
}

/// Inserts elements until every cycle of the breakpoint graph has at most
/// three black edges. Linear time.
pub fn simplify(perm: &Permutation) -> SimplificationMap {
    let n = perm.len();
    let m = n + 1;
    // Element ids: 0 is the frame, 1..=n the input values, then insertions.
    let mut succ_pos = vec![0u32; m];
    let mut pred_pos = vec![0u32; m];
    let mut prev_val: Vec<u32> = (0..m as u32).map(|v| (v + m as u32 - 1) % m as u32).collect();
    let mut next_val: Vec<u32> = (0..m as u32).map(|v| (v + 1) % m as u32).collect();
    let framed: Vec<u32> = std::iter::once(0).chain(perm.as_slice().iter().map(|&v| v + 1)).collect();
    for p in 0..m {
        let (a, b) = (framed[p], framed[(p + 1) % m]);
        succ_pos[a as usize] = b;
        pred_pos[b as usize] = a;
    }

    let mut visited = vec![false; m];
    let mut cycle = Vec::new();
    for start in 0..m as u32 {
        if visited[start as usize] {
            continue;
        }
        cycle.clear();
        let mut v = start;
        loop {
            visited[v as usize] = true;
            cycle.push(v);
            v = succ_pos[prev_val[v as usize] as usize];
            if v == start {
                break;
            }
        }
        // Remaining long cycle is [head, cycle[idx..]].
        let mut head = cycle[0];
        let mut idx = 1;
        while 1 + cycle.len() - idx > 3 {
            let e2 = cycle[idx + 1];
            let w = succ_pos.len() as u32;
            // position: inside the black edge keyed `head`
            let x0 = pred_pos[head as usize];
            succ_pos.push(head);
            pred_pos.push(x0);
            succ_pos[x0 as usize] = w;
            pred_pos[head as usize] = w;
            // value: on the grey edge entering `e2`
            let u = prev_val[e2 as usize];
            next_val.push(e2);
            prev_val.push(u);
            next_val[u as usize] = w;
            prev_val[e2 as usize] = w;
            visited.push(true);
            head = w;
            idx += 2;
        }
    }

    let total = succ_pos.len();
    let mut rank = vec![0u32; total];
    let mut original_of = vec![None; total - 1];
    let mut v = next_val[0];
    let mut r = 0u32;
    while v != 0 {
        rank[v as usize] = r;
        original_of[r as usize] = (v as usize <= n).then(|| v - 1);
        r += 1;
        v = next_val[v as usize];
    }
    let mut padded = Vec::with_capacity(total - 1);
    let mut v = succ_pos[0];
    while v != 0 {
        padded.push(rank[v as usize]);
        v = succ_pos[v as usize];
    }
    SimplificationMap {
        padded: Permutation::new(padded).expect("ranks form a permutation"),
        original_of,
        original_len: n,
    }
}

/// Translates a sorting of `π̂` into a sorting of `π`.
///
/// Each move on `π̂` acts on `π` by ignoring inserted elements; moves that
/// leave an empty segment on `π` are dropped. Fails if `moves` does not sort
/// `π̂`.
pub fn mimic(map: &SimplificationMap, moves: &[Transposition]) -> Result<Vec<Transposition>, PermError> {
    let padded = map.padded.as_slice();
    let len = padded.len();
    let weights = map.weights();
    let mut forest = Forest::with_capacity(len);
    let mut tree = forest.build_weighted(padded, &weights)?;
    let mut out = Vec::with_capacity(moves.len());
    for &t in moves {
        t.check(len)?;
        let i = forest.weight_prefix(&tree, t.i)? as usize;
        let j = forest.weight_prefix(&tree, t.j)? as usize;
        let k = forest.weight_prefix(&tree, t.k)? as usize;
        if i < j && j < k {
            out.push(Transposition::new(i, j, k));
        }
        forest.apply_transposition(&mut tree, t.i + 1, t.j + 1, t.k + 1)?;
    }
    let sorted = forest.to_sequence(&tree).iter().enumerate().all(|(p, &v)| p as u32 == v);
    if !sorted {
        return Err(PermError::Contract("moves do not sort the simple permutation".into()));
    }
    Ok(out)
}
