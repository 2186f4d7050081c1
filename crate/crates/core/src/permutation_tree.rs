//! Height-balanced binary tree over a permutation interval.
//!
//! Leaves carry the permutation elements in order; every internal node has
//! exactly two children and stores its height, the number of leaves below it,
//! a leaf-weight sum and the maximum element of its interval. Split and join
//! follow the AVL join discipline, so `join` costs `O(|H(t1) - H(t2)| + 1)`
//! and `split` costs `O(log n)`.
//!
//! Nodes live in a [`Forest`] arena; a [`PermTree`] is a handle to one root.
//! Handles are deliberately not `Clone`: `split` and `join` consume them.

use crate::error::TreeError;

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    size: u32,
    weight: u32,
    /// Maximum element of the interval; the element itself for a leaf.
    max: u32,
    height: u8,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.left == NIL
    }
}

/// Handle to a tree stored in a [`Forest`].
#[derive(Debug, PartialEq, Eq)]
pub struct PermTree {
    root: u32,
}

impl PermTree {
    pub fn empty() -> Self {
        PermTree { root: NIL }
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    /// Second handle to the same root, for cloning a forest together with it.
    pub(crate) fn alias(&self) -> PermTree {
        PermTree { root: self.root }
    }
}

/// Arena holding the nodes of one or more permutation trees.
///
/// Element values are unique across all live trees of a forest, which is what
/// lets [`Forest::position_of`] find a leaf in O(1) before walking to its root.
#[derive(Clone, Debug, Default)]
pub struct Forest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    leaf_of: Vec<u32>,
}

impl Forest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(elements: usize) -> Self {
        Forest {
            nodes: Vec::with_capacity(2 * elements),
            free: Vec::new(),
            leaf_of: Vec::with_capacity(elements + 1),
        }
    }

    /// Builds a tree over `seq` in linear time; every leaf has weight 1.
    pub fn build(&mut self, seq: &[u32]) -> Result<PermTree, TreeError> {
        self.build_inner(seq, None)
    }

    /// Like [`Forest::build`] with explicit per-leaf weights.
    pub fn build_weighted(&mut self, seq: &[u32], weights: &[u32]) -> Result<PermTree, TreeError> {
        assert_eq!(seq.len(), weights.len(), "one weight per element");
        self.build_inner(seq, Some(weights))
    }

    fn build_inner(&mut self, seq: &[u32], weights: Option<&[u32]>) -> Result<PermTree, TreeError> {
        if let Some(&max) = seq.iter().max() {
            if self.leaf_of.len() <= max as usize {
                self.leaf_of.resize(max as usize + 1, NIL);
            }
        }
        for (idx, &v) in seq.iter().enumerate() {
            if self.leaf_of[v as usize] != NIL {
                // roll back the leaves registered so far
                for &u in &seq[..idx] {
                    self.leaf_of[u as usize] = NIL;
                }
                return Err(TreeError::Duplicate(v));
            }
            self.leaf_of[v as usize] = 0;
        }
        if seq.is_empty() {
            return Ok(PermTree::empty());
        }
        let root = self.build_range(seq, weights);
        self.nodes[root as usize].parent = NIL;
        Ok(PermTree { root })
    }

    fn build_range(&mut self, seq: &[u32], weights: Option<&[u32]>) -> u32 {
        if seq.len() == 1 {
            let w = weights.map_or(1, |w| w[0]);
            let id = self.alloc(Node { left: NIL, right: NIL, parent: NIL, size: 1, weight: w, max: seq[0], height: 0 });
            self.leaf_of[seq[0] as usize] = id;
            return id;
        }
        let mid = seq.len() / 2;
        let (wl, wr) = match weights {
            Some(w) => (Some(&w[..mid]), Some(&w[mid..])),
            None => (None, None),
        };
        let l = self.build_range(&seq[..mid], wl);
        let r = self.build_range(&seq[mid..], wr);
        self.make(l, r)
    }

    /// Splits into the first `m` elements and the rest. On a range error the
    /// consumed tree is released.
    pub fn split(&mut self, t: PermTree, m: usize) -> Result<(PermTree, PermTree), TreeError> {
        let len = self.len(&t);
        if m > len {
            self.release(t);
            return Err(TreeError::Range { lo: m, hi: m, len });
        }
        let (a, b) = self.split_node(t.root, m as u32);
        Ok((self.as_root(a), self.as_root(b)))
    }

    /// Concatenation: `to_sequence(join(a, b)) = to_sequence(a) ++ to_sequence(b)`.
    pub fn join(&mut self, a: PermTree, b: PermTree) -> PermTree {
        let r = self.join_nodes(a.root, b.root);
        self.as_root(r)
    }

    /// Maximum over 1-based positions `i..=j` and its position.
    pub fn range_max(&self, t: &PermTree, i: usize, j: usize) -> Result<(u32, usize), TreeError> {
        let len = self.len(t);
        if i < 1 || i > j || j > len {
            return Err(TreeError::Range { lo: i, hi: j, len });
        }
        let mut best: Option<(u32, u32, usize)> = None;
        self.range_max_rec(t.root, 0, i - 1, j, &mut best);
        let (max, mut x, mut offset) = best.expect("nonempty range");
        while !self.node(x).is_leaf() {
            let l = self.node(x).left;
            if self.node(l).max == max {
                x = l;
            } else {
                offset += self.node(l).size as usize;
                x = self.node(x).right;
            }
        }
        Ok((max, offset + 1))
    }

    // Visits the O(log n) canonical nodes covering [lo, hi) (0-based, half-open).
    fn range_max_rec(&self, x: u32, offset: usize, lo: usize, hi: usize, best: &mut Option<(u32, u32, usize)>) {
        let node = self.node(x);
        let end = offset + node.size as usize;
        if hi <= offset || end <= lo {
            return;
        }
        if lo <= offset && end <= hi {
            if best.is_none_or(|(m, _, _)| node.max > m) {
                *best = Some((node.max, x, offset));
            }
            return;
        }
        let l = node.left;
        let lsize = self.node(l).size as usize;
        self.range_max_rec(l, offset, lo, hi, best);
        self.range_max_rec(node.right, offset + lsize, lo, hi, best);
    }

    /// 1-based position of value `v` in `t`.
    pub fn position_of(&self, t: &PermTree, v: u32) -> Result<usize, TreeError> {
        let leaf = *self.leaf_of.get(v as usize).ok_or(TreeError::NotFound(v))?;
        if leaf == NIL {
            return Err(TreeError::NotFound(v));
        }
        let mut x = leaf;
        let mut pos = 1usize;
        loop {
            let p = self.node(x).parent;
            if p == NIL {
                break;
            }
            let pn = self.node(p);
            if pn.right == x {
                pos += self.node(pn.left).size as usize;
            }
            x = p;
        }
        if x != t.root {
            return Err(TreeError::NotFound(v));
        }
        Ok(pos)
    }

    /// Element at 1-based position `p`.
    pub fn element_at(&self, t: &PermTree, p: usize) -> Result<u32, TreeError> {
        let len = self.len(t);
        if p < 1 || p > len {
            return Err(TreeError::Range { lo: p, hi: p, len });
        }
        let mut x = t.root;
        let mut rank = p as u32;
        while !self.node(x).is_leaf() {
            let l = self.node(x).left;
            let ls = self.node(l).size;
            if rank <= ls {
                x = l;
            } else {
                rank -= ls;
                x = self.node(x).right;
            }
        }
        Ok(self.node(x).max)
    }

    /// Sum of leaf weights over the first `p` positions.
    pub fn weight_prefix(&self, t: &PermTree, p: usize) -> Result<u64, TreeError> {
        let len = self.len(t);
        if p > len {
            return Err(TreeError::Range { lo: p, hi: p, len });
        }
        let mut x = t.root;
        let mut rest = p as u32;
        let mut acc = 0u64;
        while rest > 0 {
            let node = self.node(x);
            if node.size == rest {
                acc += node.weight as u64;
                break;
            }
            let l = node.left;
            let ls = self.node(l).size;
            if rest <= ls {
                x = l;
            } else {
                acc += self.node(l).weight as u64;
                rest -= ls;
                x = node.right;
            }
        }
        Ok(acc)
    }

    /// Exchanges segments `i..j-1` and `j..k-1` (1-based; `k` may be `len + 1`)
    /// with three splits and three joins.
    pub fn apply_transposition(&mut self, t: &mut PermTree, i: usize, j: usize, k: usize) -> Result<(), TreeError> {
        let len = self.len(t);
        if !(1 <= i && i < j && j < k && k <= len + 1) {
            return Err(TreeError::Cuts { i, j, k, len });
        }
        let whole = std::mem::replace(t, PermTree::empty());
        let (rest, t4) = self.split(whole, k - 1)?;
        let (rest, t3) = self.split(rest, j - 1)?;
        let (t1, t2) = self.split(rest, i - 1)?;
        let a = self.join(t1, t3);
        let b = self.join(a, t2);
        *t = self.join(b, t4);
        Ok(())
    }

    pub fn len(&self, t: &PermTree) -> usize {
        if t.root == NIL {
            0
        } else {
            self.node(t.root).size as usize
        }
    }

    /// Height of the root; `None` for the empty tree.
    pub fn height(&self, t: &PermTree) -> Option<u32> {
        (t.root != NIL).then(|| self.node(t.root).height as u32)
    }

    /// Value stored at the root (the global maximum).
    pub fn root_max(&self, t: &PermTree) -> Option<u32> {
        (t.root != NIL).then(|| self.node(t.root).max)
    }

    pub fn to_sequence(&self, t: &PermTree) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len(t));
        if t.root == NIL {
            return out;
        }
        let mut stack = vec![t.root];
        while let Some(x) = stack.pop() {
            let node = self.node(x);
            if node.is_leaf() {
                out.push(node.max);
            } else {
                stack.push(node.right);
                stack.push(node.left);
            }
        }
        out
    }

    /// Parenthesized in-order form, e.g. `((3)(1 2))` for `(3, 1, 2)`.
    ///
    /// An internal node whose children are both leaves prints as `(a b)`;
    /// otherwise a leaf child is wrapped as `(a)`.
    pub fn dump(&self, t: &PermTree) -> String {
        let mut s = String::new();
        if t.root == NIL {
            s.push_str("()");
        } else if self.node(t.root).is_leaf() {
            s.push_str(&format!("({})", self.node(t.root).max));
        } else {
            self.dump_rec(t.root, &mut s);
        }
        s
    }

    fn dump_rec(&self, x: u32, s: &mut String) {
        let node = self.node(x);
        let (l, r) = (self.node(node.left), self.node(node.right));
        s.push('(');
        if l.is_leaf() && r.is_leaf() {
            s.push_str(&format!("{} {}", l.max, r.max));
        } else {
            for c in [node.left, node.right] {
                if self.node(c).is_leaf() {
                    s.push_str(&format!("({})", self.node(c).max));
                } else {
                    self.dump_rec(c, s);
                }
            }
        }
        s.push(')');
    }

    /// Full structural audit: parent links, sizes, weights, heights, maxima
    /// and the AVL balance bound at every node.
    pub fn audit(&self, t: &PermTree) -> Result<(), TreeError> {
        if t.root == NIL {
            return Ok(());
        }
        if self.node(t.root).parent != NIL {
            return Err(TreeError::Invariant("root has a parent".into()));
        }
        self.audit_rec(t.root).map(|_| ())
    }

    fn audit_rec(&self, x: u32) -> Result<(), TreeError> {
        let bad = |msg: String| Err(TreeError::Invariant(msg));
        let node = self.node(x);
        if node.is_leaf() {
            if node.right != NIL || node.height != 0 || node.size != 1 {
                return bad(format!("malformed leaf {x}"));
            }
            if self.leaf_of.get(node.max as usize) != Some(&x) {
                return bad(format!("leaf index stale for value {}", node.max));
            }
            return Ok(());
        }
        if node.right == NIL {
            return bad(format!("internal node {x} with one child"));
        }
        let (l, r) = (self.node(node.left), self.node(node.right));
        if l.parent != x || r.parent != x {
            return bad(format!("broken parent link under {x}"));
        }
        if node.height as u32 != 1 + l.height.max(r.height) as u32 {
            return bad(format!("height mismatch at {x}"));
        }
        if (l.height as i32 - r.height as i32).abs() > 1 {
            return bad(format!("balance violated at {x}: {} vs {}", l.height, r.height));
        }
        if node.size != l.size + r.size || node.weight != l.weight + r.weight {
            return bad(format!("size/weight mismatch at {x}"));
        }
        if node.max != l.max.max(r.max) {
            return bad(format!("max mismatch at {x}"));
        }
        self.audit_rec(node.left)?;
        self.audit_rec(node.right)
    }

    /// Frees every node of `t`.
    pub fn release(&mut self, t: PermTree) {
        if t.root == NIL {
            return;
        }
        let mut stack = vec![t.root];
        while let Some(x) = stack.pop() {
            let node = self.node(x).clone();
            if node.is_leaf() {
                self.leaf_of[node.max as usize] = NIL;
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
            self.free.push(x);
        }
    }

    // ---- internals ----

    #[inline]
    fn node(&self, x: u32) -> &Node {
        &self.nodes[x as usize]
    }

    #[inline]
    fn node_mut(&mut self, x: u32) -> &mut Node {
        &mut self.nodes[x as usize]
    }

    #[inline]
    fn h(&self, x: u32) -> i32 {
        if x == NIL {
            -1
        } else {
            self.node(x).height as i32
        }
    }

    fn as_root(&mut self, x: u32) -> PermTree {
        if x != NIL {
            self.node_mut(x).parent = NIL;
        }
        PermTree { root: x }
    }

    fn alloc(&mut self, node: Node) -> u32 {
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn update(&mut self, x: u32) {
        let (l, r) = {
            let n = self.node(x);
            (n.left, n.right)
        };
        let (ln, rn) = (self.node(l), self.node(r));
        let height = 1 + ln.height.max(rn.height);
        let size = ln.size + rn.size;
        let weight = ln.weight + rn.weight;
        let max = ln.max.max(rn.max);
        let n = self.node_mut(x);
        n.height = height;
        n.size = size;
        n.weight = weight;
        n.max = max;
    }

    fn set_children(&mut self, x: u32, l: u32, r: u32) {
        {
            let n = self.node_mut(x);
            n.left = l;
            n.right = r;
        }
        self.node_mut(l).parent = x;
        self.node_mut(r).parent = x;
        self.update(x);
    }

    fn make(&mut self, l: u32, r: u32) -> u32 {
        let id = self.alloc(Node { left: NIL, right: NIL, parent: NIL, size: 0, weight: 0, max: 0, height: 0 });
        self.set_children(id, l, r);
        id
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        let y = self.node(x).left;
        let (a, b) = (self.node(y).left, self.node(y).right);
        let c = self.node(x).right;
        self.set_children(x, b, c);
        self.set_children(y, a, x);
        y
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let y = self.node(x).right;
        let (b, c) = (self.node(y).left, self.node(y).right);
        let a = self.node(x).left;
        self.set_children(x, a, b);
        self.set_children(y, x, c);
        y
    }

    fn rebalance(&mut self, x: u32) -> u32 {
        let (l, r) = (self.node(x).left, self.node(x).right);
        let bal = self.h(l) - self.h(r);
        if bal > 1 {
            if self.h(self.node(l).left) < self.h(self.node(l).right) {
                let nl = self.rotate_left(l);
                let rr = self.node(x).right;
                self.set_children(x, nl, rr);
            }
            self.rotate_right(x)
        } else if bal < -1 {
            if self.h(self.node(r).right) < self.h(self.node(r).left) {
                let nr = self.rotate_right(r);
                let ll = self.node(x).left;
                self.set_children(x, ll, nr);
            }
            self.rotate_left(x)
        } else {
            self.update(x);
            x
        }
    }

    fn join_nodes(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (ha, hb) = (self.h(a), self.h(b));
        if ha > hb + 1 {
            let (al, ar) = (self.node(a).left, self.node(a).right);
            let r = self.join_nodes(ar, b);
            self.set_children(a, al, r);
            self.rebalance(a)
        } else if hb > ha + 1 {
            let (bl, br) = (self.node(b).left, self.node(b).right);
            let l = self.join_nodes(a, bl);
            self.set_children(b, l, br);
            self.rebalance(b)
        } else {
            self.make(a, b)
        }
    }

    fn split_node(&mut self, x: u32, m: u32) -> (u32, u32) {
        if x == NIL || m == 0 {
            return (NIL, x);
        }
        if m >= self.node(x).size {
            return (x, NIL);
        }
        let (l, r) = (self.node(x).left, self.node(x).right);
        self.free.push(x);
        self.node_mut(l).parent = NIL;
        self.node_mut(r).parent = NIL;
        let ls = self.node(l).size;
        if m == ls {
            (l, r)
        } else if m < ls {
            let (a, b) = self.split_node(l, m);
            (a, self.join_nodes(b, r))
        } else {
            let (a, b) = self.split_node(r, m - ls);
            (self.join_nodes(l, a), b)
        }
    }
}
