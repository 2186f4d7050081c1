//! Plain permutations and the transposition operation on them.

use std::fmt;

use crate::error::PermError;

/// A permutation of `0..n`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(elems: Vec<u32>) -> Result<Self, PermError> {
        let n = elems.len();
        let mut seen = vec![false; n];
        for &v in &elems {
            let v = v as usize;
            if v >= n {
                return Err(PermError::Invalid(format!("value {v} out of range 0..{n}")));
            }
            if seen[v] {
                return Err(PermError::Invalid(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation(elems))
    }

    /// Reads a 1-based permutation such as `[3, 1, 2]`.
    pub fn from_one_based(elems: &[u32]) -> Result<Self, PermError> {
        if elems.contains(&0) {
            return Err(PermError::Invalid("1-based input contains 0".into()));
        }
        Self::new(elems.iter().map(|&v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn apply(&mut self, t: Transposition) -> Result<(), PermError> {
        t.check(self.0.len())?;
        t.apply_to(&mut self.0);
        Ok(())
    }
}

impl fmt::Display for Permutation {
    /// 1-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

/// `trans(i, j, k)`: exchanges the adjacent segments `[i, j)` and `[j, k)`.
///
/// Cut points are 0-based gaps, `0 <= i < j < k <= n`. Cut point `c` is the
/// gap in front of position `c` (`c = n` is the gap after the last element),
/// which is also the index of the black edge the cut acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Transposition {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Transposition { i, j, k }
    }

    pub fn check(&self, len: usize) -> Result<(), PermError> {
        if self.i < self.j && self.j < self.k && self.k <= len {
            Ok(())
        } else {
            Err(PermError::BadTransposition { i: self.i, j: self.j, k: self.k, len })
        }
    }

    /// Applies to a slice. Panics if the cut points are out of range.
    pub fn apply_to<T>(&self, seq: &mut [T]) {
        seq[self.i..self.k].rotate_left(self.j - self.i);
    }

    /// The transposition undoing this one.
    pub fn inverse(&self) -> Transposition {
        Transposition { i: self.i, j: self.i + (self.k - self.j), k: self.k }
    }
}

impl fmt::Display for Transposition {
    /// External 1-based form `t i j k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t {} {} {}", self.i + 1, self.j + 1, self.k + 1)
    }
}

/// Replays `moves` on a copy of `perm` and returns the result.
pub fn replay(perm: &Permutation, moves: &[Transposition]) -> Result<Permutation, PermError> {
    let mut p = perm.clone();
    for &t in moves {
        p.apply(t)?;
    }
    Ok(p)
}

/// Number of transpositions in `0..=n` cut-point space, `C(n + 1, 3)`.
pub fn transposition_count(n: usize) -> usize {
    let m = n + 1;
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

/// Every transposition on `n` elements in lexicographic `(i, j, k)` order.
pub fn all_transpositions(n: usize) -> impl Iterator<Item = Transposition> {
    (0..=n).flat_map(move |i| {
        (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |k| Transposition { i, j, k }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn transposition_exchanges_segments() {
        let mut v = vec![1, 0, 2];
        Transposition::new(0, 1, 2).apply_to(&mut v);
        assert_eq!(v, vec![0, 1, 2]);
        let mut v = vec!['a', 'b', 'c', 'd'];
        Transposition::new(0, 2, 4).apply_to(&mut v);
        assert_eq!(v, vec!['c', 'd', 'a', 'b']);
    }

    #[test]
    fn inverse_undoes() {
        let t = Transposition::new(1, 2, 6);
        let mut v: Vec<u32> = (0..7).collect();
        t.apply_to(&mut v);
        t.inverse().apply_to(&mut v);
        assert_eq!(v, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn enumerates_all_cut_triples() {
        for n in 0..7 {
            assert_eq!(all_transpositions(n).count(), transposition_count(n));
        }
        assert!(Transposition::new(1, 1, 2).check(3).is_err());
        assert!(Transposition::new(0, 1, 4).check(3).is_err());
    }

    #[test]
    fn display_is_one_based() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.to_string(), "3 1 2");
        assert_eq!(Transposition::new(0, 1, 3).to_string(), "t 1 2 4");
    }
}
