use proptest::prelude::*;

use sbt_core::{Forest, PermTree};

#[derive(Clone, Debug)]
enum Op {
    Split { tree: usize, at: usize },
    Join { a: usize, b: usize },
    RangeMax { tree: usize, i: usize, j: usize },
    Transpose { tree: usize, cuts: [usize; 3] },
    Lookup { tree: usize, at: usize },
    Rebuild { tree: usize },
}

fn op() -> impl Strategy<Value = Op> {
    let idx = 0usize..1000;
    prop_oneof![
        (idx.clone(), idx.clone()).prop_map(|(tree, at)| Op::Split { tree, at }),
        (idx.clone(), idx.clone()).prop_map(|(a, b)| Op::Join { a, b }),
        (idx.clone(), idx.clone(), idx.clone()).prop_map(|(tree, i, j)| Op::RangeMax { tree, i, j }),
        (idx.clone(), [idx.clone(), idx.clone(), idx.clone()]).prop_map(|(tree, cuts)| Op::Transpose { tree, cuts }),
        (idx.clone(), idx.clone()).prop_map(|(tree, at)| Op::Lookup { tree, at }),
        idx.prop_map(|tree| Op::Rebuild { tree }),
    ]
}

/// Runs `ops` against a forest and a list of plain vectors side by side.
fn run(initial: Vec<u32>, ops: Vec<Op>) -> Result<(), TestCaseError> {
    let mut forest = Forest::new();
    let mut trees: Vec<(PermTree, Vec<u32>)> = vec![(forest.build(&initial).unwrap(), initial)];
    for op in ops {
        let count = trees.len();
        match op {
            Op::Split { tree, at } => {
                let (t, v) = trees.swap_remove(tree % count);
                let m = at % (v.len() + 1);
                let (a, b) = forest.split(t, m).unwrap();
                let (va, vb) = v.split_at(m);
                trees.push((a, va.to_vec()));
                trees.push((b, vb.to_vec()));
            }
            Op::Join { a, b } => {
                if count < 2 {
                    continue;
                }
                let (ta, mut va) = trees.swap_remove(a % count);
                let (tb, vb) = trees.swap_remove(b % (count - 1));
                va.extend(vb);
                trees.push((forest.join(ta, tb), va));
            }
            Op::RangeMax { tree, i, j } => {
                let (t, v) = &trees[tree % count];
                if v.is_empty() {
                    prop_assert!(forest.range_max(t, 1, 1).is_err());
                    continue;
                }
                let (mut i, mut j) = (i % v.len() + 1, j % v.len() + 1);
                if i > j {
                    std::mem::swap(&mut i, &mut j);
                }
                let (max, pos) = forest.range_max(t, i, j).unwrap();
                let expected = *v[i - 1..j].iter().max().unwrap();
                prop_assert_eq!(max, expected);
                prop_assert_eq!(v[pos - 1], expected);
            }
            Op::Transpose { tree, cuts } => {
                let (t, v) = &mut trees[tree % count];
                let mut c = cuts.map(|x| x % (v.len() + 2));
                c.sort_unstable();
                let [i, j, k] = c;
                let valid = 1 <= i && i < j && j < k && k <= v.len() + 1;
                let result = forest.apply_transposition(t, i, j, k);
                prop_assert_eq!(result.is_ok(), valid);
                if valid {
                    v[i - 1..k - 1].rotate_left(j - i);
                }
            }
            Op::Lookup { tree, at } => {
                let (t, v) = &trees[tree % count];
                if v.is_empty() {
                    continue;
                }
                let p = at % v.len();
                prop_assert_eq!(forest.element_at(t, p + 1).unwrap(), v[p]);
                prop_assert_eq!(forest.position_of(t, v[p]).unwrap(), p + 1);
            }
            Op::Rebuild { tree } => {
                let (t, mut v) = trees.swap_remove(tree % count);
                forest.release(t);
                v.reverse();
                trees.push((forest.build(&v).unwrap(), v));
            }
        }
        for (t, v) in &trees {
            forest.audit(t).unwrap();
            prop_assert_eq!(&forest.to_sequence(t), v);
            prop_assert_eq!(forest.len(t), v.len());
            if let Some(h) = forest.height(t) {
                let bound = 1.4405 * ((v.len() + 2) as f64).log2();
                prop_assert!((h as f64) <= bound, "height {} for {} leaves", h, v.len());
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forest_matches_vectors(
        initial in (1usize..300).prop_flat_map(|n| Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()),
        ops in prop::collection::vec(op(), 1..120),
    ) {
        run(initial, ops)?;
    }
}

#[test]
fn weights_follow_moves() {
    let mut forest = Forest::new();
    let seq = [4u32, 0, 3, 1, 2];
    let weights = [1u32, 0, 1, 0, 1];
    let mut t = forest.build_weighted(&seq, &weights).unwrap();
    forest.apply_transposition(&mut t, 1, 3, 6).unwrap();
    // now 3 1 2 4 0 with weights 1 0 1 1 0
    assert_eq!(forest.to_sequence(&t), vec![3, 1, 2, 4, 0]);
    let prefix: Vec<u64> = (0..=5).map(|p| forest.weight_prefix(&t, p).unwrap()).collect();
    assert_eq!(prefix, vec![0, 1, 1, 2, 3, 3]);
}
