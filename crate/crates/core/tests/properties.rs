use higher_operads::{enumerate_trees, Tree};
use proptest::prelude::*;

/// Grows levels on top of `prefix` until height `n`; each new level draws its
/// parents (sorted) from the raw bytes.
fn grow(mut parents: Vec<Vec<usize>>, raw: &[Vec<u8>], n: usize) -> Tree {
    let mut width = parents.last().map_or(1, Vec::len);
    let mut rows = raw.iter();
    while parents.len() < n {
        let row = rows.next().map(Vec::as_slice).unwrap_or(&[]);
        let mut level: Vec<usize> = if width == 0 {
            Vec::new()
        } else {
            row.iter().map(|&b| b as usize % width).collect()
        };
        level.sort_unstable();
        width = level.len();
        parents.push(level);
    }
    Tree::new(parents).expect("sorted parent maps form a tree")
}

fn raw() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(any::<u8>(), 0..4), 4)
}

fn levels(t: &Tree, k: usize) -> Vec<Vec<usize>> {
    (0..k).map(|m| t.map(m).to_vec()).collect()
}

proptest! {
    #[test]
    fn print_parse_round_trip(n in 0usize..4, r in raw()) {
        let t = grow(Vec::new(), &r, n);
        let back: Tree = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn composition_is_associative(
        n in 1usize..4, k in 0usize..3, base in raw(), a in raw(), b in raw(), c in raw()
    ) {
        prop_assume!(k < n);
        let prefix = levels(&grow(Vec::new(), &base, k), k);
        let (a, b, c) = (grow(prefix.clone(), &a, n), grow(prefix.clone(), &b, n), grow(prefix, &c, n));
        let left = a.compose(&b, k).unwrap().compose(&c, k).unwrap();
        let right = a.compose(&b.compose(&c, k).unwrap(), k).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.tips(), a.tips() + b.tips() + c.tips());
    }

    #[test]
    fn interchange(
        base in raw(), ra in raw(), rc in raw(), a in raw(), b in raw(), c in raw(), d in raw(),
        dirs in prop::sample::select(vec![(0usize, 1usize), (0, 2), (1, 2)])
    ) {
        let (k, j) = dirs;
        let n = 3;
        let lower = levels(&grow(Vec::new(), &base, k), k);
        let ja = levels(&grow(lower.clone(), &ra, j), j);
        let jc = levels(&grow(lower, &rc, j), j);
        let (a, b) = (grow(ja.clone(), &a, n), grow(ja, &b, n));
        let (c, d) = (grow(jc.clone(), &c, n), grow(jc, &d, n));
        let left = a.compose(&b, j).unwrap().compose(&c.compose(&d, j).unwrap(), k).unwrap();
        let right = a.compose(&c, k).unwrap().compose(&b.compose(&d, k).unwrap(), j).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn decomposition_recomposes(n in 1usize..4, k in 0usize..3, r in raw()) {
        prop_assume!(k < n);
        let t = grow(Vec::new(), &r, n);
        prop_assume!(!t.is_identity_cell(k));
        let parts = t.canonical_decomposition(k).unwrap();
        prop_assert_eq!(parts.len(), t.level(k + 1));
        prop_assert_eq!(Tree::compose_all(&parts, k).unwrap(), t);
    }

    #[test]
    fn suspension_truncates_back(n in 0usize..4, r in raw()) {
        let t = grow(Vec::new(), &r, n);
        prop_assert_eq!(t.suspend().truncate().unwrap(), t.clone());
        prop_assert_eq!(t.suspend().tips(), 0);
    }
}

#[test]
fn pruned_two_trees_by_tips() {
    let trees = enumerate_trees(2, 7, true).unwrap();
    for k in 1..=7 {
        let count = trees.iter().filter(|t| t.tips() == k).count();
        assert_eq!(count, 1 << (k - 1), "pruned 2-trees with {k} tips");
    }
}
