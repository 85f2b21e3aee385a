use higher_operads::omega::{compose, hom_set, tip_permutation_by_blocks};
use higher_operads::{enumerate_trees, Leaf, Tree, TreeMorphism};

fn pruned_trees(max_tips: usize) -> Vec<Tree> {
    (1..=2)
        .flat_map(|h| enumerate_trees(h, max_tips, true).unwrap())
        .collect()
}

fn surjections(a: &Tree, b: &Tree) -> Vec<TreeMorphism> {
    hom_set(a, b)
        .unwrap()
        .into_iter()
        .filter(TreeMorphism::is_tip_surjective)
        .collect()
}

/// Sorting tips by (image, index), computed without the library.
fn sort_oracle(images: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by_key(|&i| (images[i], i));
    let mut p = vec![0; images.len()];
    for (pos, &i) in order.iter().enumerate() {
        p[i] = pos;
    }
    p
}

#[test]
fn block_permutations_match_direct() {
    let trees = pruned_trees(4);
    let mut checked = 0;
    for a in &trees {
        for b in trees.iter().filter(|b| b.height() == a.height()) {
            for sigma in surjections(a, b) {
                for c in trees.iter().filter(|c| c.height() == a.height()) {
                    for tau in surjections(b, c) {
                        let direct = compose(&tau, &sigma).unwrap().tip_permutation().unwrap();
                        assert_eq!(tip_permutation_by_blocks(&tau, &sigma).unwrap(), direct);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} pairs");
}

#[test]
fn tip_permutation_oracle() {
    for a in pruned_trees(4) {
        for b in pruned_trees(4).iter().filter(|b| b.height() == a.height()) {
            for s in surjections(&a, b) {
                let top = s.map(s.height());
                assert_eq!(s.tip_permutation().unwrap(), sort_oracle(top), "{s}");
            }
        }
    }
}

#[test]
fn fibers_of_composites_restrict() {
    let trees = pruned_trees(3);
    for a in trees.iter().filter(|t| t.height() == 2) {
        for b in trees.iter().filter(|t| t.height() == 2) {
            for sigma in surjections(a, b) {
                for c in trees.iter().filter(|t| t.height() == 2) {
                    for tau in surjections(b, c) {
                        let composite = compose(&tau, &sigma).unwrap();
                        for p in 0..c.tips() {
                            let leaf = Leaf {
                                height: 2,
                                position: p,
                            };
                            let r = sigma.restrict(&tau, leaf).unwrap();
                            assert_eq!(r.source(), &composite.fiber(leaf).unwrap());
                            assert_eq!(r.target(), &tau.fiber(leaf).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn hom_counts_between_corollas() {
    // order-preserving maps [a] -> [b] number C(a + b - 1, a)
    for a in 0..=4usize {
        for b in 0..=4usize {
            let homs = hom_set(&Tree::corolla(a), &Tree::corolla(b)).unwrap().len();
            let expected = if b == 0 {
                usize::from(a == 0)
            } else {
                (0..a).fold(1, |acc, i| acc * (a + b - 1 - i) / (i + 1))
            };
            assert_eq!(homs, expected, "[{a}] -> [{b}]");
        }
    }
}
