//! Morphisms of n-trees: levelwise maps commuting with the structure maps and
//! order preserving on every fiber.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::{Leaf, Tree};

/// Upper bound on hom-set sizes produced by [`hom_set`].
pub const MAX_HOM_SET: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TreeMorphism {
    source: Tree,
    target: Tree,
    /// `maps[m][i] = sigma_m(i)`, 0-based, for `m` in `0..=n`.
    maps: Vec<Vec<usize>>,
}

/// A failed condition reported by [`TreeMorphism::violations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    BaseNotIdentity,
    NotCommuting { level: usize, element: usize },
    FiberOrder { level: usize, element: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "{s}"),
            Violation::BaseNotIdentity => write!(f, "sigma_0 is not the identity"),
            Violation::NotCommuting { level, element } => write!(
                f,
                "square at level {level} fails for element {}",
                element + 1
            ),
            Violation::FiberOrder { level, element } => write!(
                f,
                "sigma_{level} reverses order after element {}",
                element + 1
            ),
        }
    }
}

fn violations(source: &Tree, target: &Tree, maps: &[Vec<usize>]) -> Vec<Violation> {
    let n = source.height();
    let mut out = Vec::new();
    if target.height() != n {
        out.push(Violation::Shape(format!(
            "heights differ ({n} vs {})",
            target.height()
        )));
        return out;
    }
    if maps.len() != n + 1 {
        out.push(Violation::Shape(format!(
            "expected {} level maps, got {}",
            n + 1,
            maps.len()
        )));
        return out;
    }
    for (m, map) in maps.iter().enumerate() {
        if map.len() != source.level(m) {
            out.push(Violation::Shape(format!(
                "sigma_{m} has {} entries, source level has {}",
                map.len(),
                source.level(m)
            )));
        } else if let Some(i) = map.iter().position(|&v| v >= target.level(m)) {
            out.push(Violation::Shape(format!(
                "sigma_{m}({}) lies outside the target level",
                i + 1
            )));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if maps[0] != [0] {
        out.push(Violation::BaseNotIdentity);
    }
    for m in 1..=n {
        let rho = source.map(m - 1);
        let xi = target.map(m - 1);
        for i in 0..source.level(m) {
            if xi[maps[m][i]] != maps[m - 1][rho[i]] {
                out.push(Violation::NotCommuting {
                    level: m,
                    element: i,
                });
            }
            if i + 1 < source.level(m) && rho[i] == rho[i + 1] && maps[m][i] > maps[m][i + 1] {
                out.push(Violation::FiberOrder {
                    level: m,
                    element: i,
                });
            }
        }
    }
    out
}

impl TreeMorphism {
    pub fn new(source: Tree, target: Tree, maps: Vec<Vec<usize>>) -> Result<TreeMorphism> {
        let problems = violations(&source, &target, &maps);
        if let Some(first) = problems.first() {
            return Err(Error::InvalidMorphism(format!(
                "{source} -> {target}: {first}"
            )));
        }
        Ok(TreeMorphism {
            source,
            target,
            maps,
        })
    }

    /// Diagnostics for arbitrary data; empty iff the data form a morphism.
    pub fn violations(source: &Tree, target: &Tree, maps: &[Vec<usize>]) -> Vec<Violation> {
        violations(source, target, maps)
    }

    pub fn validate(&self) -> bool {
        violations(&self.source, &self.target, &self.maps).is_empty()
    }

    pub fn identity(tree: &Tree) -> TreeMorphism {
        TreeMorphism {
            source: tree.clone(),
            target: tree.clone(),
            maps: tree.levels().iter().map(|&k| (0..k).collect()).collect(),
        }
    }

    /// The unique morphism into `U_n`.
    pub fn to_unit(tree: &Tree) -> TreeMorphism {
        TreeMorphism {
            source: tree.clone(),
            target: Tree::unit(tree.height()),
            maps: tree.levels().iter().map(|&k| vec![0; k]).collect(),
        }
    }

    pub fn source(&self) -> &Tree {
        &self.source
    }

    pub fn target(&self) -> &Tree {
        &self.target
    }

    pub fn height(&self) -> usize {
        self.source.height()
    }

    pub fn map(&self, m: usize) -> &[usize] {
        &self.maps[m]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .maps
                .iter()
                .all(|m| m.iter().enumerate().all(|(i, &v)| i == v))
    }

    pub fn is_surjective_at(&self, m: usize) -> bool {
        let mut hit = vec![false; self.target.level(m)];
        for &v in &self.maps[m] {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Surjective on tips (level `n`).
    pub fn is_tip_surjective(&self) -> bool {
        self.is_surjective_at(self.height())
    }

    pub fn is_tip_bijective(&self) -> bool {
        self.is_tip_surjective() && self.source.tips() == self.target.tips()
    }

    /// `self ∘ sigma`.
    pub fn after(&self, sigma: &TreeMorphism) -> Result<TreeMorphism> {
        compose(self, sigma)
    }

    /// Levelwise preimage of the ancestry of `leaf`, re-indexed in order.
    pub fn fiber(&self, leaf: Leaf) -> Result<Tree> {
        if !self.target.is_leaf(leaf) {
            return Err(Error::Domain(format!(
                "{leaf} is not a leaf of {}",
                self.target
            )));
        }
        let n = self.height();
        let mut parents = Vec::with_capacity(n);
        // index of each source element inside the fiber level below
        let mut below: Vec<Option<usize>> = vec![Some(0)];
        for j in 1..=n {
            let mut index = vec![None; self.source.level(j)];
            let mut map = Vec::new();
            if j <= leaf.height {
                let anchor = self.target.ancestor(leaf.height, leaf.position, j);
                for (x, slot) in index.iter_mut().enumerate() {
                    if self.maps[j][x] == anchor {
                        let p = below[self.source.parent(j - 1, x)]
                            .expect("commuting squares keep fibers closed under parents");
                        *slot = Some(map.len());
                        map.push(p);
                    }
                }
            }
            parents.push(map);
            below = index;
        }
        Tree::new(parents)
    }

    /// Fibers over every leaf of the target, in leaf order.
    pub fn fibers(&self) -> Vec<(Leaf, Tree)> {
        self.target
            .leaves()
            .into_iter()
            .map(|l| (l, self.fiber(l).expect("leaf of target")))
            .collect()
    }

    pub fn to_pasting(&self) -> PastingDiagram {
        PastingDiagram {
            base: self.target.clone(),
            labels: self.fibers(),
        }
    }

    /// Permutation `p` of the source tips with `p[i]` the position of tip `i`
    /// once tips are ordered by (image tip, own index).
    pub fn tip_permutation(&self) -> Result<Vec<usize>> {
        if !self.is_tip_surjective() {
            return Err(Error::Domain(format!(
                "{} -> {} is not surjective on tips",
                self.source, self.target
            )));
        }
        let top = &self.maps[self.height()];
        Ok(sort_positions(top.len(), |i| (top[i], i)))
    }

    /// The morphism `fiber(tau ∘ self, leaf) -> fiber(tau, leaf)` induced by `self`.
    pub fn restrict(&self, tau: &TreeMorphism, leaf: Leaf) -> Result<TreeMorphism> {
        let composite = compose(tau, self)?;
        let source = composite.fiber(leaf)?;
        let target = tau.fiber(leaf)?;
        let n = self.height();
        let mut maps = vec![vec![0]];
        for j in 1..=n {
            if j > leaf.height {
                maps.push(Vec::new());
                continue;
            }
            let anchor = tau.target.ancestor(leaf.height, leaf.position, j);
            let b_index = index_of(tau.maps[j].iter().map(|&v| v == anchor));
            let map = (0..self.source.level(j))
                .filter(|&x| composite.maps[j][x] == anchor)
                .map(|x| b_index[self.maps[j][x]].expect("image lies in the fiber"))
                .collect();
            maps.push(map);
        }
        TreeMorphism::new(source, target, maps)
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self
                .maps
                .iter()
                .map(|m| m.iter().map(|v| v + 1).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &MorphismJson) -> Result<TreeMorphism> {
        let maps = json
            .maps
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::InvalidMorphism("maps are 1-indexed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TreeMorphism::new(json.source.clone(), json.target.clone(), maps)
    }
}

impl fmt::Display for TreeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} via ", self.source, self.target)?;
        let levels: Vec<String> = self.maps[1..]
            .iter()
            .map(|m| {
                let entries: Vec<String> = m.iter().map(|v| (v + 1).to_string()).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        write!(f, "{}", levels.join(" "))
    }
}

/// `{"source": tree, "target": tree, "maps": [[...], ...]}` with 1-indexed
/// entries; trees are written in bracket notation and `maps[0] = [1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: Tree,
    pub target: Tree,
    pub maps: Vec<Vec<usize>>,
}

fn sort_positions<K: Ord>(len: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by_key(|&i| key(i));
    let mut position = vec![0; len];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    position
}

/// Running index among the `true` entries.
fn index_of(mask: impl Iterator<Item = bool>) -> Vec<Option<usize>> {
    let mut count = 0;
    mask.map(|b| {
        b.then(|| {
            count += 1;
            count - 1
        })
    })
    .collect()
}

/// `tau ∘ sigma`.
pub fn compose(tau: &TreeMorphism, sigma: &TreeMorphism) -> Result<TreeMorphism> {
    if sigma.target != tau.source {
        return Err(Error::BoundaryMismatch(format!(
            "target {} differs from source {}",
            sigma.target, tau.source
        )));
    }
    let maps = sigma
        .maps
        .iter()
        .zip(&tau.maps)
        .map(|(s, t)| s.iter().map(|&x| t[x]).collect())
        .collect();
    Ok(TreeMorphism {
        source: sigma.source.clone(),
        target: tau.target.clone(),
        maps,
    })
}

/// Inverse of a permutation given as `p[i] = image of i`.
pub fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// `π(τ ∘ σ)` assembled from `π(τ)`, `π(σ)` and the permutations of the
/// restrictions of `σ` over each tip of the final target.
pub fn tip_permutation_by_blocks(tau: &TreeMorphism, sigma: &TreeMorphism) -> Result<Vec<usize>> {
    let pi_tau = tau.tip_permutation()?;
    let pi_sigma = sigma.tip_permutation()?;
    let n = sigma.height();
    let sigma_top = sigma.map(n);
    let composite_top: Vec<usize> = sigma_top.iter().map(|&y| tau.map(n)[y]).collect();
    // order by (tau-block, sigma image, own index): the block composite
    let block = sort_positions(sigma_top.len(), |x| (pi_tau[sigma_top[x]], pi_sigma[x]));
    let mut result = vec![0; sigma_top.len()];
    let mut offset = 0;
    for u in 0..tau.target.tips() {
        let members: Vec<usize> = (0..sigma_top.len())
            .filter(|&x| composite_top[x] == u)
            .collect();
        let restricted = sigma.restrict(
            tau,
            Leaf {
                height: n,
                position: u,
            },
        )?;
        let inner = invert_permutation(&restricted.tip_permutation()?);
        for (r, &x) in members.iter().enumerate() {
            debug_assert_eq!(r, inner[block[x] - offset]);
            result[x] = offset + inner[block[x] - offset];
        }
        offset += members.len();
    }
    Ok(result)
}

/// Fiber data over the leaves of a base tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PastingDiagram {
    pub base: Tree,
    pub labels: Vec<(Leaf, Tree)>,
}

impl PastingDiagram {
    fn label(&self, leaf: Leaf) -> Result<&Tree> {
        self.labels
            .iter()
            .find(|(l, _)| *l == leaf)
            .map(|(_, t)| t)
            .ok_or_else(|| Error::Pasting(format!("no label over leaf {leaf}")))
    }

    /// First leaf above element `a` of level `m` (following first children).
    pub fn leaf_above(&self, m: usize, a: usize) -> Leaf {
        let mut level = m;
        let mut x = a;
        while level < self.base.height() {
            let children = self.base.children(level, x);
            if children.is_empty() {
                break;
            }
            x = children.start;
            level += 1;
        }
        Leaf {
            height: level,
            position: x,
        }
    }

    /// Checks that labels cover exactly the leaves and agree wherever two
    /// leaves share an ancestor.
    pub fn check(&self) -> Result<()> {
        let n = self.base.height();
        let leaves = self.base.leaves();
        if self.labels.len() != leaves.len() {
            return Err(Error::Pasting(format!(
                "{} labels for {} leaves",
                self.labels.len(),
                leaves.len()
            )));
        }
        for &leaf in &leaves {
            let t = self.label(leaf)?;
            if t.height() != n {
                return Err(Error::Pasting(format!(
                    "label over {leaf} has height {}, expected {n}",
                    t.height()
                )));
            }
            if leaf.height < n && t.level(leaf.height + 1) != 0 {
                return Err(Error::Pasting(format!(
                    "label over {leaf} is not degenerate above height {}",
                    leaf.height
                )));
            }
        }
        for (i, &u) in leaves.iter().enumerate() {
            for &v in &leaves[i + 1..] {
                let common = (0..=u.height.min(v.height))
                    .rev()
                    .find(|&j| {
                        self.base.ancestor(u.height, u.position, j)
                            == self.base.ancestor(v.height, v.position, j)
                    })
                    .unwrap_or(0);
                if self.label(u)?.truncate_to(common) != self.label(v)?.truncate_to(common) {
                    return Err(Error::Pasting(format!(
                        "labels over {u} and {v} disagree below height {common}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pastes the labels together; returns the morphism from the pasted tree
    /// onto the base.
    pub fn paste(&self) -> Result<TreeMorphism> {
        Ok(self.paste_indexed()?.0)
    }

    /// The label governing element `a` of level `j` of the base.
    pub fn label_above(&self, j: usize, a: usize) -> Result<&Tree> {
        self.label(self.leaf_above(j, a))
    }

    /// As [`PastingDiagram::paste`], also returning `index[j][a][x]`: the
    /// position in the pasted tree of element `x` of level `j` of the label
    /// governing base element `a`.
    pub fn paste_indexed(&self) -> Result<(TreeMorphism, Vec<Vec<Vec<usize>>>)> {
        self.check()?;
        let base = &self.base;
        let n = base.height();
        let mut parents = Vec::with_capacity(n);
        let mut maps = vec![vec![0]];
        // (a, x) -> index at the previous level; keyed by a then x
        let mut prev: Vec<Vec<usize>> = vec![vec![0]];
        let mut all = vec![prev.clone()];
        for j in 1..=n {
            let mut entries = Vec::new();
            for a in 0..base.level(j) {
                let label = self.label(self.leaf_above(j, a))?;
                let pa = base.parent(j - 1, a);
                for x in 0..label.level(j) {
                    let px = label.parent(j - 1, x);
                    let parent = *prev[pa].get(px).ok_or_else(|| {
                        Error::Pasting(format!("label over element {} is too large", a + 1))
                    })?;
                    entries.push((parent, a, x));
                }
            }
            entries.sort_unstable();
            let mut index: Vec<Vec<usize>> = (0..base.level(j))
                .map(|a| vec![0; self.label(self.leaf_above(j, a)).map_or(0, |t| t.level(j))])
                .collect();
            let mut map = Vec::with_capacity(entries.len());
            let mut sigma = Vec::with_capacity(entries.len());
            for (pos, &(parent, a, x)) in entries.iter().enumerate() {
                index[a][x] = pos;
                map.push(parent);
                sigma.push(a);
            }
            parents.push(map);
            maps.push(sigma);
            all.push(index.clone());
            prev = index;
        }
        let sigma = TreeMorphism::new(Tree::new(parents)?, base.clone(), maps)?;
        Ok((sigma, all))
    }
}

/// Inverse of [`TreeMorphism::to_pasting`].
pub fn from_pasting(diagram: &PastingDiagram) -> Result<TreeMorphism> {
    diagram.paste()
}

/// Every morphism `source -> target`, in lexicographic order of level maps.
pub fn hom_set(source: &Tree, target: &Tree) -> Result<Vec<TreeMorphism>> {
    let n = source.height();
    if target.height() != n {
        return Err(Error::Domain(format!(
            "heights differ ({n} vs {})",
            target.height()
        )));
    }
    let mut tasks = Vec::new();
    for m in 0..n {
        for x in 0..source.level(m) {
            tasks.push((m, x));
        }
    }
    let mut maps: Vec<Vec<usize>> = source.levels().iter().map(|&k| vec![0; k]).collect();
    let mut out = Vec::new();
    hom_search(source, target, &tasks, 0, &mut maps, &mut out)?;
    Ok(out)
}

fn hom_search(
    source: &Tree,
    target: &Tree,
    tasks: &[(usize, usize)],
    t: usize,
    maps: &mut Vec<Vec<usize>>,
    out: &mut Vec<TreeMorphism>,
) -> Result<()> {
    let Some(&(m, x)) = tasks.get(t) else {
        if out.len() >= MAX_HOM_SET {
            return Err(Error::Bounds(format!(
                "hom set {source} -> {target} exceeds {MAX_HOM_SET} morphisms"
            )));
        }
        out.push(TreeMorphism {
            source: source.clone(),
            target: target.clone(),
            maps: maps.clone(),
        });
        return Ok(());
    };
    let from = source.children(m, x);
    let into = target.children(m, maps[m][x]);
    // nondecreasing sequences of length |from| with values in `into`
    #[allow(clippy::too_many_arguments)]
    fn choose(
        slots: &[usize],
        lo: usize,
        into: &std::ops::Range<usize>,
        source: &Tree,
        target: &Tree,
        tasks: &[(usize, usize)],
        t: usize,
        m: usize,
        maps: &mut Vec<Vec<usize>>,
        out: &mut Vec<TreeMorphism>,
    ) -> Result<()> {
        let Some((&first, rest)) = slots.split_first() else {
            return hom_search(source, target, tasks, t + 1, maps, out);
        };
        for v in lo..into.end {
            maps[m + 1][first] = v;
            choose(rest, v, into, source, target, tasks, t, m, maps, out)?;
        }
        Ok(())
    }
    let slots: Vec<usize> = from.collect();
    choose(
        &slots, into.start, &into, source, target, tasks, t, m, maps, out,
    )
}

/// `T^(p)` and its inclusion into `T`.
pub fn prune(tree: &Tree) -> Result<(Tree, TreeMorphism)> {
    if tree.tips() == 0 {
        return Err(Error::Degenerate(format!(
            "{tree} has no tips, so its pruned subtree would be empty"
        )));
    }
    let n = tree.height();
    let keep: Vec<Vec<bool>> = (0..=n)
        .map(|m| {
            (0..tree.level(m))
                .map(|x| !tree.descendants(m, x, n).is_empty())
                .collect()
        })
        .collect();
    let index: Vec<Vec<Option<usize>>> = keep.iter().map(|k| index_of(k.iter().copied())).collect();
    let mut parents = Vec::with_capacity(n);
    let mut maps = vec![vec![0]];
    for m in 1..=n {
        let kept: Vec<usize> = (0..tree.level(m)).filter(|&x| keep[m][x]).collect();
        parents.push(
            kept.iter()
                .map(|&x| index[m - 1][tree.parent(m - 1, x)].expect("parent of kept is kept"))
                .collect(),
        );
        maps.push(kept);
    }
    let pruned = Tree::new(parents)?;
    let inclusion = TreeMorphism::new(pruned.clone(), tree.clone(), maps)?;
    Ok((pruned, inclusion))
}

/// `sigma^(p) : T^(p) -> S^(p)`.
pub fn prune_morphism(sigma: &TreeMorphism) -> Result<TreeMorphism> {
    let (source, i_source) = prune(sigma.source())?;
    let (target, i_target) = prune(sigma.target())?;
    let maps = (0..=sigma.height())
        .map(|m| {
            let lookup = invert_partial(i_target.map(m), sigma.target().level(m));
            i_source
                .map(m)
                .iter()
                .map(|&x| lookup[sigma.map(m)[x]].expect("images of kept elements are kept"))
                .collect()
        })
        .collect();
    TreeMorphism::new(source, target, maps)
}

fn invert_partial(injection: &[usize], size: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; size];
    for (i, &v) in injection.iter().enumerate() {
        out[v] = Some(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::enumerate_trees;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn tip(p: usize, n: usize) -> Leaf {
        Leaf {
            height: n,
            position: p,
        }
    }

    fn switch() -> TreeMorphism {
        TreeMorphism::new(
            t("[[*],[*]]"),
            t("[[*,*]]"),
            vec![vec![0], vec![0, 0], vec![1, 0]],
        )
        .unwrap()
    }

    /// All level-map tuples satisfying the definition, by brute force over
    /// every function.
    fn brute_hom(source: &Tree, target: &Tree) -> Vec<Vec<Vec<usize>>> {
        let sizes = source.levels();
        let ranges = target.levels();
        let mut all: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for (k, r) in sizes.iter().zip(&ranges) {
            let mut level_maps: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..*k {
                level_maps = level_maps
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..*r).map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            all = all
                .into_iter()
                .flat_map(|prefix| {
                    level_maps.iter().map(move |lm| {
                        let mut p = prefix.clone();
                        p.push(lm.clone());
                        p
                    })
                })
                .collect();
        }
        all.into_iter()
            .filter(|maps| TreeMorphism::violations(source, target, maps).is_empty())
            .collect()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn validation() {
        let x = t("[[*,*],[],[*]]");
        assert!(TreeMorphism::identity(&x).validate());
        assert!(switch().validate());
        let within = TreeMorphism::new(
            t("[[*,*]]"),
            t("[[*,*]]"),
            vec![vec![0], vec![0], vec![1, 0]],
        );
        assert!(matches!(within, Err(Error::InvalidMorphism(_))));
        let v = TreeMorphism::violations(
            &t("[[*,*]]"),
            &t("[[*,*]]"),
            &[vec![0], vec![0], vec![1, 0]],
        );
        assert_eq!(
            v,
            vec![Violation::FiberOrder {
                level: 2,
                element: 0
            }]
        );
    }

    #[test]
    fn composition() {
        let s = switch();
        let id = TreeMorphism::identity(s.target());
        assert_eq!(compose(&id, &s).unwrap(), s);
        let back = TreeMorphism::new(
            t("[[*,*]]"),
            t("[[*,*]]"),
            vec![vec![0], vec![0], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(compose(&back, &s).unwrap(), s);
        assert!(matches!(compose(&s, &s), Err(Error::BoundaryMismatch(_))));
    }

    #[test]
    fn switch_cannot_be_composed_with_itself() {
        // the switch leaves the two-branch tree, so switch ∘ switch is undefined
        let sw = switch();
        assert!(compose(&sw, &sw).is_err());
        // endomorphisms of the two-branch tree only move whole branches in order
        let x = t("[[*],[*]]");
        let endos = hom_set(&x, &x).unwrap();
        assert_eq!(endos.len(), 3);
        assert_eq!(endos.iter().filter(|m| m.is_tip_bijective()).count(), 1);
    }

    #[test]
    fn fibers() {
        let sigma =
            TreeMorphism::new(t("[*,*,*]"), t("[*,*]"), vec![vec![0], vec![0, 0, 1]]).unwrap();
        assert_eq!(sigma.fiber(tip(0, 1)).unwrap(), t("[*,*]"));
        assert_eq!(sigma.fiber(tip(1, 1)).unwrap(), t("[*]"));

        let x = t("[[*,*],[*]]");
        let id = TreeMorphism::identity(&x);
        assert_eq!(id.fiber(tip(1, 2)).unwrap(), t("[[*]]"));
        assert_eq!(id.fiber(tip(2, 2)).unwrap(), t("[[*]]"));

        let sw = switch();
        assert_eq!(sw.fiber(tip(0, 2)).unwrap(), t("[[],[*]]"));
        assert_eq!(sw.fiber(tip(1, 2)).unwrap(), t("[[*],[]]"));
        assert!(sw
            .fiber(Leaf {
                height: 1,
                position: 0
            })
            .is_err());

        // non-tip leaf
        let y = t("[[],[*]]");
        let f = TreeMorphism::identity(&y)
            .fiber(Leaf {
                height: 1,
                position: 0,
            })
            .unwrap();
        assert_eq!(f.levels(), vec![1, 1, 0]);
    }

    #[test]
    fn hom_sets_match_brute_force() {
        let trees: Vec<Tree> = enumerate_trees(2, 3, false)
            .unwrap()
            .into_iter()
            .filter(|t| t.levels().iter().sum::<usize>() <= 6)
            .collect();
        for a in &trees {
            for b in &trees {
                let fast: Vec<Vec<Vec<usize>>> = hom_set(a, b)
                    .unwrap()
                    .into_iter()
                    .map(|m| m.maps().to_vec())
                    .collect();
                let mut slow = brute_hom(a, b);
                slow.sort();
                assert_eq!(fast, slow, "{a} -> {b}");
            }
        }
    }

    #[test]
    fn omega_one_hom_counts_are_binomial() {
        for m in 0..=4 {
            for n in 0..=4 {
                let count = hom_set(&Tree::corolla(m), &Tree::corolla(n)).unwrap().len();
                // nondecreasing maps [m] -> [n]
                let expected = if n == 0 {
                    usize::from(m == 0)
                } else {
                    binomial(m + n - 1, m)
                };
                assert_eq!(count, expected, "[{m}] -> [{n}]");
            }
        }
    }

    #[test]
    fn two_branch_to_one_branch() {
        let homs = hom_set(&t("[[*],[*]]"), &t("[[*,*]]")).unwrap();
        let bijective: Vec<_> = homs.iter().filter(|m| m.is_tip_bijective()).collect();
        assert_eq!(bijective.len(), 2);
        let perms: Vec<Vec<usize>> = bijective
            .iter()
            .map(|m| m.tip_permutation().unwrap())
            .collect();
        assert!(perms.contains(&vec![0, 1]));
        assert!(perms.contains(&vec![1, 0]));
    }

    #[test]
    fn pasting_round_trip_examples() {
        let base = t("[*,*]");
        let diagram = PastingDiagram {
            base: base.clone(),
            labels: vec![(tip(0, 1), t("[*,*]")), (tip(1, 1), t("[*]"))],
        };
        let sigma = from_pasting(&diagram).unwrap();
        assert_eq!(sigma.source(), &t("[*,*,*]"));
        assert_eq!(sigma.map(1), &[0, 0, 1]);

        let sw = switch();
        assert_eq!(from_pasting(&sw.to_pasting()).unwrap(), sw);

        let x = t("[[*,*],[],[*]]");
        let id = TreeMorphism::identity(&x);
        assert_eq!(from_pasting(&id.to_pasting()).unwrap(), id);

        let bad = PastingDiagram {
            base: t("[[*,*]]"),
            labels: vec![(tip(0, 2), t("[[*]]")), (tip(1, 2), t("[[*],[*]]"))],
        };
        assert!(matches!(from_pasting(&bad), Err(Error::Pasting(_))));
    }

    #[test]
    fn tip_permutations() {
        let x = t("[[*,*],[*]]");
        assert_eq!(
            TreeMorphism::identity(&x).tip_permutation().unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(switch().tip_permutation().unwrap(), vec![1, 0]);
        let not_onto = TreeMorphism::new(t("[*]"), t("[*,*]"), vec![vec![0], vec![0]]).unwrap();
        assert!(not_onto.tip_permutation().is_err());
    }

    #[test]
    fn pruning() {
        let (p, inc) = prune(&t("[[],[*]]")).unwrap();
        assert_eq!(p, t("[[*]]"));
        assert_eq!(inc.map(1), &[1]);
        let x = t("[[*,*],[*]]");
        let (q, id) = prune(&x).unwrap();
        assert_eq!(q, x);
        assert!(id.is_identity());
        assert!(matches!(prune(&t("[[]]")), Err(Error::Degenerate(_))));

        let a = t("[[*,*],[]]");
        let b = t("[[],[],[*,*]]");
        let c = t("[[*,*]]");
        for tree in [&a, &b, &c] {
            assert_eq!(prune(tree).unwrap().0, c);
        }
    }

    #[test]
    fn prune_morphism_between_pruned_trees_is_itself() {
        let sw = switch();
        assert_eq!(prune_morphism(&sw).unwrap(), sw);
        let y = t("[[],[*]]");
        assert!(prune_morphism(&TreeMorphism::identity(&y))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn json_round_trip() {
        let sw = switch();
        let text = serde_json::to_string(&sw.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"source":"[[*],[*]]","target":"[[*,*]]","maps":[[1],[1,1],[2,1]]}"#
        );
        let back: MorphismJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TreeMorphism::from_json(&back).unwrap(), sw);
    }
}
