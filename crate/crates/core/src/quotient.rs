//! Quotients of finite categories obtained by forcing chosen arrows to become
//! identities, and the relation generators used on chain categories.

use std::collections::HashMap;

use crate::category::{Arrow, FinCategory};
use crate::error::{Error, Result};
use crate::hoperad::{ChainCategory, Move, MoveKind};
use crate::omega::{prune, prune_morphism, TreeMorphism};
use crate::trees::{Leaf, Tree};

/// Families of composing moves declared to be identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// The second composed step is an identity.
    TU,
    /// The first composed step is an identity.
    TT,
    /// Over every leaf of the composite's target at most one of the two
    /// composed steps is non-trivial.
    Tensor,
    /// One composed step becomes an identity after pruning.
    Prune,
    /// Both composed steps are identities below the top level.
    StrictAssoc,
}

/// Tuning for [`relation_generators`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RelationOptions {
    /// For [`RelationKind::Tensor`], count a restricted step as trivial when
    /// its pruned form is an identity.
    pub prune_units: bool,
}

fn is_unit(step: &TreeMorphism, prune_units: bool) -> bool {
    step.is_identity()
        || (prune_units
            && step.source().tips() > 0
            && prune_morphism(step).is_ok_and(|p| p.is_identity()))
}

fn tensor_split(first: &TreeMorphism, second: &TreeMorphism, prune_units: bool) -> Result<bool> {
    let target = second.target();
    let identity = TreeMorphism::identity(target);
    for leaf in target.leaves() {
        let lower = first.restrict(second, leaf)?;
        let column = identity.fiber(leaf)?;
        let upper_fiber = second.fiber(leaf)?;
        let upper_trivial =
            upper_fiber == column || (prune_units && pruned_equal(&upper_fiber, &column, leaf));
        if !upper_trivial && !is_unit(&lower, prune_units) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Over a tip, a fiber whose pruned form is the column is trivial up to pruning.
fn pruned_equal(fiber: &Tree, column: &Tree, leaf: Leaf) -> bool {
    leaf.height == column.height()
        && fiber.tips() > 0
        && prune(fiber).is_ok_and(|(p, _)| p == *column)
}

fn generator(
    kind: RelationKind,
    options: RelationOptions,
    first: &TreeMorphism,
    second: &TreeMorphism,
) -> Result<bool> {
    Ok(match kind {
        RelationKind::TU => second.is_identity(),
        RelationKind::TT => first.is_identity(),
        RelationKind::Tensor => tensor_split(first, second, options.prune_units)?,
        RelationKind::Prune => is_unit(first, true) || is_unit(second, true),
        RelationKind::StrictAssoc => identity_below_top(first) && identity_below_top(second),
    })
}

/// `sigma_m` is an identity for every `m` below the top level.
fn identity_below_top(s: &TreeMorphism) -> bool {
    let n = s.height();
    n == 0
        || (s.source().truncate_to(n - 1) == s.target().truncate_to(n - 1)
            && (0..n).all(|m| s.map(m).iter().enumerate().all(|(i, &v)| i == v)))
}

/// Composing moves of `chains` matching `kind`, as arrows of `chains.category`.
pub fn relation_generators(
    chains: &ChainCategory,
    kind: RelationKind,
    options: RelationOptions,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for m in &chains.moves {
        if let Some((first, second)) = chains.composed_pair(m) {
            if generator(kind, options, first, second)? {
                out.push(move_arrow(chains, m));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn move_arrow(chains: &ChainCategory, m: &Move) -> usize {
    chains.category.hom(m.from, m.to)[0]
}

/// Union of several generator families.
pub fn generators_for(
    chains: &ChainCategory,
    kinds: &[RelationKind],
    options: RelationOptions,
) -> Result<Vec<usize>> {
    let mut all = Vec::new();
    for &k in kinds {
        all.extend(relation_generators(chains, k, options)?);
    }
    all.sort_unstable();
    all.dedup();
    Ok(all)
}

/// True if `m` is a composing move.
pub fn is_composition(m: &Move) -> bool {
    matches!(m.kind, MoveKind::Compose { .. })
}

/// A quotient category with the quotient functor on objects and arrows.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub category: FinCategory,
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

#[derive(Clone, Debug)]
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Merges, keeping the smaller root; true if anything changed.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    /// Dense class numbering in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut ids = HashMap::new();
        let mut map = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = ids.len();
            map.push(*ids.entry(r).or_insert(next));
        }
        let count = ids.len();
        (map, count)
    }
}

/// Forces `generators` to be identities.
///
/// Thin categories are collapsed to the thin category on the merged objects
/// ordered by the image of the original order (the posetal reflection of the
/// categorical quotient). Other categories go through [`collapse_general`].
pub fn collapse(base: &FinCategory, generators: &[usize]) -> Result<Quotient> {
    if !base.is_thin() {
        return collapse_general(base, generators);
    }
    let mut objects = UnionFind::new(base.object_count());
    for &g in generators {
        let a = base.arrow(g);
        objects.union(a.source, a.target);
    }
    let (object_map, count) = objects.classes();
    let mut labels = vec![None; count];
    for (o, &c) in object_map.iter().enumerate() {
        labels[c].get_or_insert_with(|| base.objects()[o].clone());
    }
    let relation: Vec<(usize, usize)> = base
        .arrows()
        .iter()
        .map(|a| (object_map[a.source], object_map[a.target]))
        .collect();
    let mut generating = relation.clone();
    generating.sort_unstable();
    generating.dedup();
    let labels = labels.into_iter().map(Option::unwrap).collect();
    let category = FinCategory::thin(labels, &generating)?;
    let arrow_map = relation
        .iter()
        .map(|&(s, t)| category.hom(s, t)[0])
        .collect();
    Ok(Quotient {
        category,
        object_map,
        arrow_map,
    })
}

/// Congruence closure on arrows: generators are identified with identities,
/// and classes are merged until composition is well defined.
pub fn collapse_general(base: &FinCategory, generators: &[usize]) -> Result<Quotient> {
    let mut objects = UnionFind::new(base.object_count());
    for &g in generators {
        let a = base.arrow(g);
        objects.union(a.source, a.target);
    }
    let mut arrows = UnionFind::new(base.arrows().len());
    for &g in generators {
        arrows.union(g, base.identity(base.arrow(g).source));
    }
    for o in 0..base.object_count() {
        let r = objects.find(o);
        arrows.union(base.identity(o), base.identity(r));
    }
    let pairs: Vec<(usize, usize, usize)> = (0..base.arrows().len())
        .flat_map(|f| {
            base.outgoing(base.arrow(f).target)
                .iter()
                .filter_map(move |&g| base.compose(g, f).map(|h| (g, f, h)))
                .collect::<Vec<_>>()
        })
        .collect();
    loop {
        let mut changed = false;
        let mut table: HashMap<(usize, usize), usize> = HashMap::new();
        for &(g, f, h) in &pairs {
            let key = (arrows.find(g), arrows.find(f));
            let h = arrows.find(h);
            match table.get(&key) {
                Some(&other) => changed |= arrows.union(other, h),
                None => {
                    table.insert(key, h);
                }
            }
        }
        // identities stay neutral after merging objects
        for f in 0..base.arrows().len() {
            let a = base.arrow(f);
            for o in [a.source, a.target] {
                let id = arrows.find(base.identity(o));
                if let Some(&h) = table.get(&(id, arrows.find(f))) {
                    changed |= arrows.union(h, f);
                }
                if let Some(&h) = table.get(&(arrows.find(f), id)) {
                    changed |= arrows.union(h, f);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (object_map, object_count) = objects.classes();
    let (arrow_map, arrow_count) = arrows.classes();
    let mut labels = vec![String::new(); object_count];
    for (o, &c) in object_map.iter().enumerate().rev() {
        labels[c] = base.objects()[o].clone();
    }
    let mut new_arrows: Vec<Option<Arrow>> = vec![None; arrow_count];
    for (i, &c) in arrow_map.iter().enumerate() {
        let a = base.arrow(i);
        let image = Arrow {
            source: object_map[a.source],
            target: object_map[a.target],
            label: a.label.clone(),
        };
        match &new_arrows[c] {
            None => new_arrows[c] = Some(image),
            Some(existing) => {
                if existing.source != image.source || existing.target != image.target {
                    return Err(Error::Category(format!(
                        "arrow class of {} has inconsistent endpoints",
                        a.label
                    )));
                }
            }
        }
    }
    let new_arrows: Vec<Arrow> = new_arrows.into_iter().map(Option::unwrap).collect();
    let identities: Vec<usize> = (0..object_count)
        .map(|c| {
            let o = object_map
                .iter()
                .position(|&x| x == c)
                .expect("class is inhabited");
            arrow_map[base.identity(o)]
        })
        .collect();
    let mut composition = HashMap::new();
    for &(g, f, h) in &pairs {
        composition.insert((arrow_map[g], arrow_map[f]), arrow_map[h]);
    }
    // composable in the quotient but never in the base
    for f in 0..arrow_count {
        for g in 0..arrow_count {
            if new_arrows[f].target == new_arrows[g].source && !composition.contains_key(&(g, f)) {
                return Err(Error::Category(format!(
                    "{} ∘ {} has no composite in the quotient",
                    new_arrows[g].label, new_arrows[f].label
                )));
            }
        }
    }
    let category = FinCategory::new(labels, new_arrows, identities, composition)?;
    Ok(Quotient {
        category,
        object_map,
        arrow_map,
    })
}
