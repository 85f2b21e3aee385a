//! Chains of tree morphisms ending at the terminal tree, the categories they
//! form, substitution of chains, and free-operad elements over finite
//! collections.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::FinCategory;
use crate::error::{Error, Result};
use crate::omega::{compose, hom_set, MorphismJson, PastingDiagram, TreeMorphism};
use crate::trees::{enumerate_trees, enumerate_trees_bounded, Leaf, Tree};

pub const MAX_CHAINS: usize = 200_000;
pub const MAX_FREE_ELEMENTS: usize = 200_000;

/// `T -> T_1 -> ... -> T_m -> U_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ChainObject {
    arity: Tree,
    steps: Vec<TreeMorphism>,
}

impl ChainObject {
    pub fn new(arity: Tree, steps: Vec<TreeMorphism>) -> Result<ChainObject> {
        let mut current = &arity;
        for (i, s) in steps.iter().enumerate() {
            if s.source() != current {
                return Err(Error::BoundaryMismatch(format!(
                    "step {} starts at {} instead of {current}",
                    i + 1,
                    s.source()
                )));
            }
            current = s.target();
        }
        if *current != Tree::unit(arity.height()) {
            return Err(Error::Domain(format!(
                "chain ends at {current}, not at the terminal tree"
            )));
        }
        Ok(ChainObject { arity, steps })
    }

    /// The one-step chain `T -> U_n` (the empty chain when `T = U_n`).
    pub fn terminal(arity: &Tree) -> ChainObject {
        let steps = if *arity == Tree::unit(arity.height()) {
            Vec::new()
        } else {
            vec![TreeMorphism::to_unit(arity)]
        };
        ChainObject {
            arity: arity.clone(),
            steps,
        }
    }

    pub fn arity(&self) -> &Tree {
        &self.arity
    }

    pub fn steps(&self) -> &[TreeMorphism] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `T, T_1, ..., U_n`.
    pub fn trees(&self) -> Vec<&Tree> {
        std::iter::once(&self.arity)
            .chain(self.steps.iter().map(|s| s.target()))
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.steps.iter().all(|s| s.is_tip_surjective())
    }

    pub fn has_identity_step(&self) -> bool {
        self.steps.iter().any(|s| s.is_identity())
    }

    /// Composite of all steps (the identity for the empty chain).
    pub fn total(&self) -> TreeMorphism {
        self.steps
            .iter()
            .fold(TreeMorphism::identity(&self.arity), |acc, s| {
                compose(s, &acc).expect("chain steps are composable")
            })
    }

    /// Prepends identity steps until the chain has `len` steps.
    pub fn padded(&self, len: usize) -> ChainObject {
        let mut steps = vec![TreeMorphism::identity(&self.arity); len.saturating_sub(self.len())];
        steps.extend(self.steps.iter().cloned());
        ChainObject {
            arity: self.arity.clone(),
            steps,
        }
    }

    pub fn to_json(&self) -> ChainJson {
        ChainJson {
            arity: self.arity.clone(),
            steps: self.steps.iter().map(TreeMorphism::to_json).collect(),
        }
    }

    pub fn from_json(json: &ChainJson) -> Result<ChainObject> {
        let steps = json
            .steps
            .iter()
            .map(TreeMorphism::from_json)
            .collect::<Result<Vec<_>>>()?;
        ChainObject::new(json.arity.clone(), steps)
    }
}

impl fmt::Display for ChainObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.arity)?;
        for s in &self.steps {
            let levels: Vec<String> = s.maps()[1..]
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|v| (v + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            write!(f, " -({})-> {}", levels.join("|"), s.target())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub arity: Tree,
    pub steps: Vec<MorphismJson>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOptions {
    /// Every step surjective on tips.
    pub surjective_only: bool,
    pub no_identity_steps: bool,
    /// Intermediate trees must be pruned.
    pub pruned_only: bool,
    /// Maximal number of steps; required unless the flags bound chains.
    pub max_len: Option<usize>,
    /// Level cap for intermediate trees; defaults to the widest level of the
    /// arity (at least 1).
    pub max_width: Option<usize>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            surjective_only: true,
            no_identity_steps: true,
            pruned_only: true,
            max_len: None,
            max_width: None,
        }
    }
}

impl ChainOptions {
    /// Surjective chains without identity steps through pruned trees.
    pub fn surjective() -> Self {
        ChainOptions::default()
    }

    pub fn with_max_len(mut self, len: usize) -> Self {
        self.max_len = Some(len);
        self
    }

    /// True when every step must strictly shrink the tree, so chains are
    /// finite without a length cap.
    fn self_bounding(&self, height: usize) -> bool {
        self.surjective_only && self.no_identity_steps && (self.pruned_only || height <= 1)
    }

    fn admits(&self, step: &TreeMorphism) -> bool {
        (!self.surjective_only || step.is_tip_surjective())
            && (!self.no_identity_steps || !step.is_identity())
    }
}

struct ChainSearch<'a> {
    options: &'a ChainOptions,
    candidates: Vec<Tree>,
    unit: Tree,
    homs: HashMap<(Tree, Tree), Vec<TreeMorphism>>,
    out: Vec<ChainObject>,
}

impl ChainSearch<'_> {
    fn homs(&mut self, a: &Tree, b: &Tree) -> Result<Vec<TreeMorphism>> {
        if let Some(h) = self.homs.get(&(a.clone(), b.clone())) {
            return Ok(h.clone());
        }
        let options = self.options;
        let h: Vec<TreeMorphism> = hom_set(a, b)?
            .into_iter()
            .filter(|s| options.admits(s))
            .collect();
        self.homs.insert((a.clone(), b.clone()), h.clone());
        Ok(h)
    }

    fn extend(&mut self, arity: &Tree, steps: &mut Vec<TreeMorphism>) -> Result<()> {
        let current = steps.last().map_or(arity, |s| s.target()).clone();
        if current == self.unit {
            if self.out.len() >= MAX_CHAINS {
                return Err(Error::Bounds(format!("more than {MAX_CHAINS} chains")));
            }
            self.out.push(ChainObject {
                arity: arity.clone(),
                steps: steps.clone(),
            });
        }
        if self.options.max_len.is_some_and(|l| steps.len() >= l) {
            return Ok(());
        }
        for next in self.candidates.clone() {
            for step in self.homs(&current, &next)? {
                steps.push(step);
                self.extend(arity, steps)?;
                steps.pop();
            }
        }
        Ok(())
    }
}

/// All chains from `arity` to `U_n` allowed by `options`, shortest first.
pub fn enumerate_chains(arity: &Tree, options: &ChainOptions) -> Result<Vec<ChainObject>> {
    let n = arity.height();
    if options.max_len.is_none() && !options.self_bounding(n) {
        return Err(Error::Bounds(
            "chains with identity steps or non-surjective steps need a length cap".into(),
        ));
    }
    let widest = arity.levels().into_iter().max().unwrap_or(1).max(1);
    let width = options.max_width.unwrap_or(widest);
    let tips = if options.surjective_only {
        arity.tips()
    } else {
        width
    };
    let candidates = if options.pruned_only {
        enumerate_trees(n, tips, true)?
    } else {
        enumerate_trees_bounded(n, tips, width, false)?
    };
    let mut search = ChainSearch {
        options,
        candidates,
        unit: Tree::unit(n),
        homs: HashMap::new(),
        out: Vec::new(),
    };
    search.extend(arity, &mut Vec::new())?;
    let mut chains = search.out;
    chains.sort_by_key(ChainObject::len);
    Ok(chains)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// Replace steps `position` and `position + 1` by their composite.
    Compose { position: usize },
    /// Insert an identity step before step `position`.
    Insert { position: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub kind: MoveKind,
}

/// Chains with the thin category generated by elementary moves.
#[derive(Clone, Debug)]
pub struct ChainCategory {
    pub chains: Vec<ChainObject>,
    pub category: FinCategory,
    pub moves: Vec<Move>,
    pub options: ChainOptions,
}

impl ChainCategory {
    pub fn index_of(&self, chain: &ChainObject) -> Option<usize> {
        self.chains.iter().position(|c| c == chain)
    }

    /// The two steps merged by a composing move.
    pub fn composed_pair(&self, m: &Move) -> Option<(&TreeMorphism, &TreeMorphism)> {
        match m.kind {
            MoveKind::Compose { position } => {
                let steps = self.chains[m.from].steps();
                Some((&steps[position], &steps[position + 1]))
            }
            MoveKind::Insert { .. } => None,
        }
    }
}

/// Objects are the chains of [`enumerate_chains`]; `δ -> δ'` whenever `δ'` is
/// reachable from `δ` by composing adjacent steps and inserting identities.
///
/// When identity steps are excluded, a composite that is an identity is
/// dropped from the chain.
pub fn chain_category(arity: &Tree, options: &ChainOptions) -> Result<ChainCategory> {
    let chains = enumerate_chains(arity, options)?;
    let index: HashMap<&ChainObject, usize> =
        chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut moves = Vec::new();
    for (from, chain) in chains.iter().enumerate() {
        let steps = chain.steps();
        for position in 0..steps.len().saturating_sub(1) {
            let composite = compose(&steps[position + 1], &steps[position])?;
            let mut new_steps = steps[..position].to_vec();
            if !(options.no_identity_steps && composite.is_identity()) {
                new_steps.push(composite);
            }
            new_steps.extend_from_slice(&steps[position + 2..]);
            let target = ChainObject {
                arity: chain.arity.clone(),
                steps: new_steps,
            };
            if let Some(&to) = index.get(&target) {
                moves.push(Move {
                    from,
                    to,
                    kind: MoveKind::Compose { position },
                });
            }
        }
        if !options.no_identity_steps {
            let trees = chain.trees();
            for (position, tree) in trees.iter().enumerate() {
                let mut new_steps = steps.to_vec();
                new_steps.insert(position, TreeMorphism::identity(tree));
                let target = ChainObject {
                    arity: chain.arity.clone(),
                    steps: new_steps,
                };
                if let Some(&to) = index.get(&target) {
                    moves.push(Move {
                        from,
                        to,
                        kind: MoveKind::Insert { position },
                    });
                }
            }
        }
    }
    let relation: Vec<(usize, usize)> = moves.iter().map(|m| (m.from, m.to)).collect();
    let labels = chains.iter().map(|c| c.to_string()).collect();
    let category = FinCategory::thin(labels, &relation)?;
    Ok(ChainCategory {
        chains,
        category,
        moves,
        options: options.clone(),
    })
}

/// Substitutes `inner[u]` (a chain at the fiber of `sigma` over tip `u` of
/// `outer.arity()`) into `outer`.
///
/// Inner chains are padded with leading identity steps to a common length
/// `L`; level `i` of the result pastes the `i`-th trees of the inner chains
/// over `outer.arity()`. The result has `L + outer.len()` steps.
pub fn substitute(
    outer: &ChainObject,
    sigma: &TreeMorphism,
    inner: &[ChainObject],
) -> Result<ChainObject> {
    let base = outer.arity();
    let n = base.height();
    if sigma.target() != base {
        return Err(Error::BoundaryMismatch(format!(
            "map ends at {}, outer chain starts at {base}",
            sigma.target()
        )));
    }
    if inner.len() != base.tips() {
        return Err(Error::Domain(format!(
            "{} inner chains for {} tips",
            inner.len(),
            base.tips()
        )));
    }
    let identity = TreeMorphism::identity(base);
    let mut fixed: Vec<(Leaf, Tree)> = Vec::new();
    for leaf in base.leaves() {
        let fiber = sigma.fiber(leaf)?;
        if leaf.height == n {
            if *inner[leaf.position].arity() != fiber {
                return Err(Error::Pasting(format!(
                    "inner chain {} starts at {}, fiber over {leaf} is {fiber}",
                    leaf.position + 1,
                    inner[leaf.position].arity()
                )));
            }
        } else {
            if fiber != identity.fiber(leaf)? {
                return Err(Error::Pasting(format!(
                    "the map is not invertible over the leaf {leaf}"
                )));
            }
            fixed.push((leaf, fiber));
        }
    }
    let len = inner.iter().map(ChainObject::len).max().unwrap_or(0);
    let padded: Vec<ChainObject> = inner.iter().map(|c| c.padded(len)).collect();

    let diagram = |i: usize| -> PastingDiagram {
        let mut labels = fixed.clone();
        for (u, chain) in padded.iter().enumerate() {
            labels.push((
                Leaf {
                    height: n,
                    position: u,
                },
                chain.trees()[i].clone(),
            ));
        }
        labels.sort();
        PastingDiagram {
            base: base.clone(),
            labels,
        }
    };

    let mut pasted = Vec::with_capacity(len + 1);
    for i in 0..=len {
        let d = diagram(i);
        let (p, index) = d.paste_indexed()?;
        pasted.push((d, p.source().clone(), index));
    }
    let mut steps = Vec::with_capacity(len + outer.len());
    for i in 0..len {
        let (d, source, index) = &pasted[i];
        let (_, target, next_index) = &pasted[i + 1];
        let mut maps = vec![vec![0]];
        for j in 1..=n {
            let mut map = vec![0; source.level(j)];
            for a in 0..base.level(j) {
                let leaf = d.leaf_above(j, a);
                let step = (leaf.height == n).then(|| &padded[leaf.position].steps()[i]);
                // every tip above `a` must move the shared part the same way
                for u in base.descendants(j, a, n) {
                    let other = &padded[u].steps()[i];
                    if let Some(s) = step {
                        if s.map(j) != other.map(j) {
                            return Err(Error::Pasting(format!(
                                "inner steps {} disagree over level {j}",
                                i + 1
                            )));
                        }
                    }
                }
                for (x, &p) in index[j][a].iter().enumerate() {
                    let y = step.map_or(x, |s| s.map(j)[x]);
                    map[p] = next_index[j][a][y];
                }
            }
            maps.push(map);
        }
        steps.push(TreeMorphism::new(source.clone(), target.clone(), maps)?);
    }
    steps.extend(outer.steps().iter().cloned());
    ChainObject::new(sigma.source().clone(), steps)
}

/// A finite collection: a set of labels for each tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Collection {
    /// One label on every tree.
    Terminal,
    /// `count` labels on the listed trees, none elsewhere.
    Generators(BTreeMap<Tree, usize>),
}

impl Collection {
    pub fn count(&self, tree: &Tree) -> usize {
        match self {
            Collection::Terminal => 1,
            Collection::Generators(g) => g.get(tree).copied().unwrap_or(0),
        }
    }
}

/// Element of the free operad: a unit, or an operation labelled by the
/// collection at `S` together with elements over the fibers of `T -> S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeElement {
    Unit(Tree),
    Node {
        morphism: TreeMorphism,
        label: usize,
        children: Vec<FreeElement>,
    },
}

impl FreeElement {
    pub fn arity(&self) -> &Tree {
        match self {
            FreeElement::Unit(t) => t,
            FreeElement::Node { morphism, .. } => morphism.source(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FreeElement::Unit(_) => 0,
            FreeElement::Node { children, .. } => {
                1 + children.iter().map(FreeElement::depth).max().unwrap_or(0)
            }
        }
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeElement::Unit(_) => write!(f, "1"),
            FreeElement::Node {
                morphism,
                label,
                children,
            } => {
                write!(f, "{}#{}(", morphism.target(), label + 1)?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Free-operad elements on `collection` at `arity` of depth at most `depth`.
///
/// Operations are placed on non-terminal pruned trees `S` and reached by
/// tip-surjective morphisms `T -> S`; the fibers over the tips of `S` carry
/// the sub-elements, in tip order.
pub fn free_operad_elements(
    collection: &Collection,
    arity: &Tree,
    depth: usize,
) -> Result<Vec<FreeElement>> {
    let n = arity.height();
    let shapes: Vec<Tree> = match collection {
        Collection::Terminal => enumerate_trees(n, arity.tips(), true)?,
        Collection::Generators(g) => g.keys().filter(|t| t.height() == n).cloned().collect(),
    };
    let unit = Tree::unit(n);
    let shapes: Vec<Tree> = shapes
        .into_iter()
        .filter(|s| *s != unit && s.is_pruned() && collection.count(s) > 0)
        .collect();
    let mut memo = HashMap::new();
    let mut total = 0;
    free_elements(collection, &shapes, arity, depth, &mut memo, &mut total)
}

fn free_elements(
    collection: &Collection,
    shapes: &[Tree],
    arity: &Tree,
    depth: usize,
    memo: &mut HashMap<(Tree, usize), Vec<FreeElement>>,
    total: &mut usize,
) -> Result<Vec<FreeElement>> {
    if let Some(v) = memo.get(&(arity.clone(), depth)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    if *arity == Tree::unit(arity.height()) {
        out.push(FreeElement::Unit(arity.clone()));
    }
    if depth > 0 {
        for shape in shapes.iter().filter(|s| s.tips() <= arity.tips()) {
            for sigma in hom_set(arity, shape)? {
                if !sigma.is_tip_surjective() {
                    continue;
                }
                let mut per_tip = Vec::with_capacity(shape.tips());
                for u in 0..shape.tips() {
                    let fiber = sigma.fiber(Leaf {
                        height: shape.height(),
                        position: u,
                    })?;
                    per_tip.push(free_elements(
                        collection,
                        shapes,
                        &fiber,
                        depth - 1,
                        memo,
                        total,
                    )?);
                }
                for label in 0..collection.count(shape) {
                    for children in cartesian(&per_tip) {
                        *total += 1;
                        if *total > MAX_FREE_ELEMENTS {
                            return Err(Error::Bounds(format!(
                                "more than {MAX_FREE_ELEMENTS} free-operad elements"
                            )));
                        }
                        out.push(FreeElement::Node {
                            morphism: sigma.clone(),
                            label,
                            children,
                        });
                    }
                }
            }
        }
    }
    memo.insert((arity.clone(), depth), out.clone());
    Ok(out)
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect()
    })
}
