//! Face posets of associahedra, permutohedra and braiding polytopes, built as
//! quotients of chain categories, plus ranked-poset utilities.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::category::FinCategory;
use crate::error::{Error, Result};
use crate::hoperad::{chain_category, ChainCategory, ChainObject, ChainOptions};
use crate::nerve::{nerve_profile, NerveProfile};
use crate::quotient::{collapse, generators_for, Quotient, RelationKind, RelationOptions};
use crate::trees::Tree;

/// A finite poset with its Hasse diagram. Ranks are Hasse heights: the length
/// of the longest cover chain from a minimal element.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    /// Strict up-sets, sorted.
    up: Vec<Vec<usize>>,
    covers: Vec<(usize, usize)>,
    rank: Vec<usize>,
}

impl Poset {
    /// Reads a thin category as a poset; fails on isomorphic distinct objects.
    pub fn from_category(category: &FinCategory) -> Result<Poset> {
        if !category.is_thin() {
            return Err(Error::Invariant("category is not thin".into()));
        }
        let n = category.object_count();
        let mut up = vec![Vec::new(); n];
        for a in category.arrows() {
            if a.source != a.target {
                if !category.hom(a.target, a.source).is_empty() {
                    return Err(Error::Invariant(format!(
                        "objects {} and {} are isomorphic",
                        category.objects()[a.source],
                        category.objects()[a.target]
                    )));
                }
                up[a.source].push(a.target);
            }
        }
        for u in &mut up {
            u.sort_unstable();
            u.dedup();
        }
        Ok(Poset::from_up_sets(category.objects().to_vec(), up))
    }

    /// Poset generated by `relation` (pairs `a < b`).
    pub fn from_relation(labels: Vec<String>, relation: &[(usize, usize)]) -> Result<Poset> {
        Poset::from_category(&FinCategory::thin(labels, relation)?)
    }

    fn from_up_sets(labels: Vec<String>, up: Vec<Vec<usize>>) -> Poset {
        let n = labels.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for &b in &up[a] {
                let covered = up[a]
                    .iter()
                    .any(|&c| c != b && up[c].binary_search(&b).is_ok());
                if !covered {
                    covers.push((a, b));
                }
            }
        }
        // longest chains, processed by up-set size (larger up-set = lower)
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(up[a].len()));
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            below[b].push(a);
        }
        let mut rank = vec![0; n];
        for &b in &order {
            rank[b] = below[b].iter().map(|&a| rank[a] + 1).max().unwrap_or(0);
        }
        Poset {
            labels,
            up,
            covers,
            rank,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.up[a].binary_search(&b).is_ok()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b)
    }

    /// Every cover raises the rank by exactly one.
    pub fn is_graded(&self) -> bool {
        self.covers
            .iter()
            .all(|&(a, b)| self.rank[b] == self.rank[a] + 1)
    }

    /// Number of elements of each rank.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        if !self.is_graded() {
            return Err(Error::Invariant("poset is not graded".into()));
        }
        let top = self.rank.iter().copied().max().map_or(0, |r| r + 1);
        let mut f = vec![0; top];
        for &r in &self.rank {
            f[r] += 1;
        }
        Ok(f)
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.leq(a, t)))
    }

    pub fn to_category(&self) -> FinCategory {
        FinCategory::thin(self.labels.clone(), &self.covers).expect("covers are in range")
    }

    /// Order complex statistics.
    pub fn nerve(&self) -> Result<NerveProfile> {
        nerve_profile(&self.to_category(), None)
    }

    /// Hasse diagram in DOT, bottom to top, one `rank=same` group per rank.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!(
            "digraph \"{}\" {{\n  rankdir=BT;\n  node [shape=box];\n",
            escape(name)
        );
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", escape(l)));
        }
        let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in self.rank.iter().enumerate() {
            by_rank.entry(r).or_default().push(i);
        }
        for (r, members) in by_rank {
            let names: Vec<String> = members.iter().map(|i| format!("n{i};")).collect();
            out.push_str(&format!(
                "  {{ rank=same; /* {r} */ {} }}\n",
                names.join(" ")
            ));
        }
        for &(a, b) in &self.covers {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Up and down neighbour lists of a cover graph.
type Adjacency = (Vec<Vec<usize>>, Vec<Vec<usize>>);
/// Own colour with the sorted colours above and below.
type Signature = (usize, Vec<usize>, Vec<usize>);

/// Joint colour refinement of the cover graphs of `p` and `q`.
fn refine(p: &Poset, q: &Poset, colors: &mut [Vec<usize>; 2]) {
    let graphs = [p, q];
    let adjacency: Vec<Adjacency> = graphs
        .iter()
        .map(|g| {
            let mut out = vec![Vec::new(); g.len()];
            let mut inc = vec![Vec::new(); g.len()];
            for &(a, b) in &g.covers {
                out[a].push(b);
                inc[b].push(a);
            }
            (out, inc)
        })
        .collect();
    let mut distinct = usize::MAX;
    loop {
        let mut keys: BTreeMap<Signature, usize> = BTreeMap::new();
        let signatures: Vec<Vec<Signature>> = (0..2)
            .map(|k| {
                (0..graphs[k].len())
                    .map(|v| {
                        let mut o: Vec<usize> =
                            adjacency[k].0[v].iter().map(|&w| colors[k][w]).collect();
                        let mut i: Vec<usize> =
                            adjacency[k].1[v].iter().map(|&w| colors[k][w]).collect();
                        o.sort_unstable();
                        i.sort_unstable();
                        (colors[k][v], o, i)
                    })
                    .collect()
            })
            .collect();
        for sig in signatures.iter().flatten() {
            let next = keys.len();
            keys.entry(sig.clone()).or_insert(next);
        }
        // ids in sorted-signature order keep both sides consistent
        for (id, v) in keys.values_mut().enumerate() {
            *v = id;
        }
        for k in 0..2 {
            colors[k] = signatures[k].iter().map(|s| keys[s]).collect();
        }
        if keys.len() == distinct {
            break;
        }
        distinct = keys.len();
    }
}

fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// An order isomorphism `p -> q` as an element map, if one exists.
pub fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.covers.len() != q.covers.len() {
        return None;
    }
    let mut colors = [
        p.rank.iter().map(|_| 0).collect::<Vec<_>>(),
        q.rank.iter().map(|_| 0).collect::<Vec<_>>(),
    ];
    search_isomorphism(p, q, &mut colors)
}

fn search_isomorphism(p: &Poset, q: &Poset, colors: &mut [Vec<usize>; 2]) -> Option<Vec<usize>> {
    refine(p, q, colors);
    let (hp, hq) = (histogram(&colors[0]), histogram(&colors[1]));
    if hp != hq {
        return None;
    }
    let Some((&color, _)) = hp.iter().filter(|(_, &n)| n > 1).min_by_key(|(_, &n)| n) else {
        let mut position = BTreeMap::new();
        for (w, &c) in colors[1].iter().enumerate() {
            position.insert(c, w);
        }
        let map: Vec<usize> = colors[0].iter().map(|c| position[c]).collect();
        let covers: HashSet<(usize, usize)> = q.covers.iter().copied().collect();
        return p
            .covers
            .iter()
            .all(|&(a, b)| covers.contains(&(map[a], map[b])))
            .then_some(map);
    };
    let v = colors[0].iter().position(|&c| c == color)?;
    let fresh = colors[0].len() + colors[1].len();
    for w in (0..q.len()).filter(|&w| colors[1][w] == color) {
        let mut trial = colors.clone();
        trial[0][v] = fresh;
        trial[1][w] = fresh;
        if let Some(map) = search_isomorphism(p, q, &mut trial) {
            return Some(map);
        }
    }
    None
}

pub fn isomorphic(p: &Poset, q: &Poset) -> bool {
    find_isomorphism(p, q).is_some()
}

fn check_range(name: &str, l: usize, lo: usize, hi: usize) -> Result<()> {
    if l < lo || l > hi {
        return Err(Error::Bounds(format!(
            "{name} is available for {lo} <= l <= {hi}, got {l}"
        )));
    }
    Ok(())
}

/// Surjective chains at the `l`-corolla with the tensor-generated quotient.
pub fn associahedron_quotient(l: usize) -> Result<(ChainCategory, Quotient)> {
    check_range("associahedron", l, 2, 7)?;
    let chains = chain_category(&Tree::corolla(l), &ChainOptions::surjective())?;
    let gens = generators_for(
        &chains,
        &[RelationKind::TU, RelationKind::TT, RelationKind::Tensor],
        RelationOptions::default(),
    )?;
    let q = collapse(&chains.category, &gens)?;
    Ok((chains, q))
}

/// Face poset of `K_l`.
pub fn associahedron(l: usize) -> Result<Poset> {
    Poset::from_category(&associahedron_quotient(l)?.1.category)
}

/// Face poset of the permutohedron with `(l-1)!` vertices.
pub fn permutohedron(l: usize) -> Result<Poset> {
    check_range("permutohedron", l, 2, 6)?;
    let chains = chain_category(&Tree::corolla(l), &ChainOptions::surjective())?;
    let gens = generators_for(
        &chains,
        &[RelationKind::TU, RelationKind::TT],
        RelationOptions::default(),
    )?;
    Poset::from_category(&collapse(&chains.category, &gens)?.category)
}

#[derive(Clone, Debug)]
pub struct TonksProjection {
    pub permutohedron: Poset,
    pub associahedron: Poset,
    /// Element of the permutohedron -> element of the associahedron.
    pub map: Vec<usize>,
}

impl TonksProjection {
    /// Preimages with more than one element.
    pub fn collapsed_fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (p, &k) in self.map.iter().enumerate() {
            fibers.entry(k).or_default().push(p);
        }
        fibers.into_values().filter(|f| f.len() > 1).collect()
    }

    pub fn is_order_preserving(&self) -> bool {
        let p = &self.permutohedron;
        (0..p.len()).all(|a| {
            p.up[a]
                .iter()
                .all(|&b| self.associahedron.leq(self.map[a], self.map[b]))
        })
    }

    pub fn is_surjective(&self) -> bool {
        let hit: HashSet<usize> = self.map.iter().copied().collect();
        hit.len() == self.associahedron.len()
    }
}

pub fn tonks_projection(l: usize) -> Result<TonksProjection> {
    check_range("tonks projection", l, 2, 6)?;
    let permutohedron = permutohedron(l)?;
    let (_, q) = associahedron_quotient(l)?;
    Ok(TonksProjection {
        permutohedron,
        associahedron: Poset::from_category(&q.category)?,
        map: q.object_map,
    })
}

/// Chain quotient for a pruned 2-tree arity.
pub fn braid_quotient(arity: &Tree, strict_assoc: bool) -> Result<(ChainCategory, Quotient)> {
    if arity.height() != 2 {
        return Err(Error::Domain(format!("{arity} is not a 2-tree")));
    }
    if !arity.is_pruned() {
        return Err(Error::Domain(format!("{arity} is not pruned")));
    }
    if arity.tips() > 4 {
        return Err(Error::Bounds(format!("{arity} has more than 4 tips")));
    }
    let chains = chain_category(arity, &ChainOptions::surjective())?;
    let mut kinds = vec![
        RelationKind::TU,
        RelationKind::TT,
        RelationKind::Tensor,
        RelationKind::Prune,
    ];
    if strict_assoc {
        kinds.push(RelationKind::StrictAssoc);
    }
    let gens = generators_for(&chains, &kinds, RelationOptions { prune_units: true })?;
    let q = collapse(&chains.category, &gens)?;
    Ok((chains, q))
}

pub fn braid_polytope(arity: &Tree, strict_assoc: bool) -> Result<Poset> {
    Poset::from_category(&braid_quotient(arity, strict_assoc)?.1.category)
}

/// A planar tree whose internal vertices have at least two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => 1 + c.iter().map(PlanarTree::internal_vertices).sum::<usize>(),
        }
    }

    /// Trees obtained by contracting one internal edge.
    pub fn contractions(&self) -> Vec<PlanarTree> {
        let PlanarTree::Node(children) = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, child) in children.iter().enumerate() {
            if let PlanarTree::Node(grand) = child {
                let mut merged = children[..i].to_vec();
                merged.extend(grand.iter().cloned());
                merged.extend(children[i + 1..].iter().cloned());
                out.push(PlanarTree::Node(merged));
            }
            for c in child.contractions() {
                let mut replaced = children.clone();
                replaced[i] = c;
                out.push(PlanarTree::Node(replaced));
            }
        }
        out
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "x"),
            PlanarTree::Node(c) => {
                write!(f, "(")?;
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// All planar trees with `l` leaves, sorted.
pub fn planar_trees(l: usize) -> Vec<PlanarTree> {
    fn go(l: usize, memo: &mut BTreeMap<usize, Vec<PlanarTree>>) -> Vec<PlanarTree> {
        if let Some(v) = memo.get(&l) {
            return v.clone();
        }
        let mut out = Vec::new();
        if l == 1 {
            out.push(PlanarTree::Leaf);
        } else {
            // first child takes `first` leaves; the rest form >= 1 further children
            fn sequences(
                l: usize,
                min_parts: usize,
                memo: &mut BTreeMap<usize, Vec<PlanarTree>>,
            ) -> Vec<Vec<PlanarTree>> {
                let mut out = Vec::new();
                if l == 0 {
                    if min_parts == 0 {
                        out.push(Vec::new());
                    }
                    return out;
                }
                for first in 1..=(l + 1).saturating_sub(min_parts.max(1)) {
                    let heads = go(first, memo);
                    let tails = sequences(l - first, min_parts.saturating_sub(1), memo);
                    for h in &heads {
                        for t in &tails {
                            let mut s = vec![h.clone()];
                            s.extend(t.iter().cloned());
                            out.push(s);
                        }
                    }
                }
                out
            }
            out = sequences(l, 2, memo)
                .into_iter()
                .map(PlanarTree::Node)
                .collect();
        }
        out.sort();
        memo.insert(l, out.clone());
        out
    }
    go(l, &mut BTreeMap::new())
}

/// `K_l` from planar trees ordered by edge contraction.
pub fn planar_associahedron(l: usize) -> Result<Poset> {
    check_range("associahedron", l, 2, 7)?;
    let trees = planar_trees(l);
    let index: BTreeMap<&PlanarTree, usize> =
        trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut relation = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        for c in t.contractions() {
            relation.push((i, index[&c]));
        }
    }
    relation.sort_unstable();
    relation.dedup();
    Poset::from_relation(trees.iter().map(|t| t.to_string()).collect(), &relation)
}

/// The planar tree of a surjective chain of corollas: each step groups
/// adjacent vertices, and groups of one are left alone.
pub fn chain_to_planar(chain: &ChainObject) -> Result<PlanarTree> {
    if chain.arity().height() != 1 {
        return Err(Error::Domain("planar trees come from 1-chains".into()));
    }
    let mut nodes = vec![PlanarTree::Leaf; chain.arity().tips()];
    for step in chain.steps() {
        if !step.is_tip_surjective() {
            return Err(Error::Domain(format!("{step} is not surjective")));
        }
        let mut groups: Vec<Vec<PlanarTree>> = vec![Vec::new(); step.target().tips()];
        for (node, &j) in nodes.into_iter().zip(step.map(1)) {
            groups[j].push(node);
        }
        nodes = groups
            .into_iter()
            .map(|mut g| {
                if g.len() == 1 {
                    g.pop().expect("one element")
                } else {
                    PlanarTree::Node(g)
                }
            })
            .collect();
    }
    nodes
        .pop()
        .ok_or_else(|| Error::Domain("chain on the empty corolla".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_associahedra() {
        assert_eq!(associahedron(2).unwrap().f_vector().unwrap(), vec![1]);
        assert_eq!(associahedron(3).unwrap().f_vector().unwrap(), vec![2, 1]);
        assert_eq!(associahedron(4).unwrap().f_vector().unwrap(), vec![5, 5, 1]);
        assert!(associahedron(8).is_err());
        assert!(associahedron(1).is_err());
    }

    #[test]
    fn small_permutohedra() {
        assert_eq!(permutohedron(3).unwrap().f_vector().unwrap(), vec![2, 1]);
        assert_eq!(permutohedron(4).unwrap().f_vector().unwrap(), vec![6, 6, 1]);
    }

    #[test]
    fn planar_tree_counts() {
        // little Schröder numbers
        let counts: Vec<usize> = (1..=6).map(|l| planar_trees(l).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197]);
        assert_eq!(
            planar_associahedron(4).unwrap().f_vector().unwrap(),
            vec![5, 5, 1]
        );
    }

    #[test]
    fn ungraded_posets_have_no_f_vector() {
        // a < b < c together with a < d < c' ... a three-element chain plus a
        // cover skipping a rank
        let p = Poset::from_relation(
            (0..4).map(|i| i.to_string()).collect(),
            &[(0, 1), (1, 2), (3, 2)],
        )
        .unwrap();
        assert!(!p.is_graded());
        assert!(p.f_vector().is_err());
    }

    #[test]
    fn isomorphism_detects_differences() {
        let chain =
            Poset::from_relation(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)])
                .unwrap();
        let vee = Poset::from_relation(vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)])
            .unwrap();
        let wedge =
            Poset::from_relation(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (0, 2)])
                .unwrap();
        assert!(isomorphic(&chain, &chain));
        assert!(!isomorphic(&chain, &vee));
        assert!(!isomorphic(&vee, &wedge));
        let vee2 =
            Poset::from_relation(vec!["x".into(), "y".into(), "z".into()], &[(1, 0), (2, 0)])
                .unwrap();
        let map = find_isomorphism(&vee, &vee2).unwrap();
        assert_eq!(map[2], 0);
    }

    #[test]
    fn dot_is_stable() {
        let k3 = associahedron(3).unwrap();
        let dot = k3.to_dot("K3");
        assert_eq!(dot, k3.to_dot("K3"));
        assert!(dot.starts_with("digraph \"K3\" {"));
        assert_eq!(dot.lines().filter(|l| l.contains(" -> n")).count(), 2);
    }
}
