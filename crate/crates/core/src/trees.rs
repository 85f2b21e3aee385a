//! n-trees: chains of order-preserving maps of finite ordinals ending at `[1]`.
//!
//! A tree of height `n` has ordinals `[k_0], ..., [k_n]` with `k_0 = 1` and
//! structure maps `rho_m : [k_{m+1}] -> [k_m]`. Elements are stored 0-based;
//! the bracket notation and the JSON form use the usual 1-based reading.
//!
//! Bracket notation: `*` is the unique 0-tree, `[t_1,...,t_k]` an n-tree whose
//! root has the (n-1)-trees `t_i` as branches. `[]` at depth `d` is a node of
//! level `d` without children. A tree without tips whose height is larger than
//! the bracket nesting suggests carries an explicit `@n` suffix, e.g. `[]@2`
//! for `[0] -> [0] -> [1]`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ENUM_HEIGHT: usize = 4;
pub const MAX_ENUM_TIPS: usize = 8;
const MAX_ENUM_COUNT: usize = 500_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tree {
    /// `parents[m][i] = rho_m(i)` for `i` in level `m + 1`.
    parents: Vec<Vec<usize>>,
}

/// A leaf: an element with no children, or a tip (an element of the top level).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Leaf {
    pub height: usize,
    /// 0-based index inside the level.
    pub position: usize,
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.height, self.position + 1)
    }
}

impl Tree {
    /// Builds a tree from its structure maps, checking monotonicity and ranges.
    pub fn new(parents: Vec<Vec<usize>>) -> Result<Tree> {
        let mut below = 1usize;
        for (m, map) in parents.iter().enumerate() {
            let mut last = 0usize;
            for (i, &p) in map.iter().enumerate() {
                if p >= below {
                    return Err(Error::InvalidTree(format!(
                        "rho_{m}({}) = {} is outside [{below}]",
                        i + 1,
                        p + 1
                    )));
                }
                if p < last {
                    return Err(Error::InvalidTree(format!(
                        "rho_{m} is not order preserving at {}",
                        i + 1
                    )));
                }
                last = p;
            }
            below = map.len();
        }
        Ok(Tree { parents })
    }

    /// The terminal n-tree `U_n = [1] -> ... -> [1]`.
    pub fn unit(n: usize) -> Tree {
        Tree {
            parents: vec![vec![0]; n],
        }
    }

    /// The 1-tree `[k] -> [1]`.
    pub fn corolla(k: usize) -> Tree {
        Tree {
            parents: vec![vec![0; k]],
        }
    }

    pub fn height(&self) -> usize {
        self.parents.len()
    }

    /// Size `k_m` of the level-`m` ordinal.
    pub fn level(&self, m: usize) -> usize {
        if m == 0 {
            1
        } else {
            self.parents[m - 1].len()
        }
    }

    pub fn levels(&self) -> Vec<usize> {
        (0..=self.height()).map(|m| self.level(m)).collect()
    }

    /// `rho_m`, as a slice indexed by elements of level `m + 1`.
    pub fn map(&self, m: usize) -> &[usize] {
        &self.parents[m]
    }

    pub fn parent(&self, m: usize, i: usize) -> usize {
        self.parents[m][i]
    }

    /// Children (at level `m + 1`) of element `i` of level `m`.
    pub fn children(&self, m: usize, i: usize) -> Range<usize> {
        self.children_of_range(m, i..i + 1)
    }

    /// Children (at level `m + 1`) of the elements `range` of level `m`.
    pub fn children_of_range(&self, m: usize, range: Range<usize>) -> Range<usize> {
        let map = &self.parents[m];
        let start = map.partition_point(|&p| p < range.start);
        let end = map.partition_point(|&p| p < range.end);
        start..end
    }

    /// Descendants at level `to` of element `i` of level `from`.
    pub fn descendants(&self, from: usize, i: usize, to: usize) -> Range<usize> {
        let mut range = i..i + 1;
        for m in from..to {
            range = self.children_of_range(m, range);
        }
        range
    }

    /// Ancestor at level `to` of element `i` of level `from` (`to <= from`).
    pub fn ancestor(&self, from: usize, i: usize, to: usize) -> usize {
        let mut x = i;
        for m in (to..from).rev() {
            x = self.parents[m][x];
        }
        x
    }

    /// Number of tips, i.e. `k_n`.
    pub fn tips(&self) -> usize {
        self.level(self.height())
    }

    /// All leaves in (height, position) order.
    pub fn leaves(&self) -> Vec<Leaf> {
        let n = self.height();
        let mut out = Vec::new();
        for m in 0..n {
            for i in 0..self.level(m) {
                if self.children(m, i).is_empty() {
                    out.push(Leaf {
                        height: m,
                        position: i,
                    });
                }
            }
        }
        out.extend((0..self.tips()).map(|i| Leaf {
            height: n,
            position: i,
        }));
        out
    }

    pub fn is_leaf(&self, leaf: Leaf) -> bool {
        leaf.height <= self.height()
            && leaf.position < self.level(leaf.height)
            && (leaf.height == self.height()
                || self.children(leaf.height, leaf.position).is_empty())
    }

    /// True iff every structure map is surjective.
    pub fn is_pruned(&self) -> bool {
        (0..self.height()).all(|m| {
            let map = &self.parents[m];
            // monotone map onto [k_m] hits every value iff it starts at 0, ends
            // at k_m - 1 and never skips
            let below = self.level(m);
            if below == 0 {
                return true;
            }
            map.first() == Some(&0)
                && map.last() == Some(&(below - 1))
                && map.windows(2).all(|w| w[1] - w[0] <= 1)
        })
    }

    /// True iff some ordinal is empty.
    pub fn is_degenerate(&self) -> bool {
        self.parents.iter().any(|m| m.is_empty())
    }

    /// The suspension `z(T) = [0] -> [k_n] -> ... -> [1]`.
    pub fn suspend(&self) -> Tree {
        let mut parents = self.parents.clone();
        parents.push(Vec::new());
        Tree { parents }
    }

    /// The truncation `∂T`, dropping the top ordinal.
    pub fn truncate(&self) -> Result<Tree> {
        if self.height() == 0 {
            return Err(Error::Domain("the 0-tree has no truncation".into()));
        }
        let mut parents = self.parents.clone();
        parents.pop();
        Ok(Tree { parents })
    }

    /// `∂^{n-k} T`, the underlying k-tree.
    pub fn truncate_to(&self, k: usize) -> Tree {
        Tree {
            parents: self.parents[..k.min(self.height())].to_vec(),
        }
    }

    /// Identity n-cell on the k-tree `self`, i.e. `z^{n-k}(self)`.
    pub fn identity_cell(&self, n: usize) -> Tree {
        let mut t = self.clone();
        while t.height() < n {
            t = t.suspend();
        }
        t
    }

    pub fn is_identity_cell(&self, k: usize) -> bool {
        k < self.height() && self.level(k + 1) == 0
    }

    /// `S ⊗_k T`: within each fiber over level `k`, `self`'s material comes first.
    pub fn compose(&self, other: &Tree, k: usize) -> Result<Tree> {
        let n = self.height();
        if other.height() != n {
            return Err(Error::Globularity(format!(
                "heights differ ({n} vs {})",
                other.height()
            )));
        }
        if k >= n {
            return Err(Error::Globularity(format!(
                "direction {k} needs height > {k}, got {n}"
            )));
        }
        if self.parents[..k] != other.parents[..k] {
            return Err(Error::Globularity(format!(
                "{self} and {other} have different {k}-boundaries"
            )));
        }
        let mut parents: Vec<Vec<usize>> = self.parents[..k].to_vec();
        // index maps from each side's level m-1 into the merged level m-1
        let mut prev_left: Vec<usize> = (0..self.level(k)).collect();
        let mut prev_right = prev_left.clone();
        for m in k + 1..=n {
            let mut left_index = vec![0; self.level(m)];
            let mut right_index = vec![0; other.level(m)];
            let mut map = Vec::with_capacity(self.level(m) + other.level(m));
            for j in 0..self.level(k) {
                for x in self.descendants(k, j, m) {
                    left_index[x] = map.len();
                    map.push(prev_left[self.parents[m - 1][x]]);
                }
                for x in other.descendants(k, j, m) {
                    right_index[x] = map.len();
                    map.push(prev_right[other.parents[m - 1][x]]);
                }
            }
            parents.push(map);
            prev_left = left_index;
            prev_right = right_index;
        }
        Ok(Tree { parents })
    }

    /// Composes a non-empty list of composable cells in direction `k`.
    pub fn compose_all(parts: &[Tree], k: usize) -> Result<Tree> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::Domain("empty composite".into()))?;
        rest.iter()
            .try_fold(first.clone(), |acc, t| acc.compose(t, k))
    }

    /// Splits `self` as `T_1 ⊗_k ... ⊗_k T_m`, one factor per element of level
    /// `k + 1` taken in the natural order.
    ///
    /// For `k = 0` this is the unique maximal decomposition. For `k > 0` with
    /// several level-`k` elements the interchange law allows other orderings of
    /// the factors; the natural order is the canonical choice.
    pub fn canonical_decomposition(&self, k: usize) -> Result<Vec<Tree>> {
        let n = self.height();
        if k >= n {
            return Err(Error::Domain(format!(
                "direction {k} needs height > {k}, got {n}"
            )));
        }
        if self.is_identity_cell(k) {
            return Err(Error::Domain(format!(
                "{self} is an identity for ⊗_{k} and has no factors"
            )));
        }
        Ok((0..self.level(k + 1))
            .map(|e| self.single_branch(k + 1, e))
            .collect())
    }

    /// Keeps levels below `m` and, at level `m`, only element `e` with its
    /// descendants.
    fn single_branch(&self, m: usize, e: usize) -> Tree {
        let mut parents: Vec<Vec<usize>> = self.parents[..m - 1].to_vec();
        parents.push(vec![self.parents[m - 1][e]]);
        let mut range = e..e + 1;
        for level in m..self.height() {
            let next = self.children_of_range(level, range.clone());
            parents.push(
                self.parents[level][next.clone()]
                    .iter()
                    .map(|&p| p - range.start)
                    .collect(),
            );
            range = next;
        }
        Tree { parents }
    }

    /// The bracket height this tree's printed form implies without a suffix.
    fn natural_height(&self) -> usize {
        let n = self.height();
        if n == 0 || self.tips() > 0 {
            return n;
        }
        (0..=n).rev().find(|&m| self.level(m) > 0).unwrap_or(0) + 1
    }

    fn write_node(&self, m: usize, i: usize, out: &mut String) {
        if m == self.height() {
            out.push('*');
            return;
        }
        out.push('[');
        for (c, child) in self.children(m, i).enumerate() {
            if c > 0 {
                out.push(',');
            }
            self.write_node(m + 1, child, out);
        }
        out.push(']');
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            height: self.height(),
            levels: self.levels(),
            maps: self
                .parents
                .iter()
                .map(|m| m.iter().map(|p| p + 1).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &TreeJson) -> Result<Tree> {
        if json.maps.len() != json.height || json.levels.len() != json.height + 1 {
            return Err(Error::InvalidTree(
                "height, levels and maps have inconsistent lengths".into(),
            ));
        }
        if json.levels[0] != 1 {
            return Err(Error::InvalidTree("k_0 must be 1".into()));
        }
        let mut parents = Vec::with_capacity(json.height);
        for (m, map) in json.maps.iter().enumerate() {
            if map.len() != json.levels[m + 1] {
                return Err(Error::InvalidTree(format!(
                    "rho_{m} has {} entries but k_{} = {}",
                    map.len(),
                    m + 1,
                    json.levels[m + 1]
                )));
            }
            let zero_based = map
                .iter()
                .map(|&p| {
                    p.checked_sub(1)
                        .ok_or_else(|| Error::InvalidTree("maps are 1-indexed".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            parents.push(zero_based);
        }
        Tree::new(parents)
    }
}

/// JSON form `{"height": n, "levels": [...], "maps": [[...], ...]}`, 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub height: usize,
    pub levels: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_node(0, 0, &mut out);
        f.write_str(&out)?;
        if self.natural_height() != self.height() {
            write!(f, "@{}", self.height())?;
        }
        Ok(())
    }
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Tree, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

enum Node {
    Star,
    Branch(Vec<Node>),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    star_depths: Vec<(usize, usize)>,
    empty_depths: Vec<(usize, usize)>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn node(&mut self, depth: usize) -> Result<Node> {
        match self.peek() {
            Some(b'*') => {
                self.star_depths.push((depth, self.pos));
                self.pos += 1;
                Ok(Node::Star)
            }
            Some(b'[') => {
                let open = self.pos;
                self.pos += 1;
                let mut children = Vec::new();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    self.empty_depths.push((depth, open));
                    return Ok(Node::Branch(children));
                }
                loop {
                    children.push(self.node(depth + 1)?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Node::Branch(children));
                        }
                        Some(c) => {
                            return Err(Error::parse(
                                self.pos,
                                format!("expected ',' or ']', found '{}'", c as char),
                            ))
                        }
                        None => return Err(Error::parse(self.pos, "unclosed '['")),
                    }
                }
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("expected '*' or '[', found '{}'", c as char),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(text: &str) -> Result<Tree> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            star_depths: Vec::new(),
            empty_depths: Vec::new(),
        };
        let root = parser.node(0)?;
        let mut explicit = None;
        if parser.peek() == Some(b'@') {
            parser.pos += 1;
            parser.skip_ws();
            let start = parser.pos;
            while parser.pos < parser.bytes.len() && parser.bytes[parser.pos].is_ascii_digit() {
                parser.pos += 1;
            }
            let digits = &text[start..parser.pos];
            explicit = Some(
                digits
                    .parse::<usize>()
                    .map_err(|_| Error::parse(start, "expected a height after '@'"))?,
            );
        }
        if let Some(c) = parser.peek() {
            return Err(Error::parse(
                parser.pos,
                format!("trailing input starting with '{}'", c as char),
            ));
        }

        let height = if let Some(&(d, _)) = parser.star_depths.first() {
            if let Some(&(other, pos)) = parser.star_depths.iter().find(|(e, _)| *e != d) {
                return Err(Error::parse(
                    pos,
                    format!("ragged tree: tips at depths {d} and {other}"),
                ));
            }
            if let Some(&(e, pos)) = parser.empty_depths.iter().find(|(e, _)| *e >= d) {
                return Err(Error::parse(
                    pos,
                    format!("ragged tree: empty node at depth {e} but tips at depth {d}"),
                ));
            }
            d
        } else {
            parser
                .empty_depths
                .iter()
                .map(|(e, _)| e + 1)
                .max()
                .unwrap_or(0)
        };
        let height = match explicit {
            Some(h) if h < height || (!parser.star_depths.is_empty() && h != height) => {
                return Err(Error::parse(
                    0,
                    format!("explicit height {h} conflicts with bracket height {height}"),
                ))
            }
            Some(h) => h,
            None => height,
        };

        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); height];
        let mut current: Vec<&Node> = vec![&root];
        for map in parents.iter_mut() {
            let mut next = Vec::new();
            for (i, node) in current.iter().enumerate() {
                if let Node::Branch(children) = node {
                    for child in children {
                        map.push(i);
                        next.push(child);
                    }
                }
            }
            current = next;
        }
        Tree::new(parents)
    }
}

/// Calls `f` with every composition of `total` into `parts` parts (weak when
/// `strict` is false), in lexicographic order.
fn for_each_composition(
    total: usize,
    parts: usize,
    strict: bool,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn go(
        remaining: usize,
        parts_left: usize,
        strict: bool,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if parts_left == 0 {
            return if remaining == 0 { f(acc) } else { Ok(()) };
        }
        let min = usize::from(strict);
        let reserve = min * (parts_left - 1);
        if remaining < min + reserve {
            return Ok(());
        }
        for v in min..=remaining - reserve {
            acc.push(v);
            go(remaining - v, parts_left - 1, strict, acc, f)?;
            acc.pop();
        }
        Ok(())
    }
    go(total, parts, strict, &mut Vec::new(), f)
}

/// All trees of the given height with at most `max_tips` tips, sorted by their
/// bracket form.
///
/// Non-pruned trees can carry arbitrarily many childless branches, so when
/// `pruned_only` is false every level is additionally capped at
/// `max(max_tips, 1)` elements.
pub fn enumerate_trees(height: usize, max_tips: usize, pruned_only: bool) -> Result<Vec<Tree>> {
    enumerate_trees_bounded(height, max_tips, max_tips.max(1), pruned_only)
}

/// As [`enumerate_trees`], capping every non-top level of a non-pruned tree at
/// `max_width` elements.
pub fn enumerate_trees_bounded(
    height: usize,
    max_tips: usize,
    max_width: usize,
    pruned_only: bool,
) -> Result<Vec<Tree>> {
    if height > MAX_ENUM_HEIGHT || max_tips > MAX_ENUM_TIPS || max_width > MAX_ENUM_TIPS {
        return Err(Error::Bounds(format!(
            "tree enumeration is limited to height <= {MAX_ENUM_HEIGHT} and tips, width <= {MAX_ENUM_TIPS}"
        )));
    }
    let width = max_width;
    let mut out: Vec<Tree> = Vec::new();

    fn extend(
        height: usize,
        max_tips: usize,
        width: usize,
        pruned: bool,
        parents: &mut Vec<Vec<usize>>,
        out: &mut Vec<Tree>,
    ) -> Result<()> {
        let m = parents.len();
        let below = parents.last().map_or(1, |p| p.len());
        if m == height {
            if out.len() >= MAX_ENUM_COUNT {
                return Err(Error::Bounds(format!(
                    "more than {MAX_ENUM_COUNT} trees requested"
                )));
            }
            out.push(Tree {
                parents: parents.clone(),
            });
            return Ok(());
        }
        let cap = if m + 1 == height || pruned {
            max_tips
        } else {
            width
        };
        let sizes: Vec<usize> = if below == 0 {
            vec![0]
        } else if pruned {
            (below..=cap).collect()
        } else {
            (0..=cap).collect()
        };
        for size in sizes {
            for_each_composition(size, below, pruned, &mut |counts| {
                let map: Vec<usize> = counts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &c)| std::iter::repeat_n(i, c))
                    .collect();
                parents.push(map);
                let r = extend(height, max_tips, width, pruned, parents, out);
                parents.pop();
                r
            })?;
        }
        Ok(())
    }

    extend(
        height,
        max_tips,
        width,
        pruned_only,
        &mut Vec::new(),
        &mut out,
    )?;
    if pruned_only {
        out.retain(|t| t.tips() > 0 || height == 0);
    }
    let mut keyed: Vec<(String, Tree)> = out.into_iter().map(|t| (t.to_string(), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let a = t("[*,*]");
        assert_eq!(a.levels(), vec![1, 2]);
        assert_eq!(a.map(0), &[0, 0]);

        let b = t("[[],[*]]");
        assert_eq!(b.levels(), vec![1, 2, 1]);
        assert_eq!(b.map(1), &[1]);

        let c = t("[[*,*],[*]]");
        assert_eq!(c.levels(), vec![1, 2, 3]);
        assert_eq!(c.map(1), &[0, 0, 1]);

        assert_eq!(t("*").height(), 0);
        assert_eq!(t(" [ * , * ] ").to_string(), "[*,*]");
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "[*,[*]]",
            "[*",
            "[*,*]]",
            "[x]",
            "",
            "[[*],[]]x",
            "[[*],[[]]]",
        ] {
            let err = bad.parse::<Tree>().unwrap_err();
            assert!(matches!(err, Error::Parse { .. }), "{bad}: {err}");
        }
        // ragged: childless branch at tip depth
        assert!("[*,[]]".parse::<Tree>().is_err());
    }

    #[test]
    fn degenerate_printing_needs_suffix_only_without_tips() {
        let z = t("[]").suspend();
        assert_eq!(z.levels(), vec![1, 0, 0]);
        assert_eq!(z.to_string(), "[]@2");
        assert_eq!(t("[]@2"), z);
        assert_eq!(t("[*]").suspend().to_string(), "[[]]");
        assert!("[*]@3".parse::<Tree>().is_err());
    }

    #[test]
    fn tips_and_leaves() {
        assert_eq!(Tree::unit(2).tips(), 1);
        assert_eq!(t("[[],[*]]").tips(), 1);
        assert_eq!(t("[[*,*],[*]]").tips(), 3);
        assert_eq!(
            Tree::unit(1).leaves(),
            vec![Leaf {
                height: 1,
                position: 0
            }]
        );
        assert_eq!(
            t("[[],[*]]").leaves(),
            vec![
                Leaf {
                    height: 1,
                    position: 0
                },
                Leaf {
                    height: 2,
                    position: 0
                }
            ]
        );
        // a tree with two non-tip leaves
        let two = t("[[],[*,*],[]]");
        assert_eq!(two.leaves().len(), two.tips() + 2);
    }

    #[test]
    fn pruned() {
        assert!(t("[[*,*],[*]]").is_pruned());
        assert!(!t("[[],[*]]").is_pruned());
        for n in 0..4 {
            assert!(Tree::unit(n).is_pruned());
        }
        assert!(!t("[]").is_pruned());
    }

    #[test]
    fn suspension_and_truncation() {
        assert_eq!(Tree::unit(0).suspend().to_string(), "[]");
        assert_eq!(Tree::unit(1).suspend().to_string(), "[[]]");
        assert_eq!(t("[*,*]").truncate().unwrap(), t("*"));
        assert_eq!(t("[[*,*],[*]]").truncate().unwrap(), t("[*,*]"));
        assert!(t("*").truncate().is_err());
        let x = t("[[*],[],[*,*]]");
        assert_eq!(x.suspend().truncate().unwrap(), x);
        assert_eq!(x.suspend().tips(), 0);
    }

    #[test]
    fn composition_examples() {
        assert_eq!(t("[*]").compose(&t("[*,*]"), 0).unwrap(), t("[*,*,*]"));
        assert_eq!(
            t("[[*],[*]]").compose(&t("[[*],[*,*]]"), 1).unwrap(),
            t("[[*,*],[*,*,*]]")
        );
        let x = t("[[*],[*,*]]");
        let unit = x.truncate_to(1).identity_cell(2);
        assert_eq!(x.compose(&unit, 1).unwrap(), x);
        assert_eq!(unit.compose(&x, 1).unwrap(), x);
        assert!(matches!(
            t("[[*]]").compose(&t("[[*],[*]]"), 1),
            Err(Error::Globularity(_))
        ));
        assert!(t("[*]").compose(&t("[[*]]"), 0).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let parts = t("[*,*,*]").canonical_decomposition(0).unwrap();
        assert_eq!(parts, vec![t("[*]"); 3]);
        let parts = t("[[*,*],[*]]").canonical_decomposition(0).unwrap();
        assert_eq!(parts, vec![t("[[*,*]]"), t("[[*]]")]);
        assert_eq!(
            t("[[*,*]]").canonical_decomposition(0).unwrap(),
            vec![t("[[*,*]]")]
        );
        let parts = t("[[*],[*,*]]").canonical_decomposition(1).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(Tree::compose_all(&parts, 1).unwrap(), t("[[*],[*,*]]"));
        assert!(t("[]").canonical_decomposition(0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = t("[[*,*],[],[*]]");
        let json = x.to_json();
        assert_eq!(json.levels, vec![1, 3, 3]);
        assert_eq!(json.maps, vec![vec![1, 1, 1], vec![1, 1, 3]]);
        assert_eq!(Tree::from_json(&json).unwrap(), x);
        let bad = TreeJson {
            height: 1,
            levels: vec![1, 2],
            maps: vec![vec![2, 1]],
        };
        assert!(Tree::from_json(&bad).is_err());
    }

    #[test]
    fn enumeration_examples() {
        for k in 1..=5 {
            let trees: Vec<_> = enumerate_trees(1, k, true)
                .unwrap()
                .into_iter()
                .filter(|t| t.tips() == k)
                .collect();
            assert_eq!(trees.len(), 1);
        }
        let all: Vec<String> = enumerate_trees(1, 2, false)
            .unwrap()
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(all, vec!["[*,*]", "[*]", "[]"]);
        assert!(enumerate_trees(5, 2, true).is_err());
        assert!(enumerate_trees(2, 9, true).is_err());
    }
}
