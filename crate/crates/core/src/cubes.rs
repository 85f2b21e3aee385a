//! Tree-indexed configurations of little cubes with exact rational corners.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omega::{prune, TreeMorphism};
use crate::trees::{Leaf, Tree};

/// A closed axis-parallel box; `intervals[d]` is the extent along `x_{d+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cube {
    pub intervals: Vec<(Rational64, Rational64)>,
}

impl Cube {
    pub fn unit(dim: usize) -> Cube {
        Cube {
            intervals: vec![(Rational64::zero(), Rational64::one()); dim],
        }
    }

    pub fn volume(&self) -> Rational64 {
        self.intervals
            .iter()
            .fold(Rational64::one(), |acc, (lo, hi)| acc * (hi - lo))
    }

    /// Interiors intersect.
    pub fn overlaps(&self, other: &Cube) -> bool {
        self.intervals
            .iter()
            .zip(&other.intervals)
            .all(|((a0, a1), (b0, b1))| a0.max(b0) < a1.min(b1))
    }

    /// The image of `inner` under the affine map sending the unit cube onto `self`.
    pub fn embed(&self, inner: &Cube) -> Cube {
        Cube {
            intervals: self
                .intervals
                .iter()
                .zip(&inner.intervals)
                .map(|(&(lo, hi), &(a, b))| (lo + (hi - lo) * a, lo + (hi - lo) * b))
                .collect(),
        }
    }

    /// `parts` equal slabs along `axis`.
    fn slabs(&self, axis: usize, parts: usize) -> Vec<Cube> {
        if parts == 0 {
            return Vec::new();
        }
        let (lo, hi) = self.intervals[axis];
        let width = (hi - lo) / Rational64::from_integer(parts as i64);
        (0..parts)
            .map(|i| {
                let mut c = self.clone();
                let i = Rational64::from_integer(i as i64);
                c.intervals[axis] = (lo + width * i, lo + width * (i + Rational64::one()));
                c
            })
            .collect()
    }
}

/// Labelled boxes, kept sorted by label; labels are `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeConfig {
    dim: usize,
    boxes: Vec<(usize, Cube)>,
}

impl CubeConfig {
    pub fn new(dim: usize, mut boxes: Vec<(usize, Cube)>) -> Result<CubeConfig> {
        boxes.sort_by_key(|(l, _)| *l);
        for (i, (label, cube)) in boxes.iter().enumerate() {
            if *label != i {
                return Err(Error::Invariant(format!(
                    "labels must be 1..{}, found {}",
                    boxes.len(),
                    label + 1
                )));
            }
            if cube.intervals.len() != dim {
                return Err(Error::Invariant(format!(
                    "box {} has dimension {}, expected {dim}",
                    i + 1,
                    cube.intervals.len()
                )));
            }
            let zero = Rational64::zero();
            let one = Rational64::one();
            if cube
                .intervals
                .iter()
                .any(|(lo, hi)| lo >= hi || *lo < zero || *hi > one)
            {
                return Err(Error::Invariant(format!(
                    "box {} is empty or leaves the unit cube",
                    i + 1
                )));
            }
        }
        Ok(CubeConfig { dim, boxes })
    }

    /// The configuration with one box filling the cube.
    pub fn unit(dim: usize) -> CubeConfig {
        CubeConfig {
            dim,
            boxes: vec![(0, Cube::unit(dim))],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Box with label `i` (0-based).
    pub fn cube(&self, i: usize) -> &Cube {
        &self.boxes[i].1
    }

    pub fn cubes(&self) -> impl Iterator<Item = &Cube> {
        self.boxes.iter().map(|(_, c)| c)
    }

    pub fn total_volume(&self) -> Rational64 {
        self.cubes().map(Cube::volume).sum()
    }

    pub fn is_disjoint(&self) -> bool {
        self.boxes
            .iter()
            .enumerate()
            .all(|(i, (_, a))| self.boxes[i + 1..].iter().all(|(_, b)| !a.overlaps(b)))
    }

    /// Disjoint interiors and total volume exactly one.
    pub fn is_full_partition(&self) -> bool {
        self.is_disjoint() && self.total_volume() == Rational64::one()
    }

    pub fn to_json(&self) -> CubeJson {
        CubeJson {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|(label, cube)| BoxJson {
                    label: label + 1,
                    intervals: cube
                        .intervals
                        .iter()
                        .map(|(lo, hi)| [[*lo.numer(), *lo.denom()], [*hi.numer(), *hi.denom()]])
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &CubeJson) -> Result<CubeConfig> {
        let rational = |[n, d]: [i64; 2]| {
            if d == 0 {
                Err(Error::Invariant("zero denominator".into()))
            } else {
                Ok(Rational64::new(n, d))
            }
        };
        let boxes = json
            .boxes
            .iter()
            .map(|b| {
                let label = b
                    .label
                    .checked_sub(1)
                    .ok_or_else(|| Error::Invariant("labels are 1-indexed".into()))?;
                let intervals = b
                    .intervals
                    .iter()
                    .map(|[lo, hi]| Ok((rational(*lo)?, rational(*hi)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((label, Cube { intervals }))
            })
            .collect::<Result<Vec<_>>>()?;
        CubeConfig::new(json.dim, boxes)
    }

    /// SVG drawing of a planar configuration; `x_1` runs right, `x_2` up.
    pub fn to_svg(&self, size: u32) -> Result<String> {
        if self.dim != 2 {
            return Err(Error::Domain(format!(
                "SVG output needs dimension 2, got {}",
                self.dim
            )));
        }
        let s = f64::from(size);
        let to_f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n  <rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\" stroke=\"black\"/>\n"
        );
        for (label, cube) in &self.boxes {
            let (x0, x1) = cube.intervals[0];
            let (y0, y1) = cube.intervals[1];
            let (x, w) = (to_f(x0) * s, to_f(x1 - x0) * s);
            let (y, h) = ((1.0 - to_f(y1)) * s, to_f(y1 - y0) * s);
            out.push_str(&format!(
                "  <rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"#dde6f0\" stroke=\"black\"/>\n  <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>\n",
                x + w / 2.0,
                y + h / 2.0,
                label + 1
            ));
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxJson {
    pub label: usize,
    /// Per axis `[lo, hi]`, each as `[numerator, denominator]`.
    pub intervals: Vec<[[i64; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeJson {
    pub dim: usize,
    pub boxes: Vec<BoxJson>,
}

/// Slices along `x_{m+1}` at level `m`, one equal slab per child; tips emit
/// boxes in tip order and childless vertices leave their slab empty.
pub fn realize(tree: &Tree) -> Result<CubeConfig> {
    let n = tree.height();
    if n == 0 {
        return Err(Error::Domain("realization needs height at least 1".into()));
    }
    let mut boxes = Vec::with_capacity(tree.tips());
    let mut frontier = vec![Cube::unit(n)];
    for m in 0..n {
        let mut next = Vec::with_capacity(tree.level(m + 1));
        for (x, region) in frontier.iter().enumerate() {
            let children = tree.children(m, x);
            next.extend(region.slabs(m, children.len()));
        }
        frontier = next;
    }
    for (i, c) in frontier.into_iter().enumerate() {
        boxes.push((i, c));
    }
    Ok(CubeConfig { dim: n, boxes })
}

/// Little-cubes composition: `inners[i]` is placed in the box labelled `i`;
/// labels are block-lexicographic.
pub fn compose(outer: &CubeConfig, inners: &[CubeConfig]) -> Result<CubeConfig> {
    if inners.len() != outer.len() {
        return Err(Error::Domain(format!(
            "{} inner configurations for {} boxes",
            inners.len(),
            outer.len()
        )));
    }
    let mut boxes = Vec::new();
    for ((_, place), inner) in outer.boxes.iter().zip(inners) {
        if inner.dim != outer.dim {
            return Err(Error::Domain(format!(
                "dimension {} inside dimension {}",
                inner.dim, outer.dim
            )));
        }
        let offset = boxes.len();
        for (label, cube) in &inner.boxes {
            boxes.push((offset + label, place.embed(cube)));
        }
    }
    Ok(CubeConfig {
        dim: outer.dim,
        boxes,
    })
}

/// Relabels box `i` as `p[i]`.
pub fn apply_permutation(p: &[usize], config: &CubeConfig) -> Result<CubeConfig> {
    if p.len() != config.len() {
        return Err(Error::Domain(format!(
            "permutation of {} for {} boxes",
            p.len(),
            config.len()
        )));
    }
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Domain("not a permutation".into()));
        }
    }
    let mut boxes: Vec<(usize, Cube)> = config
        .boxes
        .iter()
        .map(|(l, c)| (p[*l], c.clone()))
        .collect();
    boxes.sort_by_key(|(l, _)| *l);
    Ok(CubeConfig {
        dim: config.dim,
        boxes,
    })
}

/// The two ends of the path attached to `sigma : T -> S`:
/// `μ(a_S; a_{F_1}, ..., a_{F_k})` over the pruned tip fibers `F_u`, and
/// `π(σ) a_T`.
pub fn endpoints(sigma: &TreeMorphism) -> Result<(CubeConfig, CubeConfig)> {
    if !sigma.source().is_pruned() || !sigma.target().is_pruned() {
        return Err(Error::Domain(format!(
            "{sigma} is not a morphism of pruned trees"
        )));
    }
    if !sigma.is_tip_surjective() {
        return Err(Error::Domain(format!("{sigma} is not surjective on tips")));
    }
    let target = sigma.target();
    let n = target.height();
    let inners = (0..target.tips())
        .map(|u| {
            let fiber = sigma.fiber(Leaf {
                height: n,
                position: u,
            })?;
            realize(&prune(&fiber)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    let left = compose(&realize(target)?, &inners)?;
    let right = apply_permutation(&sigma.tip_permutation()?, &realize(sigma.source())?)?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn interval_list(c: &CubeConfig) -> Vec<Vec<(Rational64, Rational64)>> {
        c.cubes().map(|b| b.intervals.clone()).collect()
    }

    #[test]
    fn corolla_cuts() {
        let c = realize(&Tree::corolla(3)).unwrap();
        assert_eq!(
            interval_list(&c),
            vec![
                vec![(r(0, 1), r(1, 3))],
                vec![(r(1, 3), r(2, 3))],
                vec![(r(2, 3), r(1, 1))]
            ]
        );
    }

    #[test]
    fn two_level_realization() {
        let c = realize(&t("[[*,*],[*]]")).unwrap();
        assert_eq!(
            interval_list(&c),
            vec![
                vec![(r(0, 1), r(1, 2)), (r(0, 1), r(1, 2))],
                vec![(r(0, 1), r(1, 2)), (r(1, 2), r(1, 1))],
                vec![(r(1, 2), r(1, 1)), (r(0, 1), r(1, 1))],
            ]
        );
        assert!(c.is_full_partition());
        let d = realize(&t("[[],[*]]")).unwrap();
        assert_eq!(
            interval_list(&d),
            vec![vec![(r(1, 2), r(1, 1)), (r(0, 1), r(1, 1))]]
        );
        assert_eq!(d.total_volume(), r(1, 2));
    }

    #[test]
    fn composition() {
        let two = realize(&Tree::corolla(2)).unwrap();
        let unit = CubeConfig::unit(1);
        let c = compose(&two, &[two.clone(), unit.clone()]).unwrap();
        assert_eq!(
            interval_list(&c),
            vec![
                vec![(r(0, 1), r(1, 4))],
                vec![(r(1, 4), r(1, 2))],
                vec![(r(1, 2), r(1, 1))]
            ]
        );
        assert_eq!(compose(&unit, std::slice::from_ref(&c)).unwrap(), c);
        assert_eq!(compose(&c, &[unit.clone(), unit.clone(), unit]).unwrap(), c);
        assert!(compose(&two, &[CubeConfig::unit(2), CubeConfig::unit(2)]).is_err());
    }

    #[test]
    fn permutations() {
        let c = realize(&Tree::corolla(2)).unwrap();
        assert_eq!(apply_permutation(&[0, 1], &c).unwrap(), c);
        let swapped = apply_permutation(&[1, 0], &c).unwrap();
        assert_eq!(swapped.cube(0), c.cube(1));
        assert_eq!(apply_permutation(&[1, 0], &swapped).unwrap(), c);
        assert!(apply_permutation(&[0, 0], &c).is_err());
    }

    #[test]
    fn endpoints_of_identities_agree() {
        let x = t("[[*,*],[*]]");
        let (l, r) = endpoints(&TreeMorphism::identity(&x)).unwrap();
        assert_eq!(l, realize(&x).unwrap());
        assert_eq!(r, l);
    }

    #[test]
    fn switch_endpoints_differ() {
        let sw = TreeMorphism::new(
            t("[[*],[*]]"),
            t("[[*,*]]"),
            vec![vec![0], vec![0, 0], vec![1, 0]],
        )
        .unwrap();
        let (l, rt) = endpoints(&sw).unwrap();
        assert!(l.is_full_partition() && rt.is_full_partition());
        assert_eq!(l.len(), 2);
        assert_ne!(l, rt);
        // left: the two tips stacked along x_2; right: side by side, relabelled
        assert_eq!(l.cube(0).intervals[1], (r(0, 1), r(1, 2)));
        assert_eq!(rt.cube(0).intervals[0], (r(1, 2), r(1, 1)));
    }

    #[test]
    fn json_round_trip() {
        let c = realize(&t("[[*,*],[*]]")).unwrap();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        assert!(text.starts_with(r#"{"dim":2,"boxes":[{"label":1,"intervals":[[[0,1],[1,2]]"#));
        let back = CubeConfig::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn svg_output() {
        let c = realize(&t("[[*,*],[*]]")).unwrap();
        let svg = c.to_svg(200).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(realize(&Tree::corolla(2)).unwrap().to_svg(100).is_err());
    }
}
