//! Finite categories given by explicit arrow lists.
//!
//! Thin categories store no composition table: the composite of two arrows is
//! the unique arrow between the outer endpoints.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `(g, f) -> g ∘ f`; empty for thin categories.
    composition: HashMap<(usize, usize), usize>,
    /// `(a, b) -> arrows a -> b`.
    hom: HashMap<(usize, usize), Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    thin: bool,
}

impl FinCategory {
    /// Thin category on `objects` generated by `relation` (reflexive-transitive
    /// closure). Arrows are ordered by (source, target).
    pub fn thin(objects: Vec<String>, relation: &[(usize, usize)]) -> Result<FinCategory> {
        let n = objects.len();
        let mut step: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in relation {
            if a >= n || b >= n {
                return Err(Error::Category(format!(
                    "relation ({a}, {b}) mentions an unknown object"
                )));
            }
            step[a].push(b);
        }
        let reach = reachability(&step);
        let mut arrows = Vec::new();
        let mut identities = vec![0; n];
        for (a, targets) in reach.iter().enumerate() {
            for &b in targets {
                if a == b {
                    identities[a] = arrows.len();
                }
                arrows.push(Arrow {
                    source: a,
                    target: b,
                    label: if a == b {
                        format!("id{a}")
                    } else {
                        format!("{a}<{b}")
                    },
                });
            }
        }
        Ok(FinCategory::assemble(
            objects,
            arrows,
            identities,
            HashMap::new(),
            true,
        ))
    }

    /// General finite category; the laws are checked.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Result<FinCategory> {
        let c = FinCategory::assemble(objects, arrows, identities, composition, false);
        c.check_laws()?;
        Ok(c)
    }

    fn assemble(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
        thin: bool,
    ) -> FinCategory {
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (i, a) in arrows.iter().enumerate() {
            if a.source < objects.len() && a.target < objects.len() {
                hom.entry((a.source, a.target)).or_default().push(i);
                outgoing[a.source].push(i);
            }
        }
        FinCategory {
            objects,
            arrows,
            identities,
            composition,
            hom,
            outgoing,
            thin,
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, arrow: usize) -> bool {
        self.identities[self.arrows[arrow].source] == arrow
    }

    /// True when the category was built as (or verified to be) thin.
    pub fn is_thin(&self) -> bool {
        self.thin || self.hom.values().all(|v| v.len() <= 1)
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn outgoing(&self, a: usize) -> &[usize] {
        &self.outgoing[a]
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(|&i| !self.is_identity(i))
    }

    /// `g ∘ f`, or `None` if not composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let (fa, ga) = (&self.arrows[f], &self.arrows[g]);
        if fa.target != ga.source {
            return None;
        }
        if self.thin {
            self.hom(fa.source, ga.target).first().copied()
        } else {
            self.composition.get(&(g, f)).copied()
        }
    }

    pub fn check_laws(&self) -> Result<()> {
        let n = self.objects.len();
        if self.identities.len() != n {
            return Err(Error::Category(
                "one identity per object is required".into(),
            ));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source >= n || a.target >= n {
                return Err(Error::Category(format!("arrow {i} has unknown endpoints")));
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            let a = self
                .arrows
                .get(id)
                .ok_or_else(|| Error::Category(format!("identity of {o} is not an arrow")))?;
            if a.source != o || a.target != o {
                return Err(Error::Category(format!(
                    "identity of {o} is not an endo-arrow"
                )));
            }
        }
        for f in 0..self.arrows.len() {
            let fa = &self.arrows[f];
            if self.compose(self.identities[fa.target], f) != Some(f)
                || self.compose(f, self.identities[fa.source]) != Some(f)
            {
                return Err(Error::Category(format!("unit law fails for arrow {f}")));
            }
            for &g in self.outgoing(fa.target) {
                let gf = self
                    .compose(g, f)
                    .ok_or_else(|| Error::Category(format!("{g} ∘ {f} is missing")))?;
                let ga = &self.arrows[g];
                let r = &self.arrows[gf];
                if r.source != fa.source || r.target != ga.target {
                    return Err(Error::Category(format!("{g} ∘ {f} has wrong endpoints")));
                }
                if self.thin {
                    continue; // associativity is automatic
                }
                for &h in self.outgoing(ga.target) {
                    let left = self.compose(h, gf);
                    let right = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if left != right {
                        return Err(Error::Category(format!(
                            "associativity fails for ({h}, {g}, {f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Objects `t` with exactly one arrow from every object.
    pub fn terminal_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&t| (0..self.objects.len()).all(|a| self.hom(a, t).len() == 1))
            .collect()
    }

    pub fn has_terminal(&self) -> bool {
        !self.terminal_objects().is_empty()
    }

    pub fn to_json(&self) -> CategoryJson {
        let mut composition: Vec<[usize; 3]> = if self.thin {
            Vec::new()
        } else {
            self.composition
                .iter()
                .map(|(&(g, f), &h)| [g, f, h])
                .collect()
        };
        composition.sort_unstable();
        CategoryJson {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            identities: self.identities.clone(),
            thin: self.thin,
            composition,
        }
    }

    pub fn from_json(json: &CategoryJson) -> Result<FinCategory> {
        if json.thin {
            let relation: Vec<(usize, usize)> =
                json.arrows.iter().map(|a| (a.source, a.target)).collect();
            for a in &json.arrows {
                if a.source >= json.objects.len() || a.target >= json.objects.len() {
                    return Err(Error::Category("arrow with unknown endpoint".into()));
                }
            }
            return FinCategory::thin(json.objects.clone(), &relation);
        }
        let composition = json
            .composition
            .iter()
            .map(|&[g, f, h]| ((g, f), h))
            .collect();
        FinCategory::new(
            json.objects.clone(),
            json.arrows.clone(),
            json.identities.clone(),
            composition,
        )
    }
}

/// JSON form. For thin categories the composition list is empty and the
/// arrows are read as generating relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<usize>,
    #[serde(default)]
    pub thin: bool,
    /// Triples `[g, f, g∘f]`.
    #[serde(default)]
    pub composition: Vec<[usize; 3]>,
}

/// Reflexive-transitive closure of a successor relation, as sorted lists.
pub fn reachability(step: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = step.len();
    (0..n)
        .map(|start| {
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for &b in &step[a] {
                    if seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
            seen.into_iter().collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn thin_closure() {
        let c = FinCategory::thin(names(3), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(c.arrows().len(), 6);
        assert!(c.is_thin());
        c.check_laws().unwrap();
        let f = c.hom(0, 1)[0];
        let g = c.hom(1, 2)[0];
        assert_eq!(c.compose(g, f), Some(c.hom(0, 2)[0]));
        assert_eq!(c.compose(f, g), None);
        assert_eq!(c.terminal_objects(), vec![2]);
    }

    #[test]
    fn discrete_has_no_terminal() {
        let c = FinCategory::thin(names(2), &[]).unwrap();
        assert!(!c.has_terminal());
        let point = FinCategory::thin(names(1), &[]).unwrap();
        assert!(point.has_terminal());
    }

    fn two_idempotents() -> FinCategory {
        // one object, arrows id and e with e∘e = e
        let arrows = vec![
            Arrow {
                source: 0,
                target: 0,
                label: "id".into(),
            },
            Arrow {
                source: 0,
                target: 0,
                label: "e".into(),
            },
        ];
        let composition = HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]);
        FinCategory::new(names(1), arrows, vec![0], composition).unwrap()
    }

    #[test]
    fn general_category() {
        let c = two_idempotents();
        assert!(!c.is_thin());
        assert!(!c.has_terminal());
        let json = c.to_json();
        let back = FinCategory::from_json(&json).unwrap();
        assert_eq!(back.arrows(), c.arrows());
    }

    #[test]
    fn law_violations_are_reported() {
        let arrows = vec![
            Arrow {
                source: 0,
                target: 0,
                label: "id".into(),
            },
            Arrow {
                source: 0,
                target: 0,
                label: "e".into(),
            },
        ];
        let missing = HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1)]);
        assert!(FinCategory::new(names(1), arrows.clone(), vec![0], missing).is_err());
        let bad_unit = HashMap::from([((0, 0), 0), ((0, 1), 0), ((1, 0), 1), ((1, 1), 1)]);
        assert!(FinCategory::new(names(1), arrows, vec![0], bad_unit).is_err());
    }

    #[test]
    fn thin_json_round_trip() {
        let c = FinCategory::thin(names(3), &[(0, 1), (0, 2)]).unwrap();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = FinCategory::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.arrows(), c.arrows());
    }
}
