//! Nondegenerate simplices of the nerve of a finite category.

use serde::{Deserialize, Serialize};

use crate::category::FinCategory;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveProfile {
    /// `f[d]` = number of strings of `d` composable non-identity arrows.
    pub f_vector: Vec<u64>,
    /// Alternating sum, present only when the profile is complete.
    pub euler_characteristic: Option<i64>,
    /// False when `max_dim` cut off nonzero higher counts.
    pub complete: bool,
}

/// Counts nondegenerate simplices up to `max_dim` (all of them when `None`).
///
/// Without a cap, a category whose non-identity arrows compose in a cycle has
/// infinitely many simplices; this is reported as a bounds error.
pub fn nerve_profile(category: &FinCategory, max_dim: Option<usize>) -> Result<NerveProfile> {
    let arrows: Vec<usize> = category.non_identity_arrows().collect();
    let mut f_vector = vec![category.object_count() as u64];
    // ways[i]: strings of the current length ending in arrows[i]
    let mut ways: Vec<u64> = vec![1; arrows.len()];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); category.object_count()];
    for (i, &a) in arrows.iter().enumerate() {
        incoming[category.arrow(a).target].push(i);
    }
    let mut dim = 1;
    loop {
        let total = ways
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::Bounds("simplex count overflows".into()))?;
        if total == 0 {
            break;
        }
        if max_dim.is_some_and(|m| dim > m) {
            return Ok(NerveProfile {
                f_vector,
                euler_characteristic: None,
                complete: false,
            });
        }
        if max_dim.is_none() && dim > arrows.len() {
            return Err(Error::Bounds(
                "the nerve has simplices in every dimension; pass a dimension cap".into(),
            ));
        }
        f_vector.push(total);
        let mut next = vec![0u64; arrows.len()];
        for (i, &a) in arrows.iter().enumerate() {
            let source = category.arrow(a).source;
            for &j in &incoming[source] {
                next[i] = next[i]
                    .checked_add(ways[j])
                    .ok_or_else(|| Error::Bounds("simplex count overflows".into()))?;
            }
        }
        ways = next;
        dim += 1;
    }
    let euler = f_vector
        .iter()
        .enumerate()
        .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum();
    Ok(NerveProfile {
        f_vector,
        euler_characteristic: Some(euler),
        complete: true,
    })
}

pub fn has_terminal(category: &FinCategory) -> bool {
    category.has_terminal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    use crate::category::Arrow;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn small_posets() {
        let point = FinCategory::thin(names(1), &[]).unwrap();
        let p = nerve_profile(&point, None).unwrap();
        assert_eq!(p.f_vector, vec![1]);
        assert_eq!(p.euler_characteristic, Some(1));

        let two = FinCategory::thin(names(2), &[(0, 1)]).unwrap();
        assert_eq!(nerve_profile(&two, None).unwrap().f_vector, vec![2, 1]);

        // boundary of a square: a circle
        let square = FinCategory::thin(names(4), &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let s = nerve_profile(&square, None).unwrap();
        assert_eq!(s.f_vector, vec![4, 4]);
        assert_eq!(s.euler_characteristic, Some(0));
        assert!(!has_terminal(&square));
    }

    #[test]
    fn triangle_order_complex() {
        let c = FinCategory::thin(names(3), &[(0, 1), (1, 2)]).unwrap();
        let p = nerve_profile(&c, None).unwrap();
        assert_eq!(p.f_vector, vec![3, 3, 1]);
        assert_eq!(p.euler_characteristic, Some(1));
        let capped = nerve_profile(&c, Some(1)).unwrap();
        assert_eq!(capped.f_vector, vec![3, 3]);
        assert!(!capped.complete);
        assert_eq!(capped.euler_characteristic, None);
    }

    #[test]
    fn idempotent_needs_a_cap() {
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
        let comp = HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]);
        let c = FinCategory::new(names(1), arrows, vec![0], comp).unwrap();
        assert!(matches!(nerve_profile(&c, None), Err(Error::Bounds(_))));
        let p = nerve_profile(&c, Some(3)).unwrap();
        assert_eq!(p.f_vector, vec![1, 1, 1, 1]);
    }
}
