//! Orbits of self-dual extensions of `r` skyscrapers by `mu_ic(1, 1)`.
//!
//! Each node's gluing parameter is either zero or, after rescaling that
//! skyscraper summand, equal to one; the orbits are therefore indexed by the
//! support of the parameter vector.

use num_traits::{One, Zero};
use serde::Serialize;

use super::extension::{
    is_isomorphic_presentation, is_self_dual_presentation, normalize_params, ExtensionError, ExtensionPresentation,
};
use super::{mu_ic, mu_skyscraper, ZigZagError};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    /// 1-based nodes carrying a nonzero parameter.
    pub support: Vec<usize>,
    /// Normalized parameters in `{0, 1}`.
    #[serde(with = "crate::qlinalg::scalars")]
    pub representative: Vec<Q>,
    pub self_dual: bool,
    pub nontrivial_at_every_node: bool,
    /// A scaled sample (parameter `k + 1` at node `k`) normalized into this
    /// orbit through a verified automorphism.
    pub scaling_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub node_count: usize,
    pub orbits: Vec<OrbitRecord>,
    /// Index into `orbits` of the full-support orbit.
    pub corrected_orbit: usize,
    /// Exactly one orbit is nontrivial at every node.
    pub unique_full_support: bool,
    /// Representatives are pairwise non-isomorphic as presentations.
    pub orbits_distinct: bool,
}

impl ClassificationReport {
    pub fn corrected(&self) -> &OrbitRecord {
        &self.orbits[self.corrected_orbit]
    }

    pub fn passes(&self) -> bool {
        self.orbits.len() == 1 << self.node_count
            && self.unique_full_support
            && self.orbits_distinct
            && self.corrected().self_dual
            && self.orbits.iter().all(|o| o.scaling_verified)
    }
}

/// Supports in size order, then lexicographically: `{}, {1}, {2}, {1,2}`.
fn supports(r: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> =
        (0u64..1 << r).map(|mask| (0..r).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()).collect();
    all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    all
}

fn params_on(r: usize, support: &[usize], value: impl Fn(usize) -> Q) -> Vec<Q> {
    (1..=r).map(|k| if support.contains(&k) { value(k) } else { Q::zero() }).collect()
}

pub fn classify_self_dual_extensions(r: usize) -> Result<ClassificationReport, ExtensionError> {
    if r == 0 {
        return Err(ZigZagError::ZeroNodes.into());
    }
    let base = ExtensionPresentation::split(mu_ic(1, 1), mu_skyscraper(r)?);
    let mut orbits = Vec::with_capacity(1 << r);
    let mut representatives = Vec::with_capacity(1 << r);
    for support in supports(r) {
        let rep = base.clone().with_params(params_on(r, &support, |_| Q::one()))?;

        let scaled = base.clone().with_params(params_on(r, &support, |k| Q::from_integer((k as i64 + 1).into())))?;
        let (normalized, scaling) = normalize_params(&scaled)?;
        let scaling_verified = normalized == rep
            && scaling.automorphism.is_isomorphism()
            && scaling.total_automorphism.is_isomorphism()
            && is_isomorphic_presentation(&scaled, &rep);

        orbits.push(OrbitRecord {
            nontrivial_at_every_node: support.len() == r,
            representative: rep.class_params().to_vec(),
            self_dual: is_self_dual_presentation(&rep)?,
            scaling_verified,
            support,
        });
        representatives.push(rep);
    }

    let full: Vec<usize> =
        orbits.iter().enumerate().filter(|(_, o)| o.nontrivial_at_every_node).map(|(i, _)| i).collect();
    let orbits_distinct = representatives
        .iter()
        .enumerate()
        .all(|(i, x)| representatives[i + 1..].iter().all(|y| !is_isomorphic_presentation(x, y)));
    Ok(ClassificationReport {
        node_count: r,
        corrected_orbit: full[0],
        unique_full_support: full.len() == 1,
        orbits_distinct,
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_node_has_split_and_corrected() {
        let rep = classify_self_dual_extensions(1).unwrap();
        assert_eq!(rep.orbits.len(), 2);
        assert!(rep.orbits[0].support.is_empty());
        assert_eq!(rep.corrected_orbit, 1);
        assert!(rep.corrected().self_dual);
        assert!(rep.passes());
    }

    #[test]
    fn two_nodes_order_supports() {
        let rep = classify_self_dual_extensions(2).unwrap();
        let s: Vec<_> = rep.orbits.iter().map(|o| o.support.clone()).collect();
        assert_eq!(s, vec![vec![], vec![1], vec![2], vec![1, 2]]);
        assert_eq!(rep.corrected_orbit, 3);
        assert!(rep.passes());
    }

    #[test]
    fn orbit_counts_up_to_four() {
        for r in 1..=4 {
            let rep = classify_self_dual_extensions(r).unwrap();
            assert_eq!(rep.orbits.len(), 1 << r);
            assert_eq!(rep.orbits.iter().filter(|o| o.nontrivial_at_every_node).count(), 1);
        }
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(classify_self_dual_extensions(0).is_err());
    }
}
