//! Dimension/rank bookkeeping for the three-periodic long exact sequence
//!
//! ```text
//! ... -> S^m -> Psi^m -> Phi^m -> S^{m+1} -> Psi^{m+1} -> ...
//! ```
//!
//! of special-fibre, nearby and vanishing cohomology. Exactness at a term is
//! `dim = rank(in) + rank(out)`; the connecting ranks `Phi^m -> S^{m+1}` are
//! not supplied but forced by exactness at `Phi^m`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qlinalg::{image, kernel};
use crate::zigzag::random_invertible;
use crate::QMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LesError {
    #[error("sequence {name} has length {found}, expected {expected}")]
    Length { name: &'static str, expected: usize, found: usize },
    #[error("{name}[{degree}] = {value} is negative")]
    Negative { name: &'static str, degree: i64, value: i64 },
    #[error("{name}[{degree}] = {value} exceeds the dimension {bound} of an adjacent term")]
    RankTooLarge { name: &'static str, degree: i64, value: i64, bound: i64 },
}

/// Dimensions and ranks over the window of degrees `start ..`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesWitness {
    #[serde(default)]
    pub start: i64,
    pub h_special: Vec<i64>,
    pub h_psi: Vec<i64>,
    pub h_phi: Vec<i64>,
    /// Ranks of `S^m -> Psi^m`.
    pub r_special_psi: Vec<i64>,
    /// Ranks of `Psi^m -> Phi^m`.
    pub r_psi_phi: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesFailure {
    pub degree: i64,
    /// `"special"`, `"psi"` or `"phi"`.
    pub term: &'static str,
    pub dim: i64,
    pub rank_in: i64,
    pub rank_out: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub exact: bool,
    pub first_failure: Option<LesFailure>,
    /// Ranks of `Phi^m -> S^{m+1}` forced by exactness at `Phi^m`.
    pub connecting_ranks: Vec<i64>,
    /// `sum (-1)^m (h_special - h_psi + h_phi)`.
    pub alternating_sum: i64,
}

impl LesWitness {
    pub fn len(&self) -> usize {
        self.h_special.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_special.is_empty()
    }

    fn sequences(&self) -> [(&'static str, &[i64]); 5] {
        [
            ("h_special", &self.h_special),
            ("h_psi", &self.h_psi),
            ("h_phi", &self.h_phi),
            ("r_special_psi", &self.r_special_psi),
            ("r_psi_phi", &self.r_psi_phi),
        ]
    }

    fn check_inputs(&self) -> Result<(), LesError> {
        let len = self.len();
        for (name, seq) in self.sequences() {
            if seq.len() != len {
                return Err(LesError::Length { name, expected: len, found: seq.len() });
            }
            if let Some((i, &value)) = seq.iter().enumerate().find(|(_, &v)| v < 0) {
                return Err(LesError::Negative { name, degree: self.start + i as i64, value });
            }
        }
        for i in 0..len {
            let degree = self.start + i as i64;
            let r = self.r_special_psi[i];
            let bound = self.h_special[i].min(self.h_psi[i]);
            if r > bound {
                return Err(LesError::RankTooLarge { name: "r_special_psi", degree, value: r, bound });
            }
            let r = self.r_psi_phi[i];
            let bound = self.h_psi[i].min(self.h_phi[i]);
            if r > bound {
                return Err(LesError::RankTooLarge { name: "r_psi_phi", degree, value: r, bound });
            }
        }
        Ok(())
    }
}

/// Checks exactness at every term of the window (terms outside it are
/// zero) and the alternating-sum identity.
pub fn check_les(w: &LesWitness) -> Result<LesReport, LesError> {
    w.check_inputs()?;
    let len = w.len();
    let mut failure = None;
    let mut connecting = Vec::with_capacity(len);
    let mut incoming = 0; // rank of Phi^{m-1} -> S^m
    for i in 0..len {
        let degree = w.start + i as i64;
        let mut record = |term, dim, rank_in, rank_out| {
            if failure.is_none() && dim != rank_in + rank_out {
                failure = Some(LesFailure { degree, term, dim, rank_in, rank_out });
            }
        };
        record("special", w.h_special[i], incoming, w.r_special_psi[i]);
        record("psi", w.h_psi[i], w.r_special_psi[i], w.r_psi_phi[i]);
        let delta = w.h_phi[i] - w.r_psi_phi[i];
        let next_special = w.h_special.get(i + 1).copied().unwrap_or(0);
        // delta is the rank of Phi^m -> S^{m+1}, so it cannot exceed dim S^{m+1}
        let delta_ok = delta.min(next_special);
        record("phi", w.h_phi[i], w.r_psi_phi[i], delta_ok);
        connecting.push(delta);
        incoming = delta;
    }
    let alternating_sum = (0..len)
        .map(|i| {
            let sign = if (w.start + i as i64).rem_euclid(2) == 0 { 1 } else { -1 };
            sign * (w.h_special[i] - w.h_psi[i] + w.h_phi[i])
        })
        .sum::<i64>();
    let exact = failure.is_none() && alternating_sum == 0;
    Ok(LesReport { exact, first_failure: failure, connecting_ranks: connecting, alternating_sum })
}

/// A concrete exact sequence of rational matrices `C_0 -> C_1 -> ... `, read
/// three terms per degree.
#[derive(Clone, Debug)]
pub struct ExactComplex {
    pub maps: Vec<QMatrix>,
}

impl ExactComplex {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.maps.iter().map(QMatrix::cols).collect();
        d.extend(self.maps.last().map(QMatrix::rows));
        d
    }

    /// Composites vanish and `im = ker` at every interior term; the first map
    /// is injective and the last surjective.
    pub fn is_exact(&self) -> bool {
        let dims = self.dims();
        let zero_in = |p: usize| if p == 0 { QMatrix::zeros(dims[0], 0) } else { self.maps[p - 1].clone() };
        let zero_out = |p: usize| {
            if p == self.maps.len() {
                QMatrix::zeros(0, dims[p])
            } else {
                self.maps[p].clone()
            }
        };
        (0..dims.len()).all(|p| image(&zero_in(p)) == kernel(&zero_out(p)))
    }

    /// Dimensions and ranks of the underlying maps, with all sequences of
    /// length `dims.len() / 3`.
    pub fn witness(&self) -> LesWitness {
        let dims: Vec<i64> = self.dims().iter().map(|&d| d as i64).collect();
        let rank = |p: usize| self.maps.get(p).map_or(0, |m| m.rank() as i64);
        let degrees = dims.len() / 3;
        LesWitness {
            start: 0,
            h_special: (0..degrees).map(|m| dims[3 * m]).collect(),
            h_psi: (0..degrees).map(|m| dims[3 * m + 1]).collect(),
            h_phi: (0..degrees).map(|m| dims[3 * m + 2]).collect(),
            r_special_psi: (0..degrees).map(|m| rank(3 * m)).collect(),
            r_psi_phi: (0..degrees).map(|m| rank(3 * m + 1)).collect(),
        }
    }
}

/// Random exact complex with `3 * degrees` terms of dimension at most
/// `2 * max_rank`: adapted block maps conjugated by random changes of basis.
pub fn random_exact_complex<R: Rng>(rng: &mut R, degrees: usize, max_rank: usize) -> ExactComplex {
    let terms = 3 * degrees;
    // out_rank[p] = rank of C_p -> C_{p+1}; the last term maps to zero
    let out_rank: Vec<usize> =
        (0..terms).map(|p| if p + 1 == terms { 0 } else { rng.gen_range(0..=max_rank) }).collect();
    let in_rank = |p: usize| if p == 0 { 0 } else { out_rank[p - 1] };
    let dims: Vec<usize> = (0..terms).map(|p| in_rank(p) + out_rank[p]).collect();
    let bases: Vec<QMatrix> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
    let maps = (0..terms.saturating_sub(1))
        .map(|p| {
            // C_p = (image of C_{p-1}) + (outgoing part), sent onto the first
            // out_rank[p] coordinates of C_{p+1}
            let adapted = QMatrix::from_fn(dims[p + 1], dims[p], |i, j| {
                let one = j >= in_rank(p) && i == j - in_rank(p);
                crate::Q::from_integer(i64::from(one).into())
            });
            let inv = bases[p].inverse().expect("unimodular");
            &(&bases[p + 1] * &adapted) * &inv
        })
        .collect();
    ExactComplex { maps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Single node on a threefold: the vanishing class is one-dimensional in
    /// degree 3 and lifts from nearby cohomology.
    fn single_node() -> LesWitness {
        LesWitness {
            start: 0,
            h_special: vec![1, 0, 1, 3, 1, 0, 1],
            h_psi: vec![1, 0, 1, 4, 1, 0, 1],
            h_phi: vec![0, 0, 0, 1, 0, 0, 0],
            r_special_psi: vec![1, 0, 1, 3, 1, 0, 1],
            r_psi_phi: vec![0, 0, 0, 1, 0, 0, 0],
        }
    }

    #[test]
    fn zero_witness_is_exact() {
        let w = LesWitness {
            h_special: vec![0; 4],
            h_psi: vec![0; 4],
            h_phi: vec![0; 4],
            r_special_psi: vec![0; 4],
            r_psi_phi: vec![0; 4],
            start: 0,
        };
        assert!(check_les(&w).unwrap().exact);
    }

    #[test]
    fn single_node_exact() {
        let rep = check_les(&single_node()).unwrap();
        assert!(rep.exact, "{rep:?}");
        assert!(rep.connecting_ranks.iter().all(|&d| d == 0));
    }

    #[test]
    fn single_node_with_unaccounted_defect_fails() {
        // the rank into Phi^3 no longer accounts for the vanishing class
        let mut w = single_node();
        w.r_psi_phi[3] = 0;
        w.r_special_psi[3] = 3;
        let rep = check_les(&w).unwrap();
        assert!(!rep.exact);
        assert_eq!(rep.first_failure.unwrap().term, "psi");
    }

    #[test]
    fn second_vanishing_degree_fails() {
        let mut w = single_node();
        w.h_phi[5] = 1;
        let rep = check_les(&w).unwrap();
        assert!(!rep.exact);
        let f = rep.first_failure.unwrap();
        assert_eq!((f.degree, f.term), (6, "special"));
        assert_eq!(rep.alternating_sum, -1);
    }

    #[test]
    fn input_errors() {
        let mut w = single_node();
        w.h_psi[0] = -1;
        assert!(matches!(check_les(&w), Err(LesError::Negative { name: "h_psi", degree: 0, .. })));
        let mut w = single_node();
        w.r_special_psi[3] = 4;
        assert!(matches!(check_les(&w), Err(LesError::RankTooLarge { degree: 3, .. })));
        let mut w = single_node();
        w.h_phi.pop();
        assert!(matches!(check_les(&w), Err(LesError::Length { name: "h_phi", .. })));
    }

    #[test]
    fn random_complexes_are_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let degrees = rng.gen_range(1..=4);
            let c = random_exact_complex(&mut rng, degrees, 3);
            assert!(c.is_exact());
            let rep = check_les(&c.witness()).unwrap();
            assert!(rep.exact, "{rep:?}");
        }
    }
}
