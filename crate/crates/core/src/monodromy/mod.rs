//! Vanishing-cycle lattices, Picard-Lefschetz transvections, and the
//! monodromy weight filtration of a nilpotent logarithm.
//!
//! Pairing convention: `<x, y> = x^T G y` for the Gram matrix `G`, and the
//! transvection attached to `delta` is `T(x) = x + <x, delta> delta`, i.e.
//! `T = I + delta (G delta)^T` on column vectors.

mod weight;

pub use weight::{
    check_hard_lefschetz, jordan_weight_oracle, random_nilpotent, single_step_perturbations, weight_filtration,
    LefschetzReport, WeightFiltration, WeightFiltrationJson,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{LinalgError, QMatrix, ZMatrix, Q, Z};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("gram matrix must be square, got {rows}x{cols}")]
    GramNotSquare { rows: usize, cols: usize },
    #[error("declared rank {declared} but gram matrix has size {actual}")]
    RankMismatch { declared: usize, actual: usize },
    #[error("gram matrix is not {0:?}")]
    Symmetry(Symmetry),
    #[error("cycle {index} has length {found}, lattice rank is {expected}")]
    CycleLength { index: usize, expected: usize, found: usize },
    #[error("cycle index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("total monodromy needs at least one vanishing cycle")]
    NoCycles,
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("{what} should be {}x{} but is {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { what: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Skew,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub symmetry: Symmetry,
}

/// Integral lattice with an intersection form of declared symmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice {
    gram: ZMatrix,
    symmetry: Symmetry,
}

fn z_rows(rows: &[Vec<i64>]) -> Vec<Vec<Z>> {
    rows.iter().map(|r| r.iter().map(|&x| Z::from(x)).collect()).collect()
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = MonodromyError;

    fn try_from(j: LatticeJson) -> Result<Self, MonodromyError> {
        let gram = if j.gram.is_empty() { ZMatrix::zeros(0, 0) } else { ZMatrix::from_rows(z_rows(&j.gram))? };
        if gram.rows() != j.rank {
            return Err(MonodromyError::RankMismatch { declared: j.rank, actual: gram.rows() });
        }
        Lattice::new(gram, j.symmetry)
    }
}

impl From<Lattice> for LatticeJson {
    fn from(l: Lattice) -> Self {
        LatticeJson {
            rank: l.rank(),
            gram: l.gram.to_rows().iter().map(|r| r.iter().map(z_to_i64).collect()).collect(),
            symmetry: l.symmetry,
        }
    }
}

fn z_to_i64(z: &Z) -> i64 {
    i64::try_from(z).expect("lattice entries fit in i64")
}

impl Lattice {
    pub fn new(gram: ZMatrix, symmetry: Symmetry) -> Result<Self, MonodromyError> {
        if !gram.is_square() {
            return Err(MonodromyError::GramNotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        let t = gram.transpose();
        let ok = match symmetry {
            Symmetry::Symmetric => t == gram,
            Symmetry::Skew => t == -&gram,
        };
        if !ok {
            return Err(MonodromyError::Symmetry(symmetry));
        }
        Ok(Lattice { gram, symmetry })
    }

    /// Standard symplectic lattice: `pairs` hyperbolic planes `e_{2i-1}, e_{2i}`
    /// with `<e_{2i-1}, e_{2i}> = 1`.
    pub fn hyperbolic_skew(pairs: usize) -> Self {
        let gram = ZMatrix::from_fn(2 * pairs, 2 * pairs, |i, j| {
            if i / 2 != j / 2 || i == j {
                Z::zero()
            } else if i < j {
                Z::one()
            } else {
                -Z::one()
            }
        });
        Lattice { gram, symmetry: Symmetry::Skew }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// `x^T G y`.
    pub fn pairing(&self, x: &[Z], y: &[Z]) -> Result<Z, MonodromyError> {
        let gy = self.gram.apply(y)?;
        if x.len() != gy.len() {
            return Err(LinalgError::Dimension { op: "pairing", left: (1, x.len()), right: (gy.len(), 1) }.into());
        }
        Ok(x.iter().zip(&gy).fold(Z::zero(), |acc, (a, b)| acc + a * b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingConfigJson {
    #[serde(flatten)]
    pub lattice: LatticeJson,
    pub cycles: Vec<Vec<i64>>,
}

/// A lattice with an ordered list of vanishing cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VanishingConfigJson", into = "VanishingConfigJson")]
pub struct VanishingConfig {
    lattice: Lattice,
    cycles: Vec<Vec<Z>>,
}

impl TryFrom<VanishingConfigJson> for VanishingConfig {
    type Error = MonodromyError;

    fn try_from(j: VanishingConfigJson) -> Result<Self, MonodromyError> {
        VanishingConfig::new(Lattice::try_from(j.lattice)?, z_rows(&j.cycles))
    }
}

impl From<VanishingConfig> for VanishingConfigJson {
    fn from(c: VanishingConfig) -> Self {
        VanishingConfigJson {
            cycles: c.cycles.iter().map(|v| v.iter().map(z_to_i64).collect()).collect(),
            lattice: c.lattice.into(),
        }
    }
}

impl VanishingConfig {
    pub fn new(lattice: Lattice, cycles: Vec<Vec<Z>>) -> Result<Self, MonodromyError> {
        for (i, c) in cycles.iter().enumerate() {
            if c.len() != lattice.rank() {
                return Err(MonodromyError::CycleLength { index: i + 1, expected: lattice.rank(), found: c.len() });
            }
        }
        Ok(VanishingConfig { lattice, cycles })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cycles(&self) -> &[Vec<Z>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }
}

/// Transvection of the `index`-th cycle (1-based).
pub fn pl_transvection(cfg: &VanishingConfig, index: usize) -> Result<ZMatrix, MonodromyError> {
    let count = cfg.cycles.len();
    if index == 0 || index > count {
        return Err(MonodromyError::IndexOutOfRange { index, count });
    }
    let delta = &cfg.cycles[index - 1];
    let g_delta = cfg.lattice.gram.apply(delta)?;
    let n = cfg.lattice.rank();
    Ok(ZMatrix::from_fn(n, n, |i, j| {
        let e = &delta[i] * &g_delta[j];
        if i == j {
            e + Z::one()
        } else {
            e
        }
    }))
}

/// `T_r ... T_1`: the first cycle acts first.
pub fn total_monodromy(cfg: &VanishingConfig) -> Result<ZMatrix, MonodromyError> {
    if cfg.cycles.is_empty() {
        return Err(MonodromyError::NoCycles);
    }
    let mut total = ZMatrix::identity(cfg.lattice.rank());
    for k in 1..=cfg.cycles.len() {
        total = &pl_transvection(cfg, k)? * &total;
    }
    Ok(total)
}

pub fn to_rational(m: &ZMatrix) -> QMatrix {
    m.map(|x| Q::from_integer(x.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingDatum {
    pub mprime_dim: usize,
    pub mdprime_dim: usize,
    /// `M' -> M''`.
    pub u: QMatrix,
    /// `M'' -> M'`.
    pub v: QMatrix,
    /// `M' -> M'`.
    pub n: QMatrix,
}

/// `v u = n`, after checking that all three maps have the declared shapes.
pub fn validate_gluing(g: &GluingDatum) -> Result<bool, MonodromyError> {
    let (p, d) = (g.mprime_dim, g.mdprime_dim);
    let fit = |m: &QMatrix, what: &'static str, rows: usize, cols: usize| {
        m.clone().reshape_empty(rows, cols).map_err(|_| MonodromyError::Shape {
            what,
            expected: (rows, cols),
            found: m.shape(),
        })
    };
    let u = fit(&g.u, "u", d, p)?;
    let v = fit(&g.v, "v", p, d)?;
    let n = fit(&g.n, "n", p, p)?;
    Ok(&v * &u == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zvec(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| Z::from(x)).collect()
    }

    fn zmat(rows: &[&[i64]]) -> ZMatrix {
        ZMatrix::from_rows(rows.iter().map(|r| zvec(r)).collect()).unwrap()
    }

    fn qmat(rows: &[&[i64]]) -> QMatrix {
        to_rational(&zmat(rows))
    }

    fn skew2(cycles: &[&[i64]]) -> VanishingConfig {
        VanishingConfig::new(Lattice::hyperbolic_skew(1), cycles.iter().map(|c| zvec(c)).collect()).unwrap()
    }

    #[test]
    fn zero_cycle_gives_identity() {
        assert_eq!(pl_transvection(&skew2(&[&[0, 0]]), 1).unwrap(), ZMatrix::identity(2));
    }

    #[test]
    fn skew_transvection_by_hand() {
        let t = pl_transvection(&skew2(&[&[1, 0]]), 1).unwrap();
        // T e1 = e1, T e2 = e2 - e1
        assert_eq!(t, zmat(&[&[1, -1], &[0, 1]]));
        let x = &t - &ZMatrix::identity(2);
        assert!((&x * &x).is_zero());
    }

    #[test]
    fn index_range_checked() {
        let cfg = skew2(&[&[1, 0]]);
        assert_eq!(pl_transvection(&cfg, 0), Err(MonodromyError::IndexOutOfRange { index: 0, count: 1 }));
        assert!(pl_transvection(&cfg, 2).is_err());
        assert_eq!(total_monodromy(&skew2(&[])), Err(MonodromyError::NoCycles));
    }

    #[test]
    fn disjoint_pairs_commute() {
        let lat = Lattice::hyperbolic_skew(2);
        let cfg = VanishingConfig::new(lat.clone(), vec![zvec(&[1, 0, 0, 0]), zvec(&[0, 0, 1, 0])]).unwrap();
        let rev = VanishingConfig::new(lat, vec![zvec(&[0, 0, 1, 0]), zvec(&[1, 0, 0, 0])]).unwrap();
        let t = total_monodromy(&cfg).unwrap();
        assert_eq!(t, total_monodromy(&rev).unwrap());
        assert_eq!(to_rational(&(&t - &ZMatrix::identity(4))).rank(), 2);
    }

    #[test]
    fn single_cycle_total_is_transvection() {
        let cfg = skew2(&[&[1, 1]]);
        assert_eq!(total_monodromy(&cfg).unwrap(), pl_transvection(&cfg, 1).unwrap());
    }

    #[test]
    fn symmetric_transvection_is_reflection_like() {
        // <d, d> = -2: T = reflection in d, (T - 1)^2 != 0 but rank(T - 1) = 1
        let lat = Lattice::new(zmat(&[&[-2]]), Symmetry::Symmetric).unwrap();
        let cfg = VanishingConfig::new(lat, vec![zvec(&[1])]).unwrap();
        assert_eq!(pl_transvection(&cfg, 1).unwrap(), zmat(&[&[-1]]));
    }

    #[test]
    fn lattice_validation() {
        assert_eq!(
            Lattice::new(zmat(&[&[0, 1], &[1, 0]]), Symmetry::Skew),
            Err(MonodromyError::Symmetry(Symmetry::Skew))
        );
        assert!(Lattice::new(zmat(&[&[0, 1], &[1, 0]]), Symmetry::Symmetric).is_ok());
        assert!(matches!(Lattice::new(zmat(&[&[0, 1]]), Symmetry::Skew), Err(MonodromyError::GramNotSquare { .. })));
        let bad = VanishingConfig::new(Lattice::hyperbolic_skew(1), vec![zvec(&[1])]);
        assert!(matches!(bad, Err(MonodromyError::CycleLength { index: 1, .. })));
    }

    #[test]
    fn config_json_shape() {
        let cfg: VanishingConfig =
            serde_json::from_str(r#"{"rank":2,"gram":[[0,1],[-1,0]],"symmetry":"skew","cycles":[[1,0]]}"#).unwrap();
        assert_eq!(cfg, skew2(&[&[1, 0]]));
        let back = serde_json::to_value(&cfg).unwrap();
        assert_eq!(back["gram"], serde_json::json!([[0, 1], [-1, 0]]));
        let bad = serde_json::from_str::<VanishingConfig>(r#"{"rank":3,"gram":[[0]],"symmetry":"skew","cycles":[]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn gluing_examples() {
        let z = QMatrix::zeros(1, 1);
        let g = |u: i64, v: i64, n: i64| GluingDatum {
            mprime_dim: 1,
            mdprime_dim: 1,
            u: qmat(&[&[u]]),
            v: qmat(&[&[v]]),
            n: qmat(&[&[n]]),
        };
        assert!(
            validate_gluing(&GluingDatum { mprime_dim: 1, mdprime_dim: 1, u: z.clone(), v: z.clone(), n: z }).unwrap()
        );
        assert!(validate_gluing(&g(1, 7, 7)).unwrap());
        assert!(!validate_gluing(&g(1, 7, 6)).unwrap());
        assert!(!validate_gluing(&g(1, 1, 0)).unwrap());
        let bad = GluingDatum { mprime_dim: 2, ..g(1, 1, 1) };
        assert!(matches!(validate_gluing(&bad), Err(MonodromyError::Shape { what: "u", .. })));
    }
}
