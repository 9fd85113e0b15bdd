//! Degenerations with isolated singular points: the corrected object and its
//! exact sequence, the limiting weight data of the total monodromy, and the
//! point-stratum quotient.

mod les;

pub use les::{check_les, random_exact_complex, ExactComplex, LesError, LesFailure, LesReport, LesWitness};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::{
    check_hard_lefschetz, to_rational, total_monodromy, weight_filtration, LatticeJson, LefschetzReport,
    MonodromyError, VanishingConfig, VanishingConfigJson,
};
use crate::qlinalg::{image, is_unipotent, kernel, log_unipotent};
use crate::zigzag::{
    assemble, direct_sum, mu_corrected, mu_ic, mu_skyscraper, ExtensionError, ExtensionPresentation, MorphismError,
    ZigZag, ZigZagError, ZigZagMorphism,
};
use crate::{LinalgError, QMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("stratum {label}: {reason}")]
    InvalidStratum { label: String, reason: String },
    #[error("stratum {label} has dimension {dim}: stratified case beyond point strata not implemented")]
    OutOfScope { label: String, dim: u32 },
    #[error("declared {declared} nodes but {found} point strata are listed")]
    NodeCount { declared: usize, found: usize },
    #[error("lattice and cycles must be given together")]
    IncompleteLattice,
    #[error("no lattice configuration in the specification")]
    MissingLattice,
    #[error("total monodromy is not unipotent; raise it to a power first")]
    NotUnipotent,
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    ZigZag(#[from] ZigZagError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    /// Ordinary double point: dimension 0, Milnor rank 1.
    #[default]
    Node,
    /// Isolated point with arbitrary Milnor rank.
    Point,
    /// Positive-dimensional stratum (accepted, but out of scope for the
    /// computations).
    Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    #[serde(default)]
    pub dim: u32,
    pub milnor_rank: usize,
    #[serde(default)]
    pub kind: StratumKind,
}

impl Stratum {
    pub fn node(label: impl Into<String>) -> Self {
        Stratum { label: label.into(), dim: 0, milnor_rank: 1, kind: StratumKind::Node }
    }

    pub fn point(label: impl Into<String>, milnor_rank: usize) -> Self {
        Stratum { label: label.into(), dim: 0, milnor_rank, kind: StratumKind::Point }
    }

    fn check(&self) -> Result<(), DegenerationError> {
        let bad =
            |reason: &str| Err(DegenerationError::InvalidStratum { label: self.label.clone(), reason: reason.into() });
        match self.kind {
            StratumKind::Node if self.dim != 0 => bad("a node is zero-dimensional"),
            StratumKind::Node if self.milnor_rank != 1 => bad("a node has Milnor rank 1"),
            StratumKind::Point if self.dim != 0 => bad("a point stratum is zero-dimensional"),
            StratumKind::Stratum if self.dim == 0 => bad("use kind \"point\" for zero-dimensional strata"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpecJson {
    fiber_dim: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(default)]
    strata: Vec<Stratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<LatticeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycles: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    smooth_betti: Option<Vec<usize>>,
}

/// A degeneration `X -> Δ` described by its singular strata and, optionally,
/// the vanishing-cycle data on the middle homology of a smooth fibre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct DegenerationSpec {
    fiber_dim: i64,
    strata: Vec<Stratum>,
    lattice_config: Option<VanishingConfig>,
    smooth_betti: Option<Vec<usize>>,
}

impl TryFrom<SpecJson> for DegenerationSpec {
    type Error = DegenerationError;

    fn try_from(j: SpecJson) -> Result<Self, DegenerationError> {
        let config = match (j.lattice, j.cycles) {
            (Some(lattice), Some(cycles)) => Some(VanishingConfig::try_from(VanishingConfigJson { lattice, cycles })?),
            (None, None) => None,
            _ => return Err(DegenerationError::IncompleteLattice),
        };
        let spec = DegenerationSpec::new(j.fiber_dim, j.strata, config)?.with_smooth_betti(j.smooth_betti);
        if let Some(declared) = j.nodes {
            let found = spec.point_count();
            if declared != found {
                return Err(DegenerationError::NodeCount { declared, found });
            }
        }
        Ok(spec)
    }
}

impl From<DegenerationSpec> for SpecJson {
    fn from(s: DegenerationSpec) -> Self {
        let (lattice, cycles) = match s.lattice_config.map(VanishingConfigJson::from) {
            Some(c) => (Some(c.lattice), Some(c.cycles)),
            None => (None, None),
        };
        SpecJson {
            fiber_dim: s.fiber_dim,
            nodes: Some(s.strata.iter().filter(|x| x.dim == 0).count()),
            strata: s.strata,
            lattice,
            cycles,
            smooth_betti: s.smooth_betti,
        }
    }
}

impl DegenerationSpec {
    pub fn new(
        fiber_dim: i64,
        strata: Vec<Stratum>,
        lattice_config: Option<VanishingConfig>,
    ) -> Result<Self, DegenerationError> {
        for s in &strata {
            s.check()?;
        }
        Ok(DegenerationSpec { fiber_dim, strata, lattice_config, smooth_betti: None })
    }

    /// `r` ordinary double points on a fibre of dimension `fiber_dim`.
    pub fn nodes(fiber_dim: i64, r: usize) -> Self {
        let strata = (1..=r).map(|k| Stratum::node(format!("p{k}"))).collect();
        DegenerationSpec { fiber_dim, strata, lattice_config: None, smooth_betti: None }
    }

    pub fn with_lattice(mut self, config: VanishingConfig) -> Self {
        self.lattice_config = Some(config);
        self
    }

    pub fn with_smooth_betti(mut self, betti: Option<Vec<usize>>) -> Self {
        self.smooth_betti = betti;
        self
    }

    pub fn fiber_dim(&self) -> i64 {
        self.fiber_dim
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn lattice_config(&self) -> Option<&VanishingConfig> {
        self.lattice_config.as_ref()
    }

    pub fn smooth_betti(&self) -> Option<&[usize]> {
        self.smooth_betti.as_deref()
    }

    /// Number of zero-dimensional strata.
    pub fn point_count(&self) -> usize {
        self.strata.iter().filter(|s| s.dim == 0).count()
    }

    fn reject_positive_dim(&self) -> Result<(), DegenerationError> {
        match self.strata.iter().find(|s| s.dim > 0) {
            Some(s) => Err(DegenerationError::OutOfScope { label: s.label.clone(), dim: s.dim }),
            None => Ok(()),
        }
    }
}

/// Total Milnor rank of the point strata.
pub fn vanishing_rank(spec: &DegenerationSpec) -> Result<usize, DegenerationError> {
    spec.reject_positive_dim()?;
    Ok(spec.strata.iter().map(|s| s.milnor_rank).sum())
}

/// `0 -> sub -> total -> quot -> 0` checked slot by slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceReport {
    pub sub_tuple: ZigZag,
    pub total_tuple: ZigZag,
    pub quot_tuple: ZigZag,
    /// `dim total - dim sub` summed over the point slots `A`, i.e. the
    /// number of rank-one point contributions.
    pub pointwise_defect: usize,
    /// `[hm, a, b, h0]` dimensions of sub, total, quot.
    pub slot_dims: [[usize; 4]; 3],
    pub additive: bool,
    pub quotient_is_skyscraper_sum: bool,
    pub inclusion_is_mono: bool,
    pub projection_is_epi: bool,
    /// `ker(projection) = im(inclusion)` in every slot.
    pub exact_in_middle: bool,
    pub verdict: bool,
}

fn inclusion_and_projection(
    sub: &ZigZag,
    total: &ZigZag,
    quot: &ZigZag,
) -> Result<(ZigZagMorphism, ZigZagMorphism), DegenerationError> {
    let (ds, dq) = (sub.dims(), quot.dims());
    let inc = std::array::from_fn(|i| {
        QMatrix::identity(ds[i]).vstack(&QMatrix::zeros(dq[i], ds[i])).expect("matching widths")
    });
    let proj = std::array::from_fn(|i| {
        QMatrix::zeros(dq[i], ds[i]).hstack(&QMatrix::identity(dq[i])).expect("matching heights")
    });
    Ok((ZigZagMorphism::new(sub, total, inc)?, ZigZagMorphism::new(total, quot, proj)?))
}

/// The corrected object of a nodal degeneration as the extension of the
/// skyscraper sum at the nodes by `mu_ic(1, 1)`, with the inclusion and
/// projection verified to form a short exact sequence of tuples.
pub fn build_corrected(spec: &DegenerationSpec) -> Result<ExactSequenceReport, DegenerationError> {
    spec.reject_positive_dim()?;
    if let Some(s) = spec.strata.iter().find(|s| s.kind != StratumKind::Node) {
        return Err(DegenerationError::InvalidStratum {
            label: s.label.clone(),
            reason: "only ordinary double points are supported here".into(),
        });
    }
    let r = vanishing_rank(spec)?;
    let sub = mu_ic(1, 1);
    let (presentation, expected_total) = if r == 0 {
        (ExtensionPresentation::split(sub.clone(), ZigZag::zero()), sub.clone())
    } else {
        let (tuple, presentation) = mu_corrected(r)?;
        (presentation, tuple)
    };
    let quot = presentation.quot().clone();
    let total = assemble(&presentation)?.zigzag().ok_or(ZigZagError::ZeroNodes)?;
    let (inc, proj) = inclusion_and_projection(&sub, &total, &quot)?;

    let slot_dims = [sub.dims(), total.dims(), quot.dims()];
    let additive = (0..4).all(|i| slot_dims[1][i] == slot_dims[0][i] + slot_dims[2][i]);
    let quotient_is_skyscraper_sum = quot == crate::zigzag::skyscraper_sum(r);
    let exact_in_middle = (0..4).all(|i| image(&inc.components()[i]) == kernel(&proj.components()[i]));
    let report = ExactSequenceReport {
        pointwise_defect: total.a() - sub.a(),
        slot_dims,
        additive,
        quotient_is_skyscraper_sum,
        inclusion_is_mono: inc.is_monomorphism(),
        projection_is_epi: proj.is_epimorphism(),
        exact_in_middle,
        verdict: additive
            && quotient_is_skyscraper_sum
            && inc.is_monomorphism()
            && proj.is_epimorphism()
            && exact_in_middle
            && total == expected_total,
        sub_tuple: sub,
        total_tuple: total,
        quot_tuple: quot,
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitingReport {
    pub center: i64,
    pub graded_dims: BTreeMap<i64, usize>,
    pub rank_n: usize,
    pub lattice_rank: usize,
    pub hard_lefschetz: LefschetzReport,
    /// `Gr_{k+j}` and `Gr_{k-j}` have equal dimension for every `j`.
    pub symmetric: bool,
}

impl LimitingReport {
    pub fn passes(&self) -> bool {
        self.hard_lefschetz.passes() && self.symmetric && self.graded_dims.values().sum::<usize>() == self.lattice_rank
    }
}

/// Weight data of `N = log T` for the total monodromy `T`, centered at the
/// fibre dimension unless `center` is given.
pub fn limiting_graded_dims(spec: &DegenerationSpec, center: Option<i64>) -> Result<LimitingReport, DegenerationError> {
    let cfg = spec.lattice_config.as_ref().ok_or(DegenerationError::MissingLattice)?;
    let t = to_rational(&total_monodromy(cfg)?);
    if !is_unipotent(&t)? {
        return Err(DegenerationError::NotUnipotent);
    }
    let n = log_unipotent(&t)?;
    let k = center.unwrap_or(spec.fiber_dim);
    let w = weight_filtration(&n, k)?;
    let graded_dims = w.graded_dims();
    let symmetric = graded_dims.iter().all(|(&l, &d)| graded_dims.get(&(2 * k - l)) == Some(&d));
    Ok(LimitingReport {
        center: k,
        rank_n: n.rank(),
        lattice_rank: cfg.lattice().rank(),
        hard_lefschetz: check_hard_lefschetz(&w)?,
        symmetric,
        graded_dims,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    /// Skyscraper multiplicity per point stratum, in input order.
    pub multiplicities: Vec<usize>,
    pub quotient: ZigZag,
}

/// The point-supported quotient: one skyscraper of multiplicity
/// `milnor_rank` per point stratum.
pub fn stratified_quotient(spec: &DegenerationSpec) -> Result<QuotientReport, DegenerationError> {
    spec.reject_positive_dim()?;
    let multiplicities: Vec<usize> = spec.strata.iter().map(|s| s.milnor_rank).collect();
    let mut quotient = ZigZag::zero();
    for &m in multiplicities.iter().filter(|&&m| m > 0) {
        quotient = direct_sum(&quotient, &mu_skyscraper(m)?);
    }
    Ok(QuotientReport { multiplicities, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::Lattice;
    use crate::zigzag::{is_isomorphic, skyscraper_sum};
    use crate::Z;

    fn skew_spec(cycle: &[i64], pairs: usize) -> DegenerationSpec {
        let cfg =
            VanishingConfig::new(Lattice::hyperbolic_skew(pairs), vec![cycle.iter().map(|&x| Z::from(x)).collect()])
                .unwrap();
        DegenerationSpec::nodes(3, 1).with_lattice(cfg)
    }

    #[test]
    fn vanishing_rank_counts_nodes() {
        assert_eq!(vanishing_rank(&DegenerationSpec::nodes(3, 1)).unwrap(), 1);
        assert_eq!(vanishing_rank(&DegenerationSpec::nodes(3, 3)).unwrap(), 3);
        assert_eq!(vanishing_rank(&DegenerationSpec::nodes(3, 0)).unwrap(), 0);
    }

    #[test]
    fn corrected_sequences() {
        for r in 0..=5 {
            let rep = build_corrected(&DegenerationSpec::nodes(3, r)).unwrap();
            assert!(rep.verdict, "r = {r}");
            assert_eq!(rep.pointwise_defect, r);
            assert_eq!(rep.quot_tuple, skyscraper_sum(r));
        }
        let one = build_corrected(&DegenerationSpec::nodes(3, 1)).unwrap();
        assert_eq!(one.total_tuple.to_string(), "(Q_U[3], Q, Q, 0, id, 0)");
        let zero = build_corrected(&DegenerationSpec::nodes(3, 0)).unwrap();
        assert_eq!(zero.total_tuple, mu_ic(1, 1));
    }

    #[test]
    fn non_node_strata_rejected() {
        let spec = DegenerationSpec::new(3, vec![Stratum::point("q", 2)], None).unwrap();
        assert!(matches!(build_corrected(&spec), Err(DegenerationError::InvalidStratum { .. })));
        let bad = Stratum { milnor_rank: 2, ..Stratum::node("p") };
        assert!(DegenerationSpec::new(3, vec![bad], None).is_err());
    }

    #[test]
    fn limiting_data_single_node() {
        let rep = limiting_graded_dims(&skew_spec(&[1, 0], 1), None).unwrap();
        assert_eq!(rep.graded_dims, [(2, 1), (4, 1)].into_iter().collect());
        assert_eq!(rep.rank_n, 1);
        assert!(rep.passes());
    }

    #[test]
    fn limiting_data_trivial_and_rank_three() {
        let rep = limiting_graded_dims(&skew_spec(&[0, 0], 1), None).unwrap();
        assert_eq!(rep.graded_dims, [(3, 2)].into_iter().collect());
        // rank-3 symmetric lattice with an isotropic cycle: N has rank 1, N^2 = 0
        let gram = crate::ZMatrix::from_rows(vec![
            vec![Z::from(0), Z::from(1), Z::from(0)],
            vec![Z::from(1), Z::from(0), Z::from(0)],
            vec![Z::from(0), Z::from(0), Z::from(1)],
        ])
        .unwrap();
        let lat = Lattice::new(gram, crate::monodromy::Symmetry::Symmetric).unwrap();
        let cfg = VanishingConfig::new(lat, vec![vec![Z::from(1), Z::from(0), Z::from(0)]]).unwrap();
        let rep = limiting_graded_dims(&DegenerationSpec::nodes(3, 1).with_lattice(cfg), None).unwrap();
        assert_eq!(rep.graded_dims, [(2, 1), (3, 1), (4, 1)].into_iter().collect());
        assert!(rep.passes());
    }

    #[test]
    fn quotient_multiplicities() {
        let nodes = stratified_quotient(&DegenerationSpec::nodes(3, 2)).unwrap();
        assert!(is_isomorphic(&nodes.quotient, &mu_skyscraper(2).unwrap()));
        let spec = DegenerationSpec::new(3, vec![Stratum::point("q", 2)], None).unwrap();
        assert_eq!(stratified_quotient(&spec).unwrap().quotient, mu_skyscraper(2).unwrap());
        let curve = Stratum { label: "C".into(), dim: 1, milnor_rank: 1, kind: StratumKind::Stratum };
        let spec = DegenerationSpec::new(3, vec![curve], None).unwrap();
        let err = stratified_quotient(&spec).unwrap_err();
        assert!(err.to_string().contains("beyond point strata not implemented"));
    }

    #[test]
    fn spec_json() {
        let spec: DegenerationSpec = serde_json::from_str(
            r#"{"fiber_dim":3,"strata":[{"label":"p","dim":0,"milnor_rank":1}],
                "lattice":{"rank":2,"gram":[[0,1],[-1,0]],"symmetry":"skew"},"cycles":[[1,0]]}"#,
        )
        .unwrap();
        let expected = skew_spec(&[1, 0], 1);
        assert_eq!(spec.strata(), &[Stratum::node("p")]);
        assert_eq!(spec.lattice_config(), expected.lattice_config());
        let bad = serde_json::from_str::<DegenerationSpec>(r#"{"fiber_dim":3,"nodes":2,"strata":[]}"#);
        assert!(bad.is_err());
    }
}
