//! Extension presentations: a sub-tuple and a quotient tuple glued by
//! off-diagonal blocks, together with one gluing parameter per rank-one
//! point summand.
//!
//! The assembled tuple has block upper-triangular maps
//!
//! ```text
//! alpha = [[sub.alpha, u_alpha], [0, quot.alpha]]
//! beta  = [[sub.beta,  u_beta ], [0, quot.beta ]]
//! gamma = [[sub.gamma, u_gamma], [0, quot.gamma]]
//! ```
//!
//! The gluing parameters record the extension class, which the assembled
//! tuple alone does not determine: the split and the corrected extension of
//! a skyscraper by `mu_ic(1, 1)` assemble to the same tuple.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::morphism::{decide_isomorphism, MorphismError, ZigZagMorphism};
use super::{combine_labels, dual, validate, ValidationReport, ZigZag, ZigZagData, ZigZagError};
use crate::{QMatrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("{block} should be {}x{} but is {}x{}", expected.0, expected.1, found.0, found.1)]
    BlockShape { block: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error("block relation {0} fails: the assembled maps do not form a complex")]
    BlockRelation(&'static str),
    #[error("{found} gluing parameters given for {expected} point summands")]
    ParamCount { expected: usize, found: usize },
    #[error("node scaling needs a pure skyscraper sum as the point-supported endpoint")]
    NotSkyscraperEndpoint,
    #[error(transparent)]
    ZigZag(#[from] ZigZagError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PresentationJson {
    sub: ZigZag,
    quot: ZigZag,
    u_alpha: QMatrix,
    u_beta: QMatrix,
    u_gamma: QMatrix,
    #[serde(with = "crate::qlinalg::scalars")]
    class_params: Vec<Q>,
}

/// `0 -> sub -> E -> quot -> 0` with gluing blocks and gluing parameters.
///
/// Parameters are indexed by the rank-one point summands of both endpoints,
/// those of `sub` first. For the extensions of skyscrapers by `mu_ic` this is
/// one parameter per summand of `quot`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct ExtensionPresentation {
    sub: ZigZag,
    quot: ZigZag,
    u_alpha: QMatrix,
    u_beta: QMatrix,
    u_gamma: QMatrix,
    class_params: Vec<Q>,
}

impl TryFrom<PresentationJson> for ExtensionPresentation {
    type Error = ExtensionError;

    fn try_from(j: PresentationJson) -> Result<Self, ExtensionError> {
        ExtensionPresentation::new(j.sub, j.quot, [j.u_alpha, j.u_beta, j.u_gamma], j.class_params)
    }
}

impl From<ExtensionPresentation> for PresentationJson {
    fn from(e: ExtensionPresentation) -> Self {
        PresentationJson {
            sub: e.sub,
            quot: e.quot,
            u_alpha: e.u_alpha,
            u_beta: e.u_beta,
            u_gamma: e.u_gamma,
            class_params: e.class_params,
        }
    }
}

impl ExtensionPresentation {
    /// Checks block shapes, the two block relations and the parameter count.
    pub fn new(sub: ZigZag, quot: ZigZag, u: [QMatrix; 3], class_params: Vec<Q>) -> Result<Self, ExtensionError> {
        let [u_alpha, u_beta, u_gamma] = u;
        let fit = |m: QMatrix, block: &'static str, rows: usize, cols: usize| {
            let found = m.shape();
            m.reshape_empty(rows, cols).map_err(|_| ExtensionError::BlockShape { block, expected: (rows, cols), found })
        };
        let u_alpha = fit(u_alpha, "u_alpha", sub.a(), quot.hm())?;
        let u_beta = fit(u_beta, "u_beta", sub.b(), quot.a())?;
        let u_gamma = fit(u_gamma, "u_gamma", sub.h0(), quot.b())?;

        let rel_a = &(sub.beta() * &u_alpha) + &(&u_beta * quot.alpha());
        if !rel_a.is_zero() {
            return Err(ExtensionError::BlockRelation("sub.beta u_alpha + u_beta quot.alpha = 0"));
        }
        let rel_b = &(sub.gamma() * &u_beta) + &(&u_gamma * quot.beta());
        if !rel_b.is_zero() {
            return Err(ExtensionError::BlockRelation("sub.gamma u_beta + u_gamma quot.beta = 0"));
        }
        let expected = sub.point_summands() + quot.point_summands();
        if class_params.len() != expected {
            return Err(ExtensionError::ParamCount { expected, found: class_params.len() });
        }
        Ok(ExtensionPresentation { sub, quot, u_alpha, u_beta, u_gamma, class_params })
    }

    /// Zero gluing blocks and zero parameters: the direct sum.
    pub fn split(sub: ZigZag, quot: ZigZag) -> Self {
        let n = sub.point_summands() + quot.point_summands();
        ExtensionPresentation {
            u_alpha: QMatrix::zeros(sub.a(), quot.hm()),
            u_beta: QMatrix::zeros(sub.b(), quot.a()),
            u_gamma: QMatrix::zeros(sub.h0(), quot.b()),
            class_params: vec![Q::zero(); n],
            sub,
            quot,
        }
    }

    pub fn with_params(mut self, class_params: Vec<Q>) -> Result<Self, ExtensionError> {
        if class_params.len() != self.class_params.len() {
            return Err(ExtensionError::ParamCount { expected: self.class_params.len(), found: class_params.len() });
        }
        self.class_params = class_params;
        Ok(self)
    }

    pub fn sub(&self) -> &ZigZag {
        &self.sub
    }

    pub fn quot(&self) -> &ZigZag {
        &self.quot
    }

    /// `[u_alpha, u_beta, u_gamma]`.
    pub fn gluing_blocks(&self) -> [&QMatrix; 3] {
        [&self.u_alpha, &self.u_beta, &self.u_gamma]
    }

    pub fn class_params(&self) -> &[Q] {
        &self.class_params
    }

    /// Indices (1-based) of the nodes with a nonzero parameter.
    pub fn support(&self) -> Vec<usize> {
        self.class_params.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, _)| i + 1).collect()
    }

    pub fn is_split(&self) -> bool {
        self.support().is_empty()
    }
}

/// The assembled tuple together with its validity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub data: ZigZagData,
    pub report: ValidationReport,
}

impl Assembly {
    pub fn zigzag(&self) -> Option<ZigZag> {
        ZigZag::new(self.data.clone()).ok()
    }
}

/// Block assembly of the total tuple.
pub fn assemble(e: &ExtensionPresentation) -> Result<Assembly, ExtensionError> {
    let (s, q) = (&e.sub, &e.quot);
    let block = |top: &QMatrix, glue: &QMatrix, bottom: &QMatrix| {
        QMatrix::block(top, glue, &QMatrix::zeros(bottom.rows(), top.cols()), bottom)
    };
    let data = ZigZagData {
        hm: s.hm() + q.hm(),
        h0: s.h0() + q.h0(),
        a: s.a() + q.a(),
        b: s.b() + q.b(),
        alpha: block(s.alpha(), &e.u_alpha, q.alpha()).map_err(ZigZagError::from)?,
        beta: block(s.beta(), &e.u_beta, q.beta()).map_err(ZigZagError::from)?,
        gamma: block(s.gamma(), &e.u_gamma, q.gamma()).map_err(ZigZagError::from)?,
        label: combine_labels(s.label(), q.label()),
    };
    let report = validate(&data)?;
    if !(report.beta_alpha_zero && report.gamma_beta_zero) {
        return Err(ExtensionError::BlockRelation("assembled maps"));
    }
    Ok(Assembly { data, report })
}

/// Dual extension `0 -> D(quot) -> D(E) -> D(sub) -> 0`: endpoints dualized
/// and swapped, gluing blocks transposed into the mirrored slots, parameters
/// kept entrywise.
pub fn dual_presentation(e: &ExtensionPresentation) -> ExtensionPresentation {
    ExtensionPresentation {
        sub: dual(&e.quot),
        quot: dual(&e.sub),
        u_alpha: e.u_gamma.transpose(),
        u_beta: e.u_beta.transpose(),
        u_gamma: e.u_alpha.transpose(),
        class_params: e.class_params.clone(),
    }
}

/// Endpoints isomorphic and the same support pattern of parameters.
pub fn is_isomorphic_presentation(e1: &ExtensionPresentation, e2: &ExtensionPresentation) -> bool {
    e1.class_params.len() == e2.class_params.len()
        && e1.support() == e2.support()
        && decide_isomorphism(&e1.sub, &e2.sub, 0).is_isomorphic()
        && decide_isomorphism(&e1.quot, &e2.quot, 0).is_isomorphic()
}

/// Whether `e` agrees with its dual.
///
/// Duality reverses the extension, so the dual's sub-object is compared with
/// `e`'s quotient and vice versa; the assembled tuples must be isomorphic to
/// each other's duals and the parameter supports must agree.
pub fn is_self_dual_presentation(e: &ExtensionPresentation) -> Result<bool, ExtensionError> {
    let d = dual_presentation(e);
    let Some(total) = assemble(e)?.zigzag() else {
        return Ok(false);
    };
    let Some(dual_total) = assemble(&d)?.zigzag() else {
        return Ok(false);
    };
    Ok(decide_isomorphism(&dual_total, &total, 0).is_isomorphic()
        && decide_isomorphism(&d.sub, &e.quot, 0).is_isomorphic()
        && decide_isomorphism(&d.quot, &e.sub, 0).is_isomorphic()
        && d.support() == e.support())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Sub,
    Quot,
}

/// Per-node rescaling of the point-supported endpoint that carries every
/// nonzero gluing parameter to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeScaling {
    pub endpoint: Endpoint,
    /// Scale factor applied to each node's coordinate.
    pub factors: Vec<Q>,
    /// The automorphism of the endpoint, verified as an invertible morphism.
    pub automorphism: ZigZagMorphism,
    /// The same rescaling on the assembled tuple (identity on the other
    /// endpoint), also verified.
    pub total_automorphism: ZigZagMorphism,
}

fn is_pure_skyscraper(z: &ZigZag) -> bool {
    z.hm() == 0 && z.h0() == 0 && z.beta().is_identity()
}

/// Normalizes every nonzero parameter to 1 by rescaling the corresponding
/// skyscraper summand by the inverse parameter; returns the normalized
/// presentation and the rescaling used.
pub fn normalize_params(e: &ExtensionPresentation) -> Result<(ExtensionPresentation, NodeScaling), ExtensionError> {
    let (endpoint, nodes) = match (e.sub.point_summands(), e.quot.point_summands()) {
        (0, n) if is_pure_skyscraper(&e.quot) => (Endpoint::Quot, n),
        (n, 0) if is_pure_skyscraper(&e.sub) => (Endpoint::Sub, n),
        _ => return Err(ExtensionError::NotSkyscraperEndpoint),
    };
    let factors: Vec<Q> =
        e.class_params.iter().map(|p| if p.is_zero() { Q::one() } else { Q::one() / p.clone() }).collect();
    debug_assert_eq!(factors.len(), nodes);
    let scale = QMatrix::diagonal(&factors);
    let target = match endpoint {
        Endpoint::Quot => &e.quot,
        Endpoint::Sub => &e.sub,
    };
    let automorphism = ZigZagMorphism::new(
        target,
        target,
        [QMatrix::identity(0), scale.clone(), scale.clone(), QMatrix::identity(0)],
    )?;
    if !automorphism.is_isomorphism() {
        return Err(MorphismError::NotInvertible("A").into());
    }

    let total = assemble(e)?.zigzag().ok_or(ExtensionError::BlockRelation("assembled tuple is not exact"))?;
    let other = match endpoint {
        Endpoint::Quot => &e.sub,
        Endpoint::Sub => &e.quot,
    };
    let components: [QMatrix; 4] = std::array::from_fn(|slot| {
        let own = automorphism.components()[slot].clone();
        let id = QMatrix::identity(other.dims()[slot]);
        match endpoint {
            Endpoint::Quot => QMatrix::block_diag(&id, &own),
            Endpoint::Sub => QMatrix::block_diag(&own, &id),
        }
    });
    let total_automorphism = ZigZagMorphism::new(&total, &total, components)?;
    if !total_automorphism.is_isomorphism() {
        return Err(MorphismError::NotInvertible("A").into());
    }

    let params = e.class_params.iter().zip(&factors).map(|(p, s)| p.clone() * s.clone()).collect();
    let normalized = e.clone().with_params(params)?;
    Ok((normalized, NodeScaling { endpoint, factors, automorphism, total_automorphism }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::{direct_sum, is_isomorphic, mu_corrected, mu_ic, mu_skyscraper};

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    fn mat(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    fn split_ic_sky() -> ExtensionPresentation {
        ExtensionPresentation::split(mu_ic(1, 1), mu_skyscraper(1).unwrap())
    }

    /// `(0, 1, A=0, B=Q, 0, 0, id)`: the point part of the j_*-shape.
    fn point_part() -> ZigZag {
        ZigZag::from_parts(0, 1, QMatrix::zeros(0, 0), QMatrix::zeros(1, 0), mat(&[&[1]]), None).unwrap()
    }

    #[test]
    fn split_assembles_to_direct_sum() {
        let e = split_ic_sky();
        let a = assemble(&e).unwrap();
        assert!(a.report.is_valid());
        assert_eq!(a.zigzag().unwrap(), direct_sum(&mu_ic(1, 1), &mu_skyscraper(1).unwrap()));
    }

    #[test]
    fn corrected_assembles_to_same_tuple_as_split() {
        let (p, e) = mu_corrected(1).unwrap();
        assert_eq!(e.class_params(), &[q(1)]);
        assert_eq!(assemble(&e).unwrap().zigzag().unwrap(), p);
        assert_eq!(assemble(&e).unwrap().data, assemble(&split_ic_sky()).unwrap().data);
        assert!(!is_isomorphic_presentation(&e, &split_ic_sky()));
        let other = split_ic_sky().with_params(vec![q(7)]).unwrap();
        assert_eq!(assemble(&other).unwrap().data, assemble(&e).unwrap().data);
        assert!(is_isomorphic_presentation(&other, &e));
    }

    #[test]
    fn block_relations_are_enforced() {
        // j_*-shape sub, skyscraper quotient: u_gamma must equal -u_beta
        let sub = point_part();
        let quot = mu_skyscraper(1).unwrap();
        let bad = ExtensionPresentation::new(
            sub.clone(),
            quot.clone(),
            [QMatrix::zeros(0, 0), mat(&[&[1]]), mat(&[&[0]])],
            vec![q(1)],
        );
        assert!(matches!(bad, Err(ExtensionError::BlockRelation(_))));
        let good =
            ExtensionPresentation::new(sub, quot, [QMatrix::zeros(0, 0), mat(&[&[1]]), mat(&[&[-1]])], vec![q(1)]);
        let a = assemble(&good.unwrap()).unwrap();
        assert!(a.report.is_valid());
        assert_eq!(a.data.beta, mat(&[&[1], &[1]]));
    }

    #[test]
    fn parameter_count_and_shapes_checked() {
        let r = ExtensionPresentation::new(
            mu_ic(1, 1),
            mu_skyscraper(1).unwrap(),
            [QMatrix::zeros(0, 0), QMatrix::zeros(0, 1), QMatrix::zeros(1, 1)],
            vec![],
        );
        assert_eq!(r, Err(ExtensionError::ParamCount { expected: 1, found: 0 }));
        let r = ExtensionPresentation::new(
            mu_ic(1, 1),
            mu_skyscraper(1).unwrap(),
            [QMatrix::zeros(1, 1), QMatrix::zeros(0, 1), QMatrix::zeros(1, 1)],
            vec![q(0)],
        );
        assert!(matches!(r, Err(ExtensionError::BlockShape { block: "u_alpha", .. })));
    }

    #[test]
    fn self_duality_of_table_presentations() {
        assert!(is_self_dual_presentation(&split_ic_sky()).unwrap());
        assert!(is_self_dual_presentation(&mu_corrected(1).unwrap().1).unwrap());
    }

    #[test]
    fn j_star_presentation_is_not_self_dual() {
        // j_* = extension of (1, 0, 0, 0) by the point part, gamma carrying the identity
        let quot = mu_ic(1, 0).with_label(None);
        let e = ExtensionPresentation::split(point_part(), quot);
        let total = assemble(&e).unwrap().zigzag().unwrap();
        assert_eq!(total.dims(), [1, 0, 1, 1]);
        let d = dual_presentation(&e);
        let dual_total = assemble(&d).unwrap().zigzag().unwrap();
        assert_eq!(dual_total.dims(), [1, 1, 0, 1]);
        assert!(!is_isomorphic(&total, &dual_total));
        assert!(!is_isomorphic_presentation(&d, &e));
        assert!(!is_self_dual_presentation(&e).unwrap());
    }

    #[test]
    fn dual_presentation_assembles_to_dual_tuple() {
        let sub = point_part();
        let quot = mu_skyscraper(1).unwrap();
        let e = ExtensionPresentation::new(sub, quot, [QMatrix::zeros(0, 0), mat(&[&[2]]), mat(&[&[-2]])], vec![q(1)])
            .unwrap();
        let total = assemble(&e).unwrap().zigzag().unwrap();
        let d = assemble(&dual_presentation(&e)).unwrap().zigzag().unwrap();
        assert!(is_isomorphic(&d, &dual(&total)));
        assert_eq!(dual_presentation(&dual_presentation(&e)), e);
    }

    #[test]
    fn normalization_scales_parameter_five_to_one() {
        let e = split_ic_sky().with_params(vec![q(5)]).unwrap();
        let (n, scaling) = normalize_params(&e).unwrap();
        assert_eq!(n.class_params(), &[q(1)]);
        assert_eq!(scaling.endpoint, Endpoint::Quot);
        assert_eq!(scaling.factors, vec![Q::new(1.into(), 5.into())]);
        assert!(scaling.automorphism.is_isomorphism());
        let [f_hm, f_a, f_b, f_h0] = scaling.total_automorphism.components();
        assert_eq!(f_hm, &QMatrix::identity(1));
        assert_eq!(f_h0, &QMatrix::identity(1));
        assert_eq!(f_a, &QMatrix::diagonal(&[Q::new(1.into(), 5.into())]));
        assert_eq!(f_b, f_a);
        assert!(is_isomorphic_presentation(&n, &mu_corrected(1).unwrap().1));
    }

    #[test]
    fn presentation_json_round_trip() {
        let (_, e) = mu_corrected(2).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        let back: ExtensionPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }
}
