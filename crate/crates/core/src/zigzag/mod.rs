//! Zig-zag tuples `(Hm, H0, A, B, alpha, beta, gamma)` modelling a perverse
//! sheaf near an isolated singular point:
//!
//! ```text
//! Hm --alpha--> A --beta--> B --gamma--> H0
//! ```
//!
//! with `Hm = H^-1(i^* Rj_* L)` and `H0 = H^0(i^* Rj_* L)` for the open part
//! `L`. A valid tuple is a complex that is exact at `A` and at `B`.

mod classify;
mod extension;
mod morphism;

pub use classify::{classify_self_dual_extensions, ClassificationReport, OrbitRecord};
pub use extension::{
    assemble, dual_presentation, is_isomorphic_presentation, is_self_dual_presentation, normalize_params, Assembly,
    Endpoint, ExtensionError, ExtensionPresentation, NodeScaling,
};
pub use morphism::{
    decide_isomorphism, hom_space, is_isomorphic, IsoCertificate, IsoDecision, MorphismError, ZigZagMorphism,
};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qlinalg::{image, kernel};
use crate::{LinalgError, QMatrix, Q};

/// Label of the constant sheaf on the smooth locus of a threefold.
pub const CONSTANT_LABEL: &str = "Q_U[3]";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZigZagError {
    #[error("{map} should be {}x{} but is {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { map: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error("invalid zig-zag: {0}")]
    Invalid(ValidationReport),
    #[error("skyscraper multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("node count must be at least 1")]
    ZeroNodes,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Raw tuple data, as read from JSON. No invariants are enforced; see
/// [`validate`] and [`ZigZag::new`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigZagData {
    pub hm: usize,
    pub h0: usize,
    pub a: usize,
    pub b: usize,
    pub alpha: QMatrix,
    pub beta: QMatrix,
    pub gamma: QMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ZigZagData {
    /// Checks the three maps against the four dimensions, fixing the shape of
    /// empty matrices (JSON cannot record the width of a matrix with no rows).
    pub fn shaped(mut self) -> Result<Self, ZigZagError> {
        fn fit(m: QMatrix, map: &'static str, rows: usize, cols: usize) -> Result<QMatrix, ZigZagError> {
            let found = m.shape();
            m.reshape_empty(rows, cols).map_err(|_| ZigZagError::Shape { map, expected: (rows, cols), found })
        }
        self.alpha = fit(self.alpha, "alpha", self.a, self.hm)?;
        self.beta = fit(self.beta, "beta", self.b, self.a)?;
        self.gamma = fit(self.gamma, "gamma", self.h0, self.b)?;
        Ok(self)
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.hm, self.a, self.b, self.h0]
    }
}

/// Which of the four validity conditions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `beta alpha = 0`.
    pub beta_alpha_zero: bool,
    /// `gamma beta = 0`.
    pub gamma_beta_zero: bool,
    /// `im alpha = ker beta`.
    pub exact_at_a: bool,
    /// `im beta = ker gamma`.
    pub exact_at_b: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.beta_alpha_zero && self.gamma_beta_zero && self.exact_at_a && self.exact_at_b
    }

    /// Names of the failing positions: `"A->B"` and `"B->H0"` for the complex
    /// relations, `"A"` and `"B"` for exactness.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.beta_alpha_zero {
            out.push("A->B");
        }
        if !self.gamma_beta_zero {
            out.push("B->H0");
        }
        if !self.exact_at_a {
            out.push("A");
        }
        if !self.exact_at_b {
            out.push("B");
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "fails at {}", self.failures().join(", "))
        }
    }
}

/// Checks the complex relations and exactness of raw tuple data.
pub fn validate(data: &ZigZagData) -> Result<ValidationReport, ZigZagError> {
    let d = data.clone().shaped()?;
    let beta_alpha_zero = (&d.beta * &d.alpha).is_zero();
    let gamma_beta_zero = (&d.gamma * &d.beta).is_zero();
    Ok(ValidationReport {
        beta_alpha_zero,
        gamma_beta_zero,
        exact_at_a: image(&d.alpha) == kernel(&d.beta),
        exact_at_b: image(&d.beta) == kernel(&d.gamma),
    })
}

/// A tuple known to satisfy all four validity conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ZigZagData", into = "ZigZagData")]
pub struct ZigZag {
    data: ZigZagData,
}

impl TryFrom<ZigZagData> for ZigZag {
    type Error = ZigZagError;

    fn try_from(data: ZigZagData) -> Result<Self, ZigZagError> {
        ZigZag::new(data)
    }
}

impl From<ZigZag> for ZigZagData {
    fn from(z: ZigZag) -> Self {
        z.data
    }
}

impl ZigZag {
    pub fn new(data: ZigZagData) -> Result<Self, ZigZagError> {
        let data = data.shaped()?;
        let report = validate(&data)?;
        if !report.is_valid() {
            return Err(ZigZagError::Invalid(report));
        }
        Ok(ZigZag { data })
    }

    pub fn from_parts(
        hm: usize,
        h0: usize,
        alpha: QMatrix,
        beta: QMatrix,
        gamma: QMatrix,
        label: Option<&str>,
    ) -> Result<Self, ZigZagError> {
        let (a, b) = (alpha.rows(), beta.rows());
        Self::new(ZigZagData { hm, h0, a, b, alpha, beta, gamma, label: label.map(str::to_owned) })
    }

    /// The zero tuple; a unit for [`direct_sum`].
    pub fn zero() -> Self {
        ZigZag {
            data: ZigZagData {
                hm: 0,
                h0: 0,
                a: 0,
                b: 0,
                alpha: QMatrix::zeros(0, 0),
                beta: QMatrix::zeros(0, 0),
                gamma: QMatrix::zeros(0, 0),
                label: None,
            },
        }
    }

    pub fn data(&self) -> &ZigZagData {
        &self.data
    }

    pub fn hm(&self) -> usize {
        self.data.hm
    }

    pub fn h0(&self) -> usize {
        self.data.h0
    }

    pub fn a(&self) -> usize {
        self.data.a
    }

    pub fn b(&self) -> usize {
        self.data.b
    }

    pub fn alpha(&self) -> &QMatrix {
        &self.data.alpha
    }

    pub fn beta(&self) -> &QMatrix {
        &self.data.beta
    }

    pub fn gamma(&self) -> &QMatrix {
        &self.data.gamma
    }

    pub fn label(&self) -> Option<&str> {
        self.data.label.as_deref()
    }

    /// `(dim Hm, dim A, dim B, dim H0)`.
    pub fn dims(&self) -> [usize; 4] {
        self.data.dims()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// Ranks of `(alpha, beta, gamma)`. Together with the dimensions these
    /// determine a valid tuple up to isomorphism.
    pub fn ranks(&self) -> [usize; 3] {
        [self.alpha().rank(), self.beta().rank(), self.gamma().rank()]
    }

    /// Number of rank-one point summands `(0, Q, Q, 0, id, 0)`, i.e. `rank beta`.
    pub fn point_summands(&self) -> usize {
        self.beta().rank()
    }

    pub fn with_label(mut self, label: Option<&str>) -> Self {
        self.data.label = label.map(str::to_owned);
        self
    }

    /// A random valid tuple with every indecomposable multiplicity at most
    /// `max_part`, presented in a random basis.
    pub fn random<R: Rng>(rng: &mut R, max_part: usize) -> Self {
        // multiplicities of: Hm alone, Hm->A, A->B, B->H0, H0 alone
        let parts: [usize; 5] = std::array::from_fn(|_| rng.gen_range(0..=max_part));
        let [k, p, q, s, t] = parts;
        let (hm, a, b, h0) = (k + p, p + q, q + s, s + t);
        // standard form: Hm = ker(k) + p, A = im(p) + q, B = im(q) + s, H0 = im(s) + t
        let alpha = QMatrix::from_fn(a, hm, |i, j| unit(i < p && j == k + i));
        let beta = QMatrix::from_fn(b, a, |i, j| unit(i < q && j == p + i));
        let gamma = QMatrix::from_fn(h0, b, |i, j| unit(i < s && j == q + i));
        let [ph, pa, pb, p0] = [hm, a, b, h0].map(|n| random_invertible(rng, n));
        let alpha = &(&pa * &alpha) * &ph.inverse().expect("invertible");
        let beta = &(&pb * &beta) * &pa.inverse().expect("invertible");
        let gamma = &(&p0 * &gamma) * &pb.inverse().expect("invertible");
        ZigZag::from_parts(hm, h0, alpha, beta, gamma, None).expect("standard form is valid")
    }
}

fn unit(on: bool) -> Q {
    if on {
        Q::from_integer(1.into())
    } else {
        Q::from_integer(0.into())
    }
}

/// Random invertible integer matrix: a product of a unit lower and a unit
/// upper triangular matrix with small entries, so determinant 1.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let mut small = |i: usize, j: usize, upper: bool| {
        if i == j {
            unit(true)
        } else if (j > i) == upper {
            Q::from_integer(rng.gen_range(-3i64..=3).into())
        } else {
            unit(false)
        }
    };
    let lower = QMatrix::from_fn(n, n, |i, j| small(i, j, false));
    let upper = QMatrix::from_fn(n, n, |i, j| small(i, j, true));
    &lower * &upper
}

impl fmt::Display for ZigZag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_compressed(&self.data))
    }
}

/// The compressed notation `(L, A, B, alpha, beta, gamma)`: spaces as `0`,
/// `Q` or `Q^n`, maps as `0`, `id`, `id_n` or the explicit matrix.
pub fn render_compressed(d: &ZigZagData) -> String {
    fn space(n: usize) -> String {
        match n {
            0 => "0".into(),
            1 => "Q".into(),
            n => format!("Q^{n}"),
        }
    }
    fn map(m: &QMatrix) -> String {
        if m.is_zero() {
            "0".into()
        } else if m.is_identity() {
            if m.rows() == 1 {
                "id".into()
            } else {
                format!("id_{}", m.rows())
            }
        } else {
            m.to_string()
        }
    }
    let open = match &d.label {
        Some(l) => l.clone(),
        None if d.hm == 0 && d.h0 == 0 => "0".into(),
        None => format!("(Hm={}, H0={})", d.hm, d.h0),
    };
    format!("({}, {}, {}, {}, {}, {})", open, space(d.a), space(d.b), map(&d.alpha), map(&d.beta), map(&d.gamma))
}

/// Duality on tuples: `(hm, h0, A, B, a, b, c) -> (h0, hm, B*, A*, c^T, b^T, a^T)`.
pub fn dual(z: &ZigZag) -> ZigZag {
    let d = z.data();
    ZigZag {
        data: ZigZagData {
            hm: d.h0,
            h0: d.hm,
            a: d.b,
            b: d.a,
            alpha: d.gamma.transpose(),
            beta: d.beta.transpose(),
            gamma: d.alpha.transpose(),
            label: d.label.clone(),
        },
    }
}

pub(crate) fn combine_labels(a: Option<&str>, b: Option<&str>) -> Option<String> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.to_owned()),
        (Some(x), Some(y)) => Some(format!("{x} ⊕ {y}")),
    }
}

/// Componentwise direct sum with block-diagonal maps.
pub fn direct_sum(z1: &ZigZag, z2: &ZigZag) -> ZigZag {
    let (d1, d2) = (z1.data(), z2.data());
    ZigZag {
        data: ZigZagData {
            hm: d1.hm + d2.hm,
            h0: d1.h0 + d2.h0,
            a: d1.a + d2.a,
            b: d1.b + d2.b,
            alpha: QMatrix::block_diag(&d1.alpha, &d2.alpha),
            beta: QMatrix::block_diag(&d1.beta, &d2.beta),
            gamma: QMatrix::block_diag(&d1.gamma, &d2.gamma),
            label: combine_labels(z1.label(), z2.label()),
        },
    }
}

/// `(hm, h0, 0, 0, 0, 0, 0)`: the minimal extension, no point terms.
pub fn mu_ic(hm_dim: usize, h0_dim: usize) -> ZigZag {
    ZigZag {
        data: ZigZagData {
            hm: hm_dim,
            h0: h0_dim,
            a: 0,
            b: 0,
            alpha: QMatrix::zeros(0, hm_dim),
            beta: QMatrix::zeros(0, 0),
            gamma: QMatrix::zeros(h0_dim, 0),
            label: Some(CONSTANT_LABEL.to_owned()),
        },
    }
}

/// `(0, 0, Q^m, Q^m, 0, id_m, 0)`: `m` rank-one point-supported summands.
pub fn mu_skyscraper(mult: usize) -> Result<ZigZag, ZigZagError> {
    if mult == 0 {
        return Err(ZigZagError::ZeroMultiplicity);
    }
    Ok(ZigZag {
        data: ZigZagData {
            hm: 0,
            h0: 0,
            a: mult,
            b: mult,
            alpha: QMatrix::zeros(mult, 0),
            beta: QMatrix::identity(mult),
            gamma: QMatrix::zeros(0, mult),
            label: None,
        },
    })
}

/// The corrected object for `r` nodes, `(L, Q^r, Q^r, 0, id_r, 0)`, with its
/// presentation as the extension of `r` skyscrapers by `mu_ic(1, 1)` that is
/// nontrivial at every node (all gluing parameters 1).
pub fn mu_corrected(r: usize) -> Result<(ZigZag, ExtensionPresentation), ZigZagError> {
    if r == 0 {
        return Err(ZigZagError::ZeroNodes);
    }
    let presentation = ExtensionPresentation::split(mu_ic(1, 1), mu_skyscraper(r)?)
        .with_params(vec![Q::from_integer(1.into()); r])
        .map_err(|e| match e {
            ExtensionError::ZigZag(z) => z,
            other => unreachable!("corrected presentation is well formed: {other}"),
        })?;
    let tuple = ZigZag {
        data: ZigZagData {
            hm: 1,
            h0: 1,
            a: r,
            b: r,
            alpha: QMatrix::zeros(r, 1),
            beta: QMatrix::identity(r),
            gamma: QMatrix::zeros(1, r),
            label: Some(CONSTANT_LABEL.to_owned()),
        },
    };
    Ok((tuple, presentation))
}

/// `r`-fold direct sum of rank-one skyscrapers, the zero tuple for `r = 0`.
pub fn skyscraper_sum(r: usize) -> ZigZag {
    (0..r).fold(ZigZag::zero(), |acc, _| direct_sum(&acc, &mu_skyscraper(1).expect("multiplicity 1")))
}

/// `j_*`-shape `(hm, h0, A=0, B=Q, 0, 0, id)` for `hm = h0 = 1`: the point
/// term sits in `B` and `gamma` is an isomorphism.
pub fn mu_j_star() -> ZigZag {
    ZigZag {
        data: ZigZagData {
            hm: 1,
            h0: 1,
            a: 0,
            b: 1,
            alpha: QMatrix::zeros(0, 1),
            beta: QMatrix::zeros(1, 0),
            gamma: QMatrix::identity(1),
            label: Some(CONSTANT_LABEL.to_owned()),
        },
    }
}

/// `j_!`-shape `(hm, h0, A=Q, B=0, id, 0, 0)`, the dual of [`mu_j_star`].
pub fn mu_j_shriek() -> ZigZag {
    dual(&mu_j_star())
}
