//! Morphisms of tuples (commuting quadruples), the homomorphism space, and
//! the isomorphism decision procedure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::ZigZag;
use crate::qlinalg::kernel;
use crate::{LinalgError, QMatrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("component {slot} should be {}x{} but is {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { slot: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error("square at {0} does not commute")]
    NotCommuting(&'static str),
    #[error("morphism is not invertible at {0}")]
    NotInvertible(&'static str),
    #[error("cannot compose: target of the first is not the source of the second")]
    NotComposable,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

const SLOTS: [&str; 4] = ["Hm", "A", "B", "H0"];

/// `(f_hm, f_a, f_b, f_h0)` commuting with `alpha`, `beta`, `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigZagMorphism {
    source: ZigZag,
    target: ZigZag,
    components: [QMatrix; 4],
}

impl ZigZagMorphism {
    pub fn new(source: &ZigZag, target: &ZigZag, components: [QMatrix; 4]) -> Result<Self, MorphismError> {
        let (sd, td) = (source.dims(), target.dims());
        for (i, c) in components.iter().enumerate() {
            if c.shape() != (td[i], sd[i]) {
                return Err(MorphismError::Shape { slot: SLOTS[i], expected: (td[i], sd[i]), found: c.shape() });
            }
        }
        let [f_hm, f_a, f_b, f_h0] = &components;
        if target.alpha() * f_hm != f_a * source.alpha() {
            return Err(MorphismError::NotCommuting("Hm->A"));
        }
        if target.beta() * f_a != f_b * source.beta() {
            return Err(MorphismError::NotCommuting("A->B"));
        }
        if target.gamma() * f_b != f_h0 * source.gamma() {
            return Err(MorphismError::NotCommuting("B->H0"));
        }
        Ok(ZigZagMorphism { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(z: &ZigZag) -> Self {
        ZigZagMorphism { source: z.clone(), target: z.clone(), components: z.dims().map(QMatrix::identity) }
    }

    pub fn source(&self) -> &ZigZag {
        &self.source
    }

    pub fn target(&self) -> &ZigZag {
        &self.target
    }

    /// `[f_hm, f_a, f_b, f_h0]`.
    pub fn components(&self) -> &[QMatrix; 4] {
        &self.components
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(QMatrix::is_invertible)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ZigZagMorphism) -> Result<ZigZagMorphism, MorphismError> {
        if next.source.dims() != self.target.dims() || next.source.data() != self.target.data() {
            return Err(MorphismError::NotComposable);
        }
        let components = std::array::from_fn(|i| &next.components[i] * &self.components[i]);
        ZigZagMorphism::new(&self.source, &next.target, components)
    }

    /// The inverse, re-verified as a morphism.
    pub fn inverse(&self) -> Result<ZigZagMorphism, MorphismError> {
        let mut inv = Vec::with_capacity(4);
        for (i, c) in self.components.iter().enumerate() {
            inv.push(c.inverse().map_err(|_| MorphismError::NotInvertible(SLOTS[i]))?);
        }
        let components: [QMatrix; 4] = inv.try_into().expect("four components");
        ZigZagMorphism::new(&self.target, &self.source, components)
    }

    /// Injective at every slot.
    pub fn is_monomorphism(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    /// Surjective at every slot.
    pub fn is_epimorphism(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }
}

/// Basis of the space of commuting quadruples `source -> target`.
///
/// The unknowns are the entries of the four components; the three commuting
/// squares are linear equations in them, and the basis is read off the kernel.
pub fn hom_space(source: &ZigZag, target: &ZigZag) -> Vec<[QMatrix; 4]> {
    let (sd, td) = (source.dims(), target.dims());
    let sizes: [usize; 4] = std::array::from_fn(|i| td[i] * sd[i]);
    let offsets: [usize; 4] = std::array::from_fn(|i| sizes[..i].iter().sum());
    let unknowns: usize = sizes.iter().sum();

    let unpack = |v: &[Q]| -> [QMatrix; 4] {
        std::array::from_fn(|i| {
            QMatrix::new(td[i], sd[i], v[offsets[i]..offsets[i] + sizes[i]].to_vec()).expect("sizes match")
        })
    };
    let residual = |f: &[QMatrix; 4]| -> Vec<Q> {
        let squares = [
            &(target.alpha() * &f[0]) - &(&f[1] * source.alpha()),
            &(target.beta() * &f[1]) - &(&f[2] * source.beta()),
            &(target.gamma() * &f[2]) - &(&f[3] * source.gamma()),
        ];
        squares.iter().flat_map(|m| m.entries().to_vec()).collect()
    };

    let mut columns = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut v = vec![Q::from_integer(0.into()); unknowns];
        v[u] = Q::from_integer(1.into());
        columns.push(residual(&unpack(&v)));
    }
    let equations = columns.first().map_or(0, Vec::len);
    let system = QMatrix::from_columns(equations, &columns).expect("uniform residual length");
    kernel(&system).basis_vectors().iter().map(|v| unpack(v)).collect()
}

/// How a non-isomorphism was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoCertificate {
    /// Dimension vectors differ.
    DimensionMismatch,
    /// The determinant of the generic morphism at this slot vanishes on a
    /// grid large enough to force the polynomial to be zero.
    DeterminantVanishes { slot: &'static str, grid_points: usize },
    /// The ranks of `(alpha, beta, gamma)` differ; used when the grid would be
    /// too large to evaluate.
    RankInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoDecision {
    Isomorphic(Box<ZigZagMorphism>),
    NotIsomorphic(IsoCertificate),
}

impl IsoDecision {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoDecision::Isomorphic(_))
    }
}

const PROBES: usize = 8;
const PROBE_RANGE: i64 = 1000;
const GRID_BUDGET: usize = 1 << 14;

/// [`decide_isomorphism`] with seed 0.
pub fn is_isomorphic(z1: &ZigZag, z2: &ZigZag) -> bool {
    decide_isomorphism(z1, z2, 0).is_isomorphic()
}

/// Decides whether an invertible morphism `z1 -> z2` exists.
///
/// A generic element of the homomorphism space is probed at random rational
/// points; any invertible hit is returned with its inverse verified. When
/// every probe is singular, some slot's determinant polynomial is shown to be
/// identically zero by evaluating it on a grid with `deg_i + 1` points per
/// variable, where `deg_i` bounds its degree in that variable.
pub fn decide_isomorphism(z1: &ZigZag, z2: &ZigZag, seed: u64) -> IsoDecision {
    if z1.dims() != z2.dims() {
        return IsoDecision::NotIsomorphic(IsoCertificate::DimensionMismatch);
    }
    let basis = hom_space(z1, z2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = PROBE_RANGE;
    let mut rounds = 0;
    loop {
        for _ in 0..PROBES {
            let coeffs: Vec<Q> =
                (0..basis.len()).map(|_| Q::from_integer(rng.gen_range(-range..=range).into())).collect();
            if let Some(m) = invertible_combination(z1, z2, &basis, &coeffs) {
                return IsoDecision::Isomorphic(Box::new(m));
            }
        }
        if rounds == 0 {
            if let Some(cert) = certify_singular(z1, z2, &basis) {
                return IsoDecision::NotIsomorphic(cert);
            }
        }
        // Some slot polynomial is nonzero everywhere it was checked, so the
        // product is a nonzero polynomial and more probes must succeed.
        rounds += 1;
        range = range.saturating_mul(10);
        assert!(rounds < 64, "isomorphism probes failed on a nonzero determinant polynomial");
    }
}

fn combination(basis: &[[QMatrix; 4]], coeffs: &[Q], dims: [usize; 4], slot: usize) -> QMatrix {
    basis.iter().zip(coeffs).fold(QMatrix::zeros(dims[slot], dims[slot]), |acc, (b, c)| &acc + &b[slot].scale(c))
}

fn invertible_combination(z1: &ZigZag, z2: &ZigZag, basis: &[[QMatrix; 4]], coeffs: &[Q]) -> Option<ZigZagMorphism> {
    let dims = z1.dims();
    let components: [QMatrix; 4] = std::array::from_fn(|slot| combination(basis, coeffs, dims, slot));
    if !components.iter().all(QMatrix::is_invertible) {
        return None;
    }
    let m = ZigZagMorphism::new(z1, z2, components).ok()?;
    let inv = m.inverse().ok()?;
    let round_trip = m.then(&inv).ok()?;
    round_trip.components().iter().all(QMatrix::is_identity).then_some(m)
}

fn certify_singular(z1: &ZigZag, z2: &ZigZag, basis: &[[QMatrix; 4]]) -> Option<IsoCertificate> {
    let dims = z1.dims();
    let mut over_budget = false;
    for slot in 0..4 {
        let n = dims[slot];
        if n == 0 {
            continue;
        }
        // independent generators of the slot's matrix space
        let mut gens: Vec<QMatrix> = Vec::new();
        let mut span = QMatrix::zeros(n * n, 0);
        for b in basis {
            let col = QMatrix::column_vector(b[slot].entries().to_vec());
            let extended = span.hstack(&col).expect("same height");
            if extended.rank() > span.cols() {
                span = extended;
                gens.push(b[slot].clone());
            }
        }
        let degrees: Vec<usize> = gens.iter().map(|g| g.rank().min(n)).collect();
        let grid = degrees.iter().try_fold(1usize, |acc, d| acc.checked_mul(d + 1));
        match grid {
            Some(points) if points <= GRID_BUDGET => {
                if determinant_vanishes_on_grid(&gens, &degrees, n) {
                    return Some(IsoCertificate::DeterminantVanishes { slot: SLOTS[slot], grid_points: points });
                }
            }
            _ => over_budget = true,
        }
    }
    if over_budget && z1.ranks() != z2.ranks() {
        return Some(IsoCertificate::RankInvariant);
    }
    None
}

fn determinant_vanishes_on_grid(gens: &[QMatrix], degrees: &[usize], n: usize) -> bool {
    let mut point = vec![0usize; gens.len()];
    loop {
        let m = gens
            .iter()
            .zip(&point)
            .fold(QMatrix::zeros(n, n), |acc, (g, &c)| &acc + &g.scale(&Q::from_integer(c.into())));
        if m.is_invertible() {
            return false;
        }
        // odometer over {0..=deg_i}
        let mut i = 0;
        loop {
            if i == point.len() {
                return true;
            }
            point[i] += 1;
            if point[i] <= degrees[i] {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}
