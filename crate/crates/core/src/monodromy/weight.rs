//! The monodromy weight filtration `W(N)` centered at `k`: the unique
//! increasing filtration with `N W_l ⊆ W_{l-2}` and `N^j: Gr_{k+j} ≅ Gr_{k-j}`.
//!
//! Two independent constructions are provided: a recursive kernel/image
//! construction and a Jordan-basis oracle. [`check_hard_lefschetz`] verifies
//! the two defining conditions without reference to either.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MonodromyError;
use crate::qlinalg::{kernel, nilpotency_index, FiltrationJson};
use crate::zigzag::random_invertible;
use crate::{QFiltration, QMatrix, QSubspace, Q};

/// A filtration together with the nilpotent operator it is attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    filtration: QFiltration,
    operator: QMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightFiltrationJson {
    pub center: i64,
    pub graded_dims: BTreeMap<i64, usize>,
    pub steps: FiltrationJson<Q>,
}

impl Serialize for WeightFiltration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WeightFiltrationJson {
            center: self.center(),
            graded_dims: self.graded_dims(),
            steps: FiltrationJson::from(&self.filtration),
        }
        .serialize(serializer)
    }
}

impl WeightFiltration {
    /// Pairs an arbitrary filtration with `n`; nothing is checked here (see
    /// [`check_hard_lefschetz`]).
    pub fn new(filtration: QFiltration, operator: QMatrix) -> Result<Self, MonodromyError> {
        let d = filtration.ambient_dim();
        if operator.shape() != (d, d) {
            return Err(MonodromyError::Shape { what: "operator", expected: (d, d), found: operator.shape() });
        }
        Ok(WeightFiltration { filtration, operator })
    }

    pub fn filtration(&self) -> &QFiltration {
        &self.filtration
    }

    pub fn operator(&self) -> &QMatrix {
        &self.operator
    }

    pub fn center(&self) -> i64 {
        self.filtration.center()
    }

    pub fn step(&self, index: i64) -> QSubspace {
        self.filtration.step(index)
    }

    /// Nonzero graded dimensions.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.filtration.graded_dims()
    }
}

fn require_nilpotent(n: &QMatrix) -> Result<usize, MonodromyError> {
    nilpotency_index(n)?.ok_or(MonodromyError::NotNilpotent)
}

fn power(n: &QMatrix, l: usize) -> QMatrix {
    n.pow(l as u32).expect("square operator")
}

/// Least `l` with `N^{l+1} U ⊆ L`.
fn relative_index(n: &QMatrix, lower: &QSubspace, upper: &QSubspace) -> usize {
    let mut l = 0;
    let mut moved = upper.mapped_by(n).expect("ambient matches");
    while !moved.is_subspace_of(lower) {
        l += 1;
        moved = moved.mapped_by(n).expect("ambient matches");
    }
    l
}

/// Fills `steps` for the subquotient `upper / lower`, assuming the parent
/// level already put `lower` at `k - 1` and `upper` at `k`.
fn refine(n: &QMatrix, k: i64, lower: QSubspace, upper: QSubspace, steps: &mut BTreeMap<i64, QSubspace>) {
    if lower == upper {
        return;
    }
    let l = relative_index(n, &lower, &upper);
    if l == 0 {
        return;
    }
    let nl = power(n, l);
    let new_lower = lower.sum(&upper.mapped_by(&nl).expect("ambient")).expect("ambient");
    let new_upper = upper.intersect(&lower.preimage(&nl).expect("ambient")).expect("ambient");
    let li = l as i64;
    for i in k - li..k {
        steps.insert(i, new_lower.clone());
    }
    for i in k..k + li {
        steps.insert(i, new_upper.clone());
    }
    refine(n, k, new_lower, new_upper, steps);
}

/// Recursive construction: with `l` least such that `N^{l+1}` kills the
/// current subquotient `U / L`, put `W_{k-l} = L + N^l U` and
/// `W_{k+l-1} = {u in U : N^l u in L}`, then recurse on the middle.
pub fn weight_filtration(n: &QMatrix, center: i64) -> Result<WeightFiltration, MonodromyError> {
    require_nilpotent(n)?;
    let dim = n.rows();
    let mut steps = BTreeMap::new();
    let zero = QSubspace::zero(dim);
    let full = QSubspace::full(dim);
    let l = relative_index(n, &zero, &full) as i64;
    steps.insert(center - l - 1, zero.clone());
    steps.insert(center + l, full.clone());
    for i in center - l..center {
        steps.insert(i, zero.clone());
    }
    for i in center..center + l {
        steps.insert(i, full.clone());
    }
    refine(n, center, zero, full, &mut steps);
    let filtration = QFiltration::new(dim, center, steps)?.trimmed();
    WeightFiltration::new(filtration, n.clone())
}

/// Jordan basis of a nilpotent operator as `(size, top vector)` pairs: the
/// chain of a block is `v, N v, ..., N^{size-1} v`.
fn jordan_chains(n: &QMatrix) -> Result<Vec<(usize, Vec<Q>)>, MonodromyError> {
    let index = require_nilpotent(n)?;
    let dim = n.rows();
    let kernels: Vec<QSubspace> = (0..=index + 1).map(|s| kernel(&power(n, s))).collect();
    let mut chains = Vec::new();
    for s in (1..=index).rev() {
        // tops of size-s blocks: complement of K_{s-1} + N K_{s+1} in K_s
        let pushed_down = kernels[s + 1].mapped_by(n)?;
        let lower = kernels[s - 1].sum(&pushed_down)?.intersect(&kernels[s])?;
        for v in kernels[s].complement_of(&lower)? {
            chains.push((s, v));
        }
    }
    debug_assert_eq!(chains.iter().map(|(s, _)| s).sum::<usize>(), dim);
    Ok(chains)
}

/// Each Jordan block of size `s` with top `v` places `N^i v` in weight
/// `k + s - 1 - 2i`; `W_l` is spanned by the basis vectors of weight `<= l`.
pub fn jordan_weight_oracle(n: &QMatrix, center: i64) -> Result<WeightFiltration, MonodromyError> {
    let dim = n.rows();
    let mut weighted: Vec<(i64, Vec<Q>)> = Vec::new();
    for (s, top) in jordan_chains(n)? {
        let mut v = top;
        for i in 0..s {
            weighted.push((center + s as i64 - 1 - 2 * i as i64, v.clone()));
            v = n.apply(&v)?;
        }
    }
    let lo = weighted.iter().map(|(w, _)| *w).min().unwrap_or(center) - 1;
    let hi = weighted.iter().map(|(w, _)| *w).max().unwrap_or(center).max(lo + 1);
    let mut steps = BTreeMap::new();
    for l in lo..=hi {
        let vectors: Vec<Vec<Q>> = weighted.iter().filter(|(w, _)| *w <= l).map(|(_, v)| v.clone()).collect();
        steps.insert(l, QSubspace::from_vectors(dim, &vectors)?);
    }
    let filtration = QFiltration::new(dim, center, steps)?.trimmed();
    WeightFiltration::new(filtration, n.clone())
}

/// Outcome of checking the two defining conditions on an arbitrary
/// filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzReport {
    /// Indices `l` with `N W_l ⊄ W_{l-2}`.
    pub shift_failures: Vec<i64>,
    /// Values `j >= 1` for which `N^j: Gr_{k+j} -> Gr_{k-j}` is not bijective.
    pub lefschetz_failures: Vec<i64>,
    /// Largest `j` examined.
    pub max_j: i64,
}

impl LefschetzReport {
    pub fn passes(&self) -> bool {
        self.shift_failures.is_empty() && self.lefschetz_failures.is_empty()
    }
}

/// Verifies `N W_l ⊆ W_{l-2}` and, for each `j >= 1`, that `N^j` induces an
/// isomorphism `Gr_{k+j} -> Gr_{k-j}`: it must send `W_{k+j}` into
/// `W_{k-j}`, be injective on a complement of `W_{k+j-1}` modulo
/// `W_{k-j-1}`, and the two graded pieces must have equal dimension.
pub fn check_hard_lefschetz(w: &WeightFiltration) -> Result<LefschetzReport, MonodromyError> {
    let f = &w.filtration;
    let n = &w.operator;
    let k = f.center();
    let (lo, hi) = (f.lowest_index(), f.highest_index());

    let mut shift_failures = Vec::new();
    for l in lo..=hi + 2 {
        if !f.step(l).mapped_by(n)?.is_subspace_of(&f.step(l - 2)) {
            shift_failures.push(l);
        }
    }

    let max_j = (hi - k).max(k - lo).max(0) + 1;
    let mut lefschetz_failures = Vec::new();
    for j in 1..=max_j {
        let nj = power(n, j as usize);
        let (top, top_below) = (f.step(k + j), f.step(k + j - 1));
        let (bottom, bottom_below) = (f.step(k - j), f.step(k - j - 1));
        let complement = top.complement_of(&top_below)?;
        let images: Vec<Vec<Q>> = complement.iter().map(|v| nj.apply(v)).collect::<Result<_, _>>()?;
        let lands = images.iter().all(|v| bottom.contains(v));
        let injective = bottom_below.dim() + complement.len()
            == QSubspace::from_vectors(f.ambient_dim(), &images)?.sum(&bottom_below)?.dim();
        let same_dim = complement.len() == bottom.dim() - bottom_below.dim();
        if !(lands && injective && same_dim) {
            lefschetz_failures.push(j);
        }
    }
    Ok(LefschetzReport { shift_failures, lefschetz_failures, max_j })
}

/// All filtrations obtained by changing a single step of `w` to a different
/// subspace while keeping the chain increasing: the neighbouring step below
/// or above, or a same-dimensional tilt towards the step above.
pub fn single_step_perturbations(w: &WeightFiltration) -> Result<Vec<(i64, WeightFiltration)>, MonodromyError> {
    let f = &w.filtration;
    let mut out = Vec::new();
    for l in f.lowest_index()..=f.highest_index() {
        let (below, cur, above) = (f.step(l - 1), f.step(l), f.step(l + 1));
        let mut candidates = vec![below.clone(), above.clone()];
        let down = cur.complement_of(&below)?;
        let up = above.complement_of(&cur)?;
        if let (Some(c), Some(d)) = (down.first(), up.first()) {
            let tilted: Vec<Q> = c.iter().zip(d).map(|(x, y)| x.clone() + y.clone()).collect();
            let mut vectors = below.basis_vectors();
            vectors.extend(down[1..].iter().cloned());
            vectors.push(tilted);
            candidates.push(QSubspace::from_vectors(f.ambient_dim(), &vectors)?);
        }
        for s in candidates {
            if s != cur {
                let changed = f.with_step(l, s)?;
                out.push((l, WeightFiltration::new(changed, w.operator.clone())?));
            }
        }
    }
    Ok(out)
}

/// Random nilpotent matrix of size `n`: a sparse strictly upper triangular
/// matrix conjugated by a random unimodular change of basis.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let density = rng.gen_range(0.2..0.9);
    let upper = QMatrix::from_fn(n, n, |i, j| {
        if j > i && rng.gen_bool(density) {
            Q::from_integer(rng.gen_range(-3i64..=3).into())
        } else {
            Q::from_integer(0.into())
        }
    });
    let p = random_invertible(rng, n);
    let p_inv = p.inverse().expect("unimodular");
    &(&p * &upper) * &p_inv
}
