use std::collections::BTreeMap;
use std::fmt;

use super::{Field, LinalgError, Subspace};

/// An increasing filtration `W_l` of `T^n` with a distinguished center.
///
/// Steps are stored over a contiguous index range whose lowest step is the
/// zero subspace and whose highest step is the whole space; below the range
/// every step is zero, above it every step is full.
#[derive(Clone, PartialEq, Eq)]
pub struct Filtration<T> {
    ambient_dim: usize,
    center: i64,
    steps: BTreeMap<i64, Subspace<T>>,
}

impl<T: Field> Filtration<T> {
    pub fn new(ambient_dim: usize, center: i64, steps: BTreeMap<i64, Subspace<T>>) -> Result<Self, LinalgError> {
        let (Some((&lo, bottom)), Some((&hi, top))) = (steps.first_key_value(), steps.last_key_value()) else {
            return Err(LinalgError::Filtration("no steps".into()));
        };
        if !bottom.is_zero() {
            return Err(LinalgError::Filtration(format!("bottom step W_{lo} is not zero")));
        }
        if !top.is_full() {
            return Err(LinalgError::Filtration(format!("top step W_{hi} is not the whole space")));
        }
        let expected_len = usize::try_from(hi - lo + 1).unwrap_or(0);
        if steps.len() != expected_len {
            return Err(LinalgError::Filtration("step indices are not contiguous".into()));
        }
        let mut prev: Option<&Subspace<T>> = None;
        for (&l, s) in &steps {
            if s.ambient_dim() != ambient_dim {
                return Err(LinalgError::AmbientMismatch { left: ambient_dim, right: s.ambient_dim() });
            }
            if let Some(p) = prev {
                if !p.is_subspace_of(s) {
                    return Err(LinalgError::Filtration(format!("W_{} is not contained in W_{l}", l - 1)));
                }
            }
            prev = Some(s);
        }
        Ok(Filtration { ambient_dim, center, steps })
    }

    /// The filtration with a single jump: `W_l = 0` for `l < jump`, full from `jump` on.
    pub fn trivial(ambient_dim: usize, center: i64, jump: i64) -> Self {
        let mut steps = BTreeMap::new();
        steps.insert(jump - 1, Subspace::zero(ambient_dim));
        steps.insert(jump, Subspace::full(ambient_dim));
        Filtration { ambient_dim, center, steps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn lowest_index(&self) -> i64 {
        *self.steps.keys().next().expect("filtrations are nonempty")
    }

    pub fn highest_index(&self) -> i64 {
        *self.steps.keys().next_back().expect("filtrations are nonempty")
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace<T>> {
        &self.steps
    }

    pub fn step(&self, index: i64) -> Subspace<T> {
        if index < self.lowest_index() {
            Subspace::zero(self.ambient_dim)
        } else if index > self.highest_index() {
            Subspace::full(self.ambient_dim)
        } else {
            self.steps[&index].clone()
        }
    }

    pub fn graded_dim(&self, index: i64) -> usize {
        self.step(index).dim() - self.step(index - 1).dim()
    }

    /// Nonzero `dim Gr_l`, keyed by `l`.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        (self.lowest_index()..=self.highest_index()).map(|l| (l, self.graded_dim(l))).filter(|&(_, d)| d > 0).collect()
    }

    /// Drops repeated zero steps at the bottom and repeated full steps at the
    /// top, so equal filtrations have equal step maps.
    pub fn trimmed(&self) -> Self {
        let lo = self.steps.iter().filter(|(_, s)| s.is_zero()).map(|(&l, _)| l).max();
        let hi = self.steps.iter().filter(|(_, s)| s.is_full()).map(|(&l, _)| l).min();
        let (lo, hi) = (lo.expect("bottom is zero"), hi.expect("top is full"));
        // zero ambient space: every step is both zero and full
        let (lo, hi) = if lo >= hi { (hi - 1, hi) } else { (lo, hi) };
        let steps = (lo..=hi).map(|l| (l, self.step(l))).collect();
        Filtration { ambient_dim: self.ambient_dim, center: self.center, steps }
    }

    /// Returns a copy with `W_index` replaced, re-checking monotonicity.
    pub fn with_step(&self, index: i64, subspace: Subspace<T>) -> Result<Self, LinalgError> {
        let lo = self.lowest_index().min(index - 1);
        let hi = self.highest_index().max(index + 1);
        let mut steps: BTreeMap<i64, Subspace<T>> = (lo..=hi).map(|l| (l, self.step(l))).collect();
        steps.insert(index, subspace);
        Self::new(self.ambient_dim, self.center, steps)
    }

    /// Re-indexes every step by `offset`: the new `W_{l + offset}` is the old `W_l`.
    pub fn shifted(&self, offset: i64) -> Self {
        let steps = self.steps.iter().map(|(&l, s)| (l + offset, s.clone())).collect();
        Filtration { ambient_dim: self.ambient_dim, center: self.center, steps }
    }
}

impl<T: fmt::Display> fmt::Debug for Filtration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Filtration")
            .field("ambient_dim", &self.ambient_dim)
            .field("center", &self.center)
            .field("steps", &self.steps)
            .finish()
    }
}
