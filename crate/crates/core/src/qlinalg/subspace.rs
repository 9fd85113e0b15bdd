use std::fmt;

use num_traits::Zero;

use super::{Field, LinalgError, Matrix};

/// A linear subspace of `T^n`, stored by a canonical basis.
///
/// The basis is the reduced column-echelon form of any spanning set: its
/// transpose is in reduced row-echelon form with zero rows removed. Two
/// subspaces are equal exactly when their canonical bases are identical, so
/// the derived `PartialEq` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Matrix<T>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(ambient_dim) }
    }

    /// Column span of `spanning`.
    pub fn span(spanning: &Matrix<T>) -> Self {
        let ambient_dim = spanning.rows();
        let (r, rank) = spanning.transpose().rref();
        let basis = r.submatrix(0, rank, 0, ambient_dim).transpose();
        Subspace { ambient_dim, basis }
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<Self, LinalgError> {
        Ok(Self::span(&Matrix::from_columns(ambient_dim, vectors)?))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.columns()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let extended = self.basis.hstack(&Matrix::column_vector(v.to_vec())).expect("same height");
        extended.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        Ok(self.zassenhaus(other)?.0)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        Ok(self.zassenhaus(other)?.1)
    }

    /// Zassenhaus: row-reduce `[[U, U], [W, 0]]`; rows with a nonzero left
    /// half span `U + W`, rows with a zero left half span `U ∩ W` on the right.
    fn zassenhaus(&self, other: &Self) -> Result<(Self, Self), LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let u = self.basis.transpose();
        let w = other.basis.transpose();
        let top = u.hstack(&u)?;
        let bottom = w.hstack(&Matrix::zeros(w.rows(), n))?;
        let (r, rank) = top.vstack(&bottom)?.rref();
        let mut sum_rows = Vec::new();
        let mut meet_rows = Vec::new();
        for i in 0..rank {
            let row = r.row(i);
            if row[..n].iter().all(Zero::is_zero) {
                meet_rows.push(row[n..].to_vec());
            } else {
                sum_rows.push(row[..n].to_vec());
            }
        }
        Ok((Self::from_vectors(n, &sum_rows)?, Self::from_vectors(n, &meet_rows)?))
    }

    /// `{ x : m x ∈ self }` for `m` mapping into the ambient space.
    pub fn preimage(&self, m: &Matrix<T>) -> Result<Self, LinalgError> {
        if m.rows() != self.ambient_dim {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim, right: m.rows() });
        }
        let annihilator = kernel(&self.basis.transpose());
        let constraints = annihilator.basis.transpose().checked_mul(m)?;
        Ok(kernel(&constraints))
    }

    /// `m(self)`.
    pub fn mapped_by(&self, m: &Matrix<T>) -> Result<Self, LinalgError> {
        Ok(Self::span(&m.checked_mul(&self.basis)?))
    }

    /// Vectors of `self` whose classes form a basis of `self / lower`, taken
    /// greedily from the canonical basis of `self`.
    pub fn complement_of(&self, lower: &Self) -> Result<Vec<Vec<T>>, LinalgError> {
        self.check_ambient(lower)?;
        let mut acc = lower.basis.clone();
        let mut rank = acc.cols();
        let mut chosen = Vec::new();
        for v in self.basis_vectors() {
            let candidate = acc.hstack(&Matrix::column_vector(v.clone()))?;
            let r = candidate.rank();
            if r > rank {
                acc = candidate;
                rank = r;
                chosen.push(v);
            }
        }
        Ok(chosen)
    }
}

impl<T: fmt::Display> fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient {}, basis {})", self.ambient_dim, self.basis)
    }
}

/// `ker m` as a subspace of the source of `m`.
pub fn kernel<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    let n = m.cols();
    let (r, pivots) = m.rref_with_pivots();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<T>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![T::zero(); n];
            v[f] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect();
    Subspace::from_vectors(n, &vectors).expect("kernel vectors have source length")
}

/// Column span of `m`.
pub fn image<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    Subspace::span(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QMatrix, QSubspace, Q};

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    fn mat(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    fn span(vs: &[&[i64]]) -> QSubspace {
        let n = vs[0].len();
        QSubspace::from_vectors(n, &vs.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&QMatrix::identity(3)).is_zero());
        assert_eq!(kernel(&QMatrix::zeros(2, 2)), QSubspace::full(2));
        assert_eq!(kernel(&mat(&[&[1, 2], &[2, 4]])), span(&[&[-2, 1]]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image(&QMatrix::identity(3)), QSubspace::full(3));
        assert!(image(&QMatrix::zeros(2, 2)).is_zero());
        assert_eq!(image(&mat(&[&[1, 2], &[2, 4]])), span(&[&[1, 2]]));
    }

    #[test]
    fn canonical_form_ignores_presentation() {
        assert_eq!(span(&[&[2, 4]]), span(&[&[-1, -2]]));
        assert_eq!(span(&[&[1, 0, 1], &[0, 1, 1]]), span(&[&[1, 1, 2], &[1, -1, 0]]));
    }

    #[test]
    fn sum_and_intersection() {
        let s = span(&[&[1, 0]]);
        let t = span(&[&[1, 1]]);
        assert_eq!(s.sum(&t).unwrap(), QSubspace::full(2));
        assert!(s.intersect(&t).unwrap().is_zero());
        assert_eq!(s.sum(&QSubspace::zero(2)).unwrap(), s);
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert!(s.sum(&QSubspace::zero(3)).is_err());
    }

    #[test]
    fn preimage_and_complement() {
        // m = [[0,1],[0,0]]; preimage of 0 is ker m = span(e1)
        let m = mat(&[&[0, 1], &[0, 0]]);
        assert_eq!(QSubspace::zero(2).preimage(&m).unwrap(), span(&[&[1, 0]]));
        assert_eq!(span(&[&[1, 0]]).preimage(&m).unwrap(), QSubspace::full(2));
        let c = QSubspace::full(2).complement_of(&span(&[&[1, 1]])).unwrap();
        assert_eq!(c.len(), 1);
    }
}
