use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Field, LinalgError, Ring};

/// Dense row-major matrix. Linear maps act on column vectors, so a map
/// `V -> W` is stored as a `dim W x dim V` matrix.
///
/// Zero-sized shapes (`0 x n`, `n x 0`) are legal and behave as the unique
/// maps to and from the zero space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount { rows, cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from its rows. An empty list gives the `0 x 0` matrix;
    /// use [`Matrix::reshape_empty`] to fix the width of an empty matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(LinalgError::RaggedRows { row: i, expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    /// Matrix with the given vectors as columns, all of length `dim`.
    pub fn from_columns(dim: usize, columns: &[Vec<T>]) -> Result<Self, LinalgError> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(LinalgError::RaggedRows { row: j, expected: dim, found: c.len() });
            }
        }
        Ok(Self::from_fn(dim, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn column_vector(v: Vec<T>) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    /// Gives an empty matrix the shape `rows x cols`; non-empty matrices must
    /// already have that shape.
    pub fn reshape_empty(self, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        if self.data.is_empty() && rows * cols == 0 {
            return Ok(Matrix { rows, cols, data: Vec::new() });
        }
        if self.rows != rows || self.cols != cols {
            return Err(LinalgError::Shape { expected: (rows, cols), found: (self.rows, self.cols) });
        }
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension { op: "multiply", left: self.shape(), right: rhs.shape() });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "add", |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "subtract", |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::Dimension { op, left: self.shape(), right: rhs.shape() });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn pow(&self, k: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut result = Self::identity(self.rows);
        for _ in 0..k {
            result = result.checked_mul(self)?;
        }
        Ok(result)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension { op: "apply", left: self.shape(), right: (v.len(), 1) });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    /// `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::block(a, &Self::zeros(a.rows, b.cols), &Self::zeros(b.rows, a.cols), b)
            .expect("diagonal blocks always fit")
    }

    /// `[[top_left, top_right], [bottom_left, bottom_right]]`.
    pub fn block(
        top_left: &Self,
        top_right: &Self,
        bottom_left: &Self,
        bottom_right: &Self,
    ) -> Result<Self, LinalgError> {
        let top = top_left.hstack(top_right)?;
        let bottom = bottom_left.hstack(bottom_right)?;
        top.vstack(&bottom)
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::Dimension { op: "hstack", left: self.shape(), right: rhs.shape() });
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.cols {
            return Err(LinalgError::Dimension { op: "vstack", left: self.shape(), right: rhs.shape() });
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(Matrix { rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row-echelon form together with the rank.
    pub fn rref(&self) -> (Self, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    /// Reduced row-echelon form and the pivot column of each nonzero row.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv();
            for j in col..m.cols {
                let v = m.get(row, j).clone() * inv.clone();
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(row, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    pub fn determinant(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Ok(T::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det * pivot.clone();
            let inv = pivot.inv();
            for i in col + 1..n {
                let factor = m.get(i, col).clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(col, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let augmented = self.hstack(&Self::identity(n))?;
        let (r, pivots) = augmented.rref_with_pivots();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(LinalgError::Singular);
        }
        Ok(r.submatrix(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on an inner-dimension mismatch; see [`Matrix::checked_mul`].
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.data[i * self.cols..(i + 1) * self.cols].iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use crate::{QMatrix, Q};

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let (r, rank) = QMatrix::identity(3).rref();
        assert_eq!(r, QMatrix::identity(3));
        assert_eq!(rank, 3);
        let (r, rank) = QMatrix::zeros(2, 2).rref();
        assert_eq!(r, QMatrix::zeros(2, 2));
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        // row2 := row2 - 2 row1
        let (r, rank) = q(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(rank, 1);
        assert_eq!(r, q(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rref().0, r);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.determinant().unwrap(), Q::from_integer(1.into()));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(q(&[&[0, 1], &[1, 0]]).determinant().unwrap(), Q::from_integer((-1).into()));
    }

    #[test]
    fn empty_shapes() {
        let a = QMatrix::zeros(0, 3);
        let b = QMatrix::zeros(3, 0);
        assert_eq!((&b * &a).shape(), (3, 3));
        assert_eq!((&a * &b).shape(), (0, 0));
        assert_eq!(QMatrix::identity(0).determinant().unwrap(), Q::from_integer(1.into()));
        assert!(QMatrix::from_rows(vec![]).unwrap().reshape_empty(0, 2).is_ok());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![Q::from_integer(1.into())], vec![]];
        assert!(QMatrix::from_rows(rows).is_err());
    }
}
