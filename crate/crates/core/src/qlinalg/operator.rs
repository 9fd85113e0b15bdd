//! Nilpotent and unipotent operator calculus: finite logarithm and
//! exponential series, nilpotency index, and the quasi-unipotence test.

use num_integer::Integer;

use super::poly::{characteristic_polynomial, euler_phi, CyclotomicTable};
use super::{Field, LinalgError, Matrix};

fn require_square<T: Field>(m: &Matrix<T>) -> Result<usize, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(m.rows())
}

/// Least `m` with `n^m = 0`, or `None` when `n` is not nilpotent. Nonzero
/// sizes have index at least 1; the `0 x 0` matrix has index 0.
pub fn nilpotency_index<T: Field>(n: &Matrix<T>) -> Result<Option<usize>, LinalgError> {
    let dim = require_square(n)?;
    if dim == 0 {
        return Ok(Some(0));
    }
    let mut power = n.clone();
    for k in 1..=dim {
        if power.is_zero() {
            return Ok(Some(k));
        }
        power = n * &power;
    }
    Ok(None)
}

pub fn is_nilpotent<T: Field>(n: &Matrix<T>) -> Result<bool, LinalgError> {
    Ok(nilpotency_index(n)?.is_some())
}

/// `(t - 1)` nilpotent.
pub fn is_unipotent<T: Field>(t: &Matrix<T>) -> Result<bool, LinalgError> {
    let dim = require_square(t)?;
    is_nilpotent(&(t - &Matrix::identity(dim)))
}

/// `log t = (t-1) - (t-1)^2/2 + (t-1)^3/3 - ...`, which terminates because
/// `t - 1` is nilpotent.
pub fn log_unipotent<T: Field>(t: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let dim = require_square(t)?;
    let x = t - &Matrix::identity(dim);
    let index = nilpotency_index(&x)?.ok_or(LinalgError::NotUnipotent)?;
    let mut result = Matrix::zeros(dim, dim);
    let mut power = x.clone();
    for k in 1..index {
        let mut coeff = T::one() / T::from_i64(k as i64);
        if k % 2 == 0 {
            coeff = -coeff;
        }
        result = &result + &power.scale(&coeff);
        power = &power * &x;
    }
    Ok(result)
}

/// `exp n = sum n^k / k!`, finite because `n` is nilpotent.
pub fn exp_nilpotent<T: Field>(n: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let dim = require_square(n)?;
    let index = nilpotency_index(n)?.ok_or(LinalgError::NotNilpotent)?;
    let mut result = Matrix::identity(dim);
    let mut power = Matrix::identity(dim);
    let mut factorial = T::one();
    for k in 1..index {
        power = &power * n;
        factorial = factorial * T::from_i64(k as i64);
        result = &result + &power.scale(&factorial.inv());
    }
    Ok(result)
}

/// Outcome of [`is_quasi_unipotent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiUnipotence {
    pub quasi_unipotent: bool,
    /// Least `m` with `t^m` unipotent.
    pub order: Option<usize>,
    /// Indices `n` of the cyclotomic factors `Phi_n` of the characteristic
    /// polynomial, with multiplicity, in increasing order.
    pub cyclotomic_factors: Vec<usize>,
}

/// Decides whether the characteristic polynomial of `t` is a product of
/// cyclotomic polynomials, i.e. whether every eigenvalue is a root of unity.
///
/// Only `Phi_n` with `phi(n) <= dim` can occur; since `phi(n) >= sqrt(n/2)`
/// these all have `n <= 2 dim^2`.
pub fn is_quasi_unipotent<T: Field>(t: &Matrix<T>) -> Result<QuasiUnipotence, LinalgError> {
    let dim = require_square(t)?;
    if t.determinant()?.is_zero() {
        return Err(LinalgError::Singular);
    }
    let mut remaining = characteristic_polynomial(t)?;
    let mut table = CyclotomicTable::new();
    let mut factors = Vec::new();
    let bound = 2 * dim * dim + 2;
    for n in (1..=bound).filter(|&n| euler_phi(n) <= dim) {
        if remaining.is_one() {
            break;
        }
        let phi = table.get(n);
        loop {
            let (q, r) = remaining.div_rem(&phi);
            if !r.is_zero() {
                break;
            }
            remaining = q;
            factors.push(n);
        }
    }
    if !remaining.is_one() {
        return Ok(QuasiUnipotence { quasi_unipotent: false, order: None, cyclotomic_factors: factors });
    }
    let order = factors.iter().fold(1usize, |acc, &n| acc.lcm(&n));
    debug_assert!(is_unipotent(&t.pow(order as u32)?)?);
    Ok(QuasiUnipotence { quasi_unipotent: true, order: Some(order), cyclotomic_factors: factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QMatrix, Q};

    fn mat(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
            .unwrap()
    }

    #[test]
    fn log_examples() {
        assert!(log_unipotent(&QMatrix::identity(3)).unwrap().is_zero());
        assert_eq!(log_unipotent(&mat(&[&[1, 1], &[0, 1]])).unwrap(), mat(&[&[0, 1], &[0, 0]]));
        assert!(matches!(log_unipotent(&mat(&[&[2, 0], &[0, 1]])), Err(LinalgError::NotUnipotent)));
        assert!(matches!(log_unipotent(&mat(&[&[1, 0, 0], &[0, 1, 0]])), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn log_of_three_block() {
        // T = exp(J3) = [[1,1,1/2],[0,1,1],[0,0,1]]
        let half = Q::new(1.into(), 2.into());
        let one = Q::from_integer(1.into());
        let zero = Q::from_integer(0.into());
        let t = QMatrix::from_rows(vec![
            vec![one.clone(), one.clone(), half],
            vec![zero.clone(), one.clone(), one.clone()],
            vec![zero.clone(), zero.clone(), one],
        ])
        .unwrap();
        assert_eq!(log_unipotent(&t).unwrap(), mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_nilpotent(&QMatrix::zeros(2, 2)).unwrap(), QMatrix::identity(2));
        assert_eq!(exp_nilpotent(&mat(&[&[0, 1], &[0, 0]])).unwrap(), mat(&[&[1, 1], &[0, 1]]));
        assert!(matches!(exp_nilpotent(&mat(&[&[1, 0], &[0, 0]])), Err(LinalgError::NotNilpotent)));
    }

    #[test]
    fn quasi_unipotent_examples() {
        let id = is_quasi_unipotent(&QMatrix::identity(2)).unwrap();
        assert!(id.quasi_unipotent);
        assert_eq!(id.order, Some(1));

        let rot = is_quasi_unipotent(&mat(&[&[0, -1], &[1, 0]])).unwrap();
        assert!(rot.quasi_unipotent);
        assert_eq!(rot.order, Some(4));
        assert_eq!(rot.cyclotomic_factors, vec![4]);

        let dil = is_quasi_unipotent(&mat(&[&[2, 0], &[0, 1]])).unwrap();
        assert!(!dil.quasi_unipotent);
        assert_eq!(dil.order, None);

        assert!(matches!(is_quasi_unipotent(&mat(&[&[1, 1], &[1, 1]])), Err(LinalgError::Singular)));
    }

    #[test]
    fn quasi_unipotent_mixed_orders() {
        // -1 (order 2) with a 3-cycle permutation (Phi_1 Phi_3): order lcm(2,3) = 6
        let m = mat(&[&[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let r = is_quasi_unipotent(&m).unwrap();
        assert!(r.quasi_unipotent);
        assert_eq!(r.order, Some(6));
        assert!(is_unipotent(&m.pow(6).unwrap()).unwrap());
        assert!(!is_unipotent(&m.pow(3).unwrap()).unwrap());
    }

    #[test]
    fn nilpotency_index_values() {
        assert_eq!(nilpotency_index(&QMatrix::zeros(3, 3)).unwrap(), Some(1));
        assert_eq!(nilpotency_index(&mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])).unwrap(), Some(3));
        assert_eq!(nilpotency_index(&QMatrix::identity(2)).unwrap(), None);
    }
}
