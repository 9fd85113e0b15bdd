//! Dense univariate polynomials, just enough for characteristic polynomials
//! and the cyclotomic factor test.

use std::collections::HashMap;

use num_traits::Zero;

use super::{Field, LinalgError, Matrix};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![T::one()] }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![T::zero(); n + 1];
        c[0] = -T::one();
        c[n] = T::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[d].inv();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return (Self::new(Vec::new()), self.clone());
        };
        let mut quot = vec![T::zero(); n - d + 1];
        for i in (0..=n - d).rev() {
            let c = rem[i + d].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        (Self::new(quot), Self::new(rem))
    }
}

/// `det(x I - m)` by the Faddeev-LeVerrier recursion (characteristic zero).
pub fn characteristic_polynomial<T: Field>(m: &Matrix<T>) -> Result<Polynomial<T>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let identity = Matrix::identity(n);
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        aux = (m * &aux).checked_add(&identity.scale(&coeffs[n - k + 1]))?;
        let am = m * &aux;
        let trace = (0..n).fold(T::zero(), |acc, i| acc + am.get(i, i).clone());
        coeffs[n - k] = -trace / T::from_i64(k as i64);
    }
    Ok(Polynomial::new(coeffs))
}

pub fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Cyclotomic polynomials computed by exact division of `x^n - 1`.
#[derive(Default)]
pub struct CyclotomicTable<T> {
    cache: HashMap<usize, Polynomial<T>>,
}

impl<T: Field> CyclotomicTable<T> {
    pub fn new() -> Self {
        CyclotomicTable { cache: HashMap::new() }
    }

    pub fn get(&mut self, n: usize) -> Polynomial<T> {
        assert!(n >= 1, "cyclotomic index starts at 1");
        if let Some(p) = self.cache.get(&n) {
            return p.clone();
        }
        let mut p = Polynomial::x_pow_minus_one(n);
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let phi_d = self.get(d);
            let (q, r) = p.div_rem(&phi_d);
            debug_assert!(r.is_zero());
            p = q;
        }
        self.cache.insert(n, p.clone());
        p
    }
}
