//! Small dense square matrices over any [`Scalar`], enough for exact
//! symbol arithmetic with `BigRational` entries.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub dim: usize,
    /// Row-major entries.
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self { dim, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn diag(d: &[T]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    /// `u vᵀ`.
    pub fn outer(u: &[T], v: &[T]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i].clone() * v[j].clone())
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
            .collect()
    }

    /// Frobenius pairing `Σ aᵢⱼ bᵢⱼ`.
    pub fn frobenius(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j).close_to(self.get(j, i))))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { dim: self.dim, data: self.data.iter().map(f).collect() }
    }
}

pub fn dot<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.dim, rhs.dim);
        Mat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.dim, rhs.dim);
        Mat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;

    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        Mat::from_fn(n, |i, j| (0..n).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone()))
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;

    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn exact_products() {
        let a: Mat<BigRational> = Mat::from_fn(3, |i, j| BigRational::from_ratio(i as i64 + 1, j as i64 + 1));
        let id = Mat::identity(3);
        assert_eq!(&a * &id, a);
        // rank one: a = u vᵀ, so a² = (v·u) a
        let u: Vec<BigRational> = (1..=3).map(|i| BigRational::from_int(i)).collect();
        let v: Vec<BigRational> = (1..=3).map(|j| BigRational::from_ratio(1, j)).collect();
        assert_eq!(Mat::outer(&u, &v), a);
        assert_eq!(&a * &a, a.scale(&dot(&v, &u)));
        assert_eq!(a.trace(), BigRational::from_int(3));
    }

    #[test]
    fn symmetry_and_pairing() {
        let s = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]);
        assert!(s.is_symmetric());
        assert_eq!(s.frobenius(&s), 10.0);
        assert!(!Mat::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_symmetric());
    }
}
