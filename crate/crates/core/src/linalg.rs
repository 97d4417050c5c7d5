//! Small dense complex and real matrices.
//!
//! Dimensions in this crate are tiny (a handful of coordinates), so the
//! routines favour accuracy over speed: singular values come from one-sided
//! Jacobi rotations, which resolve small singular values to high relative
//! accuracy.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real, C};

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_columns(cols: &[Vec<C<T>>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    /// Outer product `y cᵀ`.
    pub fn outer(y: &[C<T>], c: &[C<T>]) -> Self {
        let mut m = Self::zeros(y.len(), c.len());
        for i in 0..y.len() {
            for j in 0..c.len() {
                m[(i, j)] = y[i] * c[j];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C<T>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(C::new(T::zero(), T::zero()), |s, (a, b)| s + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] = m[(i, j)] + a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// Rows `start..start + len` as a new matrix.
    pub fn row_block(&self, start: usize, len: usize) -> Self {
        Self { rows: len, cols: self.cols, data: self.data[start * self.cols..(start + len) * self.cols].to_vec() }
    }

    /// Columns `start..start + len` as a new matrix.
    pub fn col_block(&self, start: usize, len: usize) -> Self {
        let mut m = Self::zeros(self.rows, len);
        for i in 0..self.rows {
            for j in 0..len {
                m[(i, j)] = self[(i, start + j)];
            }
        }
        m
    }

    pub fn frobenius(&self) -> T {
        crate::scalar::euclid(&self.data)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|x| x.norm()).fold(T::zero(), T::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.re == T::zero() && x.im == T::zero())
    }

    /// Largest singular value (Euclidean operator norm).
    pub fn spectral_norm(&self) -> T {
        self.real_form().singular_values().first().copied().unwrap_or_else(T::zero)
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<T> {
        // The real form of a complex-linear map repeats every singular value twice.
        let sv = self.real_form().singular_values();
        sv.into_iter().step_by(2).collect()
    }

    /// Ratio of the extreme singular values of a square matrix.
    pub fn condition(&self) -> T {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
            _ => T::infinity(),
        }
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        if scale == T::zero() {
            return Err(Error::Singular { cond: f64::INFINITY });
        }
        for col in 0..n {
            let (piv, mag) = (col..n).map(|r| (r, a[(r, col)].norm())).fold((col, T::zero()), |b, x| if x.1 > b.1 { x } else { b });
            if mag <= scale * T::epsilon() * lit(n as f64) {
                return Err(Error::Singular { cond: f64::INFINITY });
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] = a[(col, j)] * p;
                inv[(col, j)] = inv[(col, j)] * p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] = a[(r, j)] - f * ac;
                    inv[(r, j)] = inv[(r, j)] - f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Inverse that refuses matrices with condition number above `max_cond`.
    pub fn inverse_checked(&self, max_cond: f64) -> Result<Self> {
        let cond = to_f64(self.condition());
        if !(cond <= max_cond) {
            return Err(Error::Singular { cond });
        }
        self.inverse()
    }

    /// Real `2r × 2c` matrix of `v ↦ A v` acting on `(Re v, Im v)`.
    pub fn real_form(&self) -> RMat<T> {
        real_linear_form(self, &CMat::zeros(self.rows, self.cols))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Real `2r × 2c` matrix of the real-linear map `v ↦ A v + conj(B v)`.
///
/// Inputs are laid out as `(Re v, Im v)` and outputs as `(Re w, Im w)`.
pub fn real_linear_form<T: Real>(a: &CMat<T>, b: &CMat<T>) -> RMat<T> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let (r, c) = (a.rows, a.cols);
    let mut m = RMat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let (x, y) = (a[(i, j)], b[(i, j)]);
            m[(i, j)] = x.re + y.re;
            m[(i, c + j)] = -x.im - y.im;
            m[(r + i, j)] = x.im - y.im;
            m[(r + i, c + j)] = x.re - y.re;
        }
    }
    m
}

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> RMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(k, j)] = self[(i, j)];
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// Singular values in decreasing order (one-sided Jacobi).
    pub fn singular_values(&self) -> Vec<T> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let work = if self.rows >= self.cols { self.clone() } else { self.transpose() };
        let (m, n) = (work.rows, work.cols);
        // Column-major copy: columns are rotated in place.
        let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| work[(i, j)]).collect()).collect();
        let eps = T::epsilon();
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: T = cols[p].iter().map(|x| *x * *x).sum();
                    let beta: T = cols[q].iter().map(|x| *x * *x).sum();
                    let gamma: T = cols[p].iter().zip(&cols[q]).map(|(x, y)| *x * *y).sum();
                    if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (lit::<T>(2.0) * gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    let (left, right) = cols.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let (u, v) = (*x, *y);
                        *x = c * u - s * v;
                        *y = s * u + c * v;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<T> = cols
            .iter()
            .map(|c| {
                let v: Vec<C<T>> = c.iter().map(|x| C::new(*x, T::zero())).collect();
                crate::scalar::euclid(&v)
            })
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }

    pub fn spectral_norm(&self) -> T {
        self.singular_values().first().copied().unwrap_or_else(T::zero)
    }
}

impl<T> std::ops::Index<(usize, usize)> for RMat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for RMat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
