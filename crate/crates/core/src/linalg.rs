//! Small dense kernels for the least-squares engine: Householder QR and a
//! one-sided Jacobi SVD of the triangular factor.

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = T> + '_ {
        (0..self.rows).map(move |i| self[(i, j)])
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin QR of an `n x k` matrix (n >= k), applied simultaneously to `rhs`.
pub struct QrSolve<T> {
    /// Upper-triangular `k x k` factor.
    pub r: Matrix<T>,
    /// First `k` entries of `Q^T rhs`.
    pub qty: Vec<T>,
}

pub fn householder_qr<T: Scalar>(a: &Matrix<T>, rhs: &[T]) -> QrSolve<T> {
    let (n, k) = (a.rows, a.cols);
    assert!(n >= k, "QR needs at least as many rows as columns");
    assert_eq!(rhs.len(), n);
    let mut w = a.clone();
    let mut y = rhs.to_vec();
    let mut v = vec![T::zero(); n];
    for j in 0..k {
        let norm = (j..n).map(|i| w[(i, j)] * w[(i, j)]).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let alpha = if w[(j, j)] > T::zero() { -norm } else { norm };
        for i in j..n {
            v[i] = w[(i, j)];
        }
        v[j] = v[j] - alpha;
        let vnorm2 = (j..n).map(|i| v[i] * v[i]).sum::<T>();
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::of(2.0);
        for c in j..k {
            let dot = (j..n).map(|i| v[i] * w[(i, c)]).sum::<T>();
            let f = two * dot / vnorm2;
            for i in j..n {
                w[(i, c)] = w[(i, c)] - f * v[i];
            }
        }
        let dot = (j..n).map(|i| v[i] * y[i]).sum::<T>();
        let f = two * dot / vnorm2;
        for i in j..n {
            y[i] = y[i] - f * v[i];
        }
    }
    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r[(i, j)] = w[(i, j)];
        }
    }
    y.truncate(k);
    QrSolve { r, qty: y }
}

/// Solves `R x = b` for upper-triangular `R`.
pub fn back_substitute<T: Scalar>(r: &Matrix<T>, b: &[T]) -> Vec<T> {
    let k = r.cols;
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in i + 1..k {
            s = s - r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    x
}

/// Inverse of an upper-triangular matrix.
pub fn upper_inverse<T: Scalar>(r: &Matrix<T>) -> Matrix<T> {
    let k = r.cols;
    let mut inv = Matrix::zeros(k, k);
    let mut e = vec![T::zero(); k];
    for c in 0..k {
        e.iter_mut().for_each(|x| *x = T::zero());
        e[c] = T::one();
        let col = back_substitute(r, &e);
        for i in 0..k {
            inv[(i, c)] = col[i];
        }
    }
    inv
}

/// Singular values (descending) and right singular vectors (columns of the
/// returned matrix, same order) of a small square matrix.
pub fn jacobi_svd<T: Scalar>(a: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let k = a.cols;
    let mut u = a.clone();
    let mut v = Matrix::identity(k);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = u.column(p).map(|x| x * x).sum::<T>();
                let beta = u.column(q).map(|x| x * x).sum::<T>();
                let gamma = u.column(p).zip(u.column(q)).map(|(x, y)| x * y).sum::<T>();
                if gamma == T::zero() || gamma.abs() <= T::epsilon() * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                for m in [&mut u, &mut v] {
                    for i in 0..m.rows {
                        let xp = m[(i, p)];
                        let xq = m[(i, q)];
                        m[(i, p)] = c * xp - s * xq;
                        m[(i, q)] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    let norms: Vec<T> = (0..k).map(|j| u.column(j).map(|x| x * x).sum::<T>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut vs = Matrix::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..k {
            vs[(i, dst)] = v[(i, src)];
        }
    }
    (order.iter().map(|&j| norms[j]).collect(), vs)
}
