//! Ordinary least squares with classical (homoscedastic) inference.
//!
//! The solve goes through a Householder QR of the design; rank is checked on
//! the singular values of the triangular factor so near-collinear regressors
//! such as `1/V` and `R/V` are caught before they produce garbage.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{back_substitute, householder_qr, jacobi_svd, upper_inverse, Matrix};
use crate::scalar::Scalar;
use crate::special::student_t_two_sided;

/// Relative singular-value floor below which a design is rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Regressor matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    matrix: Matrix<T>,
    names: Vec<String>,
}

impl<T: Scalar> DesignMatrix<T> {
    /// Builds a design from named columns of equal length.
    pub fn from_columns<S: Into<String>>(columns: Vec<(S, Vec<T>)>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidDesign("no columns".into()));
        }
        let n = columns[0].1.len();
        let k = columns.len();
        let mut names = Vec::with_capacity(k);
        let mut matrix = Matrix::zeros(n, k);
        for (j, (name, col)) in columns.into_iter().enumerate() {
            let name = name.into();
            if col.len() != n {
                return Err(Error::InvalidDesign(format!(
                    "column `{name}` has {} rows, expected {n}",
                    col.len()
                )));
            }
            if names.contains(&name) {
                return Err(Error::InvalidDesign(format!("duplicate column name `{name}`")));
            }
            if col.iter().all(|&x| x == T::zero()) {
                return Err(Error::InvalidDesign(format!("column `{name}` is all zeros")));
            }
            if col.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidDesign(format!("column `{name}` has non-finite values")));
            }
            for (i, x) in col.into_iter().enumerate() {
                matrix[(i, j)] = x;
            }
            names.push(name);
        }
        if n <= k {
            return Err(Error::InvalidDesign(format!(
                "need more observations than regressors (n = {n}, k = {k})"
            )));
        }
        Ok(Self { matrix, names })
    }

    pub fn nrows(&self) -> usize {
        self.matrix.rows
    }

    pub fn ncols(&self) -> usize {
        self.matrix.cols
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix[(i, j)]
    }

    /// `X beta`.
    pub fn predict(&self, beta: &[T]) -> Vec<T> {
        self.matrix.mul_vec(beta)
    }

    /// True if some column is a nonzero constant.
    pub fn has_intercept(&self) -> bool {
        (0..self.ncols()).any(|j| {
            let first = self.matrix[(0, j)];
            self.matrix.column(j).all(|x| x == first)
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let k = self.ncols();
        let mut m = Matrix::zeros(rows.len(), k);
        for (dst, &src) in rows.iter().enumerate() {
            for j in 0..k {
                m[(dst, j)] = self.matrix[(src, j)];
            }
        }
        Self { matrix: m, names: self.names.clone() }
    }
}

/// Result of an OLS fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct OlsFit<T> {
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    pub standard_errors: Vec<T>,
    pub t_stats: Vec<T>,
    pub p_values: Vec<T>,
    pub r_squared: T,
    pub adj_r_squared: T,
    pub residuals: Vec<T>,
    /// `RSS / (n - k)`.
    pub residual_variance: T,
    pub nobs: usize,
    pub dof: usize,
    pub has_intercept: bool,
}

impl<T: Scalar> OlsFit<T> {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Coefficient by column name.
    ///
    /// # Panics
    /// If `name` is not a column of the fitted design.
    pub fn coef(&self, name: &str) -> T {
        self.coefficients[self.expect_index(name)]
    }

    pub fn p_value(&self, name: &str) -> T {
        self.p_values[self.expect_index(name)]
    }

    pub fn rss(&self) -> T {
        self.residuals.iter().map(|&e| e * e).sum()
    }

    fn expect_index(&self, name: &str) -> usize {
        self.index_of(name)
            .unwrap_or_else(|| panic!("no regressor named `{name}` in {:?}", self.names))
    }
}

/// Fits `y = X beta + e` by least squares.
pub fn ols<T: Scalar>(x: &DesignMatrix<T>, y: &[T]) -> Result<OlsFit<T>> {
    let (n, k) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::InvalidDesign(format!(
            "response has {} rows, design has {n}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidDesign("response has non-finite values".into()));
    }
    let qr = householder_qr(&x.matrix, y);

    let (sv, right) = jacobi_svd(&qr.r);
    let tol = T::of(RANK_TOLERANCE).max(T::epsilon() * T::of(100.0)) * sv[0];
    if sv[k - 1] <= tol {
        let null_col = k - 1;
        let peak = (0..k).map(|i| right[(i, null_col)].abs()).fold(T::zero(), T::max);
        let columns = (0..k)
            .filter(|&i| right[(i, null_col)].abs() >= T::of(0.1) * peak)
            .map(|i| x.names[i].clone())
            .collect();
        return Err(Error::SingularDesign { columns });
    }

    let beta = back_substitute(&qr.r, &qr.qty);
    let fitted = x.predict(&beta);
    let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&a, &b)| a - b).collect();
    let rss: T = residuals.iter().map(|&e| e * e).sum();
    let dof = n - k;
    let s2 = rss / T::of_usize(dof);

    // (X^T X)^{-1} = R^{-1} R^{-T}; only the diagonal is needed.
    let rinv = upper_inverse(&qr.r);
    let standard_errors: Vec<T> = (0..k)
        .map(|i| {
            let d: T = (i..k).map(|j| rinv[(i, j)] * rinv[(i, j)]).sum();
            (s2 * d).sqrt()
        })
        .collect();
    let t_stats: Vec<T> = beta.iter().zip(&standard_errors).map(|(&b, &se)| b / se).collect();
    let p_values = t_stats.iter().map(|&t| t_test_pvalue(t, dof)).collect();

    let has_intercept = x.has_intercept();
    let (r_squared, adj_r_squared) = if has_intercept {
        let ybar = crate::scalar::mean(y);
        let tss: T = y.iter().map(|&v| (v - ybar) * (v - ybar)).sum();
        let r2 = T::one() - rss / tss;
        let adj = T::one() - (T::one() - r2) * T::of_usize(n - 1) / T::of_usize(dof);
        (r2, adj)
    } else {
        let tss: T = y.iter().map(|&v| v * v).sum();
        let r2 = T::one() - rss / tss;
        let adj = T::one() - (T::one() - r2) * T::of_usize(n) / T::of_usize(dof);
        (r2, adj)
    };

    Ok(OlsFit {
        names: x.names.clone(),
        coefficients: beta,
        standard_errors,
        t_stats,
        p_values,
        r_squared,
        adj_r_squared,
        residuals,
        residual_variance: s2,
        nobs: n,
        dof,
        has_intercept,
    })
}

/// Two-sided Student t p-value.
pub fn t_test_pvalue<T: Scalar>(t: T, dof: usize) -> T {
    student_t_two_sided(t, dof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line_design(x: &[f64]) -> DesignMatrix<f64> {
        DesignMatrix::from_columns(vec![("const", vec![1.0; x.len()]), ("x", x.to_vec())]).unwrap()
    }

    #[test]
    fn exact_linear_data() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let fit = ols(&line_design(&x), &y).unwrap();
        assert_relative_eq!(fit.coef("x"), 2.0, epsilon = 1e-12);
        assert!(fit.coef("const").abs() < 1e-12);
        assert_relative_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn intercept_only_is_mean() {
        let d = DesignMatrix::from_columns(vec![("const", vec![1.0f64; 3])]).unwrap();
        let fit = ols(&d, &[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(fit.coefficients[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(fit.standard_errors[0], (1.0f64 / 3.0).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn four_point_normal_equations() {
        // Oracle: explicit 2x2 inverse of X^T X.
        let x = [0.0, 1.0, 3.0, 4.0];
        let y = [1.0, 3.0, 2.0, 6.0];
        let n = 4.0;
        let sx: f64 = x.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let det = n * sxx - sx * sx;
        let b0 = (sxx * sy - sx * sxy) / det;
        let b1 = (n * sxy - sx * sy) / det;
        let fit = ols(&line_design(&x), &y).unwrap();
        assert_relative_eq!(fit.coefficients[0], b0, epsilon = 1e-12);
        assert_relative_eq!(fit.coefficients[1], b1, epsilon = 1e-12);
        // and the slope standard error: s^2 * n / det
        let rss: f64 = x.iter().zip(&y).map(|(a, b)| (b - b0 - b1 * a).powi(2)).sum();
        let s2 = rss / 2.0;
        assert_relative_eq!(fit.standard_errors[1], (s2 * n / det).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn collinear_columns_are_named() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let d = DesignMatrix::from_columns(vec![
            ("const", vec![1.0; 5]),
            ("x", x.to_vec()),
            ("two_x", x.iter().map(|v| 2.0 * v).collect()),
        ])
        .unwrap();
        match ols(&d, &[1.0, 0.0, 2.0, 1.0, 3.0]) {
            Err(Error::SingularDesign { columns }) => {
                assert!(columns.contains(&"x".to_string()));
                assert!(columns.contains(&"two_x".to_string()));
                assert!(!columns.contains(&"const".to_string()));
            }
            other => panic!("expected singular design, got {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_column_and_duplicates() {
        assert!(matches!(
            DesignMatrix::from_columns(vec![("a", vec![0.0f64; 4]), ("b", vec![1.0; 4])]),
            Err(Error::InvalidDesign(_))
        ));
        assert!(matches!(
            DesignMatrix::from_columns(vec![("a", vec![1.0f64; 4]), ("a", vec![2.0, 1.0, 0.0, 1.0])]),
            Err(Error::InvalidDesign(_))
        ));
        assert!(matches!(
            DesignMatrix::from_columns(vec![("a", vec![1.0f64, 2.0]), ("b", vec![2.0, 1.0])]),
            Err(Error::InvalidDesign(_))
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let x = [1.0f32, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y: Vec<f32> = x.iter().map(|v| 0.5 + 1.5 * v).collect();
        let d = DesignMatrix::from_columns(vec![("const", vec![1.0f32; 6]), ("x", x.to_vec())]).unwrap();
        let fit = ols(&d, &y).unwrap();
        assert!((fit.coefficients[1] - 1.5).abs() < 1e-5);
    }
}
