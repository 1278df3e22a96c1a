use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{moments, TestResult};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::{chi_square_sf, normal_quantile};

/// Jarque-Bera normality test: `n/6 (S^2 + K^2/4)` against chi-square(2).
pub fn jarque_bera<T: Scalar>(x: &[T]) -> Result<TestResult<T>> {
    if x.len() < 8 {
        return Err(Error::SampleSize { what: "Jarque-Bera", need: 8, got: x.len() });
    }
    let m = moments(x)?;
    let s = m.skewness;
    let k = m.excess_kurtosis;
    let stat = T::of_usize(x.len()) / T::of(6.0) * (s * s + k * k / T::of(4.0));
    Ok(TestResult {
        test_name: "Jarque-Bera".into(),
        statistic: stat,
        p_value: chi_square_sf(stat, 2),
        parameter: 2,
        nobs: x.len(),
        critical_values: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct QqPoint<T> {
    pub theoretical: T,
    pub sample: T,
}

/// Normal QQ points: the standardized, sorted sample against `Phi^{-1}((i - 0.5)/n)`.
pub fn qq_points<T: Scalar>(x: &[T]) -> Result<Vec<QqPoint<T>>> {
    let n = x.len();
    if n < 3 {
        return Err(Error::SampleSize { what: "QQ plot", need: 3, got: n });
    }
    let (mean, std) = if n >= 4 {
        let m = moments(x)?;
        (m.mean, m.std)
    } else {
        let m = crate::scalar::mean(x);
        let ss: T = x.iter().map(|&v| (v - m) * (v - m)).sum();
        super::check_variance(x, ss, "QQ input")?;
        (m, (ss / T::of_usize(n)).sqrt())
    };
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("QQ input must not contain NaN"));
    let nf = T::of_usize(n);
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| QqPoint {
            theoretical: normal_quantile((T::of_usize(i) + T::of(0.5)) / nf),
            sample: (v - mean) / std,
        })
        .collect())
}
