use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{check_variance, TestResult};
use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::special::chi_square_sf;

/// Sample autocorrelations at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct AcfResult<T> {
    pub values: Vec<T>,
    /// `1.96 / sqrt(n)`.
    pub bartlett_band: T,
}

impl<T: Scalar> AcfResult<T> {
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }
}

/// Autocorrelation function with the full-sample denominator.
pub fn acf<T: Scalar>(x: &[T], max_lag: usize) -> Result<AcfResult<T>> {
    let n = x.len();
    if 2 * max_lag >= n {
        return Err(Error::InvalidArgument(format!(
            "max_lag {max_lag} must be below n/2 (n = {n})"
        )));
    }
    let m = mean(x);
    let dev: Vec<T> = x.iter().map(|&v| v - m).collect();
    let denom: T = dev.iter().map(|&d| d * d).sum();
    check_variance(x, denom, "acf input")?;
    let values = (0..=max_lag)
        .map(|lag| {
            if lag == 0 {
                return T::one();
            }
            let num: T = dev[..n - lag].iter().zip(&dev[lag..]).map(|(&a, &b)| a * b).sum();
            num / denom
        })
        .collect();
    Ok(AcfResult { values, bartlett_band: T::of(1.96) / T::of_usize(n).sqrt() })
}

/// Ljung-Box portmanteau test over lags `1..=lags`.
pub fn ljung_box<T: Scalar>(x: &[T], lags: usize) -> Result<TestResult<T>> {
    let n = x.len();
    if lags == 0 || 4 * lags >= n {
        return Err(Error::InvalidArgument(format!(
            "Ljung-Box lags must be in 1..n/4 (lags = {lags}, n = {n})"
        )));
    }
    let rho = acf(x, lags)?;
    let nf = T::of_usize(n);
    let q = nf
        * (nf + T::of(2.0))
        * (1..=lags)
            .map(|l| rho.values[l] * rho.values[l] / T::of_usize(n - l))
            .sum::<T>();
    Ok(TestResult {
        test_name: "Ljung-Box".into(),
        statistic: q,
        p_value: chi_square_sf(q, lags),
        parameter: lags,
        nobs: n,
        critical_values: None,
    })
}
