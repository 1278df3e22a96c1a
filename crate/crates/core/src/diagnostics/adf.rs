use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::TestResult;
use crate::error::{Error, Result};
use crate::regression::{ols, DesignMatrix};
use crate::scalar::Scalar;
use crate::special::normal_cdf;

/// Lag order used for the rate/spread unit-root tests.
pub const DEFAULT_ADF_LAGS: usize = 15;

/// Smallest and largest p-value reported by [`adf_test`].
const P_FLOOR: f64 = 0.001;
const P_CEIL: f64 = 0.999;

// MacKinnon (1994) response surface, constant only, one variable.
const TAU_STAR: f64 = -1.61;
const TAU_MIN: f64 = -18.83;
const TAU_MAX: f64 = 2.74;
const SMALL_P: [f64; 3] = [2.1659, 1.4412, 0.038269];
const LARGE_P: [f64; 4] = [1.7339, 0.93202, -0.12745, -0.010368];

// MacKinnon (2010) finite-sample critical values, constant only:
// cv(T) = b0 + b1/T + b2/T^2 + b3/T^3.
const CV_1: [f64; 4] = [-3.43035, -6.5393, -16.786, -79.433];
const CV_5: [f64; 4] = [-2.86154, -2.8903, -4.234, -40.040];
const CV_10: [f64; 4] = [-2.56677, -1.5384, -2.809, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct CriticalValues<T> {
    pub one_percent: T,
    pub five_percent: T,
    pub ten_percent: T,
}

/// Approximate left-tail p-value of the Dickey-Fuller t statistic (constant, no trend).
pub fn mackinnon_pvalue<T: Scalar>(tau: T) -> T {
    let t = tau.to_f64_lossy();
    if t > TAU_MAX {
        return T::one();
    }
    if t < TAU_MIN {
        return T::zero();
    }
    let coefs: &[f64] = if t <= TAU_STAR { &SMALL_P } else { &LARGE_P };
    let z = coefs.iter().rev().fold(0.0, |acc, c| acc * t + c);
    normal_cdf(T::of(z))
}

fn critical_values<T: Scalar>(nobs: usize) -> CriticalValues<T> {
    let n = nobs as f64;
    let cv = |b: [f64; 4]| T::of(b[0] + b[1] / n + b[2] / (n * n) + b[3] / (n * n * n));
    CriticalValues { one_percent: cv(CV_1), five_percent: cv(CV_5), ten_percent: cv(CV_10) }
}

/// Augmented Dickey-Fuller test with a constant, no trend, and a fixed lag order.
///
/// Regresses `dx_t` on `1, x_{t-1}, dx_{t-1}, ..., dx_{t-lags}`; the statistic
/// is the t-ratio of the `x_{t-1}` coefficient.
pub fn adf_test<T: Scalar>(x: &[T], lags: usize) -> Result<TestResult<T>> {
    let n = x.len();
    if n <= lags + 10 {
        return Err(Error::SampleSize { what: "ADF test", need: lags + 11, got: n });
    }
    let dx: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    // dx[i] is the change into x[i + 1]; first usable response is dx[lags].
    let rows = lags..dx.len();
    let nobs = rows.len();
    let y: Vec<T> = rows.clone().map(|i| dx[i]).collect();
    let mut columns = vec![
        ("const".to_string(), vec![T::one(); nobs]),
        ("level_lag".to_string(), rows.clone().map(|i| x[i]).collect()),
    ];
    for j in 1..=lags {
        columns.push((format!("diff_lag{j}"), rows.clone().map(|i| dx[i - j]).collect()));
    }
    let design = DesignMatrix::from_columns(columns)?;
    let fit = ols(&design, &y)?;
    let stat = fit.t_stats[1];
    let p = mackinnon_pvalue(stat).max(T::of(P_FLOOR)).min(T::of(P_CEIL));
    Ok(TestResult {
        test_name: "Augmented Dickey-Fuller".into(),
        statistic: stat,
        p_value: p,
        parameter: lags,
        nobs,
        critical_values: Some(critical_values(nobs)),
    })
}
