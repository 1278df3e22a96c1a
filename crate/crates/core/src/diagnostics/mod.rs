//! Residual diagnostic battery.

mod acf;
mod adf;
mod ks;
mod moments;
mod normality;

pub use acf::{acf, ljung_box, AcfResult};
pub use adf::{adf_test, mackinnon_pvalue, CriticalValues, DEFAULT_ADF_LAGS};
pub use ks::{ks_two_sample, KsResult};
pub use moments::{correlation, moments, MomentSummary};
pub use normality::{jarque_bera, qq_points, QqPoint};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct TestResult<T> {
    pub test_name: String,
    pub statistic: T,
    pub p_value: T,
    /// Lags for Ljung-Box/ADF, degrees of freedom for Jarque-Bera.
    pub parameter: usize,
    pub nobs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_values: Option<CriticalValues<T>>,
}

/// Rejects sequences whose spread is at rounding level.
pub(crate) fn check_variance<T: Scalar>(x: &[T], centered_ss: T, what: &str) -> Result<()> {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(T::min_positive_value());
    let sd = (centered_ss / T::of_usize(x.len())).sqrt();
    if !(sd > T::epsilon() * T::of(64.0) * scale) {
        return Err(Error::ZeroVariance(what.to_string()));
    }
    Ok(())
}

/// Writes `lag,value` rows.
pub fn acf_to_csv<T: Scalar>(acf: &AcfResult<T>) -> String {
    let mut out = String::from("lag,value\n");
    for (lag, v) in acf.values.iter().enumerate() {
        out.push_str(&format!("{lag},{v}\n"));
    }
    out
}

/// Writes `theoretical,sample` rows.
pub fn qq_to_csv<T: Scalar>(points: &[QqPoint<T>]) -> String {
    let mut out = String::from("theoretical,sample\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.theoretical, p.sample));
    }
    out
}
