use serde::{Deserialize, Serialize};

use super::{lagged_window, require_len, require_positive, require_same_months};
use crate::error::Result;
use crate::ingest::{MonthRange, MonthlySeries};
use crate::regression::{ols, DesignMatrix, OlsFit};

/// `R_t - R_{t-1} = a + (b - 1) R_{t-1} + eps_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawArFit {
    pub a: f64,
    pub b: f64,
    /// `eps_t` for months `1..n`.
    pub residuals: Vec<f64>,
    pub fit: OlsFit<f64>,
    pub window: MonthRange,
}

impl RawArFit {
    pub fn slope(&self) -> f64 {
        self.b - 1.0
    }
}

pub fn fit_raw_ar(rate: &MonthlySeries) -> Result<RawArFit> {
    require_len("raw autoregression", rate)?;
    let r = rate.values();
    let n = r.len() - 1;
    let dr: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let design = DesignMatrix::from_columns(vec![("const", vec![1.0; n]), ("rate_lag", r[..n].to_vec())])?;
    let fit = ols(&design, &dr)?;
    Ok(RawArFit {
        a: fit.coef("const"),
        b: 1.0 + fit.coef("rate_lag"),
        residuals: fit.residuals.clone(),
        fit,
        window: lagged_window(rate.months()),
    })
}

/// `dR_t / V_t = a / V_t + (b - 1) R_{t-1} / V_t + c + Z_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadModelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `Z_t` for months `1..n`.
    pub normalized_residuals: Vec<f64>,
    pub fit: OlsFit<f64>,
    pub window: MonthRange,
}

impl SpreadModelParams {
    pub fn slope(&self) -> f64 {
        self.b - 1.0
    }
}

pub fn fit_spread_model(rate: &MonthlySeries, vix: &MonthlySeries) -> Result<SpreadModelParams> {
    require_len("normalized rate regression", rate)?;
    require_same_months(rate, vix)?;
    require_positive(vix)?;
    let (r, v) = (rate.values(), vix.values());
    let y: Vec<f64> = (1..r.len()).map(|t| (r[t] - r[t - 1]) / v[t]).collect();
    let design = DesignMatrix::from_columns(vec![
        ("inv_vix", (1..r.len()).map(|t| 1.0 / v[t]).collect()),
        ("rate_lag_over_vix", (1..r.len()).map(|t| r[t - 1] / v[t]).collect()),
        ("const", vec![1.0; r.len() - 1]),
    ])?;
    let fit = ols(&design, &y)?;
    Ok(SpreadModelParams {
        a: fit.coef("inv_vix"),
        b: 1.0 + fit.coef("rate_lag_over_vix"),
        c: fit.coef("const"),
        normalized_residuals: fit.residuals.clone(),
        fit,
        window: lagged_window(rate.months()),
    })
}
