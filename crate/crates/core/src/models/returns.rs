use serde::{Deserialize, Serialize};

use super::{require_len, require_positive, require_same_months};
use crate::error::{Error, Result};
use crate::ingest::{MonthRange, MonthlySeries};
use crate::regression::{ols, DesignMatrix, OlsFit};

/// Rates arrive in percent; the return regressions work with decimal rates.
pub const PERCENT: f64 = 100.0;
/// A rate `R` accrues `R / 12` over one month.
pub const MONTHS_PER_YEAR: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnsVariant {
    /// `Q_t - R_{t-1}/12 = -D dR_t + h (+ l / V_t) + noise`.
    Single,
    /// Adds `k R_{t-1}`.
    WithLaggedRate,
}

/// Fitted bond-return regression. Rates enter as decimals, so `D` is a
/// duration in years and `k` is unit-free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnsModelParams {
    pub variant: ReturnsVariant,
    /// Whether the regression was divided through by `V_t`.
    pub normalized: bool,
    pub k: f64,
    pub duration: f64,
    pub h: f64,
    /// Coefficient on `1 / V_t`; zero for the unnormalized regression.
    pub l: f64,
    /// `delta'_t` (normalized) or `delta_t` (unnormalized), months `1..n`.
    pub residuals: Vec<f64>,
    pub fit: OlsFit<f64>,
    pub window: MonthRange,
}

impl ReturnsModelParams {
    /// p-value of the t-test for `k = 0`, if `k` was estimated.
    pub fn k_p_value(&self) -> Option<f64> {
        self.fit.index_of("rate_lag").map(|i| self.fit.p_values[i])
    }
}

struct ReturnsRows {
    excess: Vec<f64>,
    rate_lag: Vec<f64>,
    rate_change: Vec<f64>,
}

/// Builds rows for months `1..n` of `rate`, looking up `Q_t` by month so the
/// return series may start either at month 0 or month 1.
fn returns_rows(ret: &MonthlySeries, rate: &MonthlySeries) -> Result<ReturnsRows> {
    require_len("returns regression", rate)?;
    let r = rate.values();
    let mut rows = ReturnsRows { excess: vec![], rate_lag: vec![], rate_change: vec![] };
    for (t, m) in rate.months().iter().enumerate().skip(1) {
        let q = ret.get(*m).ok_or_else(|| {
            Error::Alignment(format!("return series `{}` has no value for {m}", ret.name))
        })?;
        let lag = r[t - 1] / PERCENT;
        rows.excess.push(q - lag / MONTHS_PER_YEAR);
        rows.rate_lag.push(lag);
        rows.rate_change.push((r[t] - r[t - 1]) / PERCENT);
    }
    Ok(rows)
}

fn finish(
    variant: ReturnsVariant,
    normalized: bool,
    fit: OlsFit<f64>,
    rate: &MonthlySeries,
) -> ReturnsModelParams {
    let k = fit.index_of("rate_lag").map(|i| fit.coefficients[i]).unwrap_or(0.0);
    let l = fit.index_of("inv_vix").map(|i| fit.coefficients[i]).unwrap_or(0.0);
    ReturnsModelParams {
        variant,
        normalized,
        k,
        duration: -fit.coef("rate_change"),
        h: fit.coef("const"),
        l,
        residuals: fit.residuals.clone(),
        fit,
        window: super::lagged_window(rate.months()),
    }
}

/// `(Q_t - R_{t-1}/12)/V_t = k R_{t-1}/V_t - D dR_t/V_t + h + l/V_t + delta'_t`,
/// with the `k` term present only for [`ReturnsVariant::WithLaggedRate`].
pub fn fit_returns_model(
    ret: &MonthlySeries,
    rate: &MonthlySeries,
    vix: &MonthlySeries,
    variant: ReturnsVariant,
) -> Result<ReturnsModelParams> {
    require_same_months(rate, vix)?;
    require_positive(vix)?;
    let rows = returns_rows(ret, rate)?;
    let v = &vix.values()[1..];
    let over_v = |xs: &[f64]| xs.iter().zip(v).map(|(x, v)| x / v).collect::<Vec<_>>();
    let mut columns = Vec::with_capacity(4);
    if variant == ReturnsVariant::WithLaggedRate {
        columns.push(("rate_lag", over_v(&rows.rate_lag)));
    }
    columns.push(("rate_change", over_v(&rows.rate_change)));
    columns.push(("const", vec![1.0; v.len()]));
    columns.push(("inv_vix", v.iter().map(|v| 1.0 / v).collect()));
    let fit = ols(&DesignMatrix::from_columns(columns)?, &over_v(&rows.excess))?;
    Ok(finish(variant, true, fit, rate))
}

/// `Q_t - R_{t-1}/12 = k R_{t-1} - D dR_t + h + delta_t`.
pub fn fit_unnormalized_returns_model(
    ret: &MonthlySeries,
    rate: &MonthlySeries,
    variant: ReturnsVariant,
) -> Result<ReturnsModelParams> {
    let rows = returns_rows(ret, rate)?;
    let mut columns = Vec::with_capacity(3);
    if variant == ReturnsVariant::WithLaggedRate {
        columns.push(("rate_lag", rows.rate_lag.clone()));
    }
    columns.push(("rate_change", rows.rate_change.clone()));
    columns.push(("const", vec![1.0; rows.excess.len()]));
    let fit = ols(&DesignMatrix::from_columns(columns)?, &rows.excess)?;
    Ok(finish(variant, false, fit, rate))
}
