//! Fit pipelines for the log-VIX autoregression, the VIX-normalized rate and
//! spread regressions, the bond-return regressions, and the residual
//! comparisons between raw and normalized fits.

mod compare;
mod persist;
mod rates;
mod returns;
mod vg;
mod vix;

pub use compare::{compare_residuals, ResidualComparison};
pub use persist::{load_model, save_model, ModelFile, ModelParams, MODEL_SCHEMA_VERSION};
pub use rates::{fit_raw_ar, fit_spread_model, RawArFit, SpreadModelParams};
pub use returns::{
    fit_returns_model, fit_unnormalized_returns_model, ReturnsModelParams, ReturnsVariant, MONTHS_PER_YEAR,
    PERCENT,
};
pub use vg::{fit_variance_gamma, VarianceGamma, VgFit, VgMoments, VgParams, VG_MIN_SAMPLE};
pub use vix::{fit_vix_ar, VixModelParams};

use crate::error::{Error, Result};
use crate::ingest::{MonthRange, MonthlySeries, YearMonth};

/// Smallest series length accepted by the autoregressive fits.
pub const MIN_OBSERVATIONS: usize = 30;

pub(crate) fn require_len(what: &'static str, s: &MonthlySeries) -> Result<()> {
    if s.len() < MIN_OBSERVATIONS {
        return Err(Error::SampleSize { what, need: MIN_OBSERVATIONS, got: s.len() });
    }
    if let Some(w) = s.months().windows(2).find(|w| w[0].next() != w[1]) {
        return Err(Error::Alignment(format!("series `{}` has a gap between {} and {}", s.name, w[0], w[1])));
    }
    Ok(())
}

pub(crate) fn require_same_months(a: &MonthlySeries, b: &MonthlySeries) -> Result<()> {
    if a.months() != b.months() {
        return Err(Error::Alignment(format!("`{}` and `{}` are not aligned", a.name, b.name)));
    }
    Ok(())
}

pub(crate) fn require_positive(v: &MonthlySeries) -> Result<()> {
    if let Some((m, x)) = v.months().iter().zip(v.values()).find(|(_, x)| !(**x > 0.0)) {
        return Err(Error::Domain(format!("volatility `{}` is nonpositive ({x}) at {m}", v.name)));
    }
    Ok(())
}

/// Range covered by months `1..` of a series (the rows of a lagged regression).
pub(crate) fn lagged_window(months: &[YearMonth]) -> MonthRange {
    MonthRange { first: months[1], last: months[months.len() - 1] }
}
