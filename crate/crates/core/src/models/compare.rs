use serde::{Deserialize, Serialize};

use crate::diagnostics::{moments, MomentSummary};
use crate::error::{Error, Result};

/// Moments of raw residuals, raw residuals divided by VIX, and residuals of
/// the regression refit after dividing by VIX, all over the same months.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualComparison {
    pub original: MomentSummary<f64>,
    pub normalized: MomentSummary<f64>,
    pub refit_normalized: MomentSummary<f64>,
}

impl ResidualComparison {
    /// Dividing by VIX lowered both `|skewness|` and excess kurtosis.
    pub fn normalization_improves(&self) -> bool {
        self.normalized.skewness.abs() < self.original.skewness.abs()
            && self.normalized.excess_kurtosis < self.original.excess_kurtosis
    }
}

pub fn compare_residuals(original: &[f64], vix: &[f64], refit: &[f64]) -> Result<ResidualComparison> {
    if original.len() != vix.len() || original.len() != refit.len() {
        return Err(Error::Alignment(format!(
            "residual streams differ in length: original {}, vix {}, refit {}",
            original.len(),
            vix.len(),
            refit.len()
        )));
    }
    if vix.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("volatility must be positive to normalize residuals".into()));
    }
    let scaled: Vec<f64> = original.iter().zip(vix).map(|(e, v)| e / v).collect();
    Ok(ResidualComparison {
        original: moments(original)?,
        normalized: moments(&scaled)?,
        refit_normalized: moments(refit)?,
    })
}
