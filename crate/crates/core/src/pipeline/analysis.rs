use serde::{Deserialize, Serialize};

use super::{Case, Dataset, Inputs};
use crate::diagnostics::{
    acf, adf_test, correlation, jarque_bera, ljung_box, moments, qq_points, AcfResult, MomentSummary, QqPoint, TestResult,
};
use crate::error::{Error, Result};
use crate::ingest::MonthlySeries;
use crate::models::{
    compare_residuals, fit_raw_ar, fit_returns_model, fit_spread_model, fit_unnormalized_returns_model, fit_variance_gamma,
    fit_vix_ar, RawArFit, ResidualComparison, ReturnsModelParams, ReturnsVariant, SpreadModelParams, VgFit, VixModelParams,
};
use crate::simulator::{InnovationSource, JointModelSpec};

/// Lags shown in residual ACF figures.
pub const ACF_LAGS: usize = 24;
const LJUNG_BOX_LAGS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VixAnalysis {
    pub model: VixModelParams,
    pub w_moments: MomentSummary<f64>,
    pub jarque_bera_w: TestResult<f64>,
    /// Whether the variance-gamma fit hit the moment boundary.
    pub vg_infeasible: bool,
}

/// Log-VIX autoregression with its innovation moments and variance-gamma fit.
pub fn analyze_vix(vix: &MonthlySeries) -> Result<VixAnalysis> {
    let mut model = fit_vix_ar(vix)?;
    let (vg, vg_infeasible) = match fit_variance_gamma(&model.innovations) {
        Ok(f) => (Some(f), false),
        Err(Error::InfeasibleMoments { nearest, .. }) => (Some(*nearest), true),
        Err(Error::SampleSize { .. }) => (None, false),
        Err(e) => return Err(e),
    };
    model.vg = vg;
    Ok(VixAnalysis {
        w_moments: moments(&model.innovations)?,
        jarque_bera_w: jarque_bera(&model.innovations)?,
        model,
        vg_infeasible,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateAnalysis {
    pub dataset: Dataset,
    pub case: Case,
    pub series_names: Vec<String>,
    pub raw: RawArFit,
    pub model: SpreadModelParams,
    pub comparison: ResidualComparison,
    pub adf: TestResult<f64>,
    pub jarque_bera_z: TestResult<f64>,
    pub ljung_box_z: TestResult<f64>,
    pub acf_z: AcfResult<f64>,
    pub acf_abs_z: AcfResult<f64>,
    pub qq_z: Vec<QqPoint<f64>>,
    /// Correlation of `Z_t` with the log-VIX innovations `W_t`.
    pub z_w_correlation: f64,
}

/// Raw and normalized rate regressions, residual comparison and the residual
/// test battery; `adf_lags` lags in the unit-root test.
pub fn analyze_rates(inputs: &Inputs, adf_lags: usize) -> Result<RateAnalysis> {
    let raw = fit_raw_ar(&inputs.rate)?;
    let model = fit_spread_model(&inputs.rate, &inputs.vix)?;
    let v = &inputs.vix.values()[1..];
    let comparison = compare_residuals(&raw.residuals, v, &model.normalized_residuals)?;
    let z = &model.normalized_residuals;
    let abs_z: Vec<f64> = z.iter().map(|x| x.abs()).collect();
    let acf_lags = ACF_LAGS.min(z.len() / 2 - 1);
    let lb_lags = LJUNG_BOX_LAGS.min((z.len() - 1) / 4);
    let w = fit_vix_ar(&inputs.vix)?.innovations;
    Ok(RateAnalysis {
        dataset: inputs.dataset,
        case: inputs.case,
        series_names: vec![inputs.rate.name.clone(), inputs.vix.name.clone()],
        adf: adf_test(inputs.rate.values(), adf_lags)?,
        jarque_bera_z: jarque_bera(z)?,
        ljung_box_z: ljung_box(z, lb_lags)?,
        acf_z: acf(z, acf_lags)?,
        acf_abs_z: acf(&abs_z, acf_lags)?,
        qq_z: qq_points(z)?,
        z_w_correlation: correlation(z, &w)?,
        raw,
        model,
        comparison,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnsAnalysis {
    pub dataset: Dataset,
    pub case: Case,
    pub series_names: Vec<String>,
    /// Normalized regression without `k`.
    pub single: ReturnsModelParams,
    /// Normalized regression with `k`.
    pub with_rate: ReturnsModelParams,
    /// Unnormalized regression without `k`; its residuals are `delta`.
    pub unnormalized: ReturnsModelParams,
    /// `delta`, `delta / V` and `delta'`.
    pub comparison: ResidualComparison,
}

pub fn analyze_returns(inputs: &Inputs) -> Result<ReturnsAnalysis> {
    let q = inputs.returns.as_ref().ok_or_else(|| {
        Error::InvalidArgument(format!("{} has no total-return series", inputs.dataset))
    })?;
    let single = fit_returns_model(q, &inputs.rate, &inputs.vix, ReturnsVariant::Single)?;
    let with_rate = fit_returns_model(q, &inputs.rate, &inputs.vix, ReturnsVariant::WithLaggedRate)?;
    let unnormalized = fit_unnormalized_returns_model(q, &inputs.rate, ReturnsVariant::Single)?;
    let comparison = compare_residuals(&unnormalized.residuals, &inputs.vix.values()[1..], &single.residuals)?;
    Ok(ReturnsAnalysis {
        dataset: inputs.dataset,
        case: inputs.case,
        series_names: vec![q.name.clone(), inputs.rate.name.clone(), inputs.vix.name.clone()],
        single,
        with_rate,
        unnormalized,
        comparison,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnovationKind {
    /// Gaussian with the residuals' sample covariance.
    Gaussian,
    /// Joint resampling of residual rows.
    Bootstrap,
    /// Variance-gamma `W`, conditionally Gaussian `Z` and `U`.
    VarianceGamma,
}

fn covariance(cols: &[&[f64]; 3]) -> [[f64; 3]; 3] {
    let n = cols[1].len() as f64;
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = cols[i].iter().zip(cols[j]).map(|(a, b)| (a - means[i]) * (b - means[j])).sum::<f64>() / n;
        }
    }
    out
}

/// Joint chain specification from the fits on `inputs`, with innovations of
/// the requested kind built from the fitted residuals. The return equation is
/// included when the dataset has a return series.
pub fn fitted_joint_spec(inputs: &Inputs, kind: InnovationKind) -> Result<JointModelSpec> {
    let vix = analyze_vix(&inputs.vix)?;
    let spread = fit_spread_model(&inputs.rate, &inputs.vix)?;
    let returns = match &inputs.returns {
        Some(q) => Some(fit_returns_model(q, &inputs.rate, &inputs.vix, ReturnsVariant::WithLaggedRate)?),
        None => None,
    };
    let z = &spread.normalized_residuals;
    let w = &vix.model.innovations;
    let zeros = vec![0.0; z.len()];
    let u = returns.as_ref().map_or(&zeros, |r| &r.residuals);
    let innovations = match kind {
        InnovationKind::Gaussian => InnovationSource::Gaussian { covariance: covariance(&[u, z, w]) },
        InnovationKind::Bootstrap => InnovationSource::bootstrap(returns.as_ref().map(|_| u.as_slice()), z, w)?,
        InnovationKind::VarianceGamma => {
            let fit: &VgFit = vix.model.vg.as_ref().ok_or(Error::SampleSize {
                what: "variance-gamma fit",
                need: crate::models::VG_MIN_SAMPLE,
                got: w.len(),
            })?;
            let u_std = if returns.is_some() { moments(u)?.std } else { 0.0 };
            InnovationSource::VgWGaussianZ {
                w: fit.params,
                z_std: moments(z)?.std,
                u_std,
                corr_zw: correlation(z, w)?,
                corr_uw: if u_std > 0.0 { correlation(u, w)? } else { 0.0 },
            }
        }
    };
    Ok(JointModelSpec::from_fits(&vix.model, &spread, returns.as_ref(), innovations))
}
