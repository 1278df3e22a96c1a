//! Variance-gamma law `X = c + theta G + sigma sqrt(G) N` with
//! `G ~ Gamma(shape 1/nu, scale nu)` and `N ~ N(0, 1)` independent, fitted by
//! the method of moments.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::diagnostics::moments;
use crate::error::{Error, Result};

/// Minimum sample size for a moment fit.
pub const VG_MIN_SAMPLE: usize = 100;

/// Upper end of the attainable `S^2 / K` ratio, reached as `u -> 1`.
const MAX_SKEW_KURT_RATIO: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VgParams {
    /// Location `c`.
    pub location: f64,
    /// Diffusion scale `sigma`.
    pub scale: f64,
    /// Asymmetry `theta`.
    pub asymmetry: f64,
    /// Variance of the gamma clock, `nu` (tail/shape parameter; 0 is the Gaussian limit).
    pub shape: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VgMoments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl VgParams {
    pub fn moments(&self) -> VgMoments {
        let (s2, th, nu) = (self.scale * self.scale, self.asymmetry, self.shape);
        let var = s2 + th * th * nu;
        let m3 = 2.0 * th.powi(3) * nu * nu + 3.0 * s2 * th * nu;
        let m4_excess = 3.0 * s2 * s2 * nu + 12.0 * s2 * th * th * nu * nu + 6.0 * th.powi(4) * nu.powi(3);
        VgMoments {
            mean: self.location + th,
            variance: var,
            skewness: m3 / var.powf(1.5),
            excess_kurtosis: m4_excess / (var * var),
        }
    }

    /// `E[exp(u X)]`, or `None` where it diverges.
    pub fn mgf(&self, u: f64) -> Option<f64> {
        if self.shape == 0.0 {
            let drift = (self.location + self.asymmetry) * u;
            return Some((drift + 0.5 * self.scale * self.scale * u * u).exp());
        }
        let inner = 1.0 - self.asymmetry * self.shape * u - 0.5 * self.scale * self.scale * self.shape * u * u;
        (inner > 0.0).then(|| (self.location * u).exp() * inner.powf(-1.0 / self.shape))
    }
}

/// Sampler for [`VgParams`].
#[derive(Debug, Clone)]
pub struct VarianceGamma {
    params: VgParams,
    clock: Option<Gamma<f64>>,
}

impl VarianceGamma {
    pub fn new(params: VgParams) -> Result<Self> {
        if !(params.scale >= 0.0) || !(params.shape >= 0.0) || !params.location.is_finite() || !params.asymmetry.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid variance-gamma parameters {params:?}")));
        }
        let clock = if params.shape > 0.0 {
            Some(Gamma::new(1.0 / params.shape, params.shape).map_err(|e| Error::InvalidArgument(e.to_string()))?)
        } else {
            None
        };
        Ok(Self { params, clock })
    }

    pub fn params(&self) -> VgParams {
        self.params
    }
}

impl Distribution<f64> for VarianceGamma {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = match &self.clock {
            Some(gamma) => gamma.sample(rng),
            None => 1.0,
        };
        let z: f64 = StandardNormal.sample(rng);
        self.params.location + self.params.asymmetry * g + self.params.scale * g.sqrt() * z
    }
}

/// Method-of-moments fit with the moments it targeted and achieved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VgFit {
    pub params: VgParams,
    pub target: VgMoments,
    pub achieved: VgMoments,
    /// Non-positive sample excess kurtosis: the fit sits at the Gaussian limit `nu = 0`.
    pub gaussian_limit: bool,
}

// S^2 / K as a function of u = theta^2 nu / var; increasing on [0, 1].
fn skew_kurt_ratio(u: f64) -> f64 {
    u * (3.0 - u).powi(2) / (3.0 + 6.0 * u - 3.0 * u * u)
}

fn solve_ratio(target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if skew_kurt_ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn params_from(target: &VgMoments, u: f64) -> VgParams {
    let k = target.excess_kurtosis;
    let nu = k / (3.0 + 6.0 * u - 3.0 * u * u);
    let sd = target.variance.sqrt();
    let theta = target.skewness.signum() * (u / nu).sqrt() * sd;
    let sigma = (1.0 - u).max(0.0).sqrt() * sd;
    VgParams { location: target.mean - theta, scale: sigma, asymmetry: theta, shape: nu }
}

/// Matches mean, variance, skewness and excess kurtosis of `w` (1/N moments).
///
/// Attainable iff `K > 1.5 S^2`. Otherwise returns
/// [`Error::InfeasibleMoments`] carrying the fit that keeps mean, variance and
/// kurtosis and the largest attainable skewness.
pub fn fit_variance_gamma(w: &[f64]) -> Result<VgFit> {
    if w.len() < VG_MIN_SAMPLE {
        return Err(Error::SampleSize { what: "variance-gamma fit", need: VG_MIN_SAMPLE, got: w.len() });
    }
    let m = moments(w)?;
    let target = VgMoments {
        mean: m.mean,
        variance: m.std * m.std,
        skewness: m.skewness,
        excess_kurtosis: m.excess_kurtosis,
    };
    if target.excess_kurtosis <= 0.0 {
        let params = VgParams { location: target.mean, scale: m.std, asymmetry: 0.0, shape: 0.0 };
        return Ok(VgFit { params, target, achieved: params.moments(), gaussian_limit: true });
    }
    let ratio = target.skewness * target.skewness / target.excess_kurtosis;
    if ratio >= MAX_SKEW_KURT_RATIO {
        let params = params_from(&target, 1.0 - 1e-9);
        let nearest = VgFit { params, target, achieved: params.moments(), gaussian_limit: false };
        return Err(Error::InfeasibleMoments {
            reason: format!(
                "excess kurtosis {:.4} is not above 1.5 * skewness^2 = {:.4}",
                target.excess_kurtosis,
                1.5 * target.skewness * target.skewness
            ),
            nearest: Box::new(nearest),
        });
    }
    let params = params_from(&target, solve_ratio(ratio));
    Ok(VgFit { params, target, achieved: params.moments(), gaussian_limit: false })
}
