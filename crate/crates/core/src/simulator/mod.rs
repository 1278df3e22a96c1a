//! Seeded Monte Carlo for the joint volatility / rate / return chain
//!
//! ```text
//! ln V_t = alpha + beta ln V_{t-1} + W_t
//! R_t    = a + b R_{t-1} + c V_t + V_t Z_t
//! Q_t    = k R_{t-1} - m (R_t - R_{t-1}) + h V_t + l + V_t U_t
//! ```
//!
//! together with parameter checks and empirical stationarity/ergodicity
//! diagnostics.

mod assumptions;
mod chain;
mod ergodicity;
mod innovations;

pub use assumptions::{validate_assumptions, Finding, Severity};
pub use chain::{
    path_rng, replay_error, simulate, simulate_path, simulate_with_innovations, InitialState, SimulationPath, LOG_VOL_LIMIT,
};
pub use ergodicity::{
    compare_chains, ergodicity_diagnostic, stationary_moments, ConvergenceReport, CoordinateKs, CoordinateMoments,
    MomentEstimate, StationaryMoments, KS_THRESHOLD,
};
pub use innovations::{Innovation, InnovationSampler, InnovationSource};

use serde::{Deserialize, Serialize};

use crate::models::{ReturnsModelParams, SpreadModelParams, VixModelParams, MONTHS_PER_YEAR, PERCENT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VixCoefficients {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Return-equation coefficients; `m` plays the role of duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnsCoefficients {
    pub k: f64,
    pub m: f64,
    pub h: f64,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointModelSpec {
    pub vix: VixCoefficients,
    pub spread: SpreadCoefficients,
    #[serde(default)]
    pub returns: Option<ReturnsCoefficients>,
    pub innovations: InnovationSource,
}

impl JointModelSpec {
    /// Builds a spec from fitted models, rescaling the decimal-rate return
    /// coefficients to the percent-rate chain and folding the `R/12` accrual into `k`.
    pub fn from_fits(
        vix: &VixModelParams,
        spread: &SpreadModelParams,
        returns: Option<&ReturnsModelParams>,
        innovations: InnovationSource,
    ) -> Self {
        Self {
            vix: VixCoefficients { alpha: vix.alpha, beta: vix.beta },
            spread: SpreadCoefficients { a: spread.a, b: spread.b, c: spread.c },
            returns: returns.map(|r| ReturnsCoefficients {
                k: (r.k + 1.0 / MONTHS_PER_YEAR) / PERCENT,
                m: r.duration / PERCENT,
                h: r.h,
                l: r.l,
            }),
            innovations,
        }
    }

    /// `exp(alpha / (1 - beta))`, the noiseless fixed point of `V`.
    pub fn long_run_vix(&self) -> f64 {
        (self.vix.alpha / (1.0 - self.vix.beta)).exp()
    }

    /// `(a + c V*) / (1 - b)`, the noiseless fixed point of `R`.
    pub fn long_run_rate(&self) -> f64 {
        let s = self.spread;
        (s.a + s.c * self.long_run_vix()) / (1.0 - s.b)
    }

    /// Noiseless fixed point, or `R = 0` when `b >= 1` leaves none.
    pub fn fixed_point_state(&self) -> InitialState {
        let r = if self.spread.b < 1.0 { self.long_run_rate() } else { 0.0 };
        InitialState { v: self.long_run_vix(), r, q: 0.0 }
    }

    /// `ceil(10 / (1 - max(b, beta)))`; `None` when the chain is not contracting.
    pub fn default_burn_in(&self) -> Option<usize> {
        let rho = self.spread.b.max(self.vix.beta);
        (rho < 1.0).then(|| (10.0 / (1.0 - rho)).ceil() as usize)
    }
}

/// Moody's AAA coefficients as published: `alpha = 0.347`, `beta = 0.881`,
/// `a = 0.0258`, `b = 1 - 0.0654`, `c = 0.003`. The innovation scales are not
/// published and are set to `sd(W) = 0.2`, `sd(Z) = 0.01`, `corr(Z, W) = 0.22`.
pub fn published_aaa_spec() -> JointModelSpec {
    let (sd_w, sd_z, rho) = (0.2, 0.01, 0.22);
    let czw = rho * sd_w * sd_z;
    JointModelSpec {
        vix: VixCoefficients { alpha: 0.347, beta: 0.881 },
        spread: SpreadCoefficients { a: 0.0258, b: 1.0 - 0.0654, c: 0.003 },
        returns: None,
        innovations: InnovationSource::Gaussian {
            covariance: [[0.0, 0.0, 0.0], [0.0, sd_z * sd_z, czw], [0.0, czw, sd_w * sd_w]],
        },
    }
}
