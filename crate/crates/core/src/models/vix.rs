use serde::{Deserialize, Serialize};

use super::{lagged_window, require_len, require_positive, VgFit};
use crate::error::Result;
use crate::ingest::{MonthRange, MonthlySeries};
use crate::regression::{ols, DesignMatrix, OlsFit};

/// `ln V_t = alpha + beta ln V_{t-1} + W_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VixModelParams {
    pub alpha: f64,
    pub beta: f64,
    /// `W_t` for months `1..n`.
    pub innovations: Vec<f64>,
    #[serde(default)]
    pub vg: Option<VgFit>,
    pub fit: OlsFit<f64>,
    pub window: MonthRange,
}

impl VixModelParams {
    /// Fixed point `exp(alpha / (1 - beta))` of the noiseless recursion.
    pub fn long_run_level(&self) -> f64 {
        (self.alpha / (1.0 - self.beta)).exp()
    }
}

pub fn fit_vix_ar(vix: &MonthlySeries) -> Result<VixModelParams> {
    require_positive(vix)?;
    require_len("log-VIX autoregression", vix)?;
    let lv: Vec<f64> = vix.values().iter().map(|v| v.ln()).collect();
    let n = lv.len() - 1;
    let design = DesignMatrix::from_columns(vec![("const", vec![1.0; n]), ("log_vix_lag", lv[..n].to_vec())])?;
    let fit = ols(&design, &lv[1..])?;
    Ok(VixModelParams {
        alpha: fit.coef("const"),
        beta: fit.coef("log_vix_lag"),
        innovations: fit.residuals.clone(),
        vg: None,
        fit,
        window: lagged_window(vix.months()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ingest::YearMonth;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn recovers_simulated_log_ar() {
        let (alpha, beta) = (0.347, 0.881);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = Normal::new(0.0, 0.2).unwrap();
        let mut l: f64 = alpha / (1.0 - beta);
        let mut v = Vec::with_capacity(10_000);
        for _ in 0..10_000 {
            l = alpha + beta * l + w.sample(&mut rng);
            v.push(l.exp());
        }
        let s = MonthlySeries::from_start("VIX", YearMonth::new(1900, 1).unwrap(), v).unwrap();
        let fit = fit_vix_ar(&s).unwrap();
        assert!((fit.alpha - alpha).abs() < 0.02, "alpha = {}", fit.alpha);
        assert!((fit.beta - beta).abs() < 0.02, "beta = {}", fit.beta);
        assert_eq!(fit.innovations.len(), 9_999);
    }

    #[test]
    fn nonpositive_rejected() {
        let mut v = vec![20.0; 40];
        v[3] = -1.0;
        let s = MonthlySeries::from_start("VIX", YearMonth::new(2000, 1).unwrap(), v).unwrap();
        assert!(matches!(fit_vix_ar(&s), Err(Error::Domain(_))));
    }
}
