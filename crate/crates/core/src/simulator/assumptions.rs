use serde::{Deserialize, Serialize};

use super::innovations::psd_cholesky;
use super::{InnovationSource, JointModelSpec};
use crate::diagnostics::{jarque_bera, moments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Pass,
    Info,
    Warning,
    /// Blocks simulation unless forced.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub assumption: String,
    pub severity: Severity,
    pub message: String,
}

impl Finding {
    fn new(assumption: &str, severity: Severity, message: impl Into<String>) -> Self {
        Self { assumption: assumption.into(), severity, message: message.into() }
    }
}

const MGF_PROBES: [f64; 3] = [0.1, 0.25, 0.5];
/// Bootstrap MGF probe is unstable if one observation carries this share of the sum.
const MGF_DOMINANCE: f64 = 0.25;
/// Excess kurtosis of `U` above which its tails are flagged.
const U_HEAVY_TAIL_KURTOSIS: f64 = 6.0;

/// Checks the parameter and innovation conditions under which the chain has a
/// unique stationary law and is ergodic. Never fails; every check yields a finding.
pub fn validate_assumptions(spec: &JointModelSpec) -> Vec<Finding> {
    let mut out = Vec::new();
    let three_d = spec.returns.is_some();

    let b = spec.spread.b;
    out.push(if b > 0.0 && b < 1.0 {
        Finding::new("Assumption 2", Severity::Pass, format!("b = {b} in (0,1)"))
    } else {
        Finding::new("Assumption 2", Severity::Violation, format!("Assumption 2 violated: b not in (0,1) (b = {b})"))
    });
    let beta = spec.vix.beta;
    out.push(if beta > 0.0 && beta < 1.0 {
        Finding::new("Assumption 3", Severity::Pass, format!("beta = {beta} in (0,1)"))
    } else {
        Finding::new(
            "Assumption 3",
            Severity::Violation,
            format!("Assumption 3 violated: beta not in (0,1) (beta = {beta})"),
        )
    });

    let mean_label = if three_d { "Assumption 5" } else { "Assumption 1" };
    match &spec.innovations {
        InnovationSource::Gaussian { covariance } => {
            out.push(Finding::new(mean_label, Severity::Pass, "Gaussian innovations are mean zero by construction"));
            match psd_cholesky(covariance) {
                Err(e) => out.push(Finding::new(mean_label, Severity::Violation, format!("invalid covariance: {e}"))),
                Ok(l) => {
                    let active = if three_d { 0..3 } else { 1..3 };
                    let degenerate = active.clone().any(|i| l[i][i] <= 0.0);
                    let label = if three_d { "Assumption 6" } else { "Assumption 4" };
                    out.push(if degenerate {
                        Finding::new(label, Severity::Warning, "covariance is singular: innovation density is not everywhere positive")
                    } else {
                        Finding::new(label, Severity::Pass, "nondegenerate Gaussian has an everywhere-positive density")
                    });
                }
            }
            out.push(Finding::new("Assumption 3", Severity::Pass, "Gaussian W has a finite MGF everywhere"));
            out.push(Finding::new("Assumption 2", Severity::Pass, "Z is Gaussian"));
        }
        InnovationSource::VgWGaussianZ { w, z_std, corr_zw, corr_uw, .. } => {
            let m = w.moments();
            let tol = 1e-9 * m.variance.sqrt().max(1.0);
            out.push(if m.mean.abs() <= tol {
                Finding::new(mean_label, Severity::Pass, "variance-gamma W is centred")
            } else {
                Finding::new(mean_label, Severity::Violation, format!("mean-zero violated: E[W] = {}", m.mean))
            });
            let finite: Vec<String> = MGF_PROBES.iter().filter(|u| w.mgf(**u).is_some()).map(|u| u.to_string()).collect();
            out.push(if finite.is_empty() {
                Finding::new("Assumption 3", Severity::Warning, "E[exp(uW)] diverges at every probe u in {0.1, 0.25, 0.5}; it is finite only closer to 0")
            } else {
                Finding::new("Assumption 3", Severity::Pass, format!("E[exp(uW)] finite for u in {{{}}}", finite.join(", ")))
            });
            let label = if three_d { "Assumption 6" } else { "Assumption 4" };
            let ok = w.scale > 0.0 && *z_std > 0.0 && corr_zw.abs() < 1.0 && (!three_d || corr_uw.abs() < 1.0);
            out.push(if ok {
                Finding::new(label, Severity::Pass, "conditional Gaussian construction has positive density")
            } else {
                Finding::new(label, Severity::Warning, "degenerate scale or perfect correlation: density not everywhere positive")
            });
            out.push(Finding::new("Assumption 2", Severity::Pass, "Z is Gaussian given W"));
        }
        InnovationSource::Bootstrap { rows } => {
            if rows.len() < 2 {
                out.push(Finding::new(mean_label, Severity::Violation, "bootstrap source needs at least two rows"));
                return out;
            }
            let n = rows.len() as f64;
            let names = ["U", "Z", "W"];
            let cols: Vec<Vec<f64>> = (0..3).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
            let check = if three_d { 0..3 } else { 1..3 };
            for j in check {
                let c = &cols[j];
                let mean = c.iter().sum::<f64>() / n;
                let sd = (c.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
                let se = sd / n.sqrt();
                out.push(if mean.abs() < 3.0 * se || (sd == 0.0 && mean == 0.0) {
                    Finding::new(mean_label, Severity::Pass, format!("{} sample mean {mean:.3e} within 3 SE", names[j]))
                } else {
                    Finding::new(
                        mean_label,
                        Severity::Violation,
                        format!("mean-zero violated: {} sample mean {mean:.3e} exceeds 3 SE ({:.3e})", names[j], 3.0 * se),
                    )
                });
            }
            for u in MGF_PROBES {
                let terms: Vec<f64> = cols[2].iter().map(|w| (u * w).exp()).collect();
                let sum: f64 = terms.iter().sum();
                let max = terms.iter().cloned().fold(0.0, f64::max);
                out.push(if sum.is_finite() && max / sum < MGF_DOMINANCE {
                    Finding::new("Assumption 3", Severity::Pass, format!("empirical E[exp({u} W)] = {:.4} is stable", sum / n))
                } else {
                    Finding::new(
                        "Assumption 3",
                        Severity::Warning,
                        format!("empirical E[exp({u} W)] is dominated by a single draw ({:.0}% of the sum)", 100.0 * max / sum),
                    )
                });
            }
            if let Ok(jb) = jarque_bera(&cols[1]) {
                out.push(if jb.p_value >= 0.01 {
                    Finding::new("Assumption 2", Severity::Pass, format!("Z normality not rejected (JB p = {:.3})", jb.p_value))
                } else {
                    Finding::new("Assumption 2", Severity::Warning, format!("Z normality rejected (JB p = {:.2e})", jb.p_value))
                });
            }
            if three_d {
                if let Ok(m) = moments(&cols[0]) {
                    if m.excess_kurtosis > U_HEAVY_TAIL_KURTOSIS {
                        out.push(Finding::new(
                            "Assumption 5",
                            Severity::Warning,
                            format!("U is heavy-tailed (excess kurtosis {:.2}); only finite variance is required", m.excess_kurtosis),
                        ));
                    }
                }
            }
            let label = if three_d { "Assumption 6" } else { "Assumption 4" };
            out.push(Finding::new(label, Severity::Info, "positive innovation density is NOT verifiable for a resampled (discrete) law"));
        }
    }
    out
}
