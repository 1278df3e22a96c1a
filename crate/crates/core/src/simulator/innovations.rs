use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{VarianceGamma, VgParams};

/// One draw of `(U, Z, W)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Innovation {
    pub u: f64,
    pub z: f64,
    pub w: f64,
}

impl Innovation {
    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.z, self.w]
    }
}

/// Law of the innovation triple, i.i.d. across time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnovationSource {
    /// Mean-zero Gaussian with covariance in `(U, Z, W)` order.
    Gaussian { covariance: [[f64; 3]; 3] },
    /// Variance-gamma `W`; `Z` and `U` Gaussian with the given correlations to `W`.
    VgWGaussianZ {
        w: VgParams,
        z_std: f64,
        u_std: f64,
        corr_zw: f64,
        corr_uw: f64,
    },
    /// Jointly resampled rows of fitted `(U, Z, W)` residuals.
    Bootstrap { rows: Vec<[f64; 3]> },
}

impl InnovationSource {
    /// Bootstrap rows from time-aligned residual streams; `U` is zero when absent.
    pub fn bootstrap(u: Option<&[f64]>, z: &[f64], w: &[f64]) -> Result<Self> {
        if z.len() != w.len() || u.is_some_and(|u| u.len() != z.len()) {
            return Err(Error::Alignment("bootstrap residual streams differ in length".into()));
        }
        if z.is_empty() {
            return Err(Error::InvalidArgument("bootstrap source needs at least one row".into()));
        }
        let rows = (0..z.len()).map(|i| [u.map_or(0.0, |u| u[i]), z[i], w[i]]).collect();
        Ok(Self::Bootstrap { rows })
    }

    /// Standard deviation of `W` under this law.
    pub fn w_std(&self) -> f64 {
        match self {
            Self::Gaussian { covariance } => covariance[2][2].max(0.0).sqrt(),
            Self::VgWGaussianZ { w, .. } => w.moments().variance.sqrt(),
            Self::Bootstrap { rows } => {
                let n = rows.len() as f64;
                let m = rows.iter().map(|r| r[2]).sum::<f64>() / n;
                (rows.iter().map(|r| (r[2] - m).powi(2)).sum::<f64>() / n).sqrt()
            }
        }
    }

    pub fn sampler(&self) -> Result<InnovationSampler> {
        match self {
            Self::Gaussian { covariance } => Ok(InnovationSampler::Gaussian { chol: psd_cholesky(covariance)? }),
            Self::VgWGaussianZ { w, z_std, u_std, corr_zw, corr_uw } => {
                for (name, c) in [("corr_zw", corr_zw), ("corr_uw", corr_uw)] {
                    if !(c.abs() <= 1.0) {
                        return Err(Error::InvalidArgument(format!("{name} = {c} outside [-1, 1]")));
                    }
                }
                if !(*z_std >= 0.0 && *u_std >= 0.0) {
                    return Err(Error::InvalidArgument("innovation scales must be nonnegative".into()));
                }
                let m = w.moments();
                Ok(InnovationSampler::Vg {
                    w: VarianceGamma::new(*w)?,
                    w_mean: m.mean,
                    w_std: m.variance.sqrt(),
                    z_std: *z_std,
                    u_std: *u_std,
                    corr_zw: *corr_zw,
                    corr_uw: *corr_uw,
                })
            }
            Self::Bootstrap { rows } => {
                if rows.is_empty() {
                    return Err(Error::InvalidArgument("bootstrap source has no rows".into()));
                }
                Ok(InnovationSampler::Bootstrap { rows: rows.clone() })
            }
        }
    }
}

/// Lower Cholesky factor of a symmetric positive semidefinite 3x3 matrix.
/// Zero pivots zero their column instead of failing.
pub(crate) fn psd_cholesky(a: &[[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    for i in 0..3 {
        for j in 0..3 {
            if !a[i][j].is_finite() || (a[i][j] - a[j][i]).abs() > tol {
                return Err(Error::InvalidArgument("covariance must be finite and symmetric".into()));
            }
        }
    }
    let mut l = [[0.0; 3]; 3];
    for j in 0..3 {
        let d = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if d < -tol {
            return Err(Error::InvalidArgument("covariance is not positive semidefinite".into()));
        }
        if d <= tol {
            // Degenerate direction: the remaining entries of this column must vanish.
            for i in j + 1..3 {
                let off = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                if off.abs() > 1e-9 * scale {
                    return Err(Error::InvalidArgument("covariance is not positive semidefinite".into()));
                }
            }
            continue;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..3 {
            l[i][j] = (a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>()) / l[j][j];
        }
    }
    Ok(l)
}

/// Ready-to-draw form of an [`InnovationSource`].
#[derive(Debug, Clone)]
pub enum InnovationSampler {
    Gaussian {
        chol: [[f64; 3]; 3],
    },
    Vg {
        w: VarianceGamma,
        w_mean: f64,
        w_std: f64,
        z_std: f64,
        u_std: f64,
        corr_zw: f64,
        corr_uw: f64,
    },
    Bootstrap {
        rows: Vec<[f64; 3]>,
    },
}

impl Distribution<Innovation> for InnovationSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Innovation {
        match self {
            Self::Gaussian { chol } => {
                let e: [f64; 3] = [
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                ];
                let x: Vec<f64> = (0..3).map(|i| (0..=i).map(|k| chol[i][k] * e[k]).sum()).collect();
                Innovation { u: x[0], z: x[1], w: x[2] }
            }
            Self::Vg { w, w_mean, w_std, z_std, u_std, corr_zw, corr_uw } => {
                let wv = w.sample(rng);
                let std_w = if *w_std > 0.0 { (wv - w_mean) / w_std } else { 0.0 };
                let nz: f64 = StandardNormal.sample(rng);
                let nu: f64 = StandardNormal.sample(rng);
                Innovation {
                    u: u_std * (corr_uw * std_w + (1.0 - corr_uw * corr_uw).sqrt() * nu),
                    z: z_std * (corr_zw * std_w + (1.0 - corr_zw * corr_zw).sqrt() * nz),
                    w: wv,
                }
            }
            Self::Bootstrap { rows } => {
                let r = rows[rng.random_range(0..rows.len())];
                Innovation { u: r[0], z: r[1], w: r[2] }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::correlation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cholesky_reconstructs() {
        let a = [[2.0, 0.3, 0.1], [0.3, 1.0, -0.2], [0.1, -0.2, 0.5]];
        let l = psd_cholesky(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| l[i][k] * l[j][k]).sum();
                assert!((v - a[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_accepts_zero_and_rejects_indefinite() {
        assert!(psd_cholesky(&[[0.0; 3]; 3]).is_ok());
        let semi = [[0.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 0.25]];
        assert!(psd_cholesky(&semi).is_ok());
        let bad = [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(psd_cholesky(&bad).is_err());
        let asym = [[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(psd_cholesky(&asym).is_err());
    }

    #[test]
    fn vg_source_hits_target_correlation() {
        let src = InnovationSource::VgWGaussianZ {
            w: VgParams { location: -0.05, scale: 0.15, asymmetry: 0.05, shape: 0.5 },
            z_std: 0.01,
            u_std: 0.02,
            corr_zw: 0.3,
            corr_uw: -0.4,
        };
        let s = src.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws: Vec<Innovation> = (0..40_000).map(|_| s.sample(&mut rng)).collect();
        let z: Vec<f64> = draws.iter().map(|d| d.z).collect();
        let u: Vec<f64> = draws.iter().map(|d| d.u).collect();
        let w: Vec<f64> = draws.iter().map(|d| d.w).collect();
        assert!((correlation(&z, &w).unwrap() - 0.3).abs() < 0.02);
        assert!((correlation(&u, &w).unwrap() + 0.4).abs() < 0.02);
    }
}
