use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::check_variance;
use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

/// Mean, 1/N standard deviation, skewness and excess kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct MomentSummary<T> {
    pub n: usize,
    pub mean: T,
    pub std: T,
    pub skewness: T,
    pub excess_kurtosis: T,
}

/// Empirical moments with `1/N` central moments: skewness `m3 / s^3` and
/// excess kurtosis `m4 / s^4 - 3`, where `s^2 = m2`.
pub fn moments<T: Scalar>(x: &[T]) -> Result<MomentSummary<T>> {
    if x.len() < 4 {
        return Err(Error::SampleSize { what: "moments", need: 4, got: x.len() });
    }
    let n = T::of_usize(x.len());
    let m = mean(x);
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &v in x {
        let d = v - m;
        let d2 = d * d;
        m2 = m2 + d2;
        m3 = m3 + d2 * d;
        m4 = m4 + d2 * d2;
    }
    check_variance(x, m2, "moments input")?;
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let s = m2.sqrt();
    Ok(MomentSummary {
        n: x.len(),
        mean: m,
        std: s,
        skewness: m3 / (s * s * s),
        excess_kurtosis: m4 / (m2 * m2) - T::of(3.0),
    })
}

/// Pearson correlation.
pub fn correlation<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::SampleSize { what: "correlation", need: 3, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    check_variance(x, sxx, "correlation input x")?;
    check_variance(y, syy, "correlation input y")?;
    Ok((sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one()))
}
