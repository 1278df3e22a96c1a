use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::kolmogorov_sf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + DeserializeOwned")]
pub struct KsResult<T> {
    /// `sup |F_a - F_b|`.
    pub statistic: T,
    /// Asymptotic p-value (assumes independent draws).
    pub p_value: T,
}

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
pub fn ks_two_sample<T: Scalar>(a: &[T], b: &[T]) -> Result<KsResult<T>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("KS test needs two non-empty samples".into()));
    }
    let sort = |v: &[T]| {
        let mut s = v.to_vec();
        s.sort_by(|x, y| x.partial_cmp(y).expect("KS input must not contain NaN"));
        s
    };
    let (a, b) = (sort(a), sort(b));
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = T::zero();
    while i < na && j < nb {
        let v = a[i].min(b[j]);
        while i < na && a[i] <= v {
            i += 1;
        }
        while j < nb && b[j] <= v {
            j += 1;
        }
        let gap = (T::of_usize(i) / T::of_usize(na) - T::of_usize(j) / T::of_usize(nb)).abs();
        d = d.max(gap);
    }
    let en = (T::of_usize(na) * T::of_usize(nb) / T::of_usize(na + nb)).sqrt();
    let lambda = (en + T::of(0.12) + T::of(0.11) / en) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_sf(lambda) })
}
