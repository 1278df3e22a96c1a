use serde::{Deserialize, Serialize};

use super::chain::simulate_path;
use super::{InitialState, JointModelSpec, SimulationPath};
use crate::diagnostics::ks_two_sample;
use crate::error::{Error, Result};

/// Pass threshold on the two-sample KS distance.
pub const KS_THRESHOLD: f64 = 0.05;
const BATCHES: usize = 30;
/// Initial `V` is placed this many innovation standard deviations from `V*` in log space.
const VOL_OFFSET_SDS: f64 = 3.0;
/// Initial `R` offset from `R*`.
const RATE_OFFSET: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateKs {
    pub coordinate: String,
    /// KS distance between the pooled high-start and low-start samples.
    pub statistic: f64,
    pub pair_statistics: Vec<f64>,
    /// KS distance between the first and second halves of the pooled
    /// post-burn-in samples; large when the marginal law drifts over time.
    pub split_half: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

impl MomentEstimate {
    pub fn std(&self) -> f64 {
        self.variance.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMoments {
    pub coordinate: String,
    pub estimate: MomentEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryMoments {
    pub steps: usize,
    pub burn_in: usize,
    pub batches: usize,
    pub coordinates: Vec<CoordinateMoments>,
}

impl StationaryMoments {
    pub fn get(&self, coordinate: &str) -> Option<&MomentEstimate> {
        self.coordinates.iter().find(|c| c.coordinate == coordinate).map(|c| &c.estimate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub steps: usize,
    pub burn_in: usize,
    pub n_pairs: usize,
    pub seed: u64,
    pub threshold: f64,
    pub ks_distance_by_block: Vec<CoordinateKs>,
    /// Largest cross-chain or split-half distance.
    pub max_ks: f64,
    /// First step at which high-start and low-start ensemble means agree to
    /// within one stationary standard deviation in every coordinate.
    pub burn_in_estimate: Option<usize>,
    pub stationary_moment_estimates: Vec<CoordinateMoments>,
    pub passed: bool,
}

fn coordinates(path: &SimulationPath) -> Vec<(&'static str, &[f64])> {
    let mut out: Vec<(&'static str, &[f64])> = vec![("V", &path.v), ("R", &path.r)];
    if let Some(q) = &path.q {
        out.push(("Q", q));
    }
    out
}

/// Per-coordinate KS distance between the post-burn-in parts of two paths.
pub fn compare_chains(a: &SimulationPath, b: &SimulationPath, burn_in: usize) -> Result<Vec<CoordinateKs>> {
    let (ca, cb) = (coordinates(a), coordinates(b));
    if ca.len() != cb.len() {
        return Err(Error::InvalidArgument("paths have different dimensions".into()));
    }
    ca.iter()
        .zip(&cb)
        .map(|((name, x), (_, y))| {
            if burn_in + 1 >= x.len() || burn_in + 1 >= y.len() {
                return Err(Error::InvalidArgument(format!("burn-in {burn_in} leaves no samples")));
            }
            let (x, y) = (&x[burn_in + 1..], &y[burn_in + 1..]);
            let d = ks_two_sample(x, y)?.statistic;
            let split_half = split_half_distance(&[x, y])?;
            Ok(CoordinateKs { coordinate: name.to_string(), statistic: d, pair_statistics: vec![d], split_half })
        })
        .collect()
}

fn split_half_distance(tails: &[&[f64]]) -> Result<f64> {
    let (mut early, mut late) = (Vec::new(), Vec::new());
    for t in tails {
        let mid = t.len() / 2;
        early.extend_from_slice(&t[..mid]);
        late.extend_from_slice(&t[mid..]);
    }
    Ok(ks_two_sample(&early, &late)?.statistic)
}

fn starting_points(spec: &JointModelSpec) -> (InitialState, InitialState) {
    let v_star = spec.long_run_vix();
    let dv = (VOL_OFFSET_SDS * spec.innovations.w_std()).exp();
    let r_star = if spec.spread.b < 1.0 { spec.long_run_rate() } else { 0.0 };
    (
        InitialState { v: v_star * dv, r: r_star + RATE_OFFSET, q: 0.0 },
        InitialState { v: v_star / dv, r: r_star - RATE_OFFSET, q: 0.0 },
    )
}

/// Runs `n_pairs` chain pairs from distant starting points and compares their
/// post-burn-in marginals. Pair `i` uses streams `2i` and `2i + 1` of `seed`.
pub fn ergodicity_diagnostic(
    spec: &JointModelSpec,
    steps: usize,
    burn_in: usize,
    n_pairs: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if steps <= 2 * burn_in {
        return Err(Error::InvalidArgument(format!("need T > 2 burn_in, got T = {steps}, burn_in = {burn_in}")));
    }
    if n_pairs == 0 {
        return Err(Error::InvalidArgument("need at least one chain pair".into()));
    }
    let (hi0, lo0) = starting_points(spec);
    let mut high = Vec::with_capacity(n_pairs);
    let mut low = Vec::with_capacity(n_pairs);
    for i in 0..n_pairs as u64 {
        high.push(simulate_path(spec, steps, seed, 2 * i, hi0)?);
        low.push(simulate_path(spec, steps, seed, 2 * i + 1, lo0)?);
    }

    let names: Vec<&'static str> = coordinates(&high[0]).iter().map(|c| c.0).collect();
    let pooled = |paths: &[SimulationPath], j: usize| -> Vec<f64> {
        paths.iter().flat_map(|p| coordinates(p)[j].1[burn_in + 1..].to_vec()).collect()
    };
    let mut blocks = Vec::with_capacity(names.len());
    let mut moment_list = Vec::with_capacity(names.len());
    let mut stationary_sd = Vec::with_capacity(names.len());
    for (j, name) in names.iter().enumerate() {
        let (h, l) = (pooled(&high, j), pooled(&low, j));
        let statistic = ks_two_sample(&h, &l)?.statistic;
        let pair_statistics = high
            .iter()
            .zip(&low)
            .map(|(a, b)| ks_two_sample(&coordinates(a)[j].1[burn_in + 1..], &coordinates(b)[j].1[burn_in + 1..]).map(|k| k.statistic))
            .collect::<Result<Vec<_>>>()?;
        let tails: Vec<&[f64]> = high.iter().chain(&low).map(|p| &coordinates(p)[j].1[burn_in + 1..]).collect();
        let split_half = split_half_distance(&tails)?;
        blocks.push(CoordinateKs { coordinate: name.to_string(), statistic, pair_statistics, split_half });
        let all: Vec<f64> = h.into_iter().chain(l).collect();
        let est = batch_means(&all, BATCHES)?;
        stationary_sd.push(est.std());
        moment_list.push(CoordinateMoments { coordinate: name.to_string(), estimate: est });
    }

    let burn_in_estimate = (0..=steps).find(|&t| {
        (0..names.len()).all(|j| {
            let mh = high.iter().map(|p| coordinates(p)[j].1[t]).sum::<f64>() / n_pairs as f64;
            let ml = low.iter().map(|p| coordinates(p)[j].1[t]).sum::<f64>() / n_pairs as f64;
            (mh - ml).abs() <= stationary_sd[j]
        })
    });
    let max_ks = blocks.iter().map(|b| b.statistic.max(b.split_half)).fold(0.0, f64::max);
    Ok(ConvergenceReport {
        steps,
        burn_in,
        n_pairs,
        seed,
        threshold: KS_THRESHOLD,
        ks_distance_by_block: blocks,
        max_ks,
        burn_in_estimate,
        stationary_moment_estimates: moment_list,
        passed: max_ks < KS_THRESHOLD,
    })
}

fn batch_means(x: &[f64], batches: usize) -> Result<MomentEstimate> {
    let size = x.len() / batches;
    if size < 2 {
        return Err(Error::SampleSize { what: "batch means", need: 2 * batches, got: x.len() });
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let variance = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let mut bm = Vec::with_capacity(batches);
    let mut bv = Vec::with_capacity(batches);
    for chunk in x.chunks_exact(size).take(batches) {
        let m = chunk.iter().sum::<f64>() / size as f64;
        bm.push(m);
        bv.push(chunk.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / size as f64);
    }
    let se = |v: &[f64]| {
        let k = v.len() as f64;
        let m = v.iter().sum::<f64>() / k;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    };
    Ok(MomentEstimate { mean, mean_se: se(&bm), variance, variance_se: se(&bv) })
}

/// Time-average moments of `V`, `ln V`, `R` and `Q` past `burn_in`, started
/// at the noiseless fixed point, with batch-means standard errors.
pub fn stationary_moments(spec: &JointModelSpec, steps: usize, burn_in: usize, seed: u64) -> Result<StationaryMoments> {
    if steps <= burn_in + 1000 {
        return Err(Error::InvalidArgument(format!("need T > burn_in + 1000, got T = {steps}, burn_in = {burn_in}")));
    }
    let r0 = spec.long_run_rate();
    let initial = InitialState { v: spec.long_run_vix(), r: if r0.is_finite() { r0 } else { 0.0 }, q: 0.0 };
    let path = simulate_path(spec, steps, seed, 0, initial)?;
    let tail = |x: &[f64]| x[burn_in + 1..].to_vec();
    let log_v: Vec<f64> = path.v.iter().map(|v| v.ln()).collect();
    let mut series = vec![("V", tail(&path.v)), ("lnV", tail(&log_v)), ("R", tail(&path.r))];
    if let Some(q) = &path.q {
        series.push(("Q", tail(q)));
    }
    let coordinates = series
        .into_iter()
        .map(|(name, x)| Ok(CoordinateMoments { coordinate: name.into(), estimate: batch_means(&x, BATCHES)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(StationaryMoments { steps, burn_in, batches: BATCHES, coordinates })
}
