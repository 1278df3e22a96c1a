use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::{Innovation, JointModelSpec};
use crate::error::{Error, Result};

/// `|ln V|` above this aborts the path instead of overflowing.
pub const LOG_VOL_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub v: f64,
    pub r: f64,
    #[serde(default)]
    pub q: f64,
}

/// Realized path. Index 0 holds the initial state; `innovations[t - 1]` drove step `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationPath {
    pub seed: u64,
    pub stream: u64,
    pub v: Vec<f64>,
    pub r: Vec<f64>,
    pub q: Option<Vec<f64>>,
    pub innovations: Vec<Innovation>,
}

impl SimulationPath {
    pub fn steps(&self) -> usize {
        self.innovations.len()
    }

    /// `t,V,R,Q` rows; `Q` is empty for the two-dimensional chain.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.v.len() * 48);
        out.push_str("t,V,R,Q\n");
        for t in 0..self.v.len() {
            let q = self.q.as_ref().map(|q| q[t].to_string()).unwrap_or_default();
            out.push_str(&format!("{t},{},{},{q}\n", self.v[t], self.r[t]));
        }
        out
    }
}

/// Private generator of path `stream` under master `seed`.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `steps` transitions from `initial`, drawing innovations from the spec's source.
pub fn simulate(spec: &JointModelSpec, steps: usize, seed: u64, initial: InitialState) -> Result<SimulationPath> {
    simulate_path(spec, steps, seed, 0, initial)
}

/// Like [`simulate`] on generator stream `stream`; independent paths use distinct streams.
pub fn simulate_path(
    spec: &JointModelSpec,
    steps: usize,
    seed: u64,
    stream: u64,
    initial: InitialState,
) -> Result<SimulationPath> {
    if steps == 0 {
        return Err(Error::InvalidArgument("simulation needs at least one step".into()));
    }
    let sampler = spec.innovations.sampler()?;
    let mut rng = path_rng(seed, stream);
    let draws: Vec<Innovation> = (0..steps).map(|_| sampler.sample(&mut rng)).collect();
    let mut path = simulate_with_innovations(spec, &draws, initial)?;
    path.seed = seed;
    path.stream = stream;
    Ok(path)
}

/// Deterministic recursion driven by the given innovations.
pub fn simulate_with_innovations(
    spec: &JointModelSpec,
    innovations: &[Innovation],
    initial: InitialState,
) -> Result<SimulationPath> {
    if !(initial.v > 0.0) {
        return Err(Error::Domain(format!("initial volatility must be positive, got {}", initial.v)));
    }
    let steps = innovations.len();
    let mut v = Vec::with_capacity(steps + 1);
    let mut r = Vec::with_capacity(steps + 1);
    let mut q = spec.returns.map(|_| Vec::with_capacity(steps + 1));
    v.push(initial.v);
    r.push(initial.r);
    if let Some(q) = q.as_mut() {
        q.push(initial.q);
    }
    let (vc, sc) = (spec.vix, spec.spread);
    let mut log_v = initial.v.ln();
    for (i, eta) in innovations.iter().enumerate() {
        let t = i + 1;
        log_v = vc.alpha + vc.beta * log_v + eta.w;
        if !(log_v.abs() <= LOG_VOL_LIMIT) {
            return Err(Error::Divergence { step: t, message: format!("|ln V| = {} exceeds {LOG_VOL_LIMIT}", log_v.abs()) });
        }
        let vt = log_v.exp();
        let r_prev = r[i];
        let rt = sc.a + sc.b * r_prev + sc.c * vt + vt * eta.z;
        if !rt.is_finite() {
            return Err(Error::Divergence { step: t, message: "rate is not finite".into() });
        }
        v.push(vt);
        r.push(rt);
        if let (Some(q), Some(rc)) = (q.as_mut(), spec.returns) {
            q.push(rc.k * r_prev - rc.m * (rt - r_prev) + rc.h * vt + rc.l + vt * eta.u);
        }
    }
    Ok(SimulationPath { seed: 0, stream: 0, v, r, q, innovations: innovations.to_vec() })
}

/// Largest absolute gap between a path's stored states and a fresh replay of
/// its stored innovations.
pub fn replay_error(spec: &JointModelSpec, path: &SimulationPath) -> Result<f64> {
    let initial = InitialState { v: path.v[0], r: path.r[0], q: path.q.as_ref().map_or(0.0, |q| q[0]) };
    let again = simulate_with_innovations(spec, &path.innovations, initial)?;
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut err = gap(&path.v, &again.v).max(gap(&path.r, &again.r));
    if let (Some(a), Some(b)) = (&path.q, &again.q) {
        err = err.max(gap(a, b));
    }
    Ok(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{published_aaa_spec, InnovationSource, ReturnsCoefficients, SpreadCoefficients, VixCoefficients};

    fn zero_noise() -> InnovationSource {
        InnovationSource::Gaussian { covariance: [[0.0; 3]; 3] }
    }

    #[test]
    fn degenerate_single_step() {
        let spec = JointModelSpec {
            vix: VixCoefficients { alpha: 0.0, beta: 0.0 },
            spread: SpreadCoefficients { a: 0.0, b: 0.0, c: 0.0 },
            returns: None,
            innovations: zero_noise(),
        };
        let p = simulate_with_innovations(&spec, &[Innovation::default()], InitialState { v: 5.0, r: 3.0, q: 0.0 })
            .unwrap();
        assert_eq!(p.v[1], 1.0);
        assert_eq!(p.r[1], 0.0);
    }

    #[test]
    fn hand_computed_three_dimensional_step() {
        let spec = JointModelSpec {
            vix: VixCoefficients { alpha: 0.1, beta: 0.5 },
            spread: SpreadCoefficients { a: 0.2, b: 0.9, c: 0.01 },
            returns: Some(ReturnsCoefficients { k: 0.001, m: 0.05, h: 0.0002, l: 0.003 }),
            innovations: zero_noise(),
        };
        let eta = Innovation { u: 0.001, z: -0.02, w: 0.3 };
        let p = simulate_with_innovations(&spec, &[eta], InitialState { v: 20.0, r: 4.0, q: 0.0 }).unwrap();
        let v1 = (0.1f64 + 0.5 * 20f64.ln() + 0.3).exp();
        let r1 = 0.2 + 0.9 * 4.0 + 0.01 * v1 + v1 * -0.02;
        let q1 = 0.001 * 4.0 - 0.05 * (r1 - 4.0) + 0.0002 * v1 + 0.003 + v1 * 0.001;
        assert_eq!(p.v[1], v1);
        assert_eq!(p.r[1], r1);
        assert_eq!(p.q.unwrap()[1], q1);
    }

    #[test]
    fn deterministic_and_replayable() {
        let spec = published_aaa_spec();
        let init = InitialState { v: 20.0, r: 1.0, q: 0.0 };
        let a = simulate(&spec, 2000, 99, init).unwrap();
        let b = simulate(&spec, 2000, 99, init).unwrap();
        assert_eq!(a, b);
        assert_eq!(replay_error(&spec, &a).unwrap(), 0.0);
        let c = simulate(&spec, 2000, 100, init).unwrap();
        assert_ne!(a.v, c.v);
        assert!(a.v.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn divergence_is_reported() {
        let mut spec = published_aaa_spec();
        spec.vix = VixCoefficients { alpha: 1.0, beta: 1.5 };
        match simulate(&spec, 5000, 1, InitialState { v: 20.0, r: 1.0, q: 0.0 }) {
            Err(Error::Divergence { step, .. }) => assert!(step > 1 && step < 5000),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let spec = published_aaa_spec();
        let p = simulate(&spec, 2, 1, InitialState { v: 20.0, r: 1.0, q: 0.0 }).unwrap();
        let csv = p.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,V,R,Q");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,20,1,"));
    }
}
