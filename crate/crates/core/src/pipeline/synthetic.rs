//! Synthetic FRED-format data directory with the same series names as the
//! real exports, for demos and tests without network access.

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{Dataset, DEFAULT_BILL_SERIES, VIX_SERIES};
use crate::error::Result;
use crate::ingest::YearMonth;

/// First and last month written.
pub const SYNTHETIC_START: YearMonth = YearMonth { year: 1985, month: 1 };
pub const SYNTHETIC_END: YearMonth = YearMonth { year: 2024, month: 12 };

struct RateSpec {
    a: f64,
    b: f64,
    c: f64,
    z_sd: f64,
    corr: f64,
}

fn simulate_rate(rng: &mut ChaCha8Rng, spec: &RateSpec, start: f64, vix: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n01 = Normal::new(0.0, 1.0).expect("unit normal");
    let mut r = Vec::with_capacity(vix.len());
    let mut z = Vec::with_capacity(vix.len());
    let mut prev = start;
    for (v, w) in vix.iter().zip(w) {
        let zt = spec.z_sd * (spec.corr * w + (1.0 - spec.corr * spec.corr).sqrt() * n01.sample(rng));
        prev = spec.a + spec.b * prev + spec.c * v + v * zt;
        r.push(prev);
        z.push(zt);
    }
    (r, z)
}

fn month_date(m: YearMonth) -> NaiveDate {
    NaiveDate::from_ymd_opt(m.year, m.month, 1).expect("valid month")
}

fn write_monthly(dir: &Path, name: &str, months: &[YearMonth], values: &[f64]) -> Result<()> {
    let mut text = format!("observation_date,{name}\n");
    for (m, v) in months.iter().zip(values) {
        writeln!(text, "{},{v:.4}", month_date(*m)).expect("string write");
    }
    std::fs::write(dir.join(format!("{name}.csv")), text)?;
    Ok(())
}

/// Writes every series the report reads into `dir`. The volatility file holds
/// business-day values whose monthly means follow a log-AR(1); rates follow
/// the normalized autoregression with correlated shocks; index levels
/// compound the bond-return equation. Identical seeds give identical files.
pub fn write_synthetic_fred_dir(dir: &Path, seed: u64) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n01 = Normal::new(0.0, 1.0).expect("unit normal");
    let months: Vec<YearMonth> =
        std::iter::successors(Some(SYNTHETIC_START), |m| Some(m.next())).take_while(|m| *m <= SYNTHETIC_END).collect();
    let n = months.len();

    let (alpha, beta, w_sd) = (0.347, 0.881, 0.2);
    let mut log_v = alpha / (1.0 - beta);
    let mut w = Vec::with_capacity(n);
    let mut vix = Vec::with_capacity(n);
    for _ in 0..n {
        // Skewed shocks: a centred exponential mixed with a Gaussian.
        let e: f64 = -(1.0 - rng.random::<f64>()).ln() - 1.0;
        let shock = w_sd * (0.8 * e + 0.6 * n01.sample(&mut rng));
        log_v = alpha + beta * log_v + shock;
        w.push(shock / w_sd);
        vix.push(log_v.exp());
    }

    let mut daily = format!("observation_date,{VIX_SERIES}\n");
    for (t, m) in months.iter().enumerate() {
        let mut day = month_date(*m);
        let mut jitter = Vec::new();
        while day.month() == m.month {
            if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
                jitter.push((day, 0.05 * n01.sample(&mut rng)));
            }
            day = day.succ_opt().expect("next day");
        }
        let mean_jitter = jitter.iter().map(|j| j.1).sum::<f64>() / jitter.len() as f64;
        for (i, (d, j)) in jitter.iter().enumerate() {
            if i == 0 && m.month == 1 {
                writeln!(daily, "{d},.").expect("string write");
                continue;
            }
            writeln!(daily, "{d},{:.6}", vix[t] * (1.0 + j - mean_jitter)).expect("string write");
        }
    }
    std::fs::write(dir.join(format!("{VIX_SERIES}.csv")), daily)?;

    let rate = |rng: &mut ChaCha8Rng, spec: RateSpec, start: f64| simulate_rate(rng, &spec, start, &vix, &w);

    let (aaa, _) = rate(&mut rng, RateSpec { a: 0.0258, b: 1.0 - 0.0654, c: 0.003, z_sd: 0.008, corr: 0.22 }, 1.0);
    write_monthly(dir, "AAA10Y", &months, &aaa)?;
    let (baa, _) = rate(&mut rng, RateSpec { a: 0.0487, b: 1.0 - 0.0822, c: 0.0069, z_sd: 0.009, corr: 0.32 }, 2.0);
    write_monthly(dir, "BAA10Y", &months, &baa)?;

    let (bill, _) = rate(&mut rng, RateSpec { a: 0.03, b: 0.99, c: 0.0, z_sd: 0.01, corr: 0.0 }, 3.0);
    let bill: Vec<f64> = bill.iter().map(|x| x.max(0.01)).collect();
    write_monthly(dir, DEFAULT_BILL_SERIES, &months, &bill)?;

    for (d, spread_spec) in [
        (Dataset::BofaQuality, RateSpec { a: -0.02, b: 1.0 - 0.11, c: 0.009, z_sd: 0.008, corr: 0.3 }),
        (Dataset::BofaJunk, RateSpec { a: -0.05, b: 1.0 - 0.15, c: 0.04, z_sd: 0.02, corr: 0.4 }),
    ] {
        let (spread, z) = rate(&mut rng, spread_spec, 3.0);
        let yields: Vec<f64> = spread.iter().zip(&bill).map(|(s, b)| s + b + 1.0).collect();
        write_monthly(dir, d.spread_series(), &months, &spread)?;
        write_monthly(dir, d.yield_series().expect("bofa"), &months, &yields)?;
        let duration = if d == Dataset::BofaQuality { 6.5 } else { 4.0 };
        let mut level = 100.0;
        let mut index = Vec::with_capacity(n);
        for t in 0..n {
            if t > 0 {
                let dy = yields[t] - yields[t - 1];
                let q = yields[t - 1] / 1200.0 - duration * dy / 100.0
                    + 0.0002 * vix[t]
                    + vix[t] * (0.0001 * n01.sample(&mut rng) + 0.00005 * z[t] / 0.01);
                level *= q.exp();
            }
            index.push(level);
        }
        write_monthly(dir, d.index_series().expect("bofa"), &months, &index)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{all_required_series, build_report, format_table, DataSource};

    #[test]
    fn synthetic_directory_feeds_the_full_report() {
        let dir = tempfile::tempdir().unwrap();
        write_synthetic_fred_dir(dir.path(), 17).unwrap();
        let source = DataSource::new(dir.path());
        for s in all_required_series(&source) {
            assert!(dir.path().join(format!("{s}.csv")).is_file(), "{s}");
        }
        let report = build_report(&source, 15).unwrap();
        assert_eq!(report.rates.len(), 8);
        assert_eq!(report.returns.len(), 6);
        let aaa = report.rates.iter().find(|r| r.dataset == Dataset::MoodysAaa).unwrap();
        assert_eq!(aaa.raw.residuals.len(), 463);
        assert!((aaa.model.c - 0.003).abs() < 0.003, "c = {}", aaa.model.c);
        let t3 = report.table("table3").unwrap();
        assert_eq!(t3.rows.len(), 3);
        let csv = format_table(t3);
        assert!(csv.starts_with(",Quality R^2 single,"));
        assert!(csv.lines().nth(1).unwrap().starts_with("Case (a),"));
        assert_eq!(report.figures().len(), 24);
    }

    #[test]
    fn missing_files_are_all_named() {
        let dir = tempfile::tempdir().unwrap();
        let err = build_report(&DataSource::new(dir.path()), 15).unwrap_err().to_string();
        for s in ["VIXCLS", "AAA10Y", "BAA10Y", "BAMLC0A0CMEY", "BAMLHYH0A0HYM2TRIV", "TB3MS"] {
            assert!(err.contains(s), "{err}");
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write_synthetic_fred_dir(a.path(), 3).unwrap();
        write_synthetic_fred_dir(b.path(), 3).unwrap();
        for f in ["VIXCLS.csv", "BAMLHYH0A0HYM2TRIV.csv"] {
            assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
        }
    }
}
